#include "lcsde/set_io.hpp"

namespace lcsde {

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw GeometryError("set literal: vector must be a nonempty array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw GeometryError("set literal: non-numeric coordinate");
        double x = j[i].get<double>();
        if (!std::isfinite(x)) throw GeometryError("set literal: coordinates must be finite");
        v(static_cast<Eigen::Index>(i)) = x;
    }
    return v;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

nlohmann::json cone_to_json(const ConeSpec& c) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& g : c.generators()) j.push_back(vector_to_json(g));
    return j;
}

ConeSpec cone_from_json(const nlohmann::json& j, int dimension) {
    if (!j.is_array()) throw GeometryError("set literal: cone must be an array of vectors");
    std::vector<Eigen::VectorXd> gens;
    for (const auto& e : j) gens.push_back(vector_from_json(e));
    return ConeSpec::make(dimension, gens);
}

nlohmann::json set_to_json(const LCSet& a) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : a.vertices()) j["vertices"].push_back(vector_to_json(v));
    if (!a.cone().is_trivial()) j["cone"] = cone_to_json(a.cone());
    return j;
}

LCSet set_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices"))
        throw GeometryError("set literal: expected object with \"vertices\"");
    std::vector<Eigen::VectorXd> verts;
    for (const auto& e : j.at("vertices")) verts.push_back(vector_from_json(e));
    if (verts.empty()) throw GeometryError("set literal: empty vertex list");
    int dim = static_cast<int>(verts.front().size());
    ConeSpec cone = j.contains("cone") ? cone_from_json(j.at("cone"), dim) : ConeSpec(dim);
    return LCSet(std::move(verts), cone);
}

} // namespace lcsde

#pragma once

#include "lcsde/geometry.hpp"

#include <json.hpp>

namespace lcsde {

// Set literal: {"vertices": [[...],...], "cone": [[...],...]}; the cone
// key is omitted for the trivial cone.
nlohmann::json set_to_json(const LCSet& a);
LCSet set_from_json(const nlohmann::json& j);

nlohmann::json cone_to_json(const ConeSpec& c);
ConeSpec cone_from_json(const nlohmann::json& j, int dimension);

Eigen::VectorXd vector_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);

} // namespace lcsde

#include "lcsde/geom_expr.hpp"

#include "lcsde/set_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace lcsde {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    GeomValue parse() {
        GeomValue v = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return v;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        return text_[pos_];
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) fail("expected identifier");
        return text_.substr(start, pos_ - start);
    }

    double number() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                text_[pos_] == 'e' || text_[pos_] == 'E' ||
                ((text_[pos_] == '+' || text_[pos_] == '-') &&
                 (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
            ++pos_;
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || pos_ == start) {
            pos_ = start;
            fail("expected number");
        }
        return value;
    }

    Eigen::VectorXd point() {
        expect('(');
        std::vector<double> coords;
        coords.push_back(number());
        while (peek() == ',') {
            ++pos_;
            coords.push_back(number());
        }
        expect(')');
        Eigen::VectorXd v(static_cast<Eigen::Index>(coords.size()));
        for (std::size_t i = 0; i < coords.size(); ++i) v(static_cast<Eigen::Index>(i)) = coords[i];
        return v;
    }

    std::vector<Eigen::VectorXd> point_list() {
        expect('{');
        std::vector<Eigen::VectorXd> pts;
        pts.push_back(point());
        while (peek() == ',') {
            ++pos_;
            pts.push_back(point());
        }
        expect('}');
        return pts;
    }

    ConeSpec named_cone(const std::string& name, int fallback_dim) {
        if (name.rfind("orthant", 0) == 0) {
            int d = std::atoi(name.c_str() + 7);
            if (d < 1) fail("bad orthant dimension");
            std::vector<Eigen::VectorXd> gens;
            for (int i = 0; i < d; ++i) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
                e(i) = 1.0;
                gens.push_back(e);
            }
            return ConeSpec::make(d, gens);
        }
        if (name == "trivial") return ConeSpec(fallback_dim);
        fail("unknown cone name '" + name + "'");
    }

    ConeSpec cone_ref(int dim) {
        if (peek() == '{') {
            auto gens = point_list();
            return ConeSpec::make(dim, gens);
        }
        std::string name = identifier();
        if (name == "cone") {
            auto gens = point_list();
            return ConeSpec::make(dim, gens);
        }
        return named_cone(name, dim);
    }

    LCSet set_literal() {
        auto verts = point_list();
        int dim = static_cast<int>(verts.front().size());
        ConeSpec cone(dim);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '+') {
            ++pos_;
            cone = cone_ref(dim);
        }
        return LCSet(std::move(verts), cone);
    }

    GeomValue expression() {
        char c = peek();
        if (c == '{') return set_literal();
        if (c == '(') return GeomValue(point());
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')
            return GeomValue(number());
        std::string name = identifier();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') return call(name);
        // Bare cone name denotes the set {0} + C.
        return GeomValue(LCSet::cone_set(named_cone(name, 0)));
    }

    std::vector<GeomValue> arguments() {
        expect('(');
        std::vector<GeomValue> args;
        args.push_back(expression());
        while (peek() == ',') {
            ++pos_;
            args.push_back(expression());
        }
        expect(')');
        return args;
    }

    const LCSet& as_set(const GeomValue& v) {
        if (!std::holds_alternative<LCSet>(v)) fail("expected a set argument");
        return std::get<LCSet>(v);
    }

    GeomValue call(const std::string& name) {
        auto args = arguments();
        if (name == "sum") {
            if (args.size() < 2) fail("sum needs at least two sets");
            LCSet acc = as_set(args[0]);
            for (std::size_t i = 1; i < args.size(); ++i) acc = minkowski_sum(acc, as_set(args[i]));
            return GeomValue(std::move(acc));
        }
        if (name == "scale") {
            if (args.size() != 2 || !std::holds_alternative<double>(args[0]))
                fail("scale(alpha, set)");
            return GeomValue(scale(std::get<double>(args[0]), as_set(args[1])));
        }
        if (name == "hausdorff") {
            if (args.size() != 2) fail("hausdorff(set, set)");
            return GeomValue(hausdorff_distance(as_set(args[0]), as_set(args[1])));
        }
        if (name == "distance") {
            if (args.size() != 2 || !std::holds_alternative<Eigen::VectorXd>(args[0]))
                fail("distance(point, set)");
            return GeomValue(point_distance(std::get<Eigen::VectorXd>(args[0]), as_set(args[1])));
        }
        if (name == "join") {
            std::vector<LCSet> sets;
            for (const auto& a : args) sets.push_back(as_set(a));
            return GeomValue(convex_join(sets));
        }
        if (name == "recession") {
            if (args.size() != 1) fail("recession(set)");
            return GeomValue(LCSet::cone_set(recession_cone(as_set(args[0]))));
        }
        fail("unknown operator '" + name + "'");
    }
};

} // namespace

GeomValue evaluate_geom_expression(const std::string& text) {
    Parser p(text);
    return p.parse();
}

std::string render_geom_value(const GeomValue& value) {
    if (std::holds_alternative<double>(value)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.10g", std::get<double>(value));
        return buf;
    }
    if (std::holds_alternative<Eigen::VectorXd>(value))
        return vector_to_json(std::get<Eigen::VectorXd>(value)).dump();
    return set_to_json(std::get<LCSet>(value)).dump();
}

} // namespace lcsde

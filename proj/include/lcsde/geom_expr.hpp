#pragma once

#include "lcsde/geometry.hpp"

#include <string>
#include <variant>

namespace lcsde {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " at position " + std::to_string(position)),
          position(position) {}
    std::size_t position;
};

using GeomValue = std::variant<double, Eigen::VectorXd, LCSet>;

// Evaluates a calculator expression over set literals, e.g.
//   hausdorff({(1,1)}+orthant2, orthant2)
//   scale(2, {(1,0)}+orthant2)
//   distance((0,0), {(1,1)}+orthant2)
// Operators: sum, scale, hausdorff, distance, join, recession.
// Cone references: orthantN, or an inline cone{(...),...} literal.
GeomValue evaluate_geom_expression(const std::string& text);

// Canonical rendering: numbers with 10 significant digits, sets as the
// JSON set literal.
std::string render_geom_value(const GeomValue& value);

} // namespace lcsde

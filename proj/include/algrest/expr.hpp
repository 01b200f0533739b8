#pragma once

#include <string>
#include <vector>

#include "algrest/errors.hpp"
#include "algrest/exterior.hpp"

namespace algrest {

// Recursive-descent parser for the shared polynomial / form expression syntax:
//   - rational literals `3`, `-1/2`
//   - variables by name, powers `x1^2`, products `x1*x3`
//   - coordinate differentials `dx1`; `^` between forms is the wedge
//   - `+`, `-`, parentheses; whitespace-insensitive
// `^` is a power when the left operand is a scalar (degree-0) expression and
// the exponent a non-negative integer; between forms of positive degree it is
// the wedge product.

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars);

DiffForm parse_form(const std::string& text, const std::vector<std::string>& vars,
                    int expected_degree = -1);

// Vector-field expressions additionally recognize `E`, the Euler field of the
// given weights (e.g. "x1*x3*E").
VectorField parse_vector_field(const std::string& text, const std::vector<std::string>& vars,
                               const WeightSystem& w);

// Comma-separated rational vector, e.g. "1,0,-3/2".
std::vector<Rat> parse_rat_vector(const std::string& text);

}  // namespace algrest

#include "algrest/expr.hpp"

#include "doctest.h"

using namespace algrest;

namespace {
const std::vector<std::string> kVars = {"x1", "x2", "x3"};
const WeightSystem kW654{{6, 5, 4}};
}  // namespace

TEST_CASE("polynomial expressions") {
    Polynomial p = parse_polynomial("x1^2 + x3^3", kVars);
    CHECK(p.homogeneous_quasi_degree(kW654) == 12);
    CHECK(parse_polynomial("-t^4", {"t"}).terms.begin()->second == rat(-1));
    CHECK(parse_polynomial("(x1 + x2)*(x1 - x2)", kVars) ==
          parse_polynomial("x1^2 - x2^2", kVars));
    CHECK(parse_polynomial("1/2*x3 - 3", kVars) ==
          parse_polynomial("x3/2 - 3", kVars));
    CHECK(parse_polynomial("2^3", kVars) == Polynomial::constant(3, rat(8)));
    CHECK_THROWS_AS(parse_polynomial("x4", kVars), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1^x2", kVars), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1 +", kVars), ParseError);
    CHECK_THROWS_AS(parse_polynomial("dx1", kVars), ParseError);  // form, not scalar
}

TEST_CASE("form expressions") {
    DiffForm a = parse_form("dx2^dx3 + 2*dx1^dx3", kVars, 2);
    CHECK(a.degree == 2);
    CHECK(a.coefficient({1, 2}) == Polynomial::constant(3, rat(1)));
    CHECK(a.coefficient({0, 2}) == Polynomial::constant(3, rat(2)));

    DiffForm b = parse_form("x2*dx2^dx3 + 1/2*x3*dx1^dx3", kVars, 2);
    CHECK(b.coefficient({0, 2}) == parse_polynomial("1/2*x3", kVars));

    CHECK(parse_form("dx3^dx2", kVars, 2) == parse_form("-dx2^dx3", kVars, 2));
    CHECK(parse_form("0", kVars, 2).is_zero());
    CHECK(parse_form("x1*(dx2^dx3)", kVars, 2) == parse_form("x1*dx2^dx3", kVars, 2));

    CHECK_THROWS_AS(parse_form("dx1 + dx1^dx2", kVars), ParseError);   // mixed degree
    CHECK_THROWS_AS(parse_form("dx1*dx2", kVars), ParseError);         // * between forms
    CHECK_THROWS_AS(parse_form("dx1^2", kVars), ParseError);           // wedge with scalar
    CHECK_THROWS_AS(parse_form("dx1^dx2", kVars, 1), ParseError);      // degree mismatch
}

TEST_CASE("vector-field expressions") {
    VectorField E = parse_vector_field("E", kVars, kW654);
    CHECK(E.components[0] == parse_polynomial("6*x1", kVars));
    CHECK(E.components[1] == parse_polynomial("5*x2", kVars));
    CHECK(E.components[2] == parse_polynomial("4*x3", kVars));

    VectorField X = parse_vector_field("x1*x3*E", kVars, kW654);
    CHECK(X.components[0] == parse_polynomial("6*x1^2*x3", kVars));
    CHECK(X.components[2] == parse_polynomial("4*x1*x3^2", kVars));

    VectorField S = parse_vector_field("2*E - E", kVars, kW654);
    CHECK(S.components[1] == parse_polynomial("5*x2", kVars));

    CHECK_THROWS_AS(parse_vector_field("x1", kVars, kW654), ParseError);  // not a field
    CHECK_THROWS_AS(parse_vector_field("E^2", kVars, kW654), ParseError);
}

TEST_CASE("rational vectors") {
    auto v = parse_rat_vector("1, -3/2, 0");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == rat(1));
    CHECK(v[1] == rat(-3, 2));
    CHECK(v[2] == rat(0));
    CHECK_THROWS_AS(parse_rat_vector("1, x"), ParseError);
}

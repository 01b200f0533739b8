#include "algrest/qpoly.hpp"

#include "algrest/expr.hpp"
#include "doctest.h"

using namespace algrest;

namespace {
const std::vector<std::string> kVars = {"x1", "x2", "x3"};
const WeightSystem kW654{{6, 5, 4}};

Polynomial P(const std::string& s) { return parse_polynomial(s, kVars); }
}  // namespace

TEST_CASE("quasi-degree of monomials") {
    CHECK(quasi_degree(Monomial{{1, 0, 0}}, kW654) == 6);
    CHECK(quasi_degree(Monomial{{0, 2, 0}}, kW654) == 10);
    CHECK(quasi_degree(Monomial{{1, 0, 1}}, kW654) == 10);
    CHECK(quasi_degree(Monomial{{0, 0, 0}}, kW654) == 0);
}

TEST_CASE("monomial basis of a quasi-degree layer") {
    auto b10 = monomial_basis(10, kW654);
    REQUIRE(b10.size() == 2);
    CHECK(b10[0] == Monomial{{0, 2, 0}});  // x2^2 precedes x1*x3
    CHECK(b10[1] == Monomial{{1, 0, 1}});

    CHECK(monomial_basis(0, kW654).size() == 1);
    CHECK(monomial_basis(0, kW654)[0].is_constant());
    CHECK(monomial_basis(1, kW654).empty());
    CHECK(monomial_basis(2, kW654).empty());
    CHECK(monomial_basis(3, kW654).empty());
    auto b4 = monomial_basis(4, kW654);
    REQUIRE(b4.size() == 1);
    CHECK(b4[0] == Monomial{{0, 0, 1}});

    // every element has the requested degree and the list is strictly sorted
    auto b24 = monomial_basis(24, kW654);
    for (const auto& m : b24) CHECK(quasi_degree(m, kW654) == 24);
    for (size_t i = 1; i < b24.size(); ++i) CHECK(b24[i - 1] < b24[i]);
}

TEST_CASE("series arithmetic") {
    Series t = Series::monomial(1, rat(1));
    Series s = (t * t + t) * (t - Series::monomial(0, rat(1)));
    CHECK(s == Series::monomial(3, rat(1)) - Series::monomial(1, rat(1)));
    CHECK(s.coeff(3) == rat(1));
    CHECK(s.coeff(2) == rat(0));
    CHECK(s.derivative().coeff(2) == rat(3));
    CHECK(t.pow(7).degree() == 7);
    CHECK(Series{}.degree() == -1);
    CHECK(vanishing_order(Series{}) == ExtInt::inf());
    CHECK(vanishing_order(Series::monomial(5, rat(1)) - Series::monomial(7, rat(2))) ==
          ExtInt::of(5));
}

TEST_CASE("polynomial arithmetic and derivatives") {
    Polynomial p = P("x1 + x2");
    Polynomial sq = p * p;
    CHECK(sq == P("x1^2 + 2*x1*x2 + x2^2"));
    CHECK(sq.pow(1) == sq);
    CHECK(P("x1^2").partial_derivative(0) == P("2*x1"));
    CHECK(P("x1^2 + x3^3").partial_derivative(2) == P("3*x3^2"));
    CHECK(P("x1*x2*x3").partial_derivative(1) == P("x1*x3"));
    CHECK((p - p).is_zero());
    CHECK(P("7").order_at_origin() == ExtInt::of(0));
    CHECK(P("x1*x2 + x3^5").order_at_origin() == ExtInt::of(2));
    CHECK(Polynomial::zero(3).order_at_origin() == ExtInt::inf());
}

TEST_CASE("quasi-homogeneity detection") {
    CHECK(P("x1^2 + x3^3").homogeneous_quasi_degree(kW654) == 12);
    CHECK(P("x2^2 + x1*x3").homogeneous_quasi_degree(kW654) == 10);
    CHECK(!P("x1 + x2").homogeneous_quasi_degree(kW654).has_value());
    CHECK(Polynomial::zero(3).homogeneous_quasi_degree(kW654) == 0);
}

TEST_CASE("branch substitution kills the defining equations") {
    BranchParam b;
    b.label = "C";
    b.components = {Series::monomial(6, rat(1)), Series::monomial(5, rat(1)),
                    Series::monomial(4, rat(-1))};
    CHECK(substitute_branch(P("x1^2 + x3^3"), b).is_zero());
    CHECK(substitute_branch(P("x2^2 + x1*x3"), b).is_zero());
    CHECK(vanishing_order(substitute_branch(P("x2"), b)) == ExtInt::of(5));
    CHECK(vanishing_order(substitute_branch(P("1/3*x2^3"), b)) == ExtInt::of(15));
    CHECK(substitute_branch(P("x3"), b) == Series::monomial(4, rat(-1)));
}

TEST_CASE("canonical rendering") {
    CHECK(polynomial_str(P("x2^2 + x1*x3"), kVars) == "x2^2 + x1*x3");
    CHECK(polynomial_str(P("x1*x3 + x2^2"), kVars) == "x2^2 + x1*x3");
    CHECK(polynomial_str(P("-x1 - 1/2*x3"), kVars) == "-1/2*x3 - x1");
    CHECK(polynomial_str(Polynomial::zero(3), kVars) == "0");
    // graded order puts the quasi-degree-4 term x3 first under weights 6 5 4
    CHECK(polynomial_str(P("x1 + x3"), kVars, &kW654) == "x3 + x1");
    CHECK(monomial_str(Monomial{{0, 0, 0}}, kVars) == "1");
    CHECK(monomial_str(Monomial{{2, 0, 3}}, kVars) == "x1^2*x3^3");
}

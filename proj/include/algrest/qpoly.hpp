#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algrest/rational.hpp"

namespace algrest {

// Weights of the quasi-homogeneous grading, one positive integer per ambient
// variable.
struct WeightSystem {
    std::vector<long> w;

    int dim() const { return static_cast<int>(w.size()); }
    long max_weight() const;
    long min_weight() const;
    long sum() const;
};

// Exponent vector. Monomials are ordered lexicographically (ascending) by the
// exponent vector; within a fixed quasi-degree this is also the graded order.
struct Monomial {
    std::vector<int> e;

    int dim() const { return static_cast<int>(e.size()); }
    bool is_constant() const;
    long total_degree() const;
    bool operator<(const Monomial& o) const { return e < o.e; }
    bool operator==(const Monomial& o) const { return e == o.e; }

    Monomial times(const Monomial& o) const;
};

long quasi_degree(const Monomial& m, const WeightSystem& w);

// All monomials of quasi-degree `delta`, in canonical (ascending
// lexicographic) order. Deterministic.
std::vector<Monomial> monomial_basis(long delta, const WeightSystem& w);

// Exact polynomial in t with rational coefficients; the zero series stores no
// terms. Also serves as a truncation-free Taylor expansion carrier for
// compositions along polynomial curve parameterizations.
struct Series {
    std::map<long, Rat> c;

    bool is_zero() const { return c.empty(); }
    void add_term(long k, const Rat& v);
    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series scaled(const Rat& v) const;
    Series pow(int k) const;
    Rat coeff(long k) const;
    long degree() const;  // largest exponent with nonzero coefficient; -1 for 0
    Series derivative() const;

    static Series monomial(long k, const Rat& v);
    std::string str() const;
    bool operator==(const Series& o) const { return c == o.c; }
};

// least exponent with a nonzero coefficient; infinity for the zero series
ExtInt vanishing_order(const Series& s);

// Sparse multivariate polynomial over the rationals. No zero coefficients are
// stored; the term map is ordered by the canonical monomial order.
struct Polynomial {
    int nvars = 0;
    std::map<Monomial, Rat> terms;

    explicit Polynomial(int nv = 0) : nvars(nv) {}
    static Polynomial zero(int nv) { return Polynomial(nv); }
    static Polynomial constant(int nv, const Rat& v);
    static Polynomial variable(int nv, int i);
    static Polynomial term(int nv, const Monomial& m, const Rat& v);

    bool is_zero() const { return terms.empty(); }
    void add_term(const Monomial& m, const Rat& v);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Rat& v) const;
    Polynomial pow(int k) const;

    Polynomial partial_derivative(int i) const;

    // Ordinary order of vanishing at the origin (minimal total degree of a
    // stored monomial); infinity for the zero polynomial.
    ExtInt order_at_origin() const;

    // Quasi-degree when the polynomial is quasi-homogeneous, nullopt otherwise.
    std::optional<long> homogeneous_quasi_degree(const WeightSystem& w) const;

    bool operator==(const Polynomial& o) const {
        return nvars == o.nvars && terms == o.terms;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }
};

// One branch of a parameterized curve germ: one polynomial component in t per
// ambient variable, all vanishing at t = 0.
struct BranchParam {
    std::string label;
    std::vector<Series> components;

    int dim() const { return static_cast<int>(components.size()); }
};

// Exact composition p(b(t)).
Series substitute_branch(const Polynomial& p, const BranchParam& b);

std::string monomial_str(const Monomial& m, const std::vector<std::string>& vars);

// Canonical rendering. When `w` is given, terms are emitted graded by
// quasi-degree with lexicographic ties; otherwise in plain lexicographic order.
std::string polynomial_str(const Polynomial& p, const std::vector<std::string>& vars,
                           const WeightSystem* w = nullptr);

}  // namespace algrest

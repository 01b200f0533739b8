#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algrest/qpoly.hpp"

namespace algrest {

// Index tuple of a wedge monomial dx_{i1} ^ ... ^ dx_{ip}, strictly increasing,
// 0-based indices.
using IdxTuple = std::vector<int>;

// Differential form of degree 0..3 with polynomial coefficients.
struct DiffForm {
    int degree = 0;
    int nvars = 0;
    std::map<IdxTuple, Polynomial> terms;

    DiffForm() = default;
    DiffForm(int deg, int nv) : degree(deg), nvars(nv) {}

    static DiffForm zero(int deg, int nv) { return DiffForm(deg, nv); }
    static DiffForm from_polynomial(const Polynomial& p);  // degree 0
    static DiffForm dx(int nv, int i);                     // basis 1-form

    bool is_zero() const { return terms.empty(); }
    void add_term(const IdxTuple& idx, const Polynomial& p);
    Polynomial coefficient(const IdxTuple& idx) const;

    DiffForm operator+(const DiffForm& o) const;
    DiffForm operator-(const DiffForm& o) const;
    DiffForm scaled(const Rat& v) const;
    DiffForm scaled_by(const Polynomial& p) const;

    bool operator==(const DiffForm& o) const {
        return degree == o.degree && nvars == o.nvars && terms == o.terms;
    }
    bool operator!=(const DiffForm& o) const { return !(*this == o); }

    // Quasi-degree of a term = quasi-degree of the coefficient plus the sum of
    // the weights of the wedged coordinate differentials. Returns the common
    // value when the form is quasi-homogeneous in this sense.
    std::optional<long> homogeneous_quasi_degree(const WeightSystem& w) const;

    // Split into quasi-homogeneous layers (each term's coefficient is split
    // monomial by monomial). Keys are quasi-degrees.
    std::map<long, DiffForm> graded_pieces(const WeightSystem& w) const;
};

// Polynomial vector field: one component per ambient variable.
struct VectorField {
    std::vector<Polynomial> components;

    int dim() const { return static_cast<int>(components.size()); }
    static VectorField zero(int nv);
};

DiffForm wedge(const DiffForm& a, const DiffForm& b);

// d. Defined for degrees 0..2; degree-3 input throws.
DiffForm exterior_derivative(const DiffForm& a);

// Contraction in the first slot; requires degree >= 1.
DiffForm interior_product(const VectorField& X, const DiffForm& a);

// Cartan formula d(i_X a) + i_X(d a).
DiffForm lie_derivative(const VectorField& X, const DiffForm& a);

// Independent coordinate expansion of the Lie derivative (Leibniz on the
// coefficients plus the Jacobian action on each dx). Used as a cross-check of
// the Cartan route in the property tests.
DiffForm lie_derivative_expanded(const VectorField& X, const DiffForm& a);

// E = sum_i w_i x_i d/dx_i.
VectorField euler_field(const WeightSystem& w);

// Pullback along a one-parameter curve; a p-form maps to a p-form on the line
// (zero for p >= 2). The degree-1 result is reported as its dt-coefficient.
Series pullback_1form_on_branch(const DiffForm& a, const BranchParam& b);
bool pullback_2form_on_branch_is_zero(const DiffForm& a, const BranchParam& b);

// Minimum over the stored coefficient polynomials of the vanishing order of
// the coefficient restricted to the branch; infinity for the zero form.
ExtInt coefficient_orders_on_branch(const DiffForm& a, const BranchParam& b);

std::string form_str(const DiffForm& a, const std::vector<std::string>& vars,
                     const WeightSystem* w = nullptr);

}  // namespace algrest

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "algrest/errors.hpp"
#include "algrest/exterior.hpp"
#include "algrest/linalg.hpp"

namespace algrest {

// A quasi-homogeneous 1-dimensional complete-intersection germ given by its
// chart variables, weights, defining equations and parameterized branches.
struct GermDefinition {
    std::string name;
    std::vector<std::string> variables;
    WeightSystem weights;
    std::vector<Polynomial> generators;
    std::vector<BranchParam> branches;
    int symplectic_dim = 0;  // ambient 2n used for symplectic charts

    int dim() const { return static_cast<int>(variables.size()); }
    void validate() const;  // throws InputError on a malformed definition

    bool same_definition(const GermDefinition& o) const;
};

// Line-oriented germ-definition format:
//   germ W8
//   variables x1 x2 x3
//   weights 6 5 4
//   symplectic_dim 6
//   generator x1^2 + x3^3
//   generator x2^2 + x1*x3
//   branch C (t^6, t^5, -t^4)
// `#` starts a comment; keys may appear in any order, `generator`/`branch`
// repeat.
GermDefinition parse_germ_definition(const std::string& text,
                                     const std::string& source_name = "<input>");
GermDefinition load_germ_file(const std::string& path);

std::string render_germ_definition(const GermDefinition& g);

// An explicit choice of coset representatives for the restriction-space basis,
// used by the built-in germs to pin the published generators.
struct RepresentativeOverride {
    std::string label;
    DiffForm form;
};

// One quasi-degree layer of the computation: the monomial p-form basis of the
// layer, the reduced rows of the zero-restriction subspace inside it, and the
// chosen quotient representatives in layer coordinates.
struct GradedPiece {
    long delta = 0;
    std::vector<DiffForm> monomial_forms;
    QMat zero_rows;                  // RREF basis of (A^p_0)_delta
    std::vector<size_t> zero_pivots;
    size_t quotient_dim = 0;         // of the chosen variant (all vs closed)
    size_t full_quotient_dim = 0;    // of the all-forms quotient (stabilization)
    std::vector<size_t> basis_pos;   // global indices of basis elements here
    QMat rep_reduced;                // rows: zero-reduced coords of each rep
};

struct SpaceBasisElement {
    std::string label;
    DiffForm rep;
    long delta = 0;
};

// The space of algebraic-restriction classes of p-forms on a germ, graded by
// quasi-degree and certified finite by the stabilization rule.
class RestrictionSpace {
  public:
    // closed_only: restrict to classes of closed forms.
    // hard_cap <= 0 selects the default 10 * (sum of weights).
    // overrides, when given, replace the canonical representatives.
    RestrictionSpace(GermDefinition germ, int p, bool closed_only,
                     const std::vector<RepresentativeOverride>* overrides = nullptr,
                     long hard_cap = 0);

    const GermDefinition& germ() const { return germ_; }
    int form_degree() const { return p_; }
    bool closed_only() const { return closed_only_; }
    const std::vector<SpaceBasisElement>& basis() const { return basis_; }
    size_t dimension() const { return basis_.size(); }
    long cutoff() const { return cutoff_; }
    const std::string& certificate() const { return certificate_; }
    const std::map<long, GradedPiece>& pieces() const { return pieces_; }

    // Coordinates of [a] over the basis. Throws InputError when `a` has the
    // wrong shape or (for the closed variant) is not closed.
    std::vector<Rat> reduce(const DiffForm& a) const;

    bool is_zero_class(const DiffForm& a) const;

    // Basis combination with the given coordinates.
    DiffForm combination(const std::vector<Rat>& coords) const;

    // Quotient dimension at one quasi-degree (0 when the layer is empty).
    size_t layer_dimension(long delta) const;

    // Basis rows of the closed part of the zero-restriction subspace at one
    // quasi-degree, as forms. Used by the isotropy-index computation.
    std::vector<DiffForm> closed_zero_layer(long delta) const;

  private:
    void build(const std::vector<RepresentativeOverride>* overrides, long hard_cap);
    GradedPiece build_piece(long delta) const;
    std::vector<Rat> piece_coordinates(const GradedPiece& gp, const DiffForm& part) const;

    GermDefinition germ_;
    int p_;
    bool closed_only_;
    std::vector<SpaceBasisElement> basis_;
    std::map<long, GradedPiece> pieces_;
    long cutoff_ = 0;
    std::string certificate_;
};

// A coefficient vector over the closed-variant basis of a space.
struct RestrictionClass {
    std::shared_ptr<const RestrictionSpace> space;
    std::vector<Rat> coords;

    bool is_zero() const { return is_zero_vector(coords); }
};

// Rows spanning (A^p_0)_delta, before reduction (monomial multiples of the
// generators wedged with coordinate p-forms, plus differentials of the same
// construction one degree down). Exposed for tests and the module-closedness
// property check.
std::vector<DiffForm> zero_restriction_generators(const GermDefinition& g, int p, long delta);

// Matrix form of the same data, reduced: basis of (A^p_0)_delta inside the
// canonical monomial-form basis of the layer.
QMat zero_restriction_subspace(const GermDefinition& g, int p, long delta);

// The monomial p-form basis of the quasi-degree-delta layer, canonical order
// (index tuples ascending, monomials ascending within a tuple).
std::vector<DiffForm> monomial_form_basis(const GermDefinition& g, int p, long delta);

}  // namespace algrest

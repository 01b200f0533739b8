#ifndef ALGREST_RESTRICTION_HPP
#define ALGREST_RESTRICTION_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algrest/exterior.hpp"
#include "algrest/germ.hpp"
#include "algrest/linalg.hpp"
#include "algrest/rational.hpp"

// Group actions on restriction classes: infinitesimal action matrices, orbit
// tangent spaces, symplectic multiplicity, index of isotropy, and normal-form
// classification with moduli.

namespace algrest {

// One tangent generator m*E: a monomial multiple of the Euler field.
struct TangentFieldGenerator {
    std::string label;  // X0, X1, ...
    Monomial factor;    // m (constant monomial for E itself)
    VectorField field;  // m * E
    long qdeg = 0;      // quasi-degree of m
};

struct TangentFieldFamily {
    GermDefinition germ;
    std::vector<TangentFieldGenerator> generators;
};

// Monomial multiples of the Euler field whose quasi-degree is zero or a
// positive difference of two basis degrees of `s`. Ordered by quasi-degree,
// ties by ascending exponent tuple compared last variable first.
TangentFieldFamily default_tangent_family(const RestrictionSpace& s);

// True when every L_X g_i lies in the ideal generated by the defining
// equations. `witness` (if non-null) receives the first offending L_X g_i.
bool is_tangent_field(const GermDefinition& g, const VectorField& x,
                      Polynomial* witness = nullptr, size_t* witness_index = nullptr);

// Membership of a polynomial in the ideal generated by the germ's equations,
// decided degreewise by exact elimination.
bool in_generated_ideal(const GermDefinition& g, const Polynomial& p);

// The cross product of the equation gradients; tangent to any 3-variable
// complete-intersection curve and acting trivially on restriction classes.
VectorField hamiltonian_tangent_field(const GermDefinition& g);

// Columns indexed by basis elements theta_j, rows by theta_i; entry (i,j) is
// the coefficient of theta_i in the class of L_X theta_j.
struct ActionMatrix {
    std::string field_label;
    long field_qdeg = 0;
    QMat m;
};

ActionMatrix action_matrix(const RestrictionSpace& s, const VectorField& x,
                           const std::string& label = "");
ActionMatrix action_matrix(const RestrictionSpace& s, const TangentFieldGenerator& gen);

// Rows are the vectors M_X * a for every generator X of the family.
QMat orbit_tangent_space(const RestrictionClass& a, const TangentFieldFamily& fam);

// dim [Z^2] - rank(orbit_tangent_space).
size_t symplectic_multiplicity(const RestrictionClass& a, const TangentFieldFamily& fam);

// For each nonzero graded piece of `a`, the maximal k such that the coset of
// the piece modulo the closed zero-restriction layer meets forms whose
// coefficients all vanish to order >= k at the origin; minimum over pieces.
// INFINITY for the zero class.
ExtInt index_of_isotropy(const RestrictionClass& a);

// One conjunction literal of a guard: coordinate `index` (1-based) required
// zero or nonzero.
struct GuardLiteral {
    size_t index = 0;
    bool nonzero = false;
};

struct ClassificationRule {
    std::vector<GuardLiteral> guard;  // conjunction
    std::string class_label;
    size_t pivot = 0;  // 1-based; 0 for the terminal zero class
    std::vector<size_t> eliminate;
    bool sign_sensitive = false;

    // Indices pinned to zero by the guard.
    std::vector<size_t> guard_zeros() const;
    bool matches(const std::vector<Rat>& coords) const;
};

struct ClassificationRuleset {
    std::string source;  // germ or file name
    std::vector<ClassificationRule> rules;
    bool verified = false;  // set after verify_ruleset succeeds

    // Moduli of a rule: indices neither pinned zero, nor the pivot, nor
    // eliminated.
    std::vector<size_t> moduli_of(const ClassificationRule& r, size_t dim) const;
};

// Line-oriented ruleset format:
//   rule guard=c1=0&c2!=0 class=W8^1 pivot=3 eliminate=5,6,7,8 sign_sensitive=false
// '#' starts a comment; blank lines ignored.
ClassificationRuleset parse_ruleset(const std::string& text, const std::string& source);
ClassificationRuleset load_ruleset_file(const std::string& path);
std::string render_ruleset(const ClassificationRuleset& rs);

// First-nonzero cascade: rule k pins coordinates 1..k-1 to zero, pivots on k,
// and eliminates every higher index witnessed by the family's action
// matrices; the remainder become moduli. Labels are "<germ>#<k>" and the
// ruleset is marked unverified.
ClassificationRuleset generic_ruleset(const RestrictionSpace& s, const TangentFieldFamily& fam);

// Structural consistency against a space and family: guards in range, pivot
// parity matches the sign flag, a terminal all-zero rule exists, and every
// eliminable index has an action witness from a guard-nonzero source. Throws
// VerifyError otherwise; on success returns a copy marked verified.
ClassificationRuleset verify_ruleset(const RestrictionSpace& s, const TangentFieldFamily& fam,
                                     const ClassificationRuleset& rs);

// Exact value c * base^exponent with rational c, positive rational base.
struct SymbolicScaled {
    Rat coeff;
    Rat base;
    Rat exponent;

    double approx() const;
    std::string str() const;
    bool operator==(const SymbolicScaled& o) const {
        return coeff == o.coeff && base == o.base && exponent == o.exponent;
    }
};

struct ModulusValue {
    std::string name;  // c, c1, c2, ...
    size_t index = 0;  // 1-based basis index the modulus multiplies
    SymbolicScaled value;
};

struct EliminationStep {
    std::string field_label;
    Rat parameter;
    size_t killed_index = 0;  // 1-based
};

struct NormalFormReport {
    std::string class_label;
    std::string normal_form;  // e.g. "[c1*theta2 + theta3 + c2*theta4]"
    int sign = 0;             // +1 / -1; 0 = not sign-sensitive
    std::vector<ModulusValue> moduli;
    size_t codimension = 0;
    size_t symplectic_mult = 0;
    ExtInt isotropy = ExtInt::of(0);
    RestrictionClass residual;  // post-elimination, pre-scaling coordinates
    std::vector<EliminationStep> trace;
    bool ruleset_verified = false;
};

// Guard selection, unipotent elimination, weighted-scaling normalization.
// The tangent family defaults to default_tangent_family(space).
NormalFormReport classify(const RestrictionClass& a, const ClassificationRuleset& rules);
NormalFormReport classify(const RestrictionClass& a, const ClassificationRuleset& rules,
                          const TangentFieldFamily& fam);

struct ModulusCheck {
    size_t index = 0;
    size_t rank_without = 0;
    size_t rank_with = 0;
    bool outside = false;
};

struct ModuliCertificate {
    std::vector<ModulusCheck> checks;
    bool all_outside = true;
};

// Verifies each modulus direction lies outside the orbit tangent space at the
// residual normal form; throws VerifyError when one does not.
ModuliCertificate moduli_certificate(const NormalFormReport& report, const TangentFieldFamily& fam);

}  // namespace algrest

#endif  // ALGREST_RESTRICTION_HPP

#ifndef ALGREST_INVARIANTS_HPP
#define ALGREST_INVARIANTS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algrest/exterior.hpp"
#include "algrest/germ.hpp"
#include "algrest/rational.hpp"

// Lagrangian tangency orders (single-germ and multi-germ), tangency orders to
// explicit submanifolds, and the geometric-condition classifier.

namespace algrest {

// n polynomial equations H_1..H_n on a 2n-dimensional Darboux chart with
// coordinates ordered (p1, q1, ..., pn, qn).
struct SubmanifoldEquations {
    std::vector<Polynomial> h;
    bool lagrangian = false;
};

// Validates a submanifold: differentials independent at the origin and, when
// the Lagrangian flag is set, pairwise Poisson brackets vanishing on {H=0}
// up to the jet cutoff (total degree). Throws InputError / VerifyError.
SubmanifoldEquations make_submanifold(std::vector<Polynomial> h, bool lagrangian,
                                      long jet_cutoff = 12);

// min over i of the vanishing order of H_i composed with the branch.
ExtInt tangency_order(const BranchParam& b, const SubmanifoldEquations& s);

// min over branches of tangency_order.
ExtInt multigerm_tangency(const std::vector<BranchParam>& bs, const SubmanifoldEquations& s);

// Largest k such that some 1-form alpha with class [d alpha] = a has all
// branch-pulled coefficients vanishing to order >= k; INFINITY iff a is the
// zero class. Supported for single-branch germs. The multi-branch variant
// (minimum order over the branches) has no published characterization of the
// multigerm tangency order and must be requested explicitly; nothing in the
// verification suites depends on it.
ExtInt lagrangian_tangency_single(const RestrictionClass& a,
                                  bool experimental_multibranch = false);

// One graph family of Lagrangian submanifolds: per Darboux pair i the base
// variable is q_i (H_i = p_i - dS/dq_i) or p_i (H_i = q_i + dS/dp_i), with S a
// polynomial of total degree 2..degree_cap in the base variables.
struct GeneratingFunctionFamily {
    std::vector<bool> q_base;
    long degree_cap = 20;
};

struct TangencySearchResult {
    ExtInt order = ExtInt::of(0);
    bool maxed = false;  // bound hit without an exact-containment witness
    GeneratingFunctionFamily family;
    SubmanifoldEquations witness;
    Polynomial generating_function;  // over the 2n chart variables
};

// Maximizes min-over-branches tangency order within one graph family by
// incremental linear feasibility on the generating-function coefficients.
// When the feasible chain exhausts every t-coefficient equation the witness
// contains all branches exactly and the order is INFINITY.
TangencySearchResult lagrangian_tangency_search(const std::vector<BranchParam>& bs,
                                                const GeneratingFunctionFamily& fam);

// Max of lagrangian_tangency_search over all 2^n base splits.
TangencySearchResult lagrangian_tangency_best(const std::vector<BranchParam>& bs,
                                              long degree_cap = 20);

// Nested spans l in V in W of tangent directions at the origin, each vector
// over the germ-chart variables.
struct TangentFrame {
    std::vector<std::vector<Rat>> ell;  // 1-dim: tangent line to the branches
    std::vector<std::vector<Rat>> v;    // 2-dim
    std::vector<std::vector<Rat>> w;    // 3-dim: minimal smooth container
};

// Frame derived from the branch tangent directions in increasing vanishing
// order (greedily extended to independent spans of dimensions 1, 2, 3).
TangentFrame default_frame(const GermDefinition& g);

enum class GeometricRegime {
    kNotIsotropic,          // omega|_V != 0
    kKernelNotLine,         // omega|_V = 0 and ker omega != l
    kKernelIsLine,          // omega|_V = 0 and ker omega = l
    kZeroOnW,               // omega|_W = 0, finite Lagrangian tangency
    kLagrangianContained,   // zero restriction class
};

struct GeometricReport {
    GeometricRegime regime = GeometricRegime::kNotIsotropic;
    std::optional<ExtInt> lag;       // set in the kZeroOnW regime when computable
    RestrictionClass core;           // reduced germ-chart part of omega
    std::string label(bool unicode = true) const;
};

struct GeometricOptions {
    // Hook computing the Lagrangian tangency order of the reduced core class
    // in the omega|_W = 0 regime. Defaults to lagrangian_tangency_single for
    // single-branch germs; without a hook, multi-branch germs report no order.
    std::function<std::optional<ExtInt>(const RestrictionClass&)> tangency_hook;
};

// Evaluates omega at the origin on the frame: first matching condition among
// omega|_V != 0, kernel-vs-line comparison on W, and omega|_W = 0 (in which
// case the core class decides Lagrangian containment or the tangency order).
// `s` must be a closed-variant degree-2 space for the germ.
GeometricReport geometric_class(std::shared_ptr<const RestrictionSpace> s, const DiffForm& omega,
                                const TangentFrame& frame, const GeometricOptions& opt = {});

// Terms of `omega` that involve only the first `dim` variables (both in the
// wedge indices and in the coefficients); the part seen by the germ chart.
DiffForm project_to_chart(const DiffForm& omega, int dim);

}  // namespace algrest

#endif  // ALGREST_INVARIANTS_HPP

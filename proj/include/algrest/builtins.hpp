#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algrest/germ.hpp"
#include "algrest/invariants.hpp"
#include "algrest/restriction.hpp"

// Built-in germ catalogues: definitions, pinned basis representatives,
// classification rulesets and the published per-class reference data used by
// the verification suites.

namespace algrest {

// Reference data for one normal-form class of a built-in germ.
struct BuiltinClass {
    std::string label;           // e.g. "W8^2a"
    std::string normal_form;     // display template with modulus names
    size_t codim = 0;            // codimension of the class
    size_t mu = 0;               // symplectic multiplicity
    ExtInt isotropy;             // index of isotropy
    ExtInt lag;                  // Lagrangian tangency order L_N
    std::optional<ExtInt> lag_second;  // L_2 (farthest-branch order), two-branch germs
    std::vector<Rat> sample;     // basis coordinates at sample moduli (all 1)
    DiffForm realization;        // symplectic realization on the 2n-chart, sample moduli
    std::vector<BranchParam> curves;   // Darboux normal-form curves, sample moduli
    GeometricRegime regime = GeometricRegime::kNotIsotropic;
};

struct BuiltinGerm {
    std::string name;
    GermDefinition germ;
    std::vector<RepresentativeOverride> closed_reps;  // degree-2, closed variant
    std::vector<RepresentativeOverride> all_reps;     // degree-2, all-forms variant
    std::string ruleset_text;
    std::vector<BuiltinClass> classes;

    const BuiltinClass* find_class(const std::string& label) const;
};

std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);

// Throws InputError for unknown names. Matching is case-insensitive.
const BuiltinGerm& builtin_germ(const std::string& name);

// Cached closed-variant degree-2 space with the pinned representatives.
std::shared_ptr<const RestrictionSpace> builtin_closed_space(const std::string& name);

// Cached parsed-and-verified classification ruleset.
const ClassificationRuleset& builtin_ruleset(const std::string& name);

// Geometric-classifier options whose tangency hook classifies the core class
// and runs the Lagrangian search over the published curves of that class.
GeometricOptions builtin_geometric_options(const std::string& name);

}  // namespace algrest

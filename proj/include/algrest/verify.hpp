#pragma once

#include <memory>
#include <string>
#include <vector>

#include "algrest/builtins.hpp"
#include "algrest/io.hpp"
#include "algrest/restriction.hpp"

// Reference verification: recompute every published table for a built-in germ
// catalogue entry and compare cell by cell, plus the structural checks that do
// not reduce to a table diff (idempotent classification, sign separation,
// moduli certificates, witness validity).

namespace algrest {

struct CheckResult {
    std::string suite;  // basis, relations, actions, classification, tangency, geometry
    std::string check;
    bool pass = false;
    std::string detail;  // names the table and cell on failure
};

struct VerificationReport {
    std::string germ;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::vector<std::string> suites() const;  // in run order
    bool suite_passed(const std::string& suite) const;
    Table to_table() const;  // columns: suite, check, status, detail
};

// Runs the six reference suites for `def` against the catalogue entry named
// `reference`. Passing the catalogue germ itself verifies the published
// tables; passing a modified definition is the negative control (the basis
// dimension certificate fails first). `hard_cap` bounds the stabilization
// scan as in the RestrictionSpace constructor (0 = default).
VerificationReport verify_reference(const GermDefinition& def, const std::string& reference,
                                    long degree_cap = 20, long hard_cap = 0);

VerificationReport verify_builtin(const std::string& name, long degree_cap = 20);

// ---- Paper-shaped tables (shared by the CLI and the verification suites) ----

// Rows kind=basis (label, representative, quasi-degree), kind=layer (per-degree
// quotient dimensions of both variants), kind=certificate.
Table basis_table(const std::string& name, const RestrictionSpace& s);

// One row per (generator, basis element): the class of L_X theta_j as a basis
// combination, zeros included.
Table actions_table(const std::string& name, const RestrictionSpace& s,
                    const TangentFieldFamily& fam);

// One generator block of the actions table for an arbitrary tangent field.
Table action_table_single(const std::string& name, const RestrictionSpace& s,
                          const VectorField& x, const std::string& label);

// Sample coordinates representing a rule: pivot and moduli set to 1.
std::vector<Rat> rule_sample(const ClassificationRuleset& rs, const ClassificationRule& r,
                             size_t dim);

// Display template of a rule's normal form, e.g. "[±theta2 + c1*theta4 +
// c2*theta7]"; "[0]" for the terminal rule.
std::string rule_template(const ClassificationRule& r, const ClassificationRuleset& rs,
                          const RestrictionSpace& s);

// Classification sweep: one row per rule with the class label, normal-form
// template and the codimension / multiplicity / isotropy columns.
Table classification_table(const std::string& name, const RestrictionSpace& s,
                           const TangentFieldFamily& fam, const ClassificationRuleset& rules);

// Lagrangian tangency orders per catalogued class. Finite search results carry
// status "search"; infinite ones are certified by an exact containment witness
// ("contained"); cap-limited lower bounds are marked "maxed" and rendered as
// ">= <bound>". Single-branch germs use the exact 1-form route ("exact").
Table invariants_table(const BuiltinGerm& bg, std::shared_ptr<const RestrictionSpace> space,
                       long degree_cap);

// Geometric condition per catalogued class, from the class realization.
Table geometry_table(const BuiltinGerm& bg, std::shared_ptr<const RestrictionSpace> space);

// Paper-shaped projections used by --verify-paper golden diffs.
Table paper_projection(const Table& t);

}  // namespace algrest

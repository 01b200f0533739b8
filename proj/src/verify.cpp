#include "algrest/verify.hpp"

#include <algorithm>
#include <set>

#include "algrest/expr.hpp"
#include "algrest/invariants.hpp"

namespace algrest {

namespace {

// ---- Published reference values not carried by the golden CSV tables ----

struct ReferenceData {
    std::vector<long> closed_deltas;
    std::vector<long> all_deltas;
    // Combinations of 2-forms whose algebraic restriction vanishes, one entry
    // per equality asserted by the relations table (quasi-degree, expression).
    std::vector<std::pair<long, const char*>> relations;
    std::vector<long> blanket;  // quasi-degrees with no nonzero classes at all
    long relations_max = 0;     // the blanket extends beyond this degree
};

const ReferenceData* reference_data(const std::string& name) {
    static const ReferenceData w8{
        {9, 10, 11, 13, 14, 15, 17, 19},
        {9, 10, 11, 13, 14, 15, 15, 17, 19},
        {
            {14, "x2*dx2^dx3 + 1/2*x3*dx1^dx3"},
            {15, "x1*dx2^dx3 - x3*dx1^dx2"},
            {16, "x2*dx1^dx2 + 1/2*x1*dx1^dx3"},
            {16, "x2*dx1^dx2"},
            {16, "x1*dx1^dx3"},
            {17, "x3^2*dx2^dx3 - 2/3*x1*dx1^dx2"},
            {18, "x3^2*dx1^dx3 - 2*x2*x3*dx2^dx3"},
            {18, "x3^2*dx1^dx3"},
            {18, "x2*x3*dx2^dx3"},
            {19, "x2^2*dx2^dx3 + 1/2*x2*x3*dx1^dx3"},
            {19, "x2^2*dx2^dx3 + x1*x3*dx2^dx3"},
            {19, "x2^2*dx2^dx3 + x3^2*dx1^dx2"},
        },
        {20, 21, 22, 23, 24, 25},
        25};
    static const ReferenceData w9{
        {7, 8, 9, 10, 11, 12, 13, 14, 16},
        {7, 8, 9, 10, 11, 12, 12, 13, 14, 16},
        {
            {11, "x3*dx1^dx3 + 2*x2*dx2^dx3"},
            {12, "x1*dx2^dx3 - x3*dx1^dx2"},
            {13, "x3^2*dx2^dx3 + 2*x1*dx1^dx3"},
            {13, "x3^2*dx2^dx3 - 4*x2*dx1^dx2"},
            {14, "x3^2*dx1^dx3 + 2*x1*dx1^dx2"},
            {14, "x3^2*dx1^dx3 + 2*x2*x3*dx2^dx3"},
            {16, "x3^3*dx2^dx3 + 2*x1*x3*dx1^dx3"},
            {16, "x3^3*dx2^dx3 - 4*x2*x3*dx1^dx2"},
            {16, "x1*x3*dx1^dx3 + 2*x1*x2*dx2^dx3"},
            {16, "x1*x3*dx1^dx3 + x2^2*dx1^dx3"},
        },
        {15, 17, 18, 19, 20, 21},
        21};
    if (name == "W8") return &w8;
    if (name == "W9") return &w9;
    return nullptr;
}

std::string combination_str(const std::vector<std::string>& labels, const std::vector<Rat>& v) {
    std::string out;
    for (size_t i = 0; i < v.size() && i < labels.size(); ++i) {
        if (v[i] == 0) continue;
        Rat c = v[i];
        if (out.empty()) {
            if (c < 0) {
                out += "-";
                c = -c;
            }
        } else {
            out += c < 0 ? " - " : " + ";
            if (c < 0) c = -c;
        }
        if (c != 1) out += rat_str(c) + "*";
        out += labels[i];
    }
    return out.empty() ? "0" : out;
}

std::vector<std::string> basis_labels(const RestrictionSpace& s) {
    std::vector<std::string> labels;
    for (const auto& b : s.basis()) labels.push_back(b.label);
    return labels;
}

std::string generator_str(const TangentFieldGenerator& gen, const std::vector<std::string>& vars) {
    std::string f = monomial_str(gen.factor, vars);
    return f == "1" ? "E" : f + "*E";
}

std::string ext_cell(const ExtInt& v) { return v.str(true); }

}  // namespace

bool VerificationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::vector<std::string> VerificationReport::suites() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (std::find(out.begin(), out.end(), c.suite) == out.end()) out.push_back(c.suite);
    return out;
}

bool VerificationReport::suite_passed(const std::string& suite) const {
    for (const auto& c : checks)
        if (c.suite == suite && !c.pass) return false;
    return true;
}

Table VerificationReport::to_table() const {
    Table t;
    t.name = "verify " + germ;
    t.columns = {"suite", "check", "status", "detail"};
    for (const auto& c : checks)
        t.add_row({c.suite, c.check, c.pass ? "PASS" : "FAIL", c.detail});
    return t;
}

// ---- Table builders ----

Table basis_table(const std::string& name, const RestrictionSpace& s) {
    Table t;
    t.name = "basis " + name + (s.closed_only() ? " closed" : " all-forms");
    t.columns = {"kind", "label", "delta", "dim", "all_dim", "detail"};
    const auto& vars = s.germ().variables;
    const WeightSystem& w = s.germ().weights;
    for (const auto& b : s.basis())
        t.add_row({"basis", b.label, std::to_string(b.delta), "", "", form_str(b.rep, vars, &w)});
    for (const auto& [delta, piece] : s.pieces())
        t.add_row({"layer", "", std::to_string(delta), std::to_string(piece.quotient_dim),
                   std::to_string(piece.full_quotient_dim), ""});
    t.add_row({"certificate", "", "", "", "", s.certificate()});
    return t;
}

Table actions_table(const std::string& name, const RestrictionSpace& s,
                    const TangentFieldFamily& fam) {
    Table t;
    t.name = "actions " + name;
    t.columns = {"field", "generator", "qdeg", "source", "value"};
    std::vector<std::string> labels = basis_labels(s);
    const auto& vars = s.germ().variables;
    for (const auto& gen : fam.generators) {
        ActionMatrix am = action_matrix(s, gen);
        for (size_t j = 0; j < s.dimension(); ++j) {
            std::vector<Rat> column(s.dimension());
            for (size_t i = 0; i < s.dimension(); ++i) column[i] = am.m.a[i][j];
            t.add_row({gen.label, generator_str(gen, vars), std::to_string(gen.qdeg), labels[j],
                       combination_str(labels, column)});
        }
    }
    return t;
}

Table action_table_single(const std::string& name, const RestrictionSpace& s,
                          const VectorField& x, const std::string& label) {
    Table t;
    t.name = "actions " + name;
    t.columns = {"field", "generator", "qdeg", "source", "value"};
    ActionMatrix am = action_matrix(s, x, "X");
    std::vector<std::string> labels = basis_labels(s);
    for (size_t j = 0; j < s.dimension(); ++j) {
        std::vector<Rat> column(s.dimension());
        for (size_t i = 0; i < s.dimension(); ++i) column[i] = am.m.a[i][j];
        t.add_row({am.field_label, label, std::to_string(am.field_qdeg), labels[j],
                   combination_str(labels, column)});
    }
    return t;
}

std::vector<Rat> rule_sample(const ClassificationRuleset& rs, const ClassificationRule& r,
                             size_t dim) {
    std::vector<Rat> sample(dim, Rat(0));
    if (r.pivot > 0) sample[r.pivot - 1] = Rat(1);
    for (size_t m : rs.moduli_of(r, dim)) sample[m - 1] = Rat(1);
    return sample;
}

std::string rule_template(const ClassificationRule& r, const ClassificationRuleset& rs,
                          const RestrictionSpace& s) {
    if (r.pivot == 0) return "[0]";
    std::vector<std::string> labels = basis_labels(s);
    std::vector<size_t> moduli = rs.moduli_of(r, s.dimension());
    // Terms appear in basis order, the pivot among them; moduli names count up
    // in the same order.
    std::vector<size_t> indices = moduli;
    indices.push_back(r.pivot);
    std::sort(indices.begin(), indices.end());
    std::string out = "[";
    size_t next_name = 1;
    for (size_t k = 0; k < indices.size(); ++k) {
        if (k) out += " + ";
        if (indices[k] == r.pivot) {
            if (r.sign_sensitive) out += "±";
        } else {
            out += (moduli.size() == 1 ? "c" : "c" + std::to_string(next_name++)) + "*";
        }
        out += labels[indices[k] - 1];
    }
    return out + "]";
}

Table classification_table(const std::string& name, const RestrictionSpace& s,
                           const TangentFieldFamily& fam, const ClassificationRuleset& rules) {
    Table t;
    t.name = "classification " + name;
    t.columns = {"class", "normal_form", "codim", "mu", "ind"};
    auto space = std::make_shared<RestrictionSpace>(s);
    for (const auto& r : rules.rules) {
        RestrictionClass a{space, rule_sample(rules, r, s.dimension())};
        NormalFormReport rep = classify(a, rules, fam);
        t.add_row({rep.class_label, rule_template(r, rules, s), std::to_string(rep.codimension),
                   std::to_string(rep.symplectic_mult), ext_cell(rep.isotropy)});
    }
    return t;
}

namespace {

// One class's tangency data plus the raw search results (kept so the
// verification suite can re-check the witnesses without re-searching).
struct TangencyComputation {
    ExtInt ln;
    std::string ln_status;
    std::optional<TangencySearchResult> ln_search;
    std::optional<ExtInt> l2;
    std::string l2_status;
    std::optional<TangencySearchResult> l2_search;
    ExtInt ind;
};

std::string search_status(const TangencySearchResult& r) {
    if (r.order.infinite) return "contained";
    return r.maxed ? "maxed" : "search";
}

std::string search_cell(const TangencySearchResult& r) {
    if (r.maxed) return ">= " + std::to_string(r.order.value);
    return ext_cell(r.order);
}

TangencyComputation class_tangency(const BuiltinGerm& bg, const BuiltinClass& cls,
                                   std::shared_ptr<const RestrictionSpace> space, long cap) {
    TangencyComputation out;
    RestrictionClass a{space, cls.sample};
    out.ind = index_of_isotropy(a);
    out.ln_search = lagrangian_tangency_best(cls.curves, cap);
    if (bg.germ.branches.size() == 1) {
        out.ln = lagrangian_tangency_single(a);
        out.ln_status = "exact";
    } else {
        out.ln = out.ln_search->order;
        out.ln_status = search_status(*out.ln_search);
    }
    if (cls.lag_second) {
        // The singular branch is catalogued last; its own best order is the
        // second tangency invariant.
        out.l2_search = lagrangian_tangency_best({cls.curves.back()}, cap);
        out.l2 = out.l2_search->order;
        out.l2_status = search_status(*out.l2_search);
    }
    return out;
}

}  // namespace

Table invariants_table(const BuiltinGerm& bg, std::shared_ptr<const RestrictionSpace> space,
                       long degree_cap) {
    bool has_l2 = false;
    for (const auto& cls : bg.classes)
        if (cls.lag_second) has_l2 = true;
    Table t;
    t.name = "invariants " + bg.name;
    t.columns = has_l2 ? std::vector<std::string>{"class", "L_N", "status", "L2", "L2_status", "ind"}
                       : std::vector<std::string>{"class", "L_N", "status", "ind"};
    for (const auto& cls : bg.classes) {
        TangencyComputation tc = class_tangency(bg, cls, space, degree_cap);
        std::string ln_cell = tc.ln_search && tc.ln_status != "exact" ? search_cell(*tc.ln_search)
                                                                      : ext_cell(tc.ln);
        if (has_l2) {
            std::string l2_cell = tc.l2_search ? search_cell(*tc.l2_search) : "";
            t.add_row({cls.label, ln_cell, tc.ln_status, l2_cell, tc.l2_status, ext_cell(tc.ind)});
        } else {
            t.add_row({cls.label, ln_cell, tc.ln_status, ext_cell(tc.ind)});
        }
    }
    return t;
}

Table geometry_table(const BuiltinGerm& bg, std::shared_ptr<const RestrictionSpace> space) {
    Table t;
    t.name = "geometry " + bg.name;
    t.columns = {"class", "condition"};
    TangentFrame frame = default_frame(bg.germ);
    GeometricOptions opt = builtin_geometric_options(bg.name);
    for (const auto& cls : bg.classes) {
        GeometricReport rep = geometric_class(space, cls.realization, frame, opt);
        t.add_row({cls.label, rep.label(false)});
    }
    return t;
}

Table paper_projection(const Table& t) {
    Table out;
    out.name = t.name;
    std::vector<size_t> keep;
    for (size_t j = 0; j < t.columns.size(); ++j) {
        if (t.columns[j] == "status" || t.columns[j] == "L2_status") continue;
        keep.push_back(j);
        out.columns.push_back(t.columns[j]);
    }
    for (const auto& row : t.rows) {
        std::vector<std::string> cells;
        for (size_t j : keep) cells.push_back(row[j]);
        out.add_row(std::move(cells));
    }
    return out;
}

// ---- Verification suites ----

namespace {

struct Ctx {
    const BuiltinGerm& bg;
    const ReferenceData& ref;
    GermDefinition def;
    long cap;
    long hard_cap;
    std::shared_ptr<const RestrictionSpace> closed_plain, all_plain;  // canonical reps
    std::shared_ptr<const RestrictionSpace> closed, all;              // catalogue reps
    TangentFieldFamily fam;
    ClassificationRuleset rules;
};

void add(VerificationReport& rep, const std::string& suite, const std::string& check, bool pass,
         const std::string& detail = "") {
    rep.checks.push_back({suite, check, pass, detail});
}

std::vector<long> space_deltas(const RestrictionSpace& s) {
    std::vector<long> out;
    for (const auto& b : s.basis()) out.push_back(b.delta);
    return out;
}

std::string delta_list(const std::vector<long>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out.empty() ? "-" : out;
}

void check_space(VerificationReport& rep, const std::string& variant, const GermDefinition& def,
                 bool closed_only, long hard_cap, const std::vector<long>& want,
                 std::shared_ptr<const RestrictionSpace>& out) {
    std::string dim_check = "dimension certificate " + variant;
    try {
        out = std::make_shared<RestrictionSpace>(def, 2, closed_only, nullptr, hard_cap);
    } catch (const std::exception& e) {
        add(rep, "basis", dim_check, false, e.what());
        return;
    }
    std::vector<long> got = space_deltas(*out);
    bool dim_ok = got.size() == want.size();
    add(rep, "basis", dim_check, dim_ok,
        dim_ok ? "dim " + std::to_string(got.size()) + "; " + out->certificate()
               : "dim " + std::to_string(got.size()) + ", expected " +
                     std::to_string(want.size()));
    add(rep, "basis", "quasi-degrees " + variant, got == want,
        got == want ? delta_list(got)
                    : "got " + delta_list(got) + ", expected " + delta_list(want));
}

void suite_basis(VerificationReport& rep, Ctx& ctx) {
    check_space(rep, "[Z2]", ctx.def, true, ctx.hard_cap, ctx.ref.closed_deltas,
                ctx.closed_plain);
    check_space(rep, "[Lambda2]", ctx.def, false, ctx.hard_cap, ctx.ref.all_deltas,
                ctx.all_plain);
}

void suite_relations(VerificationReport& rep, Ctx& ctx) {
    if (!ctx.all_plain) {
        add(rep, "relations", "suite ran", false, "all-forms space unavailable");
        return;
    }
    const RestrictionSpace& s = *ctx.all_plain;
    const auto& vars = ctx.def.variables;
    std::map<long, int> counter;
    for (const auto& [delta, expr] : ctx.ref.relations) {
        std::string name =
            "relation delta=" + std::to_string(delta) + " #" + std::to_string(++counter[delta]);
        try {
            std::vector<Rat> got = s.reduce(parse_form(expr, vars, 2));
            bool zero = is_zero_vector(got);
            add(rep, "relations", name, zero,
                zero ? expr
                     : std::string(expr) + " reduced to " +
                           combination_str(basis_labels(s), got));
        } catch (const std::exception& e) {
            add(rep, "relations", name, false, e.what());
        }
    }
    for (long delta : ctx.ref.blanket) {
        size_t dim = s.layer_dimension(delta);
        add(rep, "relations", "all classes vanish at delta=" + std::to_string(delta), dim == 0,
            dim == 0 ? "" : "layer dimension " + std::to_string(dim));
    }
    bool covered = s.cutoff() >= ctx.ref.relations_max && !s.certificate().empty();
    add(rep, "relations", "blanket beyond delta=" + std::to_string(ctx.ref.relations_max),
        covered, s.certificate());
}

// Cell-by-cell comparison of a computed table against a golden CSV file.
void compare_with_golden(VerificationReport& rep, const std::string& suite, const Table& got,
                         const std::string& key) {
    Table want;
    try {
        want = parse_csv_table(golden_csv(key));
    } catch (const std::exception& e) {
        add(rep, suite, "golden table " + key, false, e.what());
        return;
    }
    if (got.columns != want.columns) {
        add(rep, suite, "golden table " + key + " columns", false,
            "computed columns differ from the golden header");
        return;
    }
    add(rep, suite, "golden table " + key + " rows", got.rows.size() == want.rows.size(),
        "computed " + std::to_string(got.rows.size()) + ", golden " +
            std::to_string(want.rows.size()));
    int src_col = -1;
    for (size_t j = 0; j < want.columns.size(); ++j)
        if (want.columns[j] == "source") src_col = static_cast<int>(j);
    for (size_t r = 0; r < want.rows.size() && r < got.rows.size(); ++r) {
        std::string row_id = want.rows[r][0];
        if (src_col >= 0) row_id += " " + want.rows[r][src_col];
        bool ok = true;
        std::string detail;
        for (size_t c = 0; c < want.columns.size(); ++c) {
            if (got.rows[r][c] == want.rows[r][c]) continue;
            ok = false;
            detail = "table " + key + ", row " + row_id + ", column " + want.columns[c] +
                     ": got '" + got.rows[r][c] + "', expected '" + want.rows[r][c] + "'";
            break;
        }
        add(rep, suite, key + " row " + row_id, ok, detail);
    }
}

bool build_pinned(VerificationReport& rep, Ctx& ctx, const std::string& suite) {
    if (ctx.closed) return true;
    try {
        if (ctx.def.same_definition(ctx.bg.germ)) {
            ctx.closed = builtin_closed_space(ctx.bg.name);
        } else {
            ctx.closed = std::make_shared<RestrictionSpace>(ctx.def, 2, true,
                                                            &ctx.bg.closed_reps, ctx.hard_cap);
        }
        ctx.fam = default_tangent_family(*ctx.closed);
        return true;
    } catch (const std::exception& e) {
        add(rep, suite, "catalogue representatives", false, e.what());
        return false;
    }
}

void suite_actions(VerificationReport& rep, Ctx& ctx) {
    if (!build_pinned(rep, ctx, "actions")) return;
    try {
        Table got = actions_table(ctx.bg.name, *ctx.closed, ctx.fam);
        std::string key = ctx.bg.name == "W8" ? "w8_actions" : "w9_actions";
        compare_with_golden(rep, "actions", got, key);
    } catch (const std::exception& e) {
        add(rep, "actions", "action matrices", false, e.what());
    }
}

void suite_classification(VerificationReport& rep, Ctx& ctx) {
    if (!build_pinned(rep, ctx, "classification")) return;
    try {
        ctx.rules = verify_ruleset(*ctx.closed, ctx.fam, parse_ruleset(ctx.bg.ruleset_text,
                                                                       "builtin:" + ctx.bg.name));
        add(rep, "classification", "ruleset structure", true,
            std::to_string(ctx.rules.rules.size()) + " rules verified");
    } catch (const std::exception& e) {
        add(rep, "classification", "ruleset structure", false, e.what());
        return;
    }
    try {
        Table got = classification_table(ctx.bg.name, *ctx.closed, ctx.fam, ctx.rules);
        compare_with_golden(rep, "classification", got,
                            ctx.bg.name == "W8" ? "w8_classification" : "w9_classification");
    } catch (const std::exception& e) {
        add(rep, "classification", "classification sweep", false, e.what());
    }

    if (ctx.rules.rules.size() != ctx.bg.classes.size()) {
        add(rep, "classification", "catalogue alignment", false,
            "rule count differs from the catalogue");
        return;
    }
    for (size_t k = 0; k < ctx.rules.rules.size(); ++k) {
        const ClassificationRule& rule = ctx.rules.rules[k];
        const BuiltinClass& cls = ctx.bg.classes[k];
        std::string base = "class " + cls.label;
        try {
            std::vector<Rat> sample = rule_sample(ctx.rules, rule, ctx.closed->dimension());
            bool sample_ok = sample == cls.sample && rule.class_label == cls.label;
            add(rep, "classification", base + " sample", sample_ok,
                sample_ok ? "" : "catalogue sample disagrees with the rule's sample");
            RestrictionClass a{ctx.closed, cls.sample};
            NormalFormReport first = classify(a, ctx.rules, ctx.fam);

            std::string tmpl = rule_template(rule, ctx.rules, *ctx.closed);
            add(rep, "classification", base + " template", tmpl == cls.normal_form,
                tmpl == cls.normal_form
                    ? tmpl
                    : "computed " + tmpl + ", catalogue " + cls.normal_form);

            NormalFormReport again = classify(first.residual, ctx.rules, ctx.fam);
            bool idem = again.class_label == first.class_label &&
                        again.normal_form == first.normal_form &&
                        again.residual.coords == first.residual.coords;
            add(rep, "classification", base + " idempotent", idem,
                idem ? "" : "re-classifying the residual changed the report");

            std::vector<Rat> neg = cls.sample;
            for (Rat& c : neg) c = -c;
            NormalFormReport flipped = classify(RestrictionClass{ctx.closed, neg}, ctx.rules,
                                                ctx.fam);
            bool sign_ok = flipped.class_label == first.class_label &&
                           (rule.sign_sensitive ? flipped.sign == -first.sign &&
                                                      first.sign != 0
                                                : flipped.sign == 0 && first.sign == 0);
            add(rep, "classification", base + " sign separation", sign_ok,
                sign_ok ? (rule.sign_sensitive ? "opposite signs distinguished" : "no sign")
                        : "negated sample: class " + flipped.class_label + ", sign " +
                              std::to_string(flipped.sign));

            if (!first.moduli.empty()) {
                ModuliCertificate cert = moduli_certificate(first, ctx.fam);
                add(rep, "classification", base + " moduli certificate", cert.all_outside,
                    std::to_string(cert.checks.size()) + " parameter directions checked");
            }
        } catch (const std::exception& e) {
            add(rep, "classification", base, false, e.what());
        }
    }
}

void suite_tangency(VerificationReport& rep, Ctx& ctx) {
    if (!build_pinned(rep, ctx, "tangency")) return;
    bool has_l2 = false;
    for (const auto& cls : ctx.bg.classes)
        if (cls.lag_second) has_l2 = true;
    Table table;
    table.name = "invariants " + ctx.bg.name;
    table.columns = has_l2 ? std::vector<std::string>{"class", "L_N", "L2", "ind"}
                           : std::vector<std::string>{"class", "L_N", "ind"};
    bool single = ctx.bg.germ.branches.size() == 1;
    for (const auto& cls : ctx.bg.classes) {
        std::string base = "class " + cls.label;
        try {
            TangencyComputation tc = class_tangency(ctx.bg, cls, ctx.closed, ctx.cap);
            std::string ln_cell = single ? ext_cell(tc.ln) : search_cell(*tc.ln_search);
            if (has_l2)
                table.add_row({cls.label, ln_cell,
                               tc.l2_search ? search_cell(*tc.l2_search) : "", ext_cell(tc.ind)});
            else
                table.add_row({cls.label, ln_cell, ext_cell(tc.ind)});

            if (single) {
                bool agree = tc.ln_search->order == tc.ln && !tc.ln_search->maxed;
                add(rep, "tangency", base + " search attains the 1-form value", agree,
                    "1-form route " + tc.ln.str(true) + ", search " +
                        tc.ln_search->order.str(true));
            }
            // Witness audits: the returned Lagrangian passes the bracket jet
            // check and really meets the curves at the reported order.
            auto audit = [&](const std::string& what, const TangencySearchResult& res,
                             const std::vector<BranchParam>& curves) {
                try {
                    make_submanifold(res.witness.h, true);
                    ExtInt met = multigerm_tangency(curves, res.witness);
                    bool ok = !res.maxed && met == res.order;
                    add(rep, "tangency", base + " " + what + " witness", ok,
                        "order " + res.order.str(true) + ", witness meets at " + met.str(true) +
                            (res.order.infinite ? " (exact containment)" : ""));
                } catch (const std::exception& e) {
                    add(rep, "tangency", base + " " + what + " witness", false, e.what());
                }
            };
            audit("L_N", *tc.ln_search, cls.curves);
            if (tc.l2_search) audit("L2", *tc.l2_search, {cls.curves.back()});
        } catch (const std::exception& e) {
            add(rep, "tangency", base, false, e.what());
        }
    }
    compare_with_golden(rep, "tangency", table,
                        ctx.bg.name == "W8" ? "w8_invariants" : "w9_invariants");
}

void suite_geometry(VerificationReport& rep, Ctx& ctx) {
    if (!build_pinned(rep, ctx, "geometry")) return;
    TangentFrame frame;
    GeometricOptions opt;
    try {
        frame = default_frame(ctx.def);
        opt = builtin_geometric_options(ctx.bg.name);
    } catch (const std::exception& e) {
        add(rep, "geometry", "frame", false, e.what());
        return;
    }
    Table table;
    table.name = "geometry " + ctx.bg.name;
    table.columns = {"class", "condition"};
    for (const auto& cls : ctx.bg.classes) {
        std::string base = "class " + cls.label;
        try {
            GeometricReport grep = geometric_class(ctx.closed, cls.realization, frame, opt);
            table.add_row({cls.label, grep.label(false)});
            bool regime_ok = grep.regime == cls.regime;
            add(rep, "geometry", base + " regime", regime_ok,
                regime_ok ? grep.label(false) : "computed '" + grep.label(false) + "'");
            if (grep.regime == GeometricRegime::kZeroOnW) {
                bool lag_ok = grep.lag && *grep.lag == cls.lag;
                add(rep, "geometry", base + " tangency order", lag_ok,
                    grep.lag ? "L_N = " + grep.lag->str(true) : "no order reported");
            }
        } catch (const std::exception& e) {
            add(rep, "geometry", base, false, e.what());
        }
    }
    compare_with_golden(rep, "geometry", table,
                        ctx.bg.name == "W8" ? "w8_geometry" : "w9_geometry");
}

}  // namespace

VerificationReport verify_reference(const GermDefinition& def, const std::string& reference,
                                    long degree_cap, long hard_cap) {
    const BuiltinGerm& bg = builtin_germ(reference);
    const ReferenceData* ref = reference_data(bg.name);
    if (!ref) throw InputError("no reference data for catalogue germ '" + bg.name + "'");
    if (degree_cap < 1) throw InputError("degree cap must be positive");
    VerificationReport rep;
    rep.germ = def.name;
    Ctx ctx{bg, *ref, def, degree_cap, hard_cap, nullptr, nullptr, nullptr, nullptr, {}, {}};
    suite_basis(rep, ctx);
    suite_relations(rep, ctx);
    suite_actions(rep, ctx);
    suite_classification(rep, ctx);
    suite_tangency(rep, ctx);
    suite_geometry(rep, ctx);
    return rep;
}

VerificationReport verify_builtin(const std::string& name, long degree_cap) {
    return verify_reference(builtin_germ(name).germ, name, degree_cap);
}

}  // namespace algrest

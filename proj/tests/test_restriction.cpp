#include "algrest/restriction.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "algrest/builtins.hpp"
#include "algrest/errors.hpp"
#include "algrest/expr.hpp"
#include "algrest/linalg.hpp"
#include "doctest.h"

using namespace algrest;

namespace {

std::shared_ptr<const RestrictionSpace> w8s() { return builtin_closed_space("W8"); }
std::shared_ptr<const RestrictionSpace> w9s() { return builtin_closed_space("W9"); }

Rat rv(const char* s) { return rat_from_string(s); }

// Sparse coordinate vector: 1-based (index, value) pairs.
std::vector<Rat> coords(size_t dim, std::initializer_list<std::pair<size_t, const char*>> vals) {
    std::vector<Rat> v(dim, Rat(0));
    for (const auto& [i, s] : vals) v[i - 1] = rv(s);
    return v;
}

RestrictionClass cls_of(std::shared_ptr<const RestrictionSpace> s, std::vector<Rat> c) {
    return RestrictionClass{std::move(s), std::move(c)};
}

// One nonzero action entry: L_field theta_col = ... + value * theta_row + ...
struct ActionEntry {
    size_t col = 0;  // 1-based source basis index
    size_t row = 0;  // 1-based target basis index
    const char* value = "";
};

// Hand-checked multiplication tables for the two built-in germs, in the order
// produced by default_tangent_family. X0 (the Euler field itself) is handled
// separately: it is diagonal with the basis quasi-degrees.
const std::map<std::string, std::vector<ActionEntry>> kW8Actions = {
    {"X1", {{1, 4, "13"}, {2, 5, "-28"}, {3, 6, "5"}, {4, 7, "17"}, {6, 8, "-57"}}},
    {"X2", {{1, 5, "14"}, {2, 6, "10"}, {5, 8, "19"}}},
    {"X3", {{1, 6, "5"}, {3, 7, "51/2"}, {4, 8, "-19"}}},
    {"X4", {{1, 7, "17"}, {3, 8, "-19"}}},
    {"X5", {{2, 8, "-38"}}},
    {"X6", {{1, 8, "19"}}},
    {"X7", {{1, 8, "-19"}}},
};

const std::map<std::string, std::vector<ActionEntry>> kW9Actions = {
    {"X1", {{1, 4, "10"}, {2, 5, "11"}, {3, 6, "4"}, {4, 7, "13"}, {5, 8, "14"}, {7, 9, "16"}}},
    {"X2", {{1, 5, "-11/2"}, {2, 6, "8"}, {3, 7, "13/4"}, {4, 8, "-7"}, {6, 9, "12"}}},
    {"X3", {{1, 6, "4"}, {2, 7, "-13/2"}, {3, 8, "-7"}, {5, 9, "-8"}}},
    {"X4", {{1, 7, "13"}, {2, 8, "14"}, {4, 9, "16"}}},
    {"X5", {{1, 8, "-7"}, {3, 9, "4"}}},
    {"X6", {{2, 9, "8"}}},
    {"X7", {{2, 9, "-8"}}},
    {"X8", {{1, 9, "4"}}},
    {"X9", {{1, 9, "16"}}},
};

void check_action_tables(const RestrictionSpace& s,
                         const std::map<std::string, std::vector<ActionEntry>>& table) {
    auto fam = default_tangent_family(s);
    size_t dim = s.dimension();
    REQUIRE(fam.generators.size() == table.size() + 1);
    for (const auto& gen : fam.generators) {
        ActionMatrix am = action_matrix(s, gen);
        CHECK(am.field_label == gen.label);
        CHECK(am.field_qdeg == gen.qdeg);
        REQUIRE(am.m.nrows == dim);
        REQUIRE(am.m.ncols == dim);
        QMat expected(dim, dim);
        if (gen.label == "X0") {
            for (size_t j = 0; j < dim; ++j) expected.a[j][j] = Rat(s.basis()[j].delta);
        } else {
            auto it = table.find(gen.label);
            REQUIRE(it != table.end());
            for (const auto& e : it->second) expected.a[e.row - 1][e.col - 1] = rv(e.value);
        }
        for (size_t i = 0; i < dim; ++i)
            for (size_t j = 0; j < dim; ++j) {
                INFO(gen.label << " entry (" << i + 1 << "," << j + 1 << ")");
                CHECK(am.m.a[i][j] == expected.a[i][j]);
            }
        // Gradedness: a quasi-degree-q field maps the delta-layer into the
        // (delta+q)-layer, so every entry must connect matching layers.
        for (size_t i = 0; i < dim; ++i)
            for (size_t j = 0; j < dim; ++j)
                if (am.m.a[i][j] != 0)
                    CHECK(s.basis()[i].delta == s.basis()[j].delta + gen.qdeg);
    }
}

std::string strip_pm(std::string t) {
    const std::string pm = "±";
    for (size_t pos; (pos = t.find(pm)) != std::string::npos;) t.erase(pos, pm.size());
    return t;
}

ClassificationRuleset rules_w8(const std::string& body) {
    return parse_ruleset(body, "test");
}

const char* kTerminalW8 =
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7=0&c8=0 class=zero pivot=0 eliminate= "
    "sign_sensitive=false\n";

}  // namespace

TEST_CASE("tangent family lists monomial multiples of the Euler field in degree order") {
    auto s8 = w8s();
    auto fam8 = default_tangent_family(*s8);
    REQUIRE(fam8.generators.size() == 8);
    std::vector<std::string> labels8;
    std::vector<long> qdegs8;
    std::vector<std::vector<int>> factors8;
    for (const auto& g : fam8.generators) {
        labels8.push_back(g.label);
        qdegs8.push_back(g.qdeg);
        factors8.push_back(g.factor.e);
    }
    CHECK(labels8 == std::vector<std::string>{"X0", "X1", "X2", "X3", "X4", "X5", "X6", "X7"});
    CHECK(qdegs8 == std::vector<long>{0, 4, 5, 6, 8, 9, 10, 10});
    CHECK(factors8 == std::vector<std::vector<int>>{{0, 0, 0},
                                                    {0, 0, 1},
                                                    {0, 1, 0},
                                                    {1, 0, 0},
                                                    {0, 0, 2},
                                                    {0, 1, 1},
                                                    {0, 2, 0},
                                                    {1, 0, 1}});

    auto s9 = w9s();
    auto fam9 = default_tangent_family(*s9);
    REQUIRE(fam9.generators.size() == 10);
    std::vector<std::string> labels9;
    std::vector<std::vector<int>> factors9;
    for (const auto& g : fam9.generators) {
        labels9.push_back(g.label);
        factors9.push_back(g.factor.e);
    }
    CHECK(labels9 == std::vector<std::string>{"X0", "X1", "X2", "X3", "X4", "X5", "X6", "X7",
                                              "X8", "X9"});
    // Ties inside one quasi-degree break by reverse-lexicographic exponents:
    // at qdeg 8, x2^2 precedes x1*x3; at qdeg 9, x1*x2 precedes x3^3.
    CHECK(factors9[6] == std::vector<int>{0, 2, 0});
    CHECK(factors9[7] == std::vector<int>{1, 0, 1});
    CHECK(factors9[8] == std::vector<int>{1, 1, 0});
    CHECK(factors9[9] == std::vector<int>{0, 0, 3});

    // Every family member is liftable/tangent by construction.
    for (const auto& g : fam8.generators) CHECK(is_tangent_field(s8->germ(), g.field));
    for (const auto& g : fam9.generators) CHECK(is_tangent_field(s9->germ(), g.field));
}

TEST_CASE("tangency test accepts Euler multiples and rejects generic fields") {
    const GermDefinition& g = builtin_germ("W8").germ;
    WeightSystem w{g.weights};
    VectorField e = euler_field(w);
    CHECK(is_tangent_field(g, e));
    CHECK(is_tangent_field(g, parse_vector_field("(x2*x3 - 3*x1)*E", g.variables, w)));

    // d/dx1 moves the first generator to 2*x1, which is not in the ideal.
    VectorField d1 = VectorField::zero(3);
    d1.components[0] = Polynomial::constant(3, Rat(1));
    Polynomial witness;
    size_t wi = 99;
    CHECK_FALSE(is_tangent_field(g, d1, &witness, &wi));
    CHECK(wi == 0);
    CHECK(witness == Polynomial::term(3, Monomial{{1, 0, 0}}, Rat(2)));

    CHECK(in_generated_ideal(g, g.generators[0]));
    CHECK(in_generated_ideal(g, g.generators[1]));
    Polynomial combo = Polynomial::variable(3, 0) * g.generators[0] +
                       Polynomial::variable(3, 1) * Polynomial::variable(3, 1) * g.generators[1];
    CHECK(in_generated_ideal(g, combo));
    CHECK_FALSE(in_generated_ideal(g, Polynomial::variable(3, 0)));
    // x3^3 agrees with a generator in quasi-degree but is not a combination.
    CHECK_FALSE(in_generated_ideal(g, Polynomial::term(3, Monomial{{0, 0, 3}}, Rat(1))));
}

TEST_CASE("hamiltonian tangent field exists and acts trivially") {
    for (const char* name : {"W8", "W9"}) {
        auto s = builtin_closed_space(name);
        const auto& g = s->germ();
        VectorField h = hamiltonian_tangent_field(g);
        CHECK(is_tangent_field(g, h));
        ActionMatrix am = action_matrix(*s, h, "H");
        for (size_t i = 0; i < am.m.nrows; ++i)
            for (size_t j = 0; j < am.m.ncols; ++j) CHECK(am.m.a[i][j] == 0);
    }
}

TEST_CASE("action matrices reproduce the catalogued tables (first germ)") {
    check_action_tables(*w8s(), kW8Actions);
}

TEST_CASE("action matrices reproduce the catalogued tables (second germ)") {
    check_action_tables(*w9s(), kW9Actions);
}

TEST_CASE("individual action values quoted in the interface docs") {
    auto s8 = w8s();
    auto fam8 = default_tangent_family(*s8);
    ActionMatrix x1 = action_matrix(*s8, fam8.generators[1]);
    CHECK(x1.m.a[4][1] == Rat(-28));  // L_{x3 E} theta2 = -28 theta5
    ActionMatrix x3 = action_matrix(*s8, fam8.generators[3]);
    CHECK(x3.m.a[6][2] == rv("51/2"));  // L_{x1 E} theta3 = 51/2 theta7

    auto s9 = w9s();
    auto fam9 = default_tangent_family(*s9);
    ActionMatrix y2 = action_matrix(*s9, fam9.generators[2]);
    CHECK(y2.m.a[4][0] == rv("-11/2"));  // L_{x2 E} theta1 = -11/2 theta5
}

TEST_CASE("action matrix rejects non-tangent fields") {
    auto s = w8s();
    VectorField d1 = VectorField::zero(3);
    d1.components[0] = Polynomial::constant(3, Rat(1));
    CHECK_THROWS_AS(action_matrix(*s, d1, "bad"), InputError);
}

TEST_CASE("orbit tangent spaces have the documented ranks") {
    auto s8 = w8s();
    auto fam8 = default_tangent_family(*s8);

    auto a0 = cls_of(s8, coords(8, {{1, "1"}, {2, "2"}, {3, "3"}}));
    QMat orbit0 = orbit_tangent_space(a0, fam8);
    CHECK(rank(orbit0) == 6);
    CHECK(symplectic_multiplicity(a0, fam8) == 2);

    // The rank-6 span contains every coordinate direction past theta3.
    for (size_t k = 4; k <= 8; ++k) {
        QMat with = orbit0;
        std::vector<Rat> ek(8, Rat(0));
        ek[k - 1] = Rat(1);
        with.append_row(ek);
        CHECK(rank(with) == 6);
    }

    auto azero = cls_of(s8, std::vector<Rat>(8, Rat(0)));
    CHECK(rank(orbit_tangent_space(azero, fam8)) == 0);
    CHECK(symplectic_multiplicity(azero, fam8) == 8);

    auto a2a = cls_of(s8, coords(8, {{2, "1"}, {4, "1"}, {7, "1"}}));
    CHECK(rank(orbit_tangent_space(a2a, fam8)) == 4);
    CHECK(symplectic_multiplicity(a2a, fam8) == 4);

    auto s9 = w9s();
    auto fam9 = default_tangent_family(*s9);
    auto b0 = cls_of(s9, coords(9, {{1, "1"}, {2, "1"}, {3, "1"}}));
    CHECK(rank(orbit_tangent_space(b0, fam9)) == 7);
    CHECK(symplectic_multiplicity(b0, fam9) == 2);

    // Class with pivot theta7: the orbit is spanned by the Euler row and the
    // single upward move into theta9.
    auto b6 = cls_of(s9, coords(9, {{7, "1"}, {8, "1"}}));
    QMat orbit6 = orbit_tangent_space(b6, fam9);
    CHECK(rank(orbit6) == 2);
    QMat expected6 =
        QMat::from_rows({coords(9, {{7, "13"}, {8, "14"}}), coords(9, {{9, "16"}})}, 9);
    QMat joined = expected6;
    for (size_t r = 0; r < orbit6.nrows; ++r) joined.append_row(orbit6.row(r));
    CHECK(rank(joined) == 2);
}

TEST_CASE("index of isotropy spot values") {
    auto s8 = w8s();
    CHECK(index_of_isotropy(cls_of(s8, coords(8, {{1, "1"}}))) == ExtInt::of(0));
    CHECK(index_of_isotropy(cls_of(s8, coords(8, {{4, "1"}}))) == ExtInt::of(1));
    CHECK(index_of_isotropy(cls_of(s8, coords(8, {{7, "1"}, {8, "1"}}))) == ExtInt::of(2));
    CHECK(index_of_isotropy(cls_of(s8, std::vector<Rat>(8, Rat(0)))) == ExtInt::inf());

    auto s9 = w9s();
    CHECK(index_of_isotropy(cls_of(s9, coords(9, {{9, "1"}}))) == ExtInt::of(3));
    CHECK(index_of_isotropy(cls_of(s9, coords(9, {{6, "1"}, {7, "1"}, {8, "1"}}))) ==
          ExtInt::of(1));
}

TEST_CASE("classification sweep over the catalogued samples") {
    for (const char* name : {"W8", "W9"}) {
        const BuiltinGerm& bg = builtin_germ(name);
        auto s = builtin_closed_space(name);
        const ClassificationRuleset& rs = builtin_ruleset(name);
        CHECK(rs.verified);
        for (const auto& cls : bg.classes) {
            INFO(cls.label);
            NormalFormReport rep = classify(cls_of(s, cls.sample), rs);
            CHECK(rep.class_label == cls.label);
            CHECK(rep.codimension == cls.codim);
            CHECK(rep.symplectic_mult == cls.mu);
            CHECK(rep.isotropy == cls.isotropy);
            CHECK(rep.ruleset_verified);
            CHECK(rep.normal_form == strip_pm(cls.normal_form));
            bool sign_class = cls.normal_form.find("±") != std::string::npos;
            CHECK(rep.sign == (sign_class ? 1 : 0));
            // Samples sit at moduli value 1 with pivot coefficient 1, so each
            // modulus evaluates to the plain coordinate value.
            for (const auto& mv : rep.moduli) {
                CHECK(mv.value.base == 1);
                CHECK(mv.value.coeff == cls.sample[mv.index - 1]);
            }
            // Samples are already reduced: no elimination steps required.
            CHECK(rep.trace.empty());
            auto fam = default_tangent_family(*s);
            ModuliCertificate cert = moduli_certificate(rep, fam);
            CHECK(cert.all_outside);
            CHECK(cert.checks.size() == rep.moduli.size());
            for (const auto& chk : cert.checks) {
                CHECK(chk.outside);
                CHECK(chk.rank_with == chk.rank_without + 1);
            }
        }
    }
}

TEST_CASE("classification eliminates higher-order terms and reports the trace") {
    auto s = w8s();
    auto a = cls_of(s, coords(8, {{1, "1"},
                                  {2, "2"},
                                  {3, "3"},
                                  {4, "5"},
                                  {5, "7"},
                                  {6, "1"},
                                  {7, "4"},
                                  {8, "9"}}));
    NormalFormReport rep = classify(a, builtin_ruleset("W8"));
    CHECK(rep.class_label == "W8^0");
    CHECK(rep.codimension == 0);
    CHECK(rep.symplectic_mult == 2);
    CHECK(rep.isotropy == ExtInt::of(0));

    // Elimination may only touch layers above the moduli: the residual keeps
    // the first three coordinates and clears the rest.
    REQUIRE(rep.residual.coords.size() == 8);
    CHECK(rep.residual.coords[0] == Rat(1));
    CHECK(rep.residual.coords[1] == Rat(2));
    CHECK(rep.residual.coords[2] == Rat(3));
    for (size_t k = 4; k <= 8; ++k) CHECK(rep.residual.coords[k - 1] == 0);

    REQUIRE(!rep.trace.empty());
    CHECK(rep.trace.size() <= 5);
    for (size_t i = 1; i < rep.trace.size(); ++i)
        CHECK(rep.trace[i - 1].killed_index < rep.trace[i].killed_index);
    for (const auto& st : rep.trace) {
        CHECK(st.killed_index >= 4);
        CHECK(st.parameter != 0);
        CHECK(st.field_label.substr(0, 1) == "X");
    }

    REQUIRE(rep.moduli.size() == 2);
    CHECK(rep.moduli[0].name == "c1");
    CHECK(rep.moduli[0].index == 2);
    CHECK(rep.moduli[0].value.str() == "2");
    CHECK(rep.moduli[1].name == "c2");
    CHECK(rep.moduli[1].index == 3);
    CHECK(rep.moduli[1].value.str() == "3");
    CHECK(rep.normal_form == "[theta1 + c1*theta2 + c2*theta3]");

    // Classifying the residual again is a no-op with identical moduli.
    NormalFormReport again = classify(rep.residual, builtin_ruleset("W8"));
    CHECK(again.class_label == rep.class_label);
    CHECK(again.trace.empty());
    REQUIRE(again.moduli.size() == 2);
    CHECK(again.moduli[0].value == rep.moduli[0].value);
    CHECK(again.moduli[1].value == rep.moduli[1].value);

    ModuliCertificate cert = moduli_certificate(rep, default_tangent_family(*s));
    CHECK(cert.all_outside);
    REQUIRE(cert.checks.size() == 2);
    CHECK(cert.checks[0].index == 2);
    CHECK(cert.checks[1].index == 3);
}

TEST_CASE("weighted scaling produces symbolic modulus values") {
    auto s = w8s();

    NormalFormReport rep = classify(cls_of(s, coords(8, {{2, "8"}, {3, "4"}})),
                                    builtin_ruleset("W8"));
    CHECK(rep.class_label == "W8^1");
    CHECK(rep.sign == 0);
    REQUIRE(rep.moduli.size() == 2);
    CHECK(rep.moduli[0].index == 2);
    CHECK(rep.moduli[0].value.coeff == Rat(8));
    CHECK(rep.moduli[0].value.base == Rat(4));
    CHECK(rep.moduli[0].value.exponent == rat(-10, 11));
    CHECK(rep.moduli[0].value.str() == "8*4^(-10/11)");
    CHECK(rep.moduli[0].value.approx() == doctest::Approx(2.268625).epsilon(1e-5));
    CHECK(rep.moduli[1].value.str() == "0");
    CHECK(rep.moduli[1].value.approx() == doctest::Approx(0.0));

    // Negative pivot coefficient at an odd quasi-degree: the rescaling factor
    // is negative, flipping exactly the odd-degree moduli.
    NormalFormReport neg = classify(cls_of(s, coords(8, {{2, "8"}, {3, "-4"}, {4, "6"}})),
                                    builtin_ruleset("W8"));
    CHECK(neg.class_label == "W8^1");
    CHECK(neg.sign == 0);
    REQUIRE(neg.moduli.size() == 2);
    CHECK(neg.moduli[0].value.coeff == Rat(8));  // theta2 layer is even
    CHECK(neg.moduli[0].value.str() == "8*4^(-10/11)");
    CHECK(neg.moduli[1].value.coeff == Rat(-6));  // theta4 layer is odd
    CHECK(neg.moduli[1].value.exponent == rat(-13, 11));
    CHECK(neg.moduli[1].value.str() == "-6*4^(-13/11)");

    // Even-degree pivot: the sign survives as a discrete invariant.
    NormalFormReport sgn = classify(cls_of(s, coords(8, {{2, "-2"}, {4, "3"}, {7, "5"}})),
                                    builtin_ruleset("W8"));
    CHECK(sgn.class_label == "W8^2a");
    CHECK(sgn.sign == -1);
    CHECK(sgn.normal_form == "[-theta2 + c1*theta4 + c2*theta7]");
    REQUIRE(sgn.moduli.size() == 2);
    CHECK(sgn.moduli[0].value.str() == "3*2^(-13/10)");
    CHECK(sgn.moduli[1].value.str() == "5*2^(-17/10)");

    auto s9 = w9s();
    NormalFormReport plus = classify(cls_of(s9, coords(9, {{2, "1"}})), builtin_ruleset("W9"));
    CHECK(plus.class_label == "W9^1");
    CHECK(plus.sign == 1);
    CHECK(plus.normal_form == "[theta2 + c1*theta3 + c2*theta4]");
    NormalFormReport minus = classify(cls_of(s9, coords(9, {{2, "-1"}})), builtin_ruleset("W9"));
    CHECK(minus.class_label == "W9^1");
    CHECK(minus.sign == -1);
    CHECK(minus.normal_form == "[-theta2 + c1*theta3 + c2*theta4]");
}

TEST_CASE("classification input errors") {
    auto s = w8s();
    auto rs = rules_w8(std::string("rule guard=c2!=0 class=A pivot=1 eliminate= "
                                   "sign_sensitive=false\n") +
                       kTerminalW8);
    // Guard matches but the pivot coordinate vanishes.
    CHECK_THROWS_AS(classify(cls_of(s, coords(8, {{2, "1"}})), rs), InputError);

    auto partial = rules_w8("rule guard=c1!=0 class=A pivot=1 eliminate= sign_sensitive=false\n");
    CHECK_THROWS_AS(classify(cls_of(s, coords(8, {{2, "1"}})), partial), InputError);

    // Wrong coordinate count for the space.
    CHECK_THROWS_AS(classify(cls_of(s, std::vector<Rat>(5, Rat(1))), builtin_ruleset("W8")),
                    InputError);
}

TEST_CASE("moduli certificate rejects a modulus inside the orbit") {
    auto s = w8s();
    // Pivot 1 with nothing eliminated leaves theta4..theta8 as fake moduli;
    // the theta4 direction lies in the orbit tangent space at the residual.
    auto rs = rules_w8(std::string("rule guard=c1!=0 class=fat pivot=1 eliminate= "
                                   "sign_sensitive=false\n") +
                       kTerminalW8);
    NormalFormReport rep = classify(cls_of(s, coords(8, {{1, "1"}, {2, "2"}, {3, "3"}, {4, "5"}})),
                                    rs);
    CHECK(rep.class_label == "fat");
    CHECK(rep.moduli.size() == 7);
    CHECK_THROWS_AS(moduli_certificate(rep, default_tangent_family(*s)), VerifyError);
}

TEST_CASE("ruleset grammar roundtrip") {
    const ClassificationRuleset& rs = builtin_ruleset("W8");
    std::string text = render_ruleset(rs);
    ClassificationRuleset back = parse_ruleset(text, rs.source);
    REQUIRE(back.rules.size() == rs.rules.size());
    for (size_t i = 0; i < rs.rules.size(); ++i) {
        CHECK(back.rules[i].class_label == rs.rules[i].class_label);
        CHECK(back.rules[i].pivot == rs.rules[i].pivot);
        CHECK(back.rules[i].eliminate == rs.rules[i].eliminate);
        CHECK(back.rules[i].sign_sensitive == rs.rules[i].sign_sensitive);
        CHECK(back.rules[i].guard_zeros() == rs.rules[i].guard_zeros());
    }
    CHECK(render_ruleset(back) == text);
    // Round-tripped text parses to a ruleset that still verifies.
    auto s = w8s();
    CHECK(verify_ruleset(*s, default_tangent_family(*s), back).verified);
}

TEST_CASE("ruleset parse errors") {
    CHECK_THROWS_AS(parse_ruleset("", "t"), ParseError);
    CHECK_THROWS_AS(parse_ruleset("# only a comment\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_ruleset("edict guard=true class=z pivot=0 eliminate= "
                                  "sign_sensitive=false\n",
                                  "t"),
                    ParseError);
    // Missing mandatory key (eliminate=).
    CHECK_THROWS_AS(parse_ruleset("rule guard=c1!=0 class=A pivot=1 sign_sensitive=false\n", "t"),
                    ParseError);
    CHECK_THROWS_AS(parse_ruleset("rule guard=c1!=0 class=A pivot=1 eliminate=5,5 "
                                  "sign_sensitive=false\n",
                                  "t"),
                    ParseError);
    CHECK_THROWS_AS(parse_ruleset("rule guard=c1!=0 class=A pivot=1 eliminate= "
                                  "sign_sensitive=maybe\n",
                                  "t"),
                    ParseError);
    CHECK_THROWS_AS(parse_ruleset("rule guard=c1!=0 class=A pivot=one eliminate= "
                                  "sign_sensitive=false\n",
                                  "t"),
                    ParseError);
    CHECK_THROWS_AS(parse_ruleset("rule guard=c1!=0 class=A pivot=1 eliminate= "
                                  "sign_sensitive=false flavor=mint\n",
                                  "t"),
                    ParseError);

    // Comments, blank lines, and unsorted eliminate lists are fine.
    ClassificationRuleset ok = parse_ruleset("# header\n\nrule guard=c1!=0 class=A pivot=1 "
                                             "eliminate=7,4 sign_sensitive=false\n",
                                             "t");
    REQUIRE(ok.rules.size() == 1);
    CHECK(ok.rules[0].eliminate == std::vector<size_t>{4, 7});
    CHECK_FALSE(ok.verified);
}

TEST_CASE("ruleset verification rejects structural defects") {
    auto s = w8s();
    auto fam = default_tangent_family(*s);
    auto verify = [&](const std::string& body) {
        return verify_ruleset(*s, fam, rules_w8(body + kTerminalW8));
    };

    // Sanity: a correct single rule plus terminal verifies.
    CHECK(verify("rule guard=c1!=0 class=A pivot=1 eliminate=4,5,6,7,8 sign_sensitive=false\n")
              .verified);

    // Pivot out of range.
    CHECK_THROWS_AS(verify("rule guard=c9!=0 class=A pivot=9 eliminate= sign_sensitive=false\n"),
                    VerifyError);
    // Guard does not pin the pivot nonzero.
    CHECK_THROWS_AS(verify("rule guard=c1!=0 class=A pivot=2 eliminate= sign_sensitive=true\n"),
                    VerifyError);
    // Sign flag disagrees with the parity of the pivot layer (delta1 = 9).
    CHECK_THROWS_AS(verify("rule guard=c1!=0 class=A pivot=1 eliminate=4 sign_sensitive=true\n"),
                    VerifyError);
    // theta2 sits one quasi-degree above theta1; no field bridges the gap.
    CHECK_THROWS_AS(verify("rule guard=c1!=0 class=A pivot=1 eliminate=2 sign_sensitive=false\n"),
                    VerifyError);
    // Terminal rule must not eliminate or carry a sign.
    CHECK_THROWS_AS(
        verify_ruleset(*s, fam,
                       rules_w8("rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7=0&c8=0 class=z "
                                "pivot=0 eliminate=3 sign_sensitive=false\n")),
        VerifyError);
    // Missing all-zero terminal rule.
    CHECK_THROWS_AS(verify_ruleset(*s, fam,
                                   rules_w8("rule guard=c1!=0 class=A pivot=1 eliminate= "
                                            "sign_sensitive=false\n")),
                    VerifyError);
    // guard=true is parseable but is not an all-zero terminal guard.
    CHECK_THROWS_AS(verify_ruleset(*s, fam,
                                   rules_w8("rule guard=true class=z pivot=0 eliminate= "
                                            "sign_sensitive=false\n")),
                    VerifyError);
}

TEST_CASE("generic ruleset mirrors the action table") {
    auto s = w8s();
    auto fam = default_tangent_family(*s);
    ClassificationRuleset gen = generic_ruleset(*s, fam);
    REQUIRE(gen.rules.size() == 9);
    CHECK(gen.rules[0].class_label == "W8#1");
    CHECK(gen.rules[8].class_label == "W8#0");
    CHECK(gen.rules[8].pivot == 0);

    std::vector<std::vector<size_t>> elim;
    for (size_t i = 0; i + 1 < gen.rules.size(); ++i) elim.push_back(gen.rules[i].eliminate);
    CHECK(elim == std::vector<std::vector<size_t>>{{4, 5, 6, 7, 8},
                                                   {5, 6, 8},
                                                   {6, 7, 8},
                                                   {7, 8},
                                                   {8},
                                                   {8},
                                                   {},
                                                   {}});
    for (size_t i = 0; i + 1 < gen.rules.size(); ++i)
        CHECK(gen.rules[i].sign_sensitive == (s->basis()[i].delta % 2 == 0));

    ClassificationRuleset verified = verify_ruleset(*s, fam, gen);
    CHECK(verified.verified);

    NormalFormReport rep = classify(cls_of(s, coords(8, {{2, "1"}, {4, "1"}, {7, "1"}})),
                                    verified);
    CHECK(rep.class_label == "W8#2");
    CHECK(rep.sign == 1);
    CHECK(rep.codimension == 1);  // generic guard pins only the coordinates below the pivot
}

TEST_CASE("homotopy solvability matrix built from the action table") {
    // The 4x5 system deciding membership of the first family: unknowns are
    // the field coefficients b1..b5, the right side is (c5, c6, c7, c8).
    // Feasibility for generic data happens exactly when c2*c3 != 0.
    auto s = w8s();
    auto fam = default_tangent_family(*s);
    auto build = [&](const std::vector<Rat>& c, const Rat& t) {
        QMat m(4, 5);
        for (size_t f = 1; f <= 5; ++f) {
            ActionMatrix am = action_matrix(*s, fam.generators[f]);
            std::vector<Rat> image(8, Rat(0));
            for (size_t i = 0; i < 8; ++i)
                for (size_t j = 0; j < 8; ++j) image[i] += am.m.a[i][j] * c[j];
            for (size_t r = 0; r < 4; ++r) m.a[r][f - 1] = image[4 + r];
        }
        // Row four interpolates between the endpoint and the target class.
        m.a[3][0] *= (Rat(1) - t);
        m.a[3][1] *= (Rat(1) - t);
        return m;
    };
    unsigned long seed = 20260814;
    auto next = [&]() {
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<long>((seed >> 33) % 19) - 9;
    };
    int solvable_seen = 0, blocked_seen = 0;
    for (int iter = 0; iter < 60; ++iter) {
        std::vector<Rat> c(8, Rat(0));
        for (size_t j = 1; j < 8; ++j) c[j] = Rat(next());
        for (size_t j = 4; j < 8; ++j)
            if (c[j] == 0) c[j] = Rat(1 + (iter % 5));
        if (iter % 3 == 0) {
            if (c[1] == 0) c[1] = Rat(2);
            if (c[2] == 0) c[2] = Rat(3);
        } else if (iter % 3 == 1) {
            c[1] = 0;
        } else {
            c[2] = 0;
            if (c[1] == 0) c[1] = Rat(2);
            // Keep rows one and three genuinely inconsistent.
            if (Rat(17) * c[3] * c[4] + Rat(28) * c[1] * c[6] == 0) {
                c[6] += 1;
                if (c[6] == 0) c[6] = Rat(2);
            }
        }
        for (const Rat& t : {Rat(0), rat(1, 2), Rat(1)}) {
            QMat m = build(c, t);
            std::vector<Rat> rhs{c[4], c[5], c[6], c[7]};
            bool ok = solve(m, rhs).has_value();
            if (c[1] != 0 && c[2] != 0) {
                CHECK(ok);
                ++solvable_seen;
            } else {
                CHECK_FALSE(ok);
                ++blocked_seen;
            }
        }
    }
    CHECK(solvable_seen >= 60);
    CHECK(blocked_seen >= 60);
}

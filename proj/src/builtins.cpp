#include "algrest/builtins.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include "algrest/errors.hpp"
#include "algrest/expr.hpp"

namespace algrest {

namespace {

const char* kW8Definition = R"(germ W8
variables x1 x2 x3
weights 6 5 4
symplectic_dim 6
generator x1^2 + x3^3
generator x2^2 + x1*x3
branch C (t^6, t^5, -t^4)
)";

const char* kW9Definition = R"(germ W9
variables x1 x2 x3
weights 5 4 3
symplectic_dim 6
generator x1^2 + x2*x3^2
generator x2^2 + x1*x3
branch C1 (0, 0, t)
branch C2 (t^5, -t^4, -t^3)
)";

const char* kW8Ruleset =
    "rule guard=c1!=0 class=W8^0 pivot=1 eliminate=4,5,6,7,8 sign_sensitive=false\n"
    "rule guard=c1=0&c2!=0&c3!=0 class=W8^1 pivot=3 eliminate=5,6,7,8 sign_sensitive=false\n"
    "rule guard=c1=0&c3=0&c2!=0 class=W8^2a pivot=2 eliminate=5,6,8 sign_sensitive=true\n"
    "rule guard=c1=0&c2=0&c3!=0 class=W8^2b pivot=3 eliminate=6,7,8 sign_sensitive=false\n"
    "rule guard=c1=0&c2=0&c3=0&c4!=0 class=W8^3 pivot=4 eliminate=7,8 sign_sensitive=false\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5!=0 class=W8^4 pivot=5 eliminate=8 "
    "sign_sensitive=true\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6!=0 class=W8^5 pivot=6 eliminate=8 "
    "sign_sensitive=false\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7!=0 class=W8^6 pivot=7 eliminate= "
    "sign_sensitive=false\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7=0&c8!=0 class=W8^7 pivot=8 eliminate= "
    "sign_sensitive=false\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7=0&c8=0 class=W8^8 pivot=0 eliminate= "
    "sign_sensitive=false\n";

const char* kW9Ruleset =
    "rule guard=c1!=0 class=W9^0 pivot=1 eliminate=4,5,6,7,8,9 sign_sensitive=false\n"
    "rule guard=c1=0&c2!=0 class=W9^1 pivot=2 eliminate=5,6,7,8,9 sign_sensitive=true\n"
    "rule guard=c1=0&c2=0&c3!=0 class=W9^2 pivot=3 eliminate=6,7,8,9 sign_sensitive=false\n"
    "rule guard=c1=0&c2=0&c3=0&c4!=0 class=W9^3 pivot=4 eliminate=7,8,9 "
    "sign_sensitive=true\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5!=0 class=W9^4 pivot=5 eliminate=8,9 "
    "sign_sensitive=false\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6!=0 class=W9^5 pivot=6 eliminate=9 "
    "sign_sensitive=true\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7!=0 class=W9^6 pivot=7 eliminate=9 "
    "sign_sensitive=false\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7=0&c8!=0 class=W9^7 pivot=8 eliminate= "
    "sign_sensitive=true\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7=0&c8=0&c9!=0 class=W9^8 pivot=9 eliminate= "
    "sign_sensitive=true\n"
    "rule guard=c1=0&c2=0&c3=0&c4=0&c5=0&c6=0&c7=0&c8=0&c9=0 class=W9^9 pivot=0 eliminate= "
    "sign_sensitive=false\n";

std::vector<RepresentativeOverride> reps(const std::vector<std::string>& vars,
                                         std::vector<std::pair<const char*, const char*>> texts) {
    std::vector<RepresentativeOverride> out;
    for (const auto& [label, text] : texts)
        out.push_back({label, parse_form(text, vars, 2)});
    return out;
}

Series series_of(const char* text) {
    Polynomial p = parse_polynomial(text, {"t"});
    Series s;
    for (const auto& [m, c] : p.terms) s.add_term(m.e.empty() ? 0 : m.e[0], c);
    return s;
}

BranchParam curve(const char* label, std::vector<const char*> comps) {
    BranchParam b;
    b.label = label;
    for (const char* c : comps) b.components.push_back(series_of(c));
    return b;
}

std::vector<std::string> chart_vars(int n) {
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    return vars;
}

ExtInt fin(long v) { return ExtInt::of(v); }

struct ClassSpec {
    const char* label;
    const char* normal_form;
    size_t codim;
    size_t mu;
    ExtInt isotropy;
    ExtInt lag;
    std::optional<ExtInt> lag2;
    std::vector<Rat> sample;
    const char* realization;
    std::vector<BranchParam> curves;
    GeometricRegime regime;
};

std::vector<BuiltinClass> build_classes(std::vector<ClassSpec> specs) {
    auto vars6 = chart_vars(6);
    std::vector<BuiltinClass> out;
    for (auto& sp : specs) {
        BuiltinClass c;
        c.label = sp.label;
        c.normal_form = sp.normal_form;
        c.codim = sp.codim;
        c.mu = sp.mu;
        c.isotropy = sp.isotropy;
        c.lag = sp.lag;
        c.lag_second = sp.lag2;
        c.sample = sp.sample;
        c.realization = parse_form(sp.realization, vars6, 2);
        c.curves = std::move(sp.curves);
        c.regime = sp.regime;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Rat> coords(std::vector<long> v) {
    std::vector<Rat> out;
    for (long x : v) out.push_back(Rat(x));
    return out;
}

BuiltinGerm make_w8() {
    BuiltinGerm bg;
    bg.name = "W8";
    bg.germ = parse_germ_definition(kW8Definition, "builtin:W8");
    const auto& vars = bg.germ.variables;
    bg.closed_reps = reps(vars, {{"theta1", "dx2^dx3"},
                                 {"theta2", "dx1^dx3"},
                                 {"theta3", "dx1^dx2"},
                                 {"theta4", "x3*dx2^dx3"},
                                 {"theta5", "x2*dx2^dx3"},
                                 {"theta6", "x1*dx2^dx3 + x2*dx1^dx3"},
                                 {"theta7", "x3^2*dx2^dx3"},
                                 {"theta8", "x2^2*dx2^dx3"}});
    bg.all_reps = reps(vars, {{"theta1", "dx2^dx3"},
                              {"theta2", "dx1^dx3"},
                              {"theta3", "dx1^dx2"},
                              {"theta4", "x3*dx2^dx3"},
                              {"theta5", "x2*dx2^dx3"},
                              {"sigma1", "x1*dx2^dx3"},
                              {"sigma2", "x2*dx1^dx3"},
                              {"theta7", "x3^2*dx2^dx3"},
                              {"theta8", "x2^2*dx2^dx3"}});
    bg.ruleset_text = kW8Ruleset;

    // Sample moduli are all 1; realizations take the upper sign.
    bg.classes = build_classes({
        {"W8^0", "[theta1 + c1*theta2 + c2*theta3]", 0, 2, fin(0), fin(5), std::nullopt,
         coords({1, 1, 1, 0, 0, 0, 0, 0}),
         "dx2^dx3 + dx1^dx3 + dx1^dx2 + dx1^dx4 + dx5^dx6",
         {curve("C", {"t^5", "-t^4", "t^6", "-t^4+t^5"})},
         GeometricRegime::kNotIsotropic},
        {"W8^1", "[c1*theta2 + theta3 + c2*theta4]", 1, 3, fin(0), fin(6), std::nullopt,
         coords({0, 1, 1, 1, 0, 0, 0, 0}),
         "dx1^dx3 + dx1^dx2 + x3*dx2^dx3 + dx3^dx4 + dx5^dx6",
         {curve("C", {"t^6", "t^5", "t^6-t^9", "-t^4"})},
         GeometricRegime::kKernelNotLine},
        {"W8^2a", "[±theta2 + c1*theta4 + c2*theta7]", 2, 4, fin(0), fin(6), std::nullopt,
         coords({0, 1, 0, 1, 0, 0, 1, 0}),
         "dx1^dx3 + x3*dx2^dx3 + x3^2*dx2^dx3 + dx2^dx4 + dx5^dx6",
         {curve("C", {"t^6", "-t^4", "t^5", "1/2*t^8-1/3*t^12"})},
         GeometricRegime::kKernelNotLine},
        {"W8^2b", "[theta3 + c1*theta4 + c2*theta5]", 2, 4, fin(0), fin(6), std::nullopt,
         coords({0, 0, 1, 1, 1, 0, 0, 0}),
         "dx1^dx2 + x3*dx2^dx3 + x2*dx2^dx3 + dx3^dx4 + dx5^dx6",
         {curve("C", {"t^6", "t^5", "-t^9+1/2*t^10", "-t^4"})},
         GeometricRegime::kKernelIsLine},
        {"W8^3", "[theta4 + c1*theta5 + c2*theta6]", 3, 5, fin(1), fin(9), std::nullopt,
         coords({0, 0, 0, 1, 1, 1, 0, 0}),
         "x3*dx2^dx3 + x2*dx2^dx3 + x1*dx2^dx3 + x2*dx1^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {curve("C", {"t^6", "0", "t^5", "0", "-t^4", "t^9-1/2*t^10-t^11"})},
         GeometricRegime::kZeroOnW},
        {"W8^4", "[±theta5 + c1*theta6 + c2*theta7]", 4, 6, fin(1), fin(10), std::nullopt,
         coords({0, 0, 0, 0, 1, 1, 1, 0}),
         "x2*dx2^dx3 + x1*dx2^dx3 + x2*dx1^dx3 + x3^2*dx2^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {curve("C", {"t^6", "0", "t^5", "0", "-t^4", "-t^10-t^11-t^13"})},
         GeometricRegime::kZeroOnW},
        {"W8^5", "[theta6 + c*theta7]", 5, 6, fin(1), fin(11), std::nullopt,
         coords({0, 0, 0, 0, 0, 1, 1, 0}),
         "x1*dx2^dx3 + x2*dx1^dx3 + x3^2*dx2^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {curve("C", {"t^6", "0", "t^5", "0", "-t^4", "-t^11-t^13"})},
         GeometricRegime::kZeroOnW},
        {"W8^6", "[theta7 + c*theta8]", 6, 7, fin(2), fin(13), std::nullopt,
         coords({0, 0, 0, 0, 0, 0, 1, 1}),
         "x3^2*dx2^dx3 + x2^2*dx2^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {curve("C", {"t^6", "0", "t^5", "0", "-t^4", "-t^13-1/3*t^15"})},
         GeometricRegime::kZeroOnW},
        {"W8^7", "[theta8]", 7, 7, fin(2), fin(15), std::nullopt,
         coords({0, 0, 0, 0, 0, 0, 0, 1}),
         "x2^2*dx2^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {curve("C", {"t^6", "0", "t^5", "0", "-t^4", "-t^15"})},
         GeometricRegime::kZeroOnW},
        {"W8^8", "[0]", 8, 8, ExtInt::inf(), ExtInt::inf(), std::nullopt,
         coords({0, 0, 0, 0, 0, 0, 0, 0}),
         "dx1^dx4 + dx2^dx5 + dx3^dx6",
         {curve("C", {"t^6", "0", "t^5", "0", "-t^4", "0"})},
         GeometricRegime::kLagrangianContained},
    });
    return bg;
}

BuiltinGerm make_w9() {
    BuiltinGerm bg;
    bg.name = "W9";
    bg.germ = parse_germ_definition(kW9Definition, "builtin:W9");
    const auto& vars = bg.germ.variables;
    bg.closed_reps = reps(vars, {{"theta1", "dx2^dx3"},
                                 {"theta2", "dx1^dx3"},
                                 {"theta3", "dx1^dx2"},
                                 {"theta4", "x3*dx2^dx3"},
                                 {"theta5", "x3*dx1^dx3"},
                                 {"theta6", "x1*dx2^dx3 + x2*dx1^dx3"},
                                 {"theta7", "x3^2*dx2^dx3"},
                                 {"theta8", "x3^2*dx1^dx3"},
                                 {"theta9", "x3^3*dx2^dx3"}});
    bg.all_reps = reps(vars, {{"theta1", "dx2^dx3"},
                              {"theta2", "dx1^dx3"},
                              {"theta3", "dx1^dx2"},
                              {"theta4", "x3*dx2^dx3"},
                              {"theta5", "x3*dx1^dx3"},
                              {"sigma1", "x1*dx2^dx3"},
                              {"sigma2", "x2*dx1^dx3"},
                              {"theta7", "x3^2*dx2^dx3"},
                              {"theta8", "x3^2*dx1^dx3"},
                              {"theta9", "x3^3*dx2^dx3"}});
    bg.ruleset_text = kW9Ruleset;

    auto c1_line = curve("C1", {"0", "0", "0", "0", "t", "0"});
    bg.classes = build_classes({
        {"W9^0", "[theta1 + c1*theta2 + c2*theta3]", 0, 2, fin(0), fin(4), fin(4),
         coords({1, 1, 1, 0, 0, 0, 0, 0, 0}),
         "dx2^dx3 + dx1^dx3 + dx1^dx2 + dx1^dx4 + dx5^dx6",
         {curve("C1", {"0", "t", "0", "t"}),
          curve("C2", {"t^5", "-t^3-t^4", "-t^4", "-t^3"})},
         GeometricRegime::kNotIsotropic},
        {"W9^1", "[±theta2 + c1*theta3 + c2*theta4]", 1, 3, fin(0), fin(5), fin(5),
         coords({0, 1, 1, 1, 0, 0, 0, 0, 0}),
         "dx1^dx3 + dx1^dx2 + x3*dx2^dx3 + dx2^dx4 + dx5^dx6",
         {curve("C1", {"0", "t", "0", "1/2*t^2"}),
          curve("C2", {"t^5", "-t^3", "-t^4", "-t^5+1/2*t^6"})},
         GeometricRegime::kKernelNotLine},
        {"W9^2", "[theta3 + c1*theta4 + c2*theta5]", 2, 4, fin(0), fin(5), fin(5),
         coords({0, 0, 1, 1, 1, 0, 0, 0, 0}),
         "dx1^dx2 + x3*dx2^dx3 + x3*dx1^dx3 + dx3^dx4 + dx5^dx6",
         {curve("C1", {"0", "0", "t", "0"}),
          curve("C2", {"t^5", "-t^4", "-t^3", "-t^7+t^8"})},
         GeometricRegime::kKernelIsLine},
        {"W9^3", "[±theta4 + c1*theta5 + c2*theta6]", 3, 5, fin(1), fin(7), fin(7),
         coords({0, 0, 0, 1, 1, 1, 0, 0, 0}),
         "x3*dx2^dx3 + x3*dx1^dx3 + x1*dx2^dx3 + x2*dx1^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {c1_line, curve("C2", {"t^5", "0", "-t^4", "0", "t^3", "-t^7+t^8+t^9"})},
         GeometricRegime::kZeroOnW},
        {"W9^4", "[theta5 + c1*theta6 + c2*theta7]", 4, 6, fin(1), fin(8), fin(8),
         coords({0, 0, 0, 0, 1, 1, 1, 0, 0}),
         "x3*dx1^dx3 + x1*dx2^dx3 + x2*dx1^dx3 + x3^2*dx2^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {c1_line, curve("C2", {"t^5", "0", "-t^4", "0", "t^3", "t^8+t^9+t^10"})},
         GeometricRegime::kZeroOnW},
        {"W9^5", "[±theta6 + c1*theta7 + c2*theta8]", 5, 7, fin(1), fin(9), ExtInt::inf(),
         coords({0, 0, 0, 0, 0, 1, 1, 1, 0}),
         "x1*dx2^dx3 + x2*dx1^dx3 + x3^2*dx2^dx3 + x3^2*dx1^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {c1_line, curve("C2", {"t^5", "0", "-t^4", "0", "t^3", "t^9+t^10-t^11"})},
         GeometricRegime::kZeroOnW},
        {"W9^6", "[theta7 + c*theta8]", 6, 7, fin(2), fin(10), ExtInt::inf(),
         coords({0, 0, 0, 0, 0, 0, 1, 1, 0}),
         "x3^2*dx2^dx3 + x3^2*dx1^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {c1_line, curve("C2", {"t^5", "0", "-t^4", "0", "t^3", "t^10-t^11"})},
         GeometricRegime::kZeroOnW},
        {"W9^7", "[±theta8 + c*theta9]", 7, 8, fin(2), fin(11), ExtInt::inf(),
         coords({0, 0, 0, 0, 0, 0, 0, 1, 1}),
         "x3^2*dx1^dx3 + x3^3*dx2^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {c1_line, curve("C2", {"t^5", "0", "-t^4", "0", "t^3", "-t^11-t^13"})},
         GeometricRegime::kZeroOnW},
        {"W9^8", "[±theta9]", 8, 8, fin(3), fin(13), ExtInt::inf(),
         coords({0, 0, 0, 0, 0, 0, 0, 0, 1}),
         "x3^3*dx2^dx3 + dx1^dx4 + dx2^dx5 + dx3^dx6",
         {c1_line, curve("C2", {"t^5", "0", "-t^4", "0", "t^3", "-t^13"})},
         GeometricRegime::kZeroOnW},
        {"W9^9", "[0]", 9, 9, ExtInt::inf(), ExtInt::inf(), ExtInt::inf(),
         coords({0, 0, 0, 0, 0, 0, 0, 0, 0}),
         "dx1^dx4 + dx2^dx5 + dx3^dx6",
         {c1_line, curve("C2", {"t^5", "0", "-t^4", "0", "t^3", "0"})},
         GeometricRegime::kLagrangianContained},
    });
    return bg;
}

std::string canonical_name(const std::string& name) {
    std::string up;
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return up;
}

const std::map<std::string, BuiltinGerm>& catalogue() {
    static const std::map<std::string, BuiltinGerm> cat = [] {
        std::map<std::string, BuiltinGerm> m;
        m.emplace("W8", make_w8());
        m.emplace("W9", make_w9());
        return m;
    }();
    return cat;
}

}  // namespace

const BuiltinClass* BuiltinGerm::find_class(const std::string& label) const {
    for (const auto& c : classes)
        if (c.label == label) return &c;
    return nullptr;
}

std::vector<std::string> builtin_names() {
    std::vector<std::string> names;
    for (const auto& [name, bg] : catalogue()) names.push_back(name);
    return names;
}

bool is_builtin(const std::string& name) {
    return catalogue().count(canonical_name(name)) > 0;
}

const BuiltinGerm& builtin_germ(const std::string& name) {
    auto it = catalogue().find(canonical_name(name));
    if (it == catalogue().end())
        throw InputError("unknown built-in germ '" + name + "' (have: W8, W9)");
    return it->second;
}

std::shared_ptr<const RestrictionSpace> builtin_closed_space(const std::string& name) {
    static std::map<std::string, std::shared_ptr<const RestrictionSpace>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::string key = canonical_name(name);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const BuiltinGerm& bg = builtin_germ(key);
    auto space = std::make_shared<RestrictionSpace>(bg.germ, 2, true, &bg.closed_reps);
    cache.emplace(key, space);
    return space;
}

const ClassificationRuleset& builtin_ruleset(const std::string& name) {
    static std::map<std::string, ClassificationRuleset> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::string key = canonical_name(name);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const BuiltinGerm& bg = builtin_germ(key);
    auto space = builtin_closed_space(key);
    ClassificationRuleset rs = parse_ruleset(bg.ruleset_text, "builtin:" + key);
    TangentFieldFamily fam = default_tangent_family(*space);
    rs = verify_ruleset(*space, fam, rs);
    auto [pos, inserted] = cache.emplace(key, std::move(rs));
    return pos->second;
}

GeometricOptions builtin_geometric_options(const std::string& name) {
    std::string key = canonical_name(name);
    const BuiltinGerm& bg = builtin_germ(key);
    GeometricOptions opt;
    if (bg.germ.branches.size() == 1) return opt;  // single-branch default suffices
    opt.tangency_hook = [key, &bg](const RestrictionClass& core) -> std::optional<ExtInt> {
        NormalFormReport rep = classify(core, builtin_ruleset(key));
        const BuiltinClass* cls = bg.find_class(rep.class_label);
        if (!cls) return std::nullopt;
        // The catalogued curves admit witnesses of low degree, so a small cap
        // keeps the search cheap without changing any order.
        return lagrangian_tangency_best(cls->curves, 8).order;
    };
    return opt;
}

}  // namespace algrest

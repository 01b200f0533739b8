#include "algrest/restriction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "algrest/errors.hpp"

namespace algrest {

namespace {

// Ascending exponent tuples compared last variable first; used to order
// monomials of equal quasi-degree in the default family.
bool reverse_lex_less(const Monomial& a, const Monomial& b) {
    size_t n = std::max(a.e.size(), b.e.size());
    for (size_t r = 0; r < n; ++r) {
        size_t i = n - 1 - r;
        long ea = i < a.e.size() ? a.e[i] : 0;
        long eb = i < b.e.size() ? b.e[i] : 0;
        if (ea != eb) return ea < eb;
    }
    return false;
}

std::vector<Rat> mat_vec(const QMat& m, const std::vector<Rat>& v) {
    std::vector<Rat> out(m.nrows, Rat(0));
    for (size_t i = 0; i < m.nrows; ++i)
        for (size_t j = 0; j < m.ncols; ++j)
            if (m.a[i][j] != 0 && v[j] != 0) out[i] += m.a[i][j] * v[j];
    return out;
}

// tau^m / m! M^m b summed until the nilpotent power dies out.
std::vector<Rat> apply_unipotent(const QMat& m, const Rat& tau, const std::vector<Rat>& b) {
    std::vector<Rat> acc = b;
    std::vector<Rat> pw = b;
    Rat factor(1);
    for (size_t step = 1; step <= m.nrows + 1; ++step) {
        pw = mat_vec(m, pw);
        if (is_zero_vector(pw)) break;
        factor *= tau;
        factor /= Rat(static_cast<long>(step));
        for (size_t i = 0; i < pw.size(); ++i)
            if (pw[i] != 0) acc[i] += factor * pw[i];
        if (step == m.nrows + 1)
            throw VerifyError("tangent-field action is not nilpotent; cannot exponentiate");
    }
    return acc;
}

std::string modulus_name(size_t pos, size_t total) {
    if (total == 1) return "c";
    return "c" + std::to_string(pos + 1);
}

}  // namespace

TangentFieldFamily default_tangent_family(const RestrictionSpace& s) {
    const GermDefinition& g = s.germ();
    std::vector<long> degrees;
    for (const auto& e : s.basis()) degrees.push_back(e.delta);

    std::vector<long> qdegs{0};
    for (long di : degrees)
        for (long dj : degrees)
            if (di - dj > 0) qdegs.push_back(di - dj);
    std::sort(qdegs.begin(), qdegs.end());
    qdegs.erase(std::unique(qdegs.begin(), qdegs.end()), qdegs.end());

    VectorField e = euler_field(g.weights);
    TangentFieldFamily fam{g, {}};
    for (long q : qdegs) {
        std::vector<Monomial> ms = monomial_basis(q, g.weights);
        std::sort(ms.begin(), ms.end(), reverse_lex_less);
        for (const Monomial& m : ms) {
            VectorField f = e;
            Polynomial mp = Polynomial::term(g.dim(), m, Rat(1));
            for (auto& comp : f.components) comp = comp * mp;
            TangentFieldGenerator gen;
            gen.label = "X" + std::to_string(fam.generators.size());
            gen.factor = m;
            gen.field = f;
            gen.qdeg = q;
            fam.generators.push_back(std::move(gen));
        }
    }
    return fam;
}

bool in_generated_ideal(const GermDefinition& g, const Polynomial& p) {
    if (p.is_zero()) return true;
    // Split into quasi-homogeneous pieces and decide each one separately.
    std::map<long, Polynomial> pieces;
    for (const auto& [m, c] : p.terms) {
        long q = quasi_degree(m, g.weights);
        auto it = pieces.find(q);
        if (it == pieces.end()) it = pieces.emplace(q, Polynomial::zero(p.nvars)).first;
        it->second.add_term(m, c);
    }
    for (const auto& [q, piece] : pieces) {
        std::map<Monomial, size_t> pos;
        std::vector<Monomial> qmons = monomial_basis(q, g.weights);
        for (size_t i = 0; i < qmons.size(); ++i) pos[qmons[i]] = i;
        if (qmons.empty()) return false;

        // Columns: multiples m * g_j with qdeg(m) = q - deg(g_j).
        std::vector<std::vector<Rat>> cols;
        for (const Polynomial& gen : g.generators) {
            long dg = *gen.homogeneous_quasi_degree(g.weights);
            if (dg > q) continue;
            for (const Monomial& m : monomial_basis(q - dg, g.weights)) {
                Polynomial prod = Polynomial::term(g.dim(), m, Rat(1)) * gen;
                std::vector<Rat> col(qmons.size(), Rat(0));
                for (const auto& [mm, c] : prod.terms) col[pos.at(mm)] = c;
                cols.push_back(std::move(col));
            }
        }
        std::vector<Rat> rhs(qmons.size(), Rat(0));
        for (const auto& [mm, c] : piece.terms) rhs[pos.at(mm)] = c;
        if (cols.empty()) return false;
        QMat m(qmons.size(), cols.size());
        for (size_t i = 0; i < qmons.size(); ++i)
            for (size_t j = 0; j < cols.size(); ++j) m.a[i][j] = cols[j][i];
        if (!solve(m, rhs)) return false;
    }
    return true;
}

bool is_tangent_field(const GermDefinition& g, const VectorField& x, Polynomial* witness,
                      size_t* witness_index) {
    if (x.dim() != g.dim()) throw InputError("vector field dimension mismatch");
    for (size_t i = 0; i < g.generators.size(); ++i) {
        Polynomial lg = Polynomial::zero(g.dim());
        for (int j = 0; j < g.dim(); ++j)
            lg = lg + x.components[j] * g.generators[i].partial_derivative(j);
        if (!in_generated_ideal(g, lg)) {
            if (witness) *witness = lg;
            if (witness_index) *witness_index = i;
            return false;
        }
    }
    return true;
}

VectorField hamiltonian_tangent_field(const GermDefinition& g) {
    if (g.dim() != 3 || g.generators.size() != 2)
        throw InputError("the gradient cross product needs 3 variables and 2 equations");
    const Polynomial& g1 = g.generators[0];
    const Polynomial& g2 = g.generators[1];
    auto d = [](const Polynomial& p, int i) { return p.partial_derivative(i); };
    VectorField h = VectorField::zero(3);
    h.components[0] = d(g1, 1) * d(g2, 2) - d(g1, 2) * d(g2, 1);
    h.components[1] = d(g1, 2) * d(g2, 0) - d(g1, 0) * d(g2, 2);
    h.components[2] = d(g1, 0) * d(g2, 1) - d(g1, 1) * d(g2, 0);
    return h;
}

ActionMatrix action_matrix(const RestrictionSpace& s, const VectorField& x,
                           const std::string& label) {
    Polynomial bad;
    size_t bad_i = 0;
    if (!is_tangent_field(s.germ(), x, &bad, &bad_i)) {
        std::ostringstream os;
        os << "field is not tangent to " << s.germ().name << ": derivative of generator "
           << (bad_i + 1) << " equals " << polynomial_str(bad, s.germ().variables)
           << ", which is outside the generated ideal";
        throw InputError(os.str());
    }
    size_t n = s.dimension();
    ActionMatrix am;
    am.field_label = label;
    am.m = QMat(n, n);
    long qd = 0;
    bool qd_set = false;
    for (size_t j = 0; j < n; ++j) {
        DiffForm lie = lie_derivative(x, s.basis()[j].rep);
        std::vector<Rat> col = s.reduce(lie);
        for (size_t i = 0; i < n; ++i) am.m.a[i][j] = col[i];
        if (!qd_set) {
            auto q = lie.homogeneous_quasi_degree(s.germ().weights);
            if (q && !lie.is_zero()) {
                qd = *q - s.basis()[j].delta;
                qd_set = true;
            }
        }
    }
    am.field_qdeg = qd;
    return am;
}

ActionMatrix action_matrix(const RestrictionSpace& s, const TangentFieldGenerator& gen) {
    ActionMatrix am = action_matrix(s, gen.field, gen.label);
    am.field_qdeg = gen.qdeg;
    return am;
}

QMat orbit_tangent_space(const RestrictionClass& a, const TangentFieldFamily& fam) {
    const RestrictionSpace& s = *a.space;
    if (a.coords.size() != s.dimension()) throw InputError("coordinate vector has wrong length");
    QMat rows(0, s.dimension());
    for (const auto& gen : fam.generators) {
        ActionMatrix am = action_matrix(s, gen);
        rows.append_row(mat_vec(am.m, a.coords));
    }
    return rows;
}

size_t symplectic_multiplicity(const RestrictionClass& a, const TangentFieldFamily& fam) {
    QMat t = orbit_tangent_space(a, fam);
    return a.space->dimension() - rank(t);
}

ExtInt index_of_isotropy(const RestrictionClass& a) {
    const RestrictionSpace& s = *a.space;
    if (a.coords.size() != s.dimension()) throw InputError("coordinate vector has wrong length");
    if (a.is_zero()) return ExtInt::inf();

    // Collect the nonzero graded pieces of the class.
    std::map<long, DiffForm> pieces;
    for (size_t j = 0; j < s.dimension(); ++j) {
        if (a.coords[j] == 0) continue;
        const auto& el = s.basis()[j];
        auto it = pieces.find(el.delta);
        DiffForm scaled = el.rep.scaled(a.coords[j]);
        if (it == pieces.end())
            pieces.emplace(el.delta, scaled);
        else
            it->second = it->second + scaled;
    }

    ExtInt best = ExtInt::inf();
    for (const auto& [delta, piece] : pieces) {
        std::vector<DiffForm> layer = monomial_form_basis(s.germ(), 2, delta);
        std::map<std::pair<IdxTuple, Monomial>, size_t> pos;
        std::vector<long> tdeg(layer.size(), 0);
        for (size_t i = 0; i < layer.size(); ++i) {
            const auto& [idx, poly] = *layer[i].terms.begin();
            const auto& [mono, c] = *poly.terms.begin();
            pos[{idx, mono}] = i;
            tdeg[i] = mono.total_degree();
        }
        auto to_coords = [&](const DiffForm& f) {
            std::vector<Rat> v(layer.size(), Rat(0));
            for (const auto& [idx, poly] : f.terms)
                for (const auto& [mono, c] : poly.terms) v[pos.at({idx, mono})] = c;
            return v;
        };

        std::vector<Rat> target = to_coords(piece);
        std::vector<std::vector<Rat>> zrows;
        for (const DiffForm& z : s.closed_zero_layer(delta)) zrows.push_back(to_coords(z));

        long maxdeg = 0;
        for (long d : tdeg) maxdeg = std::max(maxdeg, d);

        // Largest k with some coset element vanishing to coefficient order
        // >= k: positions of total degree < k must be cancelled exactly.
        long k = 0;
        for (long cand = 1; cand <= maxdeg + 1; ++cand) {
            std::vector<size_t> constrained;
            for (size_t i = 0; i < layer.size(); ++i)
                if (tdeg[i] < cand) constrained.push_back(i);
            QMat m(constrained.size(), zrows.size());
            std::vector<Rat> rhs(constrained.size());
            for (size_t r = 0; r < constrained.size(); ++r) {
                for (size_t c = 0; c < zrows.size(); ++c) m.a[r][c] = zrows[c][constrained[r]];
                rhs[r] = -target[constrained[r]];
            }
            if (solve(m, rhs))
                k = cand;
            else
                break;
            if (cand == maxdeg + 1)
                throw VerifyError(
                    "nonzero restriction class admits a representative vanishing beyond the "
                    "layer degree; graded piece inconsistent");
        }
        ExtInt cur = ExtInt::of(k);
        if (cur < best) best = cur;
    }
    return best;
}

std::vector<size_t> ClassificationRule::guard_zeros() const {
    std::vector<size_t> z;
    for (const auto& lit : guard)
        if (!lit.nonzero) z.push_back(lit.index);
    std::sort(z.begin(), z.end());
    return z;
}

bool ClassificationRule::matches(const std::vector<Rat>& coords) const {
    for (const auto& lit : guard) {
        if (lit.index == 0 || lit.index > coords.size())
            throw InputError("guard refers to coordinate " + std::to_string(lit.index) +
                             " outside the basis");
        bool nz = coords[lit.index - 1] != 0;
        if (nz != lit.nonzero) return false;
    }
    return true;
}

std::vector<size_t> ClassificationRuleset::moduli_of(const ClassificationRule& r,
                                                     size_t dim) const {
    std::vector<bool> taken(dim + 1, false);
    for (size_t z : r.guard_zeros()) taken[z] = true;
    if (r.pivot) taken[r.pivot] = true;
    for (size_t k : r.eliminate) taken[k] = true;
    std::vector<size_t> out;
    for (size_t j = 1; j <= dim; ++j)
        if (!taken[j]) out.push_back(j);
    return out;
}

namespace {

GuardLiteral parse_guard_literal(const std::string& tok, const std::string& where) {
    GuardLiteral lit;
    size_t eq = tok.find("!=");
    size_t len = 2;
    lit.nonzero = true;
    if (eq == std::string::npos) {
        eq = tok.find('=');
        len = 1;
        lit.nonzero = false;
    }
    if (eq == std::string::npos || tok.size() < 2 || tok[0] != 'c')
        throw ParseError(where + ": bad guard literal '" + tok + "'");
    std::string idx = tok.substr(1, eq - 1);
    std::string rhs = tok.substr(eq + len);
    if (rhs != "0") throw ParseError(where + ": guard literal must compare with 0: '" + tok + "'");
    try {
        lit.index = std::stoul(idx);
    } catch (const std::exception&) {
        throw ParseError(where + ": bad coordinate index in '" + tok + "'");
    }
    if (lit.index == 0) throw ParseError(where + ": coordinate indices are 1-based");
    return lit;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

ClassificationRuleset parse_ruleset(const std::string& text, const std::string& source) {
    ClassificationRuleset rs;
    rs.source = source;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = source + ":" + std::to_string(lineno);
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head != "rule") throw ParseError(where + ": expected 'rule', got '" + head + "'");
        ClassificationRule rule;
        bool saw_guard = false, saw_class = false, saw_pivot = false, saw_elim = false,
             saw_sign = false;
        std::string tok;
        while (ls >> tok) {
            size_t eq = tok.find('=');
            if (eq == std::string::npos) throw ParseError(where + ": expected key=value, got '" + tok + "'");
            std::string key = tok.substr(0, eq);
            std::string val = tok.substr(eq + 1);
            if (key == "guard") {
                saw_guard = true;
                if (val.empty()) throw ParseError(where + ": empty guard");
                if (val != "true")
                    for (const std::string& part : split_on(val, '&'))
                        rule.guard.push_back(parse_guard_literal(part, where));
            } else if (key == "class") {
                saw_class = true;
                if (val.empty()) throw ParseError(where + ": empty class label");
                rule.class_label = val;
            } else if (key == "pivot") {
                saw_pivot = true;
                try {
                    rule.pivot = std::stoul(val);
                } catch (const std::exception&) {
                    throw ParseError(where + ": bad pivot '" + val + "'");
                }
            } else if (key == "eliminate") {
                saw_elim = true;
                if (!val.empty())
                    for (const std::string& part : split_on(val, ',')) {
                        try {
                            rule.eliminate.push_back(std::stoul(part));
                        } catch (const std::exception&) {
                            throw ParseError(where + ": bad eliminate index '" + part + "'");
                        }
                    }
            } else if (key == "sign_sensitive") {
                saw_sign = true;
                if (val == "true")
                    rule.sign_sensitive = true;
                else if (val == "false")
                    rule.sign_sensitive = false;
                else
                    throw ParseError(where + ": sign_sensitive must be true or false");
            } else {
                throw ParseError(where + ": unknown key '" + key + "'");
            }
        }
        if (!saw_guard || !saw_class || !saw_pivot || !saw_elim || !saw_sign)
            throw ParseError(where + ": rule needs guard=, class=, pivot=, eliminate=, sign_sensitive=");
        std::sort(rule.eliminate.begin(), rule.eliminate.end());
        if (std::adjacent_find(rule.eliminate.begin(), rule.eliminate.end()) !=
            rule.eliminate.end())
            throw ParseError(where + ": duplicate eliminate index");
        rs.rules.push_back(std::move(rule));
    }
    if (rs.rules.empty()) throw ParseError(source + ": no rules found");
    return rs;
}

ClassificationRuleset load_ruleset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open ruleset file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ruleset(buf.str(), path);
}

std::string render_ruleset(const ClassificationRuleset& rs) {
    std::ostringstream os;
    for (const auto& r : rs.rules) {
        os << "rule guard=";
        if (r.guard.empty()) {
            os << "true";
        } else {
            for (size_t i = 0; i < r.guard.size(); ++i) {
                if (i) os << "&";
                os << "c" << r.guard[i].index << (r.guard[i].nonzero ? "!=" : "=") << "0";
            }
        }
        os << " class=" << r.class_label << " pivot=" << r.pivot << " eliminate=";
        for (size_t i = 0; i < r.eliminate.size(); ++i) {
            if (i) os << ",";
            os << r.eliminate[i];
        }
        os << " sign_sensitive=" << (r.sign_sensitive ? "true" : "false") << "\n";
    }
    return os.str();
}

ClassificationRuleset generic_ruleset(const RestrictionSpace& s, const TangentFieldFamily& fam) {
    size_t dim = s.dimension();
    std::vector<ActionMatrix> mats;
    for (const auto& gen : fam.generators)
        if (gen.qdeg > 0) mats.push_back(action_matrix(s, gen));

    ClassificationRuleset rs;
    rs.source = s.germ().name;
    rs.verified = false;
    for (size_t piv = 1; piv <= dim; ++piv) {
        ClassificationRule r;
        for (size_t j = 1; j < piv; ++j) r.guard.push_back({j, false});
        r.guard.push_back({piv, true});
        r.class_label = s.germ().name + "#" + std::to_string(piv);
        r.pivot = piv;
        r.sign_sensitive = s.basis()[piv - 1].delta % 2 == 0;
        for (size_t k = piv + 1; k <= dim; ++k)
            for (const auto& am : mats)
                if (am.m.a[k - 1][piv - 1] != 0) {
                    r.eliminate.push_back(k);
                    break;
                }
        rs.rules.push_back(std::move(r));
    }
    ClassificationRule zero;
    for (size_t j = 1; j <= dim; ++j) zero.guard.push_back({j, false});
    zero.class_label = s.germ().name + "#0";
    zero.pivot = 0;
    rs.rules.push_back(std::move(zero));
    return rs;
}

ClassificationRuleset verify_ruleset(const RestrictionSpace& s, const TangentFieldFamily& fam,
                                     const ClassificationRuleset& rs) {
    size_t dim = s.dimension();
    std::vector<ActionMatrix> mats;
    for (const auto& gen : fam.generators)
        if (gen.qdeg > 0) mats.push_back(action_matrix(s, gen));

    bool has_terminal = false;
    for (const auto& r : rs.rules) {
        auto fail = [&](const std::string& msg) {
            throw VerifyError("ruleset " + rs.source + ", class " + r.class_label + ": " + msg);
        };
        for (const auto& lit : r.guard)
            if (lit.index == 0 || lit.index > dim) fail("guard index out of range");
        if (r.pivot > dim) fail("pivot out of range");
        if (r.pivot == 0) {
            if (!r.eliminate.empty() || r.sign_sensitive)
                fail("terminal rule cannot eliminate or carry a sign");
            if (r.guard_zeros().size() == dim) has_terminal = true;
            continue;
        }
        bool pivot_nonzero = false;
        for (const auto& lit : r.guard)
            if (lit.index == r.pivot && lit.nonzero) pivot_nonzero = true;
        if (!pivot_nonzero) fail("guard does not pin the pivot nonzero");
        bool even = s.basis()[r.pivot - 1].delta % 2 == 0;
        if (r.sign_sensitive != even)
            fail("sign flag disagrees with the parity of the pivot quasi-degree");

        std::vector<size_t> sources{r.pivot};
        for (const auto& lit : r.guard)
            if (lit.nonzero && lit.index != r.pivot) sources.push_back(lit.index);
        for (size_t k : r.eliminate) {
            if (k == 0 || k > dim || k == r.pivot) fail("eliminate index out of range");
            bool witnessed = false;
            for (const auto& am : mats)
                for (size_t src : sources)
                    if (am.m.a[k - 1][src - 1] != 0) witnessed = true;
            if (!witnessed)
                fail("no action entry reaches eliminated index " + std::to_string(k) +
                     " from a guard-nonzero source");
        }
    }
    if (!has_terminal) throw VerifyError("ruleset " + rs.source + ": missing all-zero terminal rule");
    ClassificationRuleset out = rs;
    out.verified = true;
    return out;
}

double SymbolicScaled::approx() const {
    return rat_double(coeff) * std::pow(rat_double(base), rat_double(exponent));
}

std::string SymbolicScaled::str() const {
    if (coeff == 0 || base == 1 || exponent == 0) return rat_str(coeff);
    std::string out;
    if (coeff == -1)
        out = "-";
    else if (coeff != 1)
        out = rat_str(coeff) + "*";
    return out + rat_str(base) + "^(" + rat_str(exponent) + ")";
}

NormalFormReport classify(const RestrictionClass& a, const ClassificationRuleset& rules) {
    return classify(a, rules, default_tangent_family(*a.space));
}

NormalFormReport classify(const RestrictionClass& a, const ClassificationRuleset& rules,
                          const TangentFieldFamily& fam) {
    const RestrictionSpace& s = *a.space;
    size_t dim = s.dimension();
    if (a.coords.size() != dim) throw InputError("coordinate vector has wrong length");

    const ClassificationRule* rule = nullptr;
    for (const auto& r : rules.rules)
        if (r.matches(a.coords)) {
            rule = &r;
            break;
        }
    if (!rule)
        throw InputError("no classification guard matches the coordinate vector (ruleset " +
                         rules.source + ")");

    NormalFormReport rep;
    rep.class_label = rule->class_label;
    rep.ruleset_verified = rules.verified;
    rep.codimension = rule->guard_zeros().size();
    rep.symplectic_mult = symplectic_multiplicity(a, fam);
    rep.isotropy = index_of_isotropy(a);
    rep.residual = {a.space, a.coords};

    if (rule->pivot == 0) {
        rep.sign = 0;
        rep.normal_form = "[0]";
        return rep;
    }

    // Unipotent elimination, increasing index order; cache action matrices.
    std::vector<Rat>& b = rep.residual.coords;
    std::vector<std::optional<ActionMatrix>> cache(fam.generators.size());
    std::vector<size_t> cleared;
    for (size_t k : rule->eliminate) {
        if (b[k - 1] == 0) {
            cleared.push_back(k);
            continue;
        }
        bool done = false;
        for (size_t gi = 0; gi < fam.generators.size() && !done; ++gi) {
            if (fam.generators[gi].qdeg <= 0) continue;
            if (!cache[gi]) cache[gi] = action_matrix(s, fam.generators[gi]);
            const QMat& m = cache[gi]->m;
            std::vector<Rat> mb = mat_vec(m, b);
            if (mb[k - 1] == 0) continue;
            // The step must be affine in the parameter at index k.
            std::vector<Rat> pw = mb;
            bool affine = true;
            for (size_t step = 2; step <= dim + 1 && affine; ++step) {
                pw = mat_vec(m, pw);
                if (is_zero_vector(pw)) break;
                if (pw[k - 1] != 0) affine = false;
            }
            if (!affine) continue;
            Rat tau = -b[k - 1] / mb[k - 1];
            std::vector<Rat> nb = apply_unipotent(m, tau, b);
            // A candidate that disturbs already-cleared indices is not usable
            // for this step; some later generator may still do the job.
            bool clean = nb[k - 1] == 0;
            for (size_t c : cleared)
                if (nb[c - 1] != 0) clean = false;
            if (!clean) continue;
            b = std::move(nb);
            rep.trace.push_back({fam.generators[gi].label, tau, k});
            done = true;
        }
        if (!done)
            throw VerifyError("elimination witness missing for index " + std::to_string(k) +
                              " (ruleset " + rules.source + ", class " + rule->class_label + ")");
        cleared.push_back(k);
    }

    // Weighted scaling: the pivot coefficient becomes 1 (odd quasi-degree) or
    // +-1 (even quasi-degree, sign survives).
    size_t piv = rule->pivot;
    Rat cs = b[piv - 1];
    if (cs == 0)
        throw InputError("pivot coordinate " + std::to_string(piv) +
                         " is zero; guard does not select a pivot for this vector");
    long ds = s.basis()[piv - 1].delta;
    bool odd = ds % 2 != 0;
    Rat base = cs < 0 ? Rat(-cs) : cs;
    int sgn = cs < 0 ? -1 : 1;
    rep.sign = rule->sign_sensitive ? sgn : 0;

    std::vector<size_t> moduli = rules.moduli_of(*rule, dim);
    for (size_t p = 0; p < moduli.size(); ++p) {
        size_t j = moduli[p];
        long dj = s.basis()[j - 1].delta;
        SymbolicScaled v;
        v.coeff = b[j - 1];
        if (odd && sgn < 0 && dj % 2 != 0) v.coeff = -v.coeff;
        v.base = base;
        v.exponent = rat(-dj, ds);
        if (v.base == 1 || v.coeff == 0) v.exponent = Rat(0);
        rep.moduli.push_back({modulus_name(p, moduli.size()), j, v});
    }

    std::ostringstream nf;
    nf << "[";
    std::vector<std::pair<size_t, std::string>> parts;
    for (size_t p = 0; p < moduli.size(); ++p)
        parts.push_back({moduli[p], rep.moduli[p].name + "*" + s.basis()[moduli[p] - 1].label});
    std::string pv = s.basis()[piv - 1].label;
    if (rule->sign_sensitive && sgn < 0) pv = "-" + pv;
    parts.push_back({piv, pv});
    std::sort(parts.begin(), parts.end());
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) nf << " + ";
        nf << parts[i].second;
    }
    nf << "]";
    rep.normal_form = nf.str();
    return rep;
}

ModuliCertificate moduli_certificate(const NormalFormReport& report,
                                     const TangentFieldFamily& fam) {
    ModuliCertificate cert;
    if (report.moduli.empty()) return cert;
    QMat t = orbit_tangent_space(report.residual, fam);
    size_t base_rank = rank(t);
    for (const auto& mod : report.moduli) {
        QMat with = t;
        std::vector<Rat> e(report.residual.coords.size(), Rat(0));
        e[mod.index - 1] = Rat(1);
        with.append_row(e);
        size_t r2 = rank(with);
        bool outside = r2 > base_rank;
        cert.checks.push_back({mod.index, base_rank, r2, outside});
        if (!outside) {
            cert.all_outside = false;
            throw VerifyError("modulus direction " + std::to_string(mod.index) +
                              " lies inside the orbit tangent space; parameter is not a modulus");
        }
    }
    return cert;
}

}  // namespace algrest

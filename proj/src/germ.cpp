#include "algrest/germ.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "algrest/expr.hpp"

namespace algrest {

void GermDefinition::validate() const {
    if (name.empty()) throw InputError("germ has no name");
    if (variables.empty()) throw InputError("germ '" + name + "' has no variables");
    if (weights.dim() != dim())
        throw InputError("germ '" + name + "': weight count differs from variable count");
    for (long w : weights.w)
        if (w < 1) throw InputError("germ '" + name + "': weights must be positive");
    for (size_t i = 0; i < variables.size(); ++i) {
        for (size_t j = 0; j < variables.size(); ++j) {
            if (variables[j] == "d" + variables[i])
                throw InputError("germ '" + name + "': variable '" + variables[j] +
                                 "' collides with the differential of '" + variables[i] + "'");
        }
    }
    if (generators.empty()) throw InputError("germ '" + name + "' has no generators");
    for (const Polynomial& g : generators) {
        if (g.is_zero()) throw InputError("germ '" + name + "': zero generator");
        if (!g.homogeneous_quasi_degree(weights))
            throw InputError("germ '" + name + "': generator '" +
                             polynomial_str(g, variables) + "' is not quasi-homogeneous");
    }
    if (branches.empty()) throw InputError("germ '" + name + "' has no branches");
    for (const BranchParam& b : branches) {
        if (b.dim() != dim())
            throw InputError("germ '" + name + "': branch '" + b.label +
                             "' has the wrong number of components");
        for (const Series& s : b.components) {
            if (s.coeff(0) != 0)
                throw InputError("germ '" + name + "': branch '" + b.label +
                                 "' does not pass through the origin");
        }
        for (const Polynomial& g : generators) {
            if (!substitute_branch(g, b).is_zero())
                throw InputError("germ '" + name + "': generator '" +
                                 polynomial_str(g, variables) +
                                 "' does not vanish on branch '" + b.label + "'");
        }
    }
    if (symplectic_dim < 2 || symplectic_dim % 2 != 0)
        throw InputError("germ '" + name + "': symplectic_dim must be a positive even number");
}

bool GermDefinition::same_definition(const GermDefinition& o) const {
    if (name != o.name || variables != o.variables || weights.w != o.weights.w ||
        symplectic_dim != o.symplectic_dim)
        return false;
    if (generators != o.generators) return false;
    if (branches.size() != o.branches.size()) return false;
    for (size_t i = 0; i < branches.size(); ++i) {
        if (branches[i].label != o.branches[i].label) return false;
        if (branches[i].components.size() != o.branches[i].components.size()) return false;
        for (size_t j = 0; j < branches[i].components.size(); ++j)
            if (!(branches[i].components[j] == o.branches[i].components[j])) return false;
    }
    return true;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// Split "(a, b, c)" on top-level commas.
std::vector<std::string> split_tuple(const std::string& s, const std::string& where) {
    size_t open = s.find('(');
    size_t close = s.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError(where + ": expected a parenthesized component tuple");
    std::string inner = s.substr(open + 1, close - open - 1);
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : inner) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Series polynomial_to_series(const Polynomial& p) {
    Series s;
    for (const auto& [m, v] : p.terms) s.add_term(m.e.empty() ? 0 : m.e[0], v);
    return s;
}

}  // namespace

GermDefinition parse_germ_definition(const std::string& text, const std::string& source_name) {
    GermDefinition g;
    std::vector<std::pair<int, std::string>> generator_lines;
    std::vector<std::pair<int, std::string>> branch_lines;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](int ln, const std::string& msg) -> void {
        throw ParseError(source_name + ":" + std::to_string(ln) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string stripped = line;
        while (!stripped.empty() && isspace(static_cast<unsigned char>(stripped.back())))
            stripped.pop_back();
        size_t first = stripped.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        stripped = stripped.substr(first);
        size_t sp = stripped.find_first_of(" \t");
        std::string key = sp == std::string::npos ? stripped : stripped.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : stripped.substr(sp + 1);
        if (key == "germ") {
            auto toks = split_ws(rest);
            if (toks.size() != 1) fail(lineno, "expected: germ <name>");
            g.name = toks[0];
        } else if (key == "variables") {
            g.variables = split_ws(rest);
            if (g.variables.empty()) fail(lineno, "expected at least one variable");
        } else if (key == "weights") {
            for (const std::string& t : split_ws(rest)) {
                try {
                    g.weights.w.push_back(std::stol(t));
                } catch (const std::exception&) {
                    fail(lineno, "bad weight '" + t + "'");
                }
            }
        } else if (key == "symplectic_dim") {
            auto toks = split_ws(rest);
            if (toks.size() != 1) fail(lineno, "expected: symplectic_dim <even number>");
            try {
                g.symplectic_dim = std::stoi(toks[0]);
            } catch (const std::exception&) {
                fail(lineno, "bad symplectic_dim '" + toks[0] + "'");
            }
        } else if (key == "generator") {
            generator_lines.emplace_back(lineno, rest);
        } else if (key == "branch") {
            branch_lines.emplace_back(lineno, rest);
        } else {
            fail(lineno, "unknown key '" + key + "'");
        }
    }
    if (g.variables.empty()) throw ParseError(source_name + ": missing 'variables' line");
    for (auto& [ln, src] : generator_lines) {
        try {
            g.generators.push_back(parse_polynomial(src, g.variables));
        } catch (const ParseError& e) {
            fail(ln, e.what());
        }
    }
    for (auto& [ln, src] : branch_lines) {
        size_t open = src.find('(');
        if (open == std::string::npos) fail(ln, "expected: branch <label> (<components>)");
        std::string label_part = src.substr(0, open);
        auto labels = split_ws(label_part);
        if (labels.size() != 1) fail(ln, "expected exactly one branch label");
        BranchParam b;
        b.label = labels[0];
        try {
            for (const std::string& comp : split_tuple(src, "branch " + b.label))
                b.components.push_back(polynomial_to_series(parse_polynomial(comp, {"t"})));
        } catch (const ParseError& e) {
            fail(ln, e.what());
        }
        g.branches.push_back(std::move(b));
    }
    try {
        g.validate();
    } catch (const InputError& e) {
        throw ParseError(source_name + ": " + e.what());
    }
    return g;
}

GermDefinition load_germ_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open germ file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_germ_definition(buf.str(), path);
}

std::string render_germ_definition(const GermDefinition& g) {
    std::ostringstream os;
    os << "germ " << g.name << "\n";
    os << "variables";
    for (const std::string& v : g.variables) os << " " << v;
    os << "\nweights";
    for (long w : g.weights.w) os << " " << w;
    os << "\nsymplectic_dim " << g.symplectic_dim << "\n";
    for (const Polynomial& p : g.generators)
        os << "generator " << polynomial_str(p, g.variables, &g.weights) << "\n";
    for (const BranchParam& b : g.branches) {
        os << "branch " << b.label << " (";
        for (size_t i = 0; i < b.components.size(); ++i) {
            if (i) os << ", ";
            os << b.components[i].str();
        }
        os << ")\n";
    }
    return os.str();
}

std::vector<DiffForm> monomial_form_basis(const GermDefinition& g, int p, long delta) {
    const int n = g.dim();
    std::vector<IdxTuple> tuples;
    if (p == 0) {
        tuples.push_back({});
    } else if (p == 1) {
        for (int i = 0; i < n; ++i) tuples.push_back({i});
    } else if (p == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) tuples.push_back({i, j});
    } else if (p == 3) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) tuples.push_back({i, j, k});
    } else {
        throw InputError("form degree above 3 is not supported here");
    }
    std::vector<DiffForm> out;
    for (const IdxTuple& t : tuples) {
        long base = 0;
        for (int i : t) base += g.weights.w[i];
        if (delta < base) continue;
        for (const Monomial& m : monomial_basis(delta - base, g.weights)) {
            DiffForm f(p, n);
            f.add_term(t, Polynomial::term(n, m, rat(1)));
            out.push_back(std::move(f));
        }
    }
    return out;
}

std::vector<DiffForm> zero_restriction_generators(const GermDefinition& g, int p, long delta) {
    const int n = g.dim();
    std::vector<DiffForm> rows;
    for (const Polynomial& gen : g.generators) {
        long gd = *gen.homogeneous_quasi_degree(g.weights);
        // multiples of the generator: m * gen * (coordinate p-form)
        if (delta >= gd) {
            for (const DiffForm& base : monomial_form_basis(g, p, delta - gd))
                rows.push_back(base.scaled_by(gen));
        }
        // differentials d(m * gen * (coordinate (p-1)-form))
        if (p >= 1 && delta >= gd) {
            for (const DiffForm& base : monomial_form_basis(g, p - 1, delta - gd))
                rows.push_back(exterior_derivative(base.scaled_by(gen)));
        }
    }
    return rows;
}

namespace {

std::vector<Rat> form_to_layer_coords(const DiffForm& f, const std::vector<DiffForm>& layer,
                                      const std::string& where) {
    // Layer elements are monomial forms: index them by (tuple, monomial).
    std::map<std::pair<IdxTuple, Monomial>, size_t> pos;
    for (size_t i = 0; i < layer.size(); ++i) {
        const auto& [idx, poly] = *layer[i].terms.begin();
        pos.emplace(std::make_pair(idx, poly.terms.begin()->first), i);
    }
    std::vector<Rat> v(layer.size(), Rat(0));
    for (const auto& [idx, poly] : f.terms) {
        for (const auto& [m, c] : poly.terms) {
            auto it = pos.find(std::make_pair(idx, m));
            if (it == pos.end())
                throw InputError(where + ": term outside the quasi-degree layer");
            v[it->second] += c;
        }
    }
    return v;
}

DiffForm layer_combination(const std::vector<Rat>& v, const std::vector<DiffForm>& layer,
                           int p, int n) {
    DiffForm f(p, n);
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (const auto& [idx, poly] : layer[i].terms) f.add_term(idx, poly.scaled(v[i]));
    }
    return f;
}

}  // namespace

QMat zero_restriction_subspace(const GermDefinition& g, int p, long delta) {
    std::vector<DiffForm> layer = monomial_form_basis(g, p, delta);
    QMat m;
    m.ncols = layer.size();
    for (const DiffForm& row : zero_restriction_generators(g, p, delta)) {
        if (row.is_zero()) continue;
        m.append_row(form_to_layer_coords(row, layer, "zero-restriction row"));
    }
    rref(m);
    return m;
}

RestrictionSpace::RestrictionSpace(GermDefinition germ, int p, bool closed_only,
                                   const std::vector<RepresentativeOverride>* overrides,
                                   long hard_cap)
    : germ_(std::move(germ)), p_(p), closed_only_(closed_only) {
    if (p_ < 1 || p_ > 2) throw InputError("restriction spaces support form degrees 1 and 2");
    germ_.validate();
    build(overrides, hard_cap > 0 ? hard_cap : 10 * germ_.weights.sum());
}

GradedPiece RestrictionSpace::build_piece(long delta) const {
    GradedPiece gp;
    gp.delta = delta;
    gp.monomial_forms = monomial_form_basis(germ_, p_, delta);
    const size_t ncols = gp.monomial_forms.size();
    QMat zero;
    zero.ncols = ncols;
    for (const DiffForm& row : zero_restriction_generators(germ_, p_, delta)) {
        if (row.is_zero()) continue;
        zero.append_row(form_to_layer_coords(row, gp.monomial_forms, "zero-restriction row"));
    }
    gp.zero_pivots = rref(zero);
    gp.zero_rows = std::move(zero);
    gp.full_quotient_dim = ncols - gp.zero_pivots.size();
    return gp;
}

std::vector<Rat> RestrictionSpace::piece_coordinates(const GradedPiece& gp,
                                                     const DiffForm& part) const {
    std::vector<Rat> v = form_to_layer_coords(part, gp.monomial_forms, "reduce");
    reduce_vector(v, gp.zero_rows, gp.zero_pivots);
    return v;
}

void RestrictionSpace::build(const std::vector<RepresentativeOverride>* overrides,
                             long hard_cap) {
    const long maxw = germ_.weights.max_weight();
    long max_pair = 0;
    for (int i = 0; i < germ_.dim(); ++i)
        for (int j = i + 1; j < germ_.dim(); ++j)
            max_pair = std::max(max_pair, germ_.weights.w[i] + germ_.weights.w[j]);
    if (germ_.dim() == 1) max_pair = germ_.weights.w[0];

    long zero_run = 0;
    long delta = 0;
    bool stabilized = false;
    for (; delta <= hard_cap; ++delta) {
        GradedPiece gp = build_piece(delta);

        // representatives of the quotient chosen for this variant
        std::vector<std::vector<Rat>> reps;
        std::vector<DiffForm> rep_forms;
        if (!closed_only_) {
            std::vector<bool> is_pivot(gp.monomial_forms.size(), false);
            for (size_t c : gp.zero_pivots) is_pivot[c] = true;
            for (size_t c = 0; c < gp.monomial_forms.size(); ++c) {
                if (is_pivot[c]) continue;
                std::vector<Rat> unit(gp.monomial_forms.size(), Rat(0));
                unit[c] = Rat(1);
                reps.push_back(std::move(unit));
                rep_forms.push_back(gp.monomial_forms[c]);
            }
        } else {
            // closed classes in this layer: reductions of d(monomial (p-1)-forms)
            std::vector<DiffForm> zforms;
            QMat zred;
            zred.ncols = gp.monomial_forms.size();
            for (const DiffForm& pre : monomial_form_basis(germ_, p_ - 1, delta)) {
                DiffForm z = exterior_derivative(pre);
                if (z.is_zero()) continue;
                std::vector<Rat> v = piece_coordinates(gp, z);
                if (!is_zero_vector(v)) {
                    zforms.push_back(std::move(z));
                    zred.append_row(std::move(v));
                }
            }
            QMat reduced = zred;
            rref(reduced);
            QMat zt(zred.ncols, zred.nrows);
            for (size_t r = 0; r < zred.nrows; ++r)
                for (size_t c = 0; c < zred.ncols; ++c) zt.a[c][r] = zred.a[r][c];
            for (size_t i = 0; i < reduced.nrows; ++i) {
                reps.push_back(reduced.a[i]);
                // present the class by a closed form: rewrite the reduced row
                // over the original closed generators of the layer
                auto comb = solve(zt, reduced.a[i]);
                if (!comb)
                    throw VerifyError("internal: reduced closed row left the generator span");
                DiffForm rep(p_, germ_.dim());
                for (size_t k = 0; k < comb->size(); ++k)
                    if ((*comb)[k] != 0) rep = rep + zforms[k].scaled((*comb)[k]);
                rep_forms.push_back(std::move(rep));
            }
        }
        gp.quotient_dim = reps.size();

        for (size_t i = 0; i < reps.size(); ++i) {
            gp.basis_pos.push_back(basis_.size());
            basis_.push_back(SpaceBasisElement{"", rep_forms[i], delta});
            gp.rep_reduced.append_row(std::move(reps[i]));
        }
        if (gp.rep_reduced.nrows == 0) gp.rep_reduced.ncols = gp.monomial_forms.size();
        pieces_.emplace(delta, std::move(gp));

        // stabilization rule: the all-forms quotient must vanish for a run of
        // max(w) consecutive quasi-degrees past the largest pair weight sum;
        // module-closedness of the zero subspace then kills everything higher.
        if (pieces_.at(delta).full_quotient_dim == 0)
            ++zero_run;
        else
            zero_run = 0;
        if (delta > max_pair && zero_run >= maxw) {
            stabilized = true;
            break;
        }
    }
    if (!stabilized)
        throw CapError("restriction space of '" + germ_.name +
                       "' did not stabilize below the hard cap " + std::to_string(hard_cap) +
                       "; raise the cap or check the germ definition");
    cutoff_ = delta;
    {
        std::ostringstream os;
        os << "all classes of quasi-degree above " << cutoff_ - maxw
           << " vanish: zero quotients at " << cutoff_ - maxw + 1 << ".." << cutoff_
           << " (a run of max(w) = " << maxw << " past the largest pair weight sum " << max_pair
           << ") propagate upward because the zero-restriction subspace is closed under "
              "multiplication by polynomials";
        certificate_ = os.str();
    }

    // default labels
    for (size_t i = 0; i < basis_.size(); ++i) basis_[i].label = "b" + std::to_string(i + 1);

    if (overrides != nullptr) {
        if (overrides->size() != basis_.size())
            throw VerifyError("representative overrides for '" + germ_.name + "': expected " +
                              std::to_string(basis_.size()) + " elements, got " +
                              std::to_string(overrides->size()));
        std::map<long, std::vector<size_t>> by_delta;
        for (size_t i = 0; i < overrides->size(); ++i) {
            const DiffForm& f = (*overrides)[i].form;
            auto qd = f.homogeneous_quasi_degree(germ_.weights);
            if (!qd || f.is_zero())
                throw VerifyError("override '" + (*overrides)[i].label +
                                  "' is not quasi-homogeneous");
            if (closed_only_ && !exterior_derivative(f).is_zero())
                throw VerifyError("override '" + (*overrides)[i].label + "' is not closed");
            by_delta[*qd].push_back(i);
        }
        for (auto& [delta_key, idxs] : by_delta) {
            auto pit = pieces_.find(delta_key);
            if (pit == pieces_.end() || pit->second.quotient_dim != idxs.size())
                throw VerifyError("override count at quasi-degree " + std::to_string(delta_key) +
                                  " does not match the quotient dimension");
            GradedPiece& gp = pit->second;
            QMat repl;
            repl.ncols = gp.monomial_forms.size();
            for (size_t i : idxs)
                repl.append_row(piece_coordinates(gp, (*overrides)[i].form));
            if (rank(repl) != repl.nrows)
                throw VerifyError("overrides at quasi-degree " + std::to_string(delta_key) +
                                  " are dependent modulo the zero-restriction subspace");
            gp.rep_reduced = repl;
            for (size_t k = 0; k < idxs.size(); ++k) {
                size_t global = gp.basis_pos[k];
                basis_[global] =
                    SpaceBasisElement{(*overrides)[idxs[k]].label, (*overrides)[idxs[k]].form,
                                      delta_key};
            }
        }
    }
}

size_t RestrictionSpace::layer_dimension(long delta) const {
    auto it = pieces_.find(delta);
    if (it == pieces_.end()) return 0;
    return closed_only_ ? it->second.quotient_dim : it->second.full_quotient_dim;
}

std::vector<Rat> RestrictionSpace::reduce(const DiffForm& a) const {
    if (a.degree != p_)
        throw InputError("reduce: expected a form of degree " + std::to_string(p_));
    if (a.nvars != germ_.dim())
        throw InputError("reduce: form lives in the wrong chart dimension");
    if (closed_only_ && !exterior_derivative(a).is_zero())
        throw InputError("reduce: the closed variant only accepts closed forms");
    std::vector<Rat> out(basis_.size(), Rat(0));
    for (auto& [delta, part] : a.graded_pieces(germ_.weights)) {
        if (delta > cutoff_) continue;  // certified zero beyond the cutoff
        auto pit = pieces_.find(delta);
        if (pit == pieces_.end())
            throw InputError("reduce: no layer data at quasi-degree " + std::to_string(delta));
        const GradedPiece& gp = pit->second;
        std::vector<Rat> v = piece_coordinates(gp, part);
        if (is_zero_vector(v)) continue;
        if (gp.rep_reduced.nrows == 0)
            throw VerifyError("reduce: nonzero residue in a zero quotient layer (degree " +
                              std::to_string(delta) + ")");
        // solve  rep_reduced^T c = v  (the representatives span the quotient)
        QMat at(gp.rep_reduced.ncols, gp.rep_reduced.nrows);
        for (size_t i = 0; i < gp.rep_reduced.nrows; ++i)
            for (size_t j = 0; j < gp.rep_reduced.ncols; ++j) at.a[j][i] = gp.rep_reduced.a[i][j];
        auto sol = solve(at, v);
        if (!sol)
            throw InputError("reduce: class lies outside the spanned quotient at degree " +
                             std::to_string(delta) +
                             (closed_only_ ? " (is the input a closed form?)" : ""));
        for (size_t i = 0; i < sol->size(); ++i) out[gp.basis_pos[i]] = (*sol)[i];
    }
    return out;
}

bool RestrictionSpace::is_zero_class(const DiffForm& a) const {
    return is_zero_vector(reduce(a));
}

DiffForm RestrictionSpace::combination(const std::vector<Rat>& coords) const {
    if (coords.size() != basis_.size())
        throw InputError("coordinate vector length " + std::to_string(coords.size()) +
                         " != basis size " + std::to_string(basis_.size()));
    DiffForm f(p_, germ_.dim());
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] == 0) continue;
        f = f + basis_[i].rep.scaled(coords[i]);
    }
    return f;
}

std::vector<DiffForm> RestrictionSpace::closed_zero_layer(long delta) const {
    auto pit = pieces_.find(delta);
    if (pit == pieces_.end()) return {};
    const GradedPiece& gp = pit->second;
    if (gp.zero_rows.nrows == 0) return {};
    // kernel of d on the span of the zero-subspace rows
    std::vector<DiffForm> row_forms;
    std::vector<DiffForm> images;
    for (size_t i = 0; i < gp.zero_rows.nrows; ++i) {
        DiffForm f = layer_combination(gp.zero_rows.a[i], gp.monomial_forms, p_, germ_.dim());
        images.push_back(exterior_derivative(f));
        row_forms.push_back(std::move(f));
    }
    std::vector<DiffForm> dlayer = monomial_form_basis(germ_, p_ + 1, delta);
    // columns = zero-subspace rows, rows = (p+1)-layer coordinates, so the
    // right null space gives the combinations whose differential vanishes
    QMat dmat(dlayer.size(), images.size());
    for (size_t c = 0; c < images.size(); ++c) {
        if (images[c].is_zero()) continue;
        std::vector<Rat> col = form_to_layer_coords(images[c], dlayer, "closed zero layer");
        for (size_t r = 0; r < dlayer.size(); ++r) dmat.a[r][c] = col[r];
    }
    QMat kernel = nullspace(dmat);
    std::vector<DiffForm> out;
    for (size_t i = 0; i < kernel.nrows; ++i) {
        DiffForm f(p_, germ_.dim());
        for (size_t j = 0; j < kernel.ncols; ++j)
            if (kernel.a[i][j] != 0) f = f + row_forms[j].scaled(kernel.a[i][j]);
        if (!f.is_zero()) out.push_back(std::move(f));
    }
    return out;
}

}  // namespace algrest

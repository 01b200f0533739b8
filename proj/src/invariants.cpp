#include "algrest/invariants.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "algrest/errors.hpp"
#include "algrest/linalg.hpp"

namespace algrest {

namespace {

Rat coeff_of(const Polynomial& p, const Monomial& m) {
    auto it = p.terms.find(m);
    return it == p.terms.end() ? Rat(0) : it->second;
}

Monomial unit_monomial(int nv) {
    Monomial m;
    m.e.assign(nv, 0);
    return m;
}

// Gradient rows at the origin (linear parts); rank n required.
void check_independent_differentials(const std::vector<Polynomial>& h) {
    size_t nv = h[0].nvars;
    QMat jac(h.size(), nv);
    for (size_t i = 0; i < h.size(); ++i) {
        if (h[i].nvars != static_cast<int>(nv))
            throw InputError("submanifold equations live on charts of different dimension");
        if (coeff_of(h[i], unit_monomial(static_cast<int>(nv))) != 0)
            throw InputError("submanifold equation " + std::to_string(i + 1) +
                             " does not vanish at the origin");
        for (size_t j = 0; j < nv; ++j) {
            Monomial m = unit_monomial(static_cast<int>(nv));
            m.e[j] = 1;
            jac.a[i][j] = coeff_of(h[i], m);
        }
    }
    if (rank(jac) != h.size())
        throw InputError("differentials of the submanifold equations are dependent at the origin");
}

Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g) {
    int nv = f.nvars;
    Polynomial out = Polynomial::zero(nv);
    for (int i = 0; i + 1 < nv; i += 2) {
        int p = i, q = i + 1;  // chart order (p1, q1, p2, q2, ...)
        out = out + f.partial_derivative(p) * g.partial_derivative(q) -
              f.partial_derivative(q) * g.partial_derivative(p);
    }
    return out;
}

// Membership of `b` in the ideal of the equations, checked on all monomials
// of total degree <= cutoff.
bool in_equation_ideal_jet(const std::vector<Polynomial>& h, const Polynomial& b, long cutoff) {
    int nv = b.nvars;
    std::vector<std::vector<int>> mults;  // multiplier exponent tuples
    std::vector<int> cur(nv, 0);
    std::function<void(int, long)> enumerate = [&](int pos, long left) {
        if (pos == nv) {
            mults.push_back(cur);
            return;
        }
        for (long e = 0; e <= left; ++e) {
            cur[pos] = static_cast<int>(e);
            enumerate(pos + 1, left - e);
        }
        cur[pos] = 0;
    };
    enumerate(0, cutoff - 1);

    SparseEliminator elim;
    std::map<Monomial, std::map<size_t, Rat>> rows;  // target monomial -> unknown -> coeff
    size_t unknown = 0;
    for (const Polynomial& hi : h) {
        for (const auto& expo : mults) {
            Monomial m;
            m.e = expo;
            Polynomial prod = Polynomial::term(nv, m, Rat(1)) * hi;
            for (const auto& [mm, c] : prod.terms)
                if (mm.total_degree() <= cutoff) rows[mm][unknown] = c;
            ++unknown;
        }
    }
    for (const auto& [mm, c] : b.terms)
        if (mm.total_degree() <= cutoff) rows[mm];  // ensure a row exists
    for (const auto& [mm, entries] : rows) {
        SparseEliminator::Row row;
        row.a.insert(entries.begin(), entries.end());
        row.rhs = coeff_of(b, mm);
        if (!elim.add(row)) return false;
    }
    return true;
}

}  // namespace

SubmanifoldEquations make_submanifold(std::vector<Polynomial> h, bool lagrangian,
                                      long jet_cutoff) {
    if (h.empty()) throw InputError("no submanifold equations given");
    int nv = h[0].nvars;
    if (nv <= 0 || nv % 2 != 0 || static_cast<size_t>(nv) != 2 * h.size())
        throw InputError("need n equations on a 2n-dimensional chart");
    check_independent_differentials(h);
    if (lagrangian) {
        for (size_t i = 0; i < h.size(); ++i)
            for (size_t j = i + 1; j < h.size(); ++j) {
                Polynomial b = poisson_bracket(h[i], h[j]);
                if (b.is_zero()) continue;
                if (!in_equation_ideal_jet(h, b, jet_cutoff))
                    throw VerifyError("Poisson bracket of equations " + std::to_string(i + 1) +
                                      " and " + std::to_string(j + 1) +
                                      " does not vanish on the submanifold (jet cutoff " +
                                      std::to_string(jet_cutoff) + ")");
            }
    }
    SubmanifoldEquations s;
    s.h = std::move(h);
    s.lagrangian = lagrangian;
    return s;
}

ExtInt tangency_order(const BranchParam& b, const SubmanifoldEquations& s) {
    ExtInt best = ExtInt::inf();
    for (const Polynomial& hi : s.h) {
        if (hi.nvars != static_cast<int>(b.components.size()))
            throw InputError("branch and submanifold equations have different chart dimensions");
        best = min(best, vanishing_order(substitute_branch(hi, b)));
    }
    return best;
}

ExtInt multigerm_tangency(const std::vector<BranchParam>& bs, const SubmanifoldEquations& s) {
    if (bs.empty()) throw InputError("no branches given");
    ExtInt best = ExtInt::inf();
    for (const BranchParam& b : bs) best = min(best, tangency_order(b, s));
    return best;
}

ExtInt lagrangian_tangency_single(const RestrictionClass& a, bool experimental_multibranch) {
    const RestrictionSpace& s = *a.space;
    const GermDefinition& g = s.germ();
    if (g.branches.size() != 1 && !experimental_multibranch)
        throw InputError("the 1-form route needs a single branch; use the generating-function "
                         "search for multigerms");
    if (a.coords.size() != s.dimension()) throw InputError("coordinate vector has wrong length");
    if (a.is_zero()) return ExtInt::inf();

    long maxw = g.weights.max_weight();
    long qmax = s.cutoff() + maxw + 1;
    long kmax = s.cutoff() + maxw + 2;

    struct Unknown {
        int var = 0;                // dx index
        std::vector<Series> pulls;  // monomial coefficient composed with each branch
        std::vector<Rat> dcoords;
    };
    std::vector<Unknown> unknowns;
    for (long q = 1; q <= qmax; ++q) {
        for (const DiffForm& u : monomial_form_basis(g, 1, q)) {
            Unknown un;
            un.var = u.terms.begin()->first[0];
            for (const BranchParam& b : g.branches)
                un.pulls.push_back(substitute_branch(u.terms.begin()->second, b));
            un.dcoords = s.reduce(exterior_derivative(u));
            unknowns.push_back(std::move(un));
        }
    }

    SparseEliminator elim;
    // Class-matching rows: the exterior derivative must reduce to `a`.
    for (size_t i = 0; i < s.dimension(); ++i) {
        SparseEliminator::Row row;
        for (size_t r = 0; r < unknowns.size(); ++r)
            if (unknowns[r].dcoords[i] != 0) row.a[r] = unknowns[r].dcoords[i];
        row.rhs = a.coords[i];
        if (!elim.add(row))
            throw VerifyError("class is not realizable as the derivative of a 1-form within the "
                              "certified degree range");
    }

    long k = 0;
    for (long cand = 1; cand <= kmax; ++cand) {
        // Coefficients of t^(cand-1) in every pulled-back dx coefficient, on
        // every branch (the order of a 1-form on a multigerm is the minimum
        // over the branches).
        bool ok = true;
        for (size_t bi = 0; bi < g.branches.size() && ok; ++bi) {
            for (int v = 0; v < g.dim() && ok; ++v) {
                SparseEliminator::Row row;
                for (size_t r = 0; r < unknowns.size(); ++r) {
                    if (unknowns[r].var != v) continue;
                    Rat c = unknowns[r].pulls[bi].coeff(cand - 1);
                    if (c != 0) row.a[r] = c;
                }
                if (row.a.empty()) continue;
                ok = elim.add(row);
            }
        }
        if (!ok) return ExtInt::of(k);
        k = cand;
    }
    throw VerifyError("nonzero class stayed representable beyond the degree bound; "
                      "branch orders are inconsistent with the graded basis");
}

namespace {

std::vector<Monomial> base_monomials(int nv, const std::vector<int>& base, long dmin, long dmax) {
    std::vector<Monomial> out;
    std::vector<int> expo(base.size(), 0);
    std::function<void(size_t, long)> rec = [&](size_t pos, long left) {
        if (pos == base.size()) {
            long total = 0;
            for (int e : expo) total += e;
            if (total >= dmin) {
                Monomial m;
                m.e.assign(nv, 0);
                for (size_t i = 0; i < base.size(); ++i) m.e[base[i]] = expo[i];
                out.push_back(m);
            }
            return;
        }
        for (long e = 0; e <= left; ++e) {
            expo[pos] = static_cast<int>(e);
            rec(pos + 1, left - e);
        }
        expo[pos] = 0;
    };
    rec(0, dmax);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TangencySearchResult lagrangian_tangency_search(const std::vector<BranchParam>& bs,
                                                const GeneratingFunctionFamily& fam) {
    if (bs.empty()) throw InputError("no branches given");
    size_t dim2n = bs[0].components.size();
    for (const auto& b : bs)
        if (b.components.size() != dim2n)
            throw InputError("branches live in charts of different dimension");
    if (dim2n == 0 || dim2n % 2 != 0)
        throw InputError("branches must live in an even-dimensional Darboux chart");
    size_t n = dim2n / 2;
    if (fam.q_base.size() != n)
        throw InputError("base split must choose one variable per Darboux pair");
    // Cap 1 admits only S = 0, i.e. the base coordinate plane itself; that is
    // enough to certify containment of curves lying inside it.
    if (fam.degree_cap < 1) throw InputError("generating-function degree cap must be at least 1");
    int nv = static_cast<int>(dim2n);

    std::vector<int> base(n), other(n);
    for (size_t i = 0; i < n; ++i) {
        int p = static_cast<int>(2 * i), q = static_cast<int>(2 * i + 1);
        base[i] = fam.q_base[i] ? q : p;
        other[i] = fam.q_base[i] ? p : q;
    }

    std::vector<Monomial> smons = base_monomials(nv, base, 2, fam.degree_cap);

    // H_i = other_i -+ dS/d(base_i): q-base pairs subtract, p-base pairs add.
    struct PairRows {
        Series constant;
        std::map<size_t, Series> coeffs;  // unknown id -> pulled derivative
    };
    std::vector<PairRows> parts;
    long max_power = 0;
    for (const BranchParam& b : bs) {
        for (size_t i = 0; i < n; ++i) {
            PairRows pr;
            pr.constant = b.components[other[i]];
            max_power = std::max(max_power, pr.constant.degree());
            Rat sgn = fam.q_base[i] ? Rat(-1) : Rat(1);
            for (size_t r = 0; r < smons.size(); ++r) {
                Polynomial d = Polynomial::term(nv, smons[r], Rat(1)).partial_derivative(base[i]);
                if (d.is_zero()) continue;
                Series pulled = substitute_branch(d, b).scaled(sgn);
                if (pulled.is_zero()) continue;
                max_power = std::max(max_power, pulled.degree());
                pr.coeffs[r] = std::move(pulled);
            }
            parts.push_back(std::move(pr));
        }
    }

    long bound = max_power + 1;  // feasibility past every t-power is exact containment

    auto add_batch = [&](SparseEliminator& elim, long power) {
        for (const auto& pr : parts) {
            SparseEliminator::Row row;
            for (const auto& [r, ser] : pr.coeffs) {
                Rat c = ser.coeff(power);
                if (c != 0) row.a[r] = c;
            }
            row.rhs = -pr.constant.coeff(power);
            if (row.a.empty() && row.rhs == 0) continue;
            if (!elim.add(row)) return false;
        }
        return true;
    };

    auto exact_containment = [&](const std::map<size_t, Rat>& y) {
        for (const auto& pr : parts) {
            Series total = pr.constant;
            for (const auto& [r, ser] : pr.coeffs) {
                auto it = y.find(r);
                if (it != y.end() && it->second != 0) total = total + ser.scaled(it->second);
            }
            if (!total.is_zero()) return false;
        }
        return true;
    };

    TangencySearchResult res;
    res.family = fam;

    SparseEliminator elim;
    long feasible = 0;
    bool exact = false;
    std::map<size_t, Rat> ysol;
    size_t stable_pivots = static_cast<size_t>(-1);
    for (long j = 1; j <= bound; ++j) {
        if (!add_batch(elim, j - 1)) break;
        feasible = j;
        // Exact-containment shortcut once the pivot set stops growing.
        if (j == bound || (j % 8 == 0 && elim.pivot_count() == stable_pivots)) {
            std::map<size_t, Rat> sol = elim.solution();
            if (exact_containment(sol)) {
                exact = true;
                ysol = std::move(sol);
                break;
            }
        }
        if (j % 8 == 0) stable_pivots = elim.pivot_count();
    }

    if (!exact) {
        // Rebuild a clean system for the witness (a failing batch may have
        // been partially absorbed).
        SparseEliminator clean;
        for (long j = 1; j <= feasible; ++j) add_batch(clean, j - 1);
        ysol = clean.solution();
    }

    Polynomial sp = Polynomial::zero(nv);
    for (const auto& [r, v] : ysol)
        if (v != 0) sp.add_term(smons[r], v);
    res.generating_function = sp;
    std::vector<Polynomial> h;
    for (size_t i = 0; i < n; ++i) {
        Polynomial d = sp.partial_derivative(base[i]);
        Polynomial oi = Polynomial::variable(nv, other[i]);
        h.push_back(fam.q_base[i] ? oi - d : oi + d);
    }
    res.witness.h = std::move(h);
    res.witness.lagrangian = true;

    if (exact) {
        res.order = ExtInt::inf();
    } else if (feasible == bound) {
        res.maxed = true;  // every equation consumed yet the witness is inexact
        res.order = ExtInt::of(feasible);
    } else {
        res.order = ExtInt::of(feasible);
    }
    return res;
}

TangencySearchResult lagrangian_tangency_best(const std::vector<BranchParam>& bs,
                                              long degree_cap) {
    if (bs.empty()) throw InputError("no branches given");
    size_t dim2n = bs[0].components.size();
    if (dim2n == 0 || dim2n % 2 != 0)
        throw InputError("branches must live in an even-dimensional Darboux chart");
    size_t n = dim2n / 2;
    TangencySearchResult best;
    bool have = false;
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        GeneratingFunctionFamily fam;
        fam.degree_cap = degree_cap;
        fam.q_base.assign(n, false);
        for (size_t i = 0; i < n; ++i) fam.q_base[i] = (mask >> i) & 1;
        TangencySearchResult cur = lagrangian_tangency_search(bs, fam);
        if (!have || best.order < cur.order) {
            best = cur;
            have = true;
        }
        if (best.order.infinite) break;
    }
    return best;
}

TangentFrame default_frame(const GermDefinition& g) {
    int nv = g.dim();
    std::vector<std::pair<long, std::vector<Rat>>> events;
    for (const BranchParam& b : g.branches) {
        long maxdeg = 0;
        for (const Series& c : b.components) maxdeg = std::max(maxdeg, c.degree());
        for (long r = 1; r <= maxdeg; ++r) {
            std::vector<Rat> dir(nv, Rat(0));
            bool nz = false;
            for (int i = 0; i < nv; ++i) {
                dir[i] = b.components[i].coeff(r);
                if (dir[i] != 0) nz = true;
            }
            if (nz) events.push_back({r, std::move(dir)});
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    QMat picked(0, nv);
    std::vector<std::vector<Rat>> dirs;
    auto try_add = [&](const std::vector<Rat>& d) {
        QMat cand = picked;
        cand.append_row(d);
        if (rank(cand) > dirs.size()) {
            picked = cand;
            dirs.push_back(d);
        }
    };
    for (const auto& [r, d] : events) {
        if (dirs.size() == 3) break;
        try_add(d);
    }
    for (int i = 0; i < nv && dirs.size() < 3; ++i) {
        std::vector<Rat> e(nv, Rat(0));
        e[i] = Rat(1);
        try_add(e);
    }
    if (dirs.size() < 3)
        throw InputError("cannot build a 3-dimensional tangent frame on this chart");

    TangentFrame f;
    f.ell = {dirs[0]};
    f.v = {dirs[0], dirs[1]};
    f.w = {dirs[0], dirs[1], dirs[2]};
    return f;
}

DiffForm project_to_chart(const DiffForm& omega, int dim) {
    DiffForm out(omega.degree, dim);
    for (const auto& [idx, poly] : omega.terms) {
        bool keep = true;
        for (int i : idx)
            if (i >= dim) keep = false;
        if (!keep) continue;
        Polynomial p = Polynomial::zero(dim);
        for (const auto& [m, c] : poly.terms) {
            bool mk = true;
            for (size_t i = dim; i < m.e.size(); ++i)
                if (m.e[i] != 0) mk = false;
            if (!mk) continue;
            Monomial mm;
            mm.e.assign(m.e.begin(), m.e.begin() + std::min<size_t>(m.e.size(), dim));
            mm.e.resize(dim, 0);
            p.add_term(mm, c);
        }
        if (!p.is_zero()) out.add_term(idx, p);
    }
    return out;
}

std::string GeometricReport::label(bool unicode) const {
    switch (regime) {
        case GeometricRegime::kNotIsotropic:
            return unicode ? "ω|_V ≠ 0" : "omega|_V != 0";
        case GeometricRegime::kKernelNotLine:
            return unicode ? "ω|_V = 0 and ker ω ≠ ℓ" : "omega|_V = 0 and ker omega != l";
        case GeometricRegime::kKernelIsLine:
            return unicode ? "ω|_V = 0 and ker ω = ℓ" : "omega|_V = 0 and ker omega = l";
        case GeometricRegime::kZeroOnW: {
            std::string head = unicode ? "ω|_W = 0" : "omega|_W = 0";
            if (lag) head += ", L_N = " + lag->str(!unicode);
            return head;
        }
        case GeometricRegime::kLagrangianContained:
            return "N is contained in a smooth Lagrangian submanifold";
    }
    return "";
}

namespace {

std::vector<std::vector<Rat>> pad_frame_vectors(const std::vector<std::vector<Rat>>& vs,
                                                size_t gdim, size_t nv) {
    std::vector<std::vector<Rat>> out;
    for (const auto& v : vs) {
        if (v.size() != gdim && v.size() != nv)
            throw InputError("frame vector has wrong dimension");
        std::vector<Rat> p(nv, Rat(0));
        for (size_t i = 0; i < v.size(); ++i) p[i] = v[i];
        out.push_back(std::move(p));
    }
    return out;
}

size_t span_rank(const std::vector<std::vector<Rat>>& vs, size_t nv) {
    QMat m(0, nv);
    for (const auto& v : vs) m.append_row(v);
    return rank(m);
}

}  // namespace

GeometricReport geometric_class(std::shared_ptr<const RestrictionSpace> s, const DiffForm& omega,
                                const TangentFrame& frame, const GeometricOptions& opt) {
    if (!s) throw InputError("no restriction space given");
    const GermDefinition& g = s->germ();
    if (omega.degree != 2) throw InputError("the geometric classifier expects a 2-form");
    if (omega.nvars < g.dim())
        throw InputError("the 2-form lives on a smaller chart than the germ");
    size_t nv = static_cast<size_t>(omega.nvars);

    auto ell = pad_frame_vectors(frame.ell, g.dim(), nv);
    auto v = pad_frame_vectors(frame.v, g.dim(), nv);
    auto w = pad_frame_vectors(frame.w, g.dim(), nv);
    if (span_rank(ell, nv) != 1 || span_rank(v, nv) != 2 || span_rank(w, nv) != 3)
        throw InputError("frame spans must have dimensions 1, 2, 3");
    auto joined = [&](const std::vector<std::vector<Rat>>& a,
                      const std::vector<std::vector<Rat>>& b) {
        auto ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        return span_rank(ab, nv);
    };
    if (joined(ell, v) != 2 || joined(v, w) != 3)
        throw InputError("frame is not nested: need l inside V inside W");

    // omega evaluated at the origin, as an antisymmetric matrix.
    QMat o0(nv, nv);
    Monomial unit = unit_monomial(omega.nvars);
    for (const auto& [idx, poly] : omega.terms) {
        Rat c = coeff_of(poly, unit);
        if (c == 0) continue;
        o0.a[idx[0]][idx[1]] = c;
        o0.a[idx[1]][idx[0]] = -c;
    }
    auto pair_val = [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
        Rat total(0);
        for (size_t i = 0; i < nv; ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < nv; ++j)
                if (o0.a[i][j] != 0 && b[j] != 0) total += a[i] * o0.a[i][j] * b[j];
        }
        return total;
    };

    GeometricReport rep;
    DiffForm core = project_to_chart(omega, g.dim());
    rep.core = RestrictionClass{s, s->reduce(core)};

    if (pair_val(v[0], v[1]) != 0) {
        rep.regime = GeometricRegime::kNotIsotropic;
        return rep;
    }

    Rat a12 = pair_val(w[0], w[1]);
    Rat a13 = pair_val(w[0], w[2]);
    Rat a23 = pair_val(w[1], w[2]);
    if (a12 == 0 && a13 == 0 && a23 == 0) {
        if (rep.core.is_zero()) {
            rep.regime = GeometricRegime::kLagrangianContained;
            rep.lag = ExtInt::inf();
            return rep;
        }
        rep.regime = GeometricRegime::kZeroOnW;
        if (opt.tangency_hook) {
            rep.lag = opt.tangency_hook(rep.core);
        } else if (g.branches.size() == 1) {
            rep.lag = lagrangian_tangency_single(rep.core);
        }
        return rep;
    }

    // Kernel of the rank-2 restriction to W, in W-coordinates (a23, -a13, a12).
    std::vector<Rat> ker(nv, Rat(0));
    for (size_t i = 0; i < nv; ++i)
        ker[i] = a23 * w[0][i] - a13 * w[1][i] + a12 * w[2][i];
    rep.regime = span_rank({ker, ell[0]}, nv) == 1 ? GeometricRegime::kKernelIsLine
                                                   : GeometricRegime::kKernelNotLine;
    return rep;
}

}  // namespace algrest

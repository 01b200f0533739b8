#include "algrest/qpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace algrest {

Rat rat_from_string(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    try {
        Rat r(s);
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational literal: '" + text + "'");
    }
}

std::string rat_str(const Rat& r) { return r.get_str(); }

long WeightSystem::max_weight() const {
    long m = 0;
    for (long x : w) m = std::max(m, x);
    return m;
}

long WeightSystem::min_weight() const {
    if (w.empty()) return 0;
    long m = w[0];
    for (long x : w) m = std::min(m, x);
    return m;
}

long WeightSystem::sum() const {
    long s = 0;
    for (long x : w) s += x;
    return s;
}

bool Monomial::is_constant() const {
    for (int x : e)
        if (x != 0) return false;
    return true;
}

long Monomial::total_degree() const {
    long d = 0;
    for (int x : e) d += x;
    return d;
}

Monomial Monomial::times(const Monomial& o) const {
    if (e.size() != o.e.size()) throw std::invalid_argument("monomial dimension mismatch");
    Monomial r = *this;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
    return r;
}

long quasi_degree(const Monomial& m, const WeightSystem& w) {
    if (m.dim() != w.dim()) throw std::invalid_argument("monomial/weight dimension mismatch");
    long d = 0;
    for (size_t i = 0; i < m.e.size(); ++i) {
        if (m.e[i] < 0) throw std::invalid_argument("negative exponent");
        d += static_cast<long>(m.e[i]) * w.w[i];
    }
    return d;
}

namespace {
void enumerate_monomials(long delta, const WeightSystem& w, size_t i, Monomial& cur,
                         std::vector<Monomial>& out) {
    if (i + 1 == w.w.size()) {
        if (delta % w.w[i] == 0) {
            cur.e[i] = static_cast<int>(delta / w.w[i]);
            out.push_back(cur);
            cur.e[i] = 0;
        }
        return;
    }
    for (long k = 0; k * w.w[i] <= delta; ++k) {
        cur.e[i] = static_cast<int>(k);
        enumerate_monomials(delta - k * w.w[i], w, i + 1, cur, out);
    }
    cur.e[i] = 0;
}
}  // namespace

std::vector<Monomial> monomial_basis(long delta, const WeightSystem& w) {
    if (delta < 0) throw std::invalid_argument("negative quasi-degree");
    std::vector<Monomial> out;
    if (w.dim() == 0) {
        if (delta == 0) out.push_back(Monomial{});
        return out;
    }
    Monomial cur;
    cur.e.assign(w.dim(), 0);
    enumerate_monomials(delta, w, 0, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

void Series::add_term(long k, const Rat& v) {
    if (v == 0) return;
    auto it = c.find(k);
    if (it == c.end()) {
        c.emplace(k, v);
    } else {
        it->second += v;
        if (it->second == 0) c.erase(it);
    }
}

Series Series::operator+(const Series& o) const {
    Series r = *this;
    for (const auto& [k, v] : o.c) r.add_term(k, v);
    return r;
}

Series Series::operator-(const Series& o) const {
    Series r = *this;
    for (const auto& [k, v] : o.c) r.add_term(k, -v);
    return r;
}

Series Series::operator*(const Series& o) const {
    Series r;
    for (const auto& [k1, v1] : c)
        for (const auto& [k2, v2] : o.c) r.add_term(k1 + k2, v1 * v2);
    return r;
}

Series Series::scaled(const Rat& v) const {
    Series r;
    if (v == 0) return r;
    for (const auto& [k, x] : c) r.c.emplace(k, x * v);
    return r;
}

Series Series::pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative power");
    Series r = Series::monomial(0, rat(1));
    for (int i = 0; i < k; ++i) r = r * (*this);
    return r;
}

Rat Series::coeff(long k) const {
    auto it = c.find(k);
    return it == c.end() ? Rat(0) : it->second;
}

long Series::degree() const { return c.empty() ? -1 : c.rbegin()->first; }

Series Series::derivative() const {
    Series r;
    for (const auto& [k, v] : c)
        if (k > 0) r.add_term(k - 1, v * rat(k));
    return r;
}

Series Series::monomial(long k, const Rat& v) {
    Series r;
    r.add_term(k, v);
    return r;
}

std::string Series::str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c) {
        Rat a = v;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (k == 0) {
            os << rat_str(a);
        } else {
            if (a != 1) os << rat_str(a) << "*";
            os << "t";
            if (k != 1) os << "^" << k;
        }
    }
    return os.str();
}

ExtInt vanishing_order(const Series& s) {
    if (s.c.empty()) return ExtInt::inf();
    return ExtInt::of(s.c.begin()->first);
}

Polynomial Polynomial::constant(int nv, const Rat& v) {
    Polynomial p(nv);
    Monomial one;
    one.e.assign(nv, 0);
    p.add_term(one, v);
    return p;
}

Polynomial Polynomial::variable(int nv, int i) {
    if (i < 0 || i >= nv) throw std::invalid_argument("variable index out of range");
    Polynomial p(nv);
    Monomial m;
    m.e.assign(nv, 0);
    m.e[i] = 1;
    p.add_term(m, rat(1));
    return p;
}

Polynomial Polynomial::term(int nv, const Monomial& m, const Rat& v) {
    if (m.dim() != nv) throw std::invalid_argument("monomial dimension mismatch");
    Polynomial p(nv);
    p.add_term(m, v);
    return p;
}

void Polynomial::add_term(const Monomial& m, const Rat& v) {
    if (m.dim() != nvars) throw std::invalid_argument("monomial dimension mismatch");
    if (v == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, v);
    } else {
        it->second += v;
        if (it->second == 0) terms.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (nvars != o.nvars) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r = *this;
    for (const auto& [m, v] : o.terms) r.add_term(m, v);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    if (nvars != o.nvars) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r = *this;
    for (const auto& [m, v] : o.terms) r.add_term(m, -v);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (nvars != o.nvars) throw std::invalid_argument("polynomial dimension mismatch");
    Polynomial r(nvars);
    for (const auto& [m1, v1] : terms)
        for (const auto& [m2, v2] : o.terms) r.add_term(m1.times(m2), v1 * v2);
    return r;
}

Polynomial Polynomial::scaled(const Rat& v) const {
    Polynomial r(nvars);
    if (v == 0) return r;
    for (const auto& [m, x] : terms) r.terms.emplace(m, x * v);
    return r;
}

Polynomial Polynomial::pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative power");
    Polynomial r = Polynomial::constant(nvars, rat(1));
    for (int i = 0; i < k; ++i) r = r * (*this);
    return r;
}

Polynomial Polynomial::partial_derivative(int i) const {
    if (i < 0 || i >= nvars) throw std::invalid_argument("variable index out of range");
    Polynomial r(nvars);
    for (const auto& [m, v] : terms) {
        if (m.e[i] == 0) continue;
        Monomial d = m;
        d.e[i] -= 1;
        r.add_term(d, v * rat(m.e[i]));
    }
    return r;
}

ExtInt Polynomial::order_at_origin() const {
    if (terms.empty()) return ExtInt::inf();
    long best = -1;
    for (const auto& [m, v] : terms) {
        long d = m.total_degree();
        if (best < 0 || d < best) best = d;
    }
    return ExtInt::of(best);
}

std::optional<long> Polynomial::homogeneous_quasi_degree(const WeightSystem& w) const {
    if (terms.empty()) return 0;
    std::optional<long> d;
    for (const auto& [m, v] : terms) {
        long q = quasi_degree(m, w);
        if (!d)
            d = q;
        else if (*d != q)
            return std::nullopt;
    }
    return d;
}

Series substitute_branch(const Polynomial& p, const BranchParam& b) {
    if (p.nvars != b.dim()) throw std::invalid_argument("branch dimension mismatch");
    Series out;
    for (const auto& [m, v] : p.terms) {
        Series t = Series::monomial(0, v);
        for (int i = 0; i < p.nvars; ++i)
            if (m.e[i] != 0) t = t * b.components[i].pow(m.e[i]);
        out = out + t;
    }
    return out;
}

std::string monomial_str(const Monomial& m, const std::vector<std::string>& vars) {
    if (m.dim() != static_cast<int>(vars.size()))
        throw std::invalid_argument("monomial/variable-name mismatch");
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < vars.size(); ++i) {
        if (m.e[i] == 0) continue;
        if (!first) os << "*";
        first = false;
        os << vars[i];
        if (m.e[i] != 1) os << "^" << m.e[i];
    }
    if (first) return "1";
    return os.str();
}

std::string polynomial_str(const Polynomial& p, const std::vector<std::string>& vars,
                           const WeightSystem* w) {
    if (p.terms.empty()) return "0";
    std::vector<std::pair<Monomial, Rat>> ts(p.terms.begin(), p.terms.end());
    if (w != nullptr) {
        std::stable_sort(ts.begin(), ts.end(),
                         [&](const auto& a, const auto& b) {
                             long qa = quasi_degree(a.first, *w), qb = quasi_degree(b.first, *w);
                             if (qa != qb) return qa < qb;
                             return a.first < b.first;
                         });
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, v] : ts) {
        Rat a = v;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (m.is_constant()) {
            os << rat_str(a);
        } else {
            if (a != 1) os << rat_str(a) << "*";
            os << monomial_str(m, vars);
        }
    }
    return os.str();
}

}  // namespace algrest

#include "algrest/linalg.hpp"

#include <stdexcept>

namespace algrest {

void QMat::append_row(std::vector<Rat> r) {
    if (nrows == 0 && ncols == 0) ncols = r.size();
    if (r.size() != ncols) throw std::invalid_argument("row length mismatch");
    a.push_back(std::move(r));
    ++nrows;
}

QMat QMat::from_rows(std::vector<std::vector<Rat>> rows, size_t ncols) {
    QMat m;
    m.ncols = ncols;
    for (auto& r : rows) m.append_row(std::move(r));
    return m;
}

std::vector<size_t> rref(QMat& m) {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < m.ncols && r < m.nrows; ++c) {
        size_t sel = m.nrows;
        for (size_t i = r; i < m.nrows; ++i) {
            if (m.a[i][c] != 0) {
                sel = i;
                break;
            }
        }
        if (sel == m.nrows) continue;
        std::swap(m.a[r], m.a[sel]);
        Rat inv = 1 / m.a[r][c];
        for (size_t j = c; j < m.ncols; ++j) m.a[r][j] *= inv;
        for (size_t i = 0; i < m.nrows; ++i) {
            if (i == r || m.a[i][c] == 0) continue;
            Rat f = m.a[i][c];
            for (size_t j = c; j < m.ncols; ++j) m.a[i][j] -= f * m.a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.a.resize(r);
    m.nrows = r;
    return pivots;
}

size_t rank(QMat m) { return rref(m).size(); }

void reduce_vector(std::vector<Rat>& v, const QMat& rows, const std::vector<size_t>& pivots) {
    if (rows.nrows != pivots.size()) throw std::invalid_argument("pivot/row mismatch");
    for (size_t i = 0; i < rows.nrows; ++i) {
        Rat f = v[pivots[i]];
        if (f == 0) continue;
        for (size_t j = 0; j < rows.ncols; ++j) v[j] -= f * rows.a[i][j];
    }
}

std::optional<std::vector<Rat>> solve(const QMat& A, const std::vector<Rat>& b) {
    if (A.nrows != b.size()) throw std::invalid_argument("rhs length mismatch");
    QMat aug(A.nrows, A.ncols + 1);
    for (size_t i = 0; i < A.nrows; ++i) {
        for (size_t j = 0; j < A.ncols; ++j) aug.a[i][j] = A.a[i][j];
        aug.a[i][A.ncols] = b[i];
    }
    std::vector<size_t> pivots = rref(aug);
    std::vector<Rat> x(A.ncols, Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == A.ncols) return std::nullopt;  // pivot in the rhs column
        x[pivots[i]] = aug.a[i][A.ncols];
    }
    return x;
}

QMat nullspace(const QMat& A) {
    QMat m = A;
    std::vector<size_t> pivots = rref(m);
    std::vector<bool> is_pivot(A.ncols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    QMat out;
    out.ncols = A.ncols;
    for (size_t c = 0; c < A.ncols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Rat> v(A.ncols, Rat(0));
        v[c] = Rat(1);
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m.a[i][c];
        out.append_row(std::move(v));
    }
    return out;
}

bool is_zero_vector(const std::vector<Rat>& v) {
    for (const Rat& x : v)
        if (x != 0) return false;
    return true;
}

bool SparseEliminator::add(Row r) {
    while (true) {
        // drop explicit zeros
        for (auto it = r.a.begin(); it != r.a.end();) {
            if (it->second == 0)
                it = r.a.erase(it);
            else
                ++it;
        }
        if (r.a.empty()) return r.rhs == 0;
        size_t lead = r.a.begin()->first;
        auto p = pivots_.find(lead);
        if (p == pivots_.end()) {
            Rat inv = 1 / r.a.begin()->second;
            for (auto& [j, v] : r.a) v *= inv;
            r.rhs *= inv;
            pivots_.emplace(lead, std::move(r));
            return true;
        }
        // eliminate the leading variable against the stored pivot row
        Rat f = r.a.begin()->second;
        for (const auto& [j, v] : p->second.a) {
            auto it = r.a.find(j);
            if (it == r.a.end()) {
                r.a.emplace(j, -f * v);
            } else {
                it->second -= f * v;
            }
        }
        r.rhs -= f * p->second.rhs;
    }
}

std::map<size_t, Rat> SparseEliminator::solution() const {
    std::map<size_t, Rat> x;
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
        const Row& row = it->second;
        Rat v = row.rhs;
        for (const auto& [j, aj] : row.a) {
            if (j == it->first) continue;
            auto f = x.find(j);
            if (f != x.end()) v -= aj * f->second;
        }
        if (v != 0) x[it->first] = v;
    }
    return x;
}

}  // namespace algrest

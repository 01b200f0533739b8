#pragma once

#include <map>
#include <optional>
#include <vector>

#include "algrest/rational.hpp"

namespace algrest {

// Dense rational matrix with exact Gaussian elimination. Pivoting is
// deterministic: columns are scanned left to right and the first row with a
// nonzero entry is chosen, so every emitted basis is reproducible.
struct QMat {
    size_t nrows = 0, ncols = 0;
    std::vector<std::vector<Rat>> a;

    QMat() = default;
    QMat(size_t r, size_t c) : nrows(r), ncols(c), a(r, std::vector<Rat>(c, Rat(0))) {}

    std::vector<Rat>& row(size_t i) { return a[i]; }
    const std::vector<Rat>& row(size_t i) const { return a[i]; }
    void append_row(std::vector<Rat> r);

    static QMat from_rows(std::vector<std::vector<Rat>> rows, size_t ncols);
};

// In-place reduced row echelon form; returns the pivot columns (their count is
// the rank). Zero rows are moved to the bottom and dropped.
std::vector<size_t> rref(QMat& m);

size_t rank(QMat m);

// Reduce `v` against RREF rows with the given pivot columns (in place).
void reduce_vector(std::vector<Rat>& v, const QMat& rows, const std::vector<size_t>& pivots);

// Solve A x = b exactly. Returns the particular solution with all free
// variables set to zero, or nullopt when the system is inconsistent.
std::optional<std::vector<Rat>> solve(const QMat& A, const std::vector<Rat>& b);

// Row basis of the right null space of A.
QMat nullspace(const QMat& A);

bool is_zero_vector(const std::vector<Rat>& v);

// Online exact elimination over sparse rows, used by the incremental
// feasibility searches. Rows are equations sum(a_j x_j) = rhs; add() reports
// whether the accumulated system stays consistent.
class SparseEliminator {
  public:
    struct Row {
        std::map<size_t, Rat> a;
        Rat rhs = Rat(0);
    };

    // true = still consistent (row absorbed or redundant); false = infeasible.
    bool add(Row r);

    // Particular solution of the accumulated system (free variables zero).
    // Only valid while consistent.
    std::map<size_t, Rat> solution() const;

    size_t pivot_count() const { return pivots_.size(); }

  private:
    std::map<size_t, Row> pivots_;  // leading variable -> normalized row
};

}  // namespace algrest

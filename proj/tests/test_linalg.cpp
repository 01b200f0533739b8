#include "algrest/linalg.hpp"

#include <random>

#include "doctest.h"

using namespace algrest;

namespace {
QMat mat(std::vector<std::vector<long>> rows) {
    QMat m;
    m.ncols = rows.empty() ? 0 : rows[0].size();
    for (auto& r : rows) {
        std::vector<Rat> row;
        for (long v : r) row.push_back(rat(v));
        m.append_row(std::move(row));
    }
    return m;
}
}  // namespace

TEST_CASE("rref and rank") {
    QMat m = mat({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
    auto pivots = rref(m);
    CHECK(pivots == std::vector<size_t>{0, 1});
    CHECK(m.nrows == 2);
    CHECK(m.a[0] == std::vector<Rat>{rat(1), rat(0), rat(1)});
    CHECK(m.a[1] == std::vector<Rat>{rat(0), rat(1), rat(1)});
    CHECK(rank(mat({{1, 2}, {3, 4}})) == 2);
    CHECK(rank(mat({{1, 2}, {2, 4}})) == 1);
    CHECK(rank(QMat(0, 5)) == 0);
}

TEST_CASE("reduce_vector against rref rows") {
    QMat m = mat({{1, 0, 2}, {0, 1, -1}});
    auto pivots = rref(m);
    std::vector<Rat> v{rat(3), rat(4), rat(1)};
    reduce_vector(v, m, pivots);
    CHECK(v == std::vector<Rat>{rat(0), rat(0), rat(-1)});
}

TEST_CASE("solve") {
    auto x = solve(mat({{1, 1}, {1, -1}}), {rat(3), rat(1)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == rat(2));
    CHECK((*x)[1] == rat(1));
    CHECK(!solve(mat({{1, 1}, {2, 2}}), {rat(1), rat(3)}).has_value());
    // underdetermined: free variables come back zero
    auto y = solve(mat({{1, 1, 1}}), {rat(5)});
    REQUIRE(y.has_value());
    CHECK((*y)[0] == rat(5));
    CHECK((*y)[1] == rat(0));
    CHECK((*y)[2] == rat(0));
}

TEST_CASE("nullspace") {
    QMat n = nullspace(mat({{1, 1, 0}, {0, 0, 1}}));
    REQUIRE(n.nrows == 1);
    CHECK(n.a[0][0] * rat(1) + n.a[0][1] * rat(1) == rat(0));
    CHECK(n.a[0][2] == rat(0));
    CHECK(nullspace(mat({{1, 0}, {0, 1}})).nrows == 0);
}

TEST_CASE("rank-nullity on random matrices") {
    std::mt19937 rng(20240814u);
    std::uniform_int_distribution<int> dim(1, 6), entry(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        size_t r = dim(rng), c = dim(rng);
        QMat a(r, c);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j) a.a[i][j] = rat(entry(rng));
        QMat ns = nullspace(a);
        CHECK(rank(a) + ns.nrows == c);
        for (size_t k = 0; k < ns.nrows; ++k) {
            for (size_t i = 0; i < r; ++i) {
                Rat dot(0);
                for (size_t j = 0; j < c; ++j) dot += a.a[i][j] * ns.a[k][j];
                CHECK(dot == rat(0));
            }
        }
    }
}

TEST_CASE("sparse eliminator consistency tracking") {
    SparseEliminator se;
    SparseEliminator::Row r1{{{0, rat(1)}, {1, rat(1)}}, rat(3)};
    SparseEliminator::Row r2{{{0, rat(1)}, {1, rat(-1)}}, rat(1)};
    CHECK(se.add(r1));
    CHECK(se.add(r2));
    CHECK(se.pivot_count() == 2);
    auto sol = se.solution();
    CHECK(sol[0] == rat(2));
    CHECK(sol[1] == rat(1));
    // redundant row stays consistent, contradictory row does not
    CHECK(se.add(SparseEliminator::Row{{{0, rat(2)}, {1, rat(2)}}, rat(6)}));
    CHECK(!se.add(SparseEliminator::Row{{{0, rat(1)}, {1, rat(1)}}, rat(4)}));
}

TEST_CASE("sparse eliminator agrees with dense solve") {
    std::mt19937 rng(77u);
    std::uniform_int_distribution<int> dim(1, 5), entry(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        size_t r = dim(rng), c = dim(rng);
        QMat a(r, c);
        std::vector<Rat> b(r);
        for (size_t i = 0; i < r; ++i) {
            for (size_t j = 0; j < c; ++j) a.a[i][j] = rat(entry(rng));
            b[i] = rat(entry(rng));
        }
        bool dense_ok = solve(a, b).has_value();
        SparseEliminator se;
        bool sparse_ok = true;
        for (size_t i = 0; i < r && sparse_ok; ++i) {
            SparseEliminator::Row row;
            for (size_t j = 0; j < c; ++j)
                if (a.a[i][j] != 0) row.a[j] = a.a[i][j];
            row.rhs = b[i];
            sparse_ok = se.add(std::move(row));
        }
        CHECK(dense_ok == sparse_ok);
        if (sparse_ok) {
            auto sol = se.solution();
            for (size_t i = 0; i < r; ++i) {
                Rat dot(0);
                for (auto& [j, v] : sol) dot += a.a[i][j] * v;
                CHECK(dot == b[i]);
            }
        }
    }
}

#include "doctest.h"
#include "opcalc/linalg.hpp"

#include <random>

using namespace opcalc;

namespace {

SparseMatrix dense(std::initializer_list<std::initializer_list<int>> rows)
{
    std::vector<std::vector<Rational>> r;
    for (auto row : rows) {
        r.emplace_back();
        for (int x : row)
            r.back().emplace_back(x);
    }
    return SparseMatrix::from_dense(r);
}

// Plain Gauss-Jordan on a dense copy, used as a rank oracle.
std::size_t dense_rank(const SparseMatrix& m)
{
    std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c))
            a[r][c] = v;
    std::size_t rk = 0;
    for (std::size_t c = 0; c < m.cols() && rk < m.rows(); ++c) {
        std::size_t p = rk;
        while (p < m.rows() && a[p][c] == 0)
            ++p;
        if (p == m.rows())
            continue;
        std::swap(a[p], a[rk]);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != rk && a[r][c] != 0) {
                Rational f = a[r][c] / a[rk][c];
                for (std::size_t j = 0; j < m.cols(); ++j)
                    a[r][j] -= f * a[rk][j];
            }
        ++rk;
    }
    return rk;
}

SparseMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int density)
{
    SparseMatrix m(r, c);
    std::uniform_int_distribution<int> val(-3, 3), coin(0, 99);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (coin(rng) < density)
                m.add(i, j, val(rng));
    return m;
}

}  // namespace

TEST_CASE("rational formatting")
{
    CHECK(to_string(parse_rational("3/6")) == "1/2");
    CHECK(to_string(parse_rational("-4/2")) == "-2");
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(parse_rational("7") == 7);
}

TEST_CASE("rank examples")
{
    CHECK(rank(dense({{1, 2}, {2, 4}})) == 1);
    CHECK(rank(SparseMatrix::identity(4)) == 4);
    CHECK(rank(SparseMatrix(3, 5)) == 0);
}

TEST_CASE("kernel of [[1,1]]")
{
    auto k = kernel_basis(dense({{1, 1}}));
    REQUIRE(k.size() == 1);
    CHECK(k[0][0] == -k[0][1]);
    CHECK(k[0][0] != 0);
}

TEST_CASE("solve")
{
    auto m = dense({{1, 2}, {3, 4}});
    auto x = solve(m, {Rational(5), Rational(6)});
    REQUIRE(x);
    CHECK(m.apply(*x) == std::vector<Rational>{5, 6});
    CHECK_FALSE(solve(dense({{1, 1}, {1, 1}}), {Rational(1), Rational(2)}));
}

TEST_CASE("cohomology dimension")
{
    SparseMatrix z(3, 3);
    CHECK(cohomology_dimension(z, z) == 3);
    CHECK(cohomology_dimension(SparseMatrix::identity(3), z) == 0);
    CHECK_THROWS_WITH(cohomology_dimension(SparseMatrix::identity(2), SparseMatrix::identity(2)), "not a complex");
}

TEST_CASE("property: rank-nullity, exact solve, determinism")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
        auto m = random_matrix(rng, r, c, 45);
        CHECK(rank(m) == dense_rank(m));
        auto k = kernel_basis(m);
        CHECK(rank(m) + k.size() == c);
        for (const auto& v : k)
            for (const auto& x : m.apply(v))
                CHECK(x == 0);
        std::vector<Rational> x0(c);
        for (auto& x : x0) {
            x = Rational(static_cast<int>(rng() % 7) - 3, 1 + rng() % 3);
            x.canonicalize();
        }
        auto b = m.apply(x0);
        auto x = solve(m, b);
        REQUIRE(x);
        CHECK(m.apply(*x) == b);
        auto e1 = row_echelon(m), e2 = row_echelon(m);
        CHECK(e1.pivot_cols == e2.pivot_cols);
        CHECK(e1.pivot_order == e2.pivot_order);
    }
}

TEST_CASE("cohomology of a two-step Koszul segment of Q[x]/(x^2)")
{
    // resolution ... -> A --x--> A --x--> A, multiplication by x on basis (1, x)
    auto mx = dense({{0, 0}, {1, 0}});
    // brute force: kernel and image are both spanned by x, so the segment is exact
    CHECK(kernel_basis(mx).size() == 1);
    CHECK(rank(mx) == 1);
    CHECK(cohomology_dimension(mx, mx) == 0);
}

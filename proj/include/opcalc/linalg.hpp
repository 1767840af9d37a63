#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opcalc {

using Rational = mpq_class;
using Integer = mpz_class;

std::string to_string(const Rational& q);   // "p/q", or "p" when q = 1
Rational parse_rational(const std::string& s);

// Column-major sparse matrix; row indices in each column are kept sorted.
class SparseMatrix {
public:
    using Column = std::vector<std::pair<std::size_t, Rational>>;

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_.size(); }

    void add(std::size_t r, std::size_t c, const Rational& v);
    void set(std::size_t r, std::size_t c, const Rational& v);
    Rational get(std::size_t r, std::size_t c) const;
    const Column& column(std::size_t c) const { return cols_.at(c); }
    std::size_t nonzeros() const;
    bool is_zero() const { return nonzeros() == 0; }

    std::vector<Rational> apply(const std::vector<Rational>& x) const;
    SparseMatrix operator*(const SparseMatrix& rhs) const;

    static SparseMatrix identity(std::size_t n);
    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& rows);

private:
    std::size_t rows_ = 0;
    std::vector<Column> cols_;
};

std::size_t rank(const SparseMatrix& m);
std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m);
std::optional<std::vector<Rational>> solve(const SparseMatrix& m, const std::vector<Rational>& b);

// dim ker(d_out) - rank(d_in); throws if d_out * d_in != 0.
std::size_t cohomology_dimension(const SparseMatrix& d_in, const SparseMatrix& d_out);

// Echelon data shared by rank/kernel/solve.
struct Echelon {
    std::vector<std::vector<std::pair<std::size_t, Integer>>> rows;  // pivot rows, leading entry first
    std::vector<std::size_t> pivot_cols;
    std::vector<std::size_t> pivot_order;  // original row index chosen at each step
};
Echelon row_echelon(const SparseMatrix& m);

}  // namespace opcalc

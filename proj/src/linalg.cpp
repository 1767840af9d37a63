#include "opcalc/linalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace opcalc {

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& s)
{
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

void SparseMatrix::add(std::size_t r, std::size_t c, const Rational& v)
{
    if (r >= rows_ || c >= cols_.size())
        throw std::out_of_range("SparseMatrix::add index");
    if (v == 0)
        return;
    auto& col = cols_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::size_t row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
        it->second += v;
        if (it->second == 0)
            col.erase(it);
    }
    else
        col.insert(it, {r, v});
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Rational& v)
{
    if (r >= rows_ || c >= cols_.size())
        throw std::out_of_range("SparseMatrix::set index");
    auto& col = cols_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::size_t row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
        if (v == 0)
            col.erase(it);
        else
            it->second = v;
    }
    else if (v != 0)
        col.insert(it, {r, v});
}

Rational SparseMatrix::get(std::size_t r, std::size_t c) const
{
    const auto& col = cols_.at(c);
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const auto& e, std::size_t row) { return e.first < row; });
    if (it != col.end() && it->first == r)
        return it->second;
    return 0;
}

std::size_t SparseMatrix::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& c : cols_)
        n += c.size();
    return n;
}

std::vector<Rational> SparseMatrix::apply(const std::vector<Rational>& x) const
{
    if (x.size() != cols())
        throw std::invalid_argument("dimension mismatch in apply");
    std::vector<Rational> y(rows_);
    for (std::size_t c = 0; c < cols(); ++c) {
        if (x[c] == 0)
            continue;
        for (const auto& [r, v] : cols_[c])
            y[r] += v * x[c];
    }
    return y;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& rhs) const
{
    if (cols() != rhs.rows())
        throw std::invalid_argument("dimension mismatch in product");
    SparseMatrix out(rows_, rhs.cols());
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
        std::map<std::size_t, Rational> acc;
        for (const auto& [k, v] : rhs.cols_[c])
            for (const auto& [r, w] : cols_[k])
                acc[r] += w * v;
        for (auto& [r, v] : acc)
            if (v != 0)
                out.cols_[c].emplace_back(r, v);
    }
    return out;
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.cols_[i].emplace_back(i, Rational(1));
    return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& rows)
{
    std::size_t nc = rows.empty() ? 0 : rows[0].size();
    SparseMatrix m(rows.size(), nc);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc)
            throw std::invalid_argument("ragged dense matrix");
        for (std::size_t c = 0; c < nc; ++c)
            m.add(r, c, rows[r][c]);
    }
    return m;
}

namespace {

using IRow = std::vector<std::pair<std::size_t, Integer>>;

void normalize_content(IRow& row)
{
    if (row.empty())
        return;
    Integer g = 0;
    for (const auto& e : row) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1)
            break;
    }
    if (row.front().second < 0)
        g = -g;
    if (g != 1)
        for (auto& e : row)
            mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

// row := a*row - b*piv, where a = lead(piv), b = row[c]
void eliminate(IRow& row, const IRow& piv, const Integer& b)
{
    const Integer& a = piv.front().second;
    IRow out;
    out.reserve(row.size() + piv.size());
    std::size_t i = 0, j = 0;
    while (i < row.size() || j < piv.size()) {
        if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
            out.emplace_back(row[i].first, a * row[i].second);
            ++i;
        }
        else if (i == row.size() || piv[j].first < row[i].first) {
            out.emplace_back(piv[j].first, -b * piv[j].second);
            ++j;
        }
        else {
            Integer v = a * row[i].second - b * piv[j].second;
            if (v != 0)
                out.emplace_back(row[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    normalize_content(out);
    row = std::move(out);
}

std::vector<IRow> integer_rows(const SparseMatrix& m)
{
    std::vector<std::vector<std::pair<std::size_t, Rational>>> rrows(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c))
            rrows[r].emplace_back(c, v);
    std::vector<IRow> rows(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Integer l = 1;
        for (const auto& e : rrows[r])
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
        for (const auto& e : rrows[r]) {
            Integer v = e.second.get_num() * (l / e.second.get_den());
            rows[r].emplace_back(e.first, v);
        }
        normalize_content(rows[r]);
    }
    return rows;
}

}  // namespace

Echelon row_echelon(const SparseMatrix& m)
{
    std::vector<IRow> rows = integer_rows(m);
    std::vector<bool> used(rows.size(), false);
    Echelon ech;
    // rows grouped by current leading column
    std::map<std::size_t, std::vector<std::size_t>> by_lead;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (!rows[r].empty())
            by_lead[rows[r].front().first].push_back(r);
    while (!by_lead.empty()) {
        auto it = by_lead.begin();
        std::size_t c = it->first;
        std::vector<std::size_t> cand = std::move(it->second);
        by_lead.erase(it);
        std::sort(cand.begin(), cand.end());
        std::size_t best = cand[0];
        for (std::size_t r : cand)
            if (rows[r].size() < rows[best].size())
                best = r;
        used[best] = true;
        for (std::size_t r : cand) {
            if (r == best)
                continue;
            Integer b = rows[r].front().second;
            eliminate(rows[r], rows[best], b);
            if (!rows[r].empty())
                by_lead[rows[r].front().first].push_back(r);
        }
        ech.pivot_cols.push_back(c);
        ech.pivot_order.push_back(best);
        ech.rows.push_back(std::move(rows[best]));
    }
    return ech;
}

std::size_t rank(const SparseMatrix& m)
{
    return row_echelon(m).pivot_cols.size();
}

namespace {

// Back substitution on an echelon form: x[pivot] determined by fixed values of the other columns.
void back_substitute(const Echelon& ech, std::vector<Rational>& x, const std::vector<Rational>* rhs)
{
    for (std::size_t i = ech.rows.size(); i-- > 0;) {
        const auto& row = ech.rows[i];
        Rational s = rhs ? (*rhs)[i] : Rational(0);
        for (std::size_t j = 1; j < row.size(); ++j)
            if (x[row[j].first] != 0)
                s -= Rational(row[j].second) * x[row[j].first];
        x[row.front().first] = s / Rational(row.front().second);
    }
}

}  // namespace

std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m)
{
    Echelon ech = row_echelon(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : ech.pivot_cols)
        is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        std::vector<Rational> x(m.cols());
        x[f] = 1;
        back_substitute(ech, x, nullptr);
        basis.push_back(std::move(x));
    }
    return basis;
}

std::optional<std::vector<Rational>> solve(const SparseMatrix& m, const std::vector<Rational>& b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("dimension mismatch in solve");
    // augment with b as the last column; the b column is never a pivot of a consistent system
    SparseMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c))
            aug.add(r, c, v);
    for (std::size_t r = 0; r < b.size(); ++r)
        aug.add(r, m.cols(), b[r]);
    Echelon ech = row_echelon(aug);
    Echelon core;
    std::vector<Rational> rhs;
    for (std::size_t i = 0; i < ech.rows.size(); ++i) {
        if (ech.pivot_cols[i] == m.cols())
            return std::nullopt;
        auto row = ech.rows[i];
        Rational last = 0;
        if (!row.empty() && row.back().first == m.cols()) {
            last = Rational(row.back().second);
            row.pop_back();
        }
        core.rows.push_back(std::move(row));
        core.pivot_cols.push_back(ech.pivot_cols[i]);
        rhs.push_back(last);
    }
    std::vector<Rational> x(m.cols());
    back_substitute(core, x, &rhs);
    return x;
}

std::size_t cohomology_dimension(const SparseMatrix& d_in, const SparseMatrix& d_out)
{
    if (d_in.rows() != d_out.cols())
        throw std::invalid_argument("dimension mismatch in cohomology_dimension");
    if (!(d_out * d_in).is_zero())
        throw std::runtime_error("not a complex");
    return d_out.cols() - rank(d_out) - rank(d_in);
}

}  // namespace opcalc

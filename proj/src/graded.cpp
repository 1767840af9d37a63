#include "opcalc/graded.hpp"

#include <algorithm>
#include <stdexcept>

namespace opcalc {

int GradedSpace::index_of(const std::string& label) const
{
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i].first == label)
            return static_cast<int>(i);
    throw std::out_of_range("unknown basis label " + label);
}

void GradedElement::add(const std::string& label, const Rational& c)
{
    Rational& x = coeffs[label];
    x += c;
    if (x == 0)
        coeffs.erase(label);
}

int GradedElement::degree() const
{
    if (coeffs.empty() || !space)
        throw std::logic_error("degree of zero element");
    int d = space->degree(space->index_of(coeffs.begin()->first));
    for (const auto& [l, c] : coeffs)
        if (space->degree(space->index_of(l)) != d)
            throw std::logic_error("inhomogeneous element");
    return d;
}

static void check_perm(const std::vector<int>& perm, std::size_t n)
{
    if (perm.size() != n)
        throw std::invalid_argument("permutation length mismatch");
    std::vector<bool> seen(n, false);
    for (int x : perm) {
        if (x < 0 || static_cast<std::size_t>(x) >= n || seen[x])
            throw std::invalid_argument("not a permutation");
        seen[x] = true;
    }
}

int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees)
{
    check_perm(perm, degrees.size());
    long e = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j])
                e += static_cast<long>(degrees[perm[i]]) * degrees[perm[j]];
    return sign_of(e);
}

bool is_shuffle(const std::vector<int>& perm, int p)
{
    for (int i = 0; i + 1 < p; ++i)
        if (perm[i] > perm[i + 1])
            return false;
    for (std::size_t i = p; i + 1 < perm.size(); ++i)
        if (perm[i] > perm[i + 1])
            return false;
    return true;
}

int sign_eta(const std::vector<int>& lambda, int p, int t, const std::vector<int>& v_degrees,
             const std::vector<int>& a_degrees)
{
    check_perm(lambda, v_degrees.size());
    if (!is_shuffle(lambda, p))
        throw std::invalid_argument("lambda is not a shuffle");
    long e = koszul_sign(lambda, v_degrees) < 0 ? 1 : 0;
    for (int i = 0; i < t; ++i)
        for (std::size_t j = p; j < lambda.size(); ++j)
            e += static_cast<long>(v_degrees[lambda[j]]) * (a_degrees.at(i) + 1);
    return sign_of(e);
}

int sign_eps_tp(const std::vector<int>& lambda, int t, int p, const std::vector<int>& v_degrees,
                const std::vector<int>& a_degrees)
{
    check_perm(lambda, v_degrees.size());
    if (!is_shuffle(lambda, p))
        throw std::invalid_argument("lambda is not a shuffle");
    if (t < 1)
        throw std::invalid_argument("t must be at least 1");
    long e = 0;
    for (int j = 0; j < p; ++j)
        e += v_degrees[lambda[j]];
    for (std::size_t j = p; j < lambda.size(); ++j)
        for (int l = 0; l < t - 1; ++l)
            e += static_cast<long>(v_degrees[lambda[j]]) * (a_degrees.at(l) + 1);
    for (int l = 0; l < t - 1; ++l)
        e += a_degrees.at(l) + 1;
    return sign_of(e);
}

std::vector<std::vector<int>> shuffles(int p, int k)
{
    std::vector<std::vector<int>> out;
    if (p < 0 || p > k)
        return out;
    std::vector<int> sel(p);
    for (int i = 0; i < p; ++i)
        sel[i] = i;
    while (true) {
        std::vector<int> perm(sel);
        std::vector<bool> in(k, false);
        for (int x : sel)
            in[x] = true;
        for (int i = 0; i < k; ++i)
            if (!in[i])
                perm.push_back(i);
        out.push_back(std::move(perm));
        int i = p - 1;
        while (i >= 0 && sel[i] == k - p + i)
            --i;
        if (i < 0)
            break;
        ++sel[i];
        for (int j = i + 1; j < p; ++j)
            sel[j] = sel[j - 1] + 1;
    }
    return out;
}

int transposition_chain_sign(const std::vector<int>& perm, const std::vector<int>& degrees)
{
    check_perm(perm, degrees.size());
    // bubble the current arrangement (identity) into perm, one adjacent swap at a time
    std::vector<int> cur(perm.size());
    for (std::size_t i = 0; i < cur.size(); ++i)
        cur[i] = static_cast<int>(i);
    int s = 1;
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
        std::size_t j = std::find(cur.begin(), cur.end(), perm[pos]) - cur.begin();
        while (j > pos) {
            if (parity(degrees[cur[j]]) && parity(degrees[cur[j - 1]]))
                s = -s;
            std::swap(cur[j], cur[j - 1]);
            --j;
        }
    }
    return s;
}

}  // namespace opcalc

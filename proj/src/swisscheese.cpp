#include "opcalc/swisscheese.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace opcalc {

int TwoColoredTree::min_leaf() const
{
    if (is_leaf()) return leaf;
    int m = children.at(0).min_leaf();
    for (const auto& c : children) m = std::min(m, c.min_leaf());
    return m;
}

int TwoColoredTree::vertex_count() const
{
    if (is_leaf()) return 0;
    int s = 1;
    for (const auto& c : children) s += c.vertex_count();
    return s;
}

std::string TwoColoredTree::str() const
{
    if (is_leaf()) return std::string(1, color) + "(" + std::to_string(leaf) + ")";
    std::string s(1, color);
    s += "[";
    bool first = true;
    for (const auto& c : children)
        if (c.color == 'c') {
            s += (first ? "" : ",") + c.str();
            first = false;
        }
    if (color == 'o') {
        s += ";";
        first = true;
        for (const auto& c : children)
            if (c.color == 'o') {
                s += (first ? "" : ",") + c.str();
                first = false;
            }
    }
    return s + "]";
}

void canonicalize(TwoColoredTree& t)
{
    for (auto& c : t.children) canonicalize(c);
    std::sort(t.children.begin(), t.children.end(), [](const auto& a, const auto& b) {
        return std::pair(a.color, a.min_leaf()) < std::pair(b.color, b.min_leaf());
    });
}

TwoColoredTree parse_tree(const std::string& s)
{
    std::size_t i = 0;
    auto fail = [&]() -> TwoColoredTree { throw std::invalid_argument("cannot parse tree at position " + std::to_string(i) + ": " + s); };
    std::function<TwoColoredTree()> node = [&]() -> TwoColoredTree {
        if (i >= s.size() || (s[i] != 'c' && s[i] != 'o')) return fail();
        TwoColoredTree t;
        t.color = s[i++];
        if (i < s.size() && s[i] == '(') {
            std::size_t j = s.find(')', i);
            if (j == std::string::npos) return fail();
            t.leaf = std::stoi(s.substr(i + 1, j - i - 1));
            if (t.leaf <= 0) return fail();
            i = j + 1;
            return t;
        }
        if (i >= s.size() || s[i] != '[') return fail();
        ++i;
        while (i < s.size() && s[i] != ']') {
            if (s[i] == ',' || s[i] == ';') {
                ++i;
                continue;
            }
            t.children.push_back(node());
        }
        if (i >= s.size()) return fail();
        ++i;
        if (t.children.empty()) return fail();
        return t;
    };
    auto t = node();
    if (i != s.size()) fail();
    canonicalize(t);
    return t;
}

namespace {

std::pair<int, int> input_counts(const TwoColoredTree& t)
{
    int k = 0, n = 0;
    for (const auto& c : t.children) (c.color == 'c' ? k : n) += 1;
    return {k, n};
}

bool vertex_ok(char color, int k, int n) { return color == 'c' ? (n == 0 && k >= 2) : (2 * k + n >= 2); }

void vertices(const TwoColoredTree& t, const std::function<void(const TwoColoredTree&)>& f)
{
    if (t.is_leaf()) return;
    f(t);
    for (const auto& c : t.children) vertices(c, f);
}

// All trees obtained by splitting one vertex of t (a subset of its inputs moves to a new vertex below it).
void splits(const TwoColoredTree& t, const std::function<void(TwoColoredTree)>& emit)
{
    if (t.is_leaf()) return;
    const std::size_t m = t.children.size();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        TwoColoredTree u, rest;
        rest.color = t.color;
        for (std::size_t i = 0; i < m; ++i) (mask >> i & 1 ? u : rest).children.push_back(t.children[i]);
        auto [ku, nu] = input_counts(u);
        for (char y : {'c', 'o'}) {
            if (!vertex_ok(y, ku, nu)) continue;
            u.color = y;
            TwoColoredTree v = rest;
            v.children.push_back(u);
            auto [kv, nv] = input_counts(v);
            if (!vertex_ok(v.color, kv, nv)) continue;
            canonicalize(v);
            emit(std::move(v));
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        splits(t.children[i], [&](TwoColoredTree c) {
            TwoColoredTree v = t;
            v.children[i] = std::move(c);
            canonicalize(v);
            emit(std::move(v));
        });
}

}  // namespace

bool is_admissible(const TwoColoredTree& t)
{
    bool ok = true;
    vertices(t, [&](const TwoColoredTree& v) {
        auto [k, n] = input_counts(v);
        ok = ok && vertex_ok(v.color, k, n);
    });
    return ok;
}

std::vector<TwoColoredTree> enumerate_trees(int k, int n, char root)
{
    if (k + n > max_tree_bound) throw CutoffOverflow("tree bound k + n <= " + std::to_string(max_tree_bound));
    if (k < 0 || n < 0 || k + n < 1) throw std::invalid_argument("enumerate_trees needs k + n >= 1");
    TwoColoredTree corolla;
    corolla.color = root;
    for (int i = 1; i <= k + n; ++i) corolla.children.push_back({i <= k ? 'c' : 'o', i, {}});
    if (!vertex_ok(root, k, n)) return {};
    std::set<TwoColoredTree> seen{corolla};
    std::vector<TwoColoredTree> frontier{corolla};
    while (!frontier.empty()) {
        std::vector<TwoColoredTree> next;
        for (const auto& t : frontier)
            splits(t, [&](TwoColoredTree s) {
                if (seen.insert(s).second) next.push_back(std::move(s));
            });
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

int stratum_dimension(const TwoColoredTree& t)
{
    int d = 0;
    vertices(t, [&](const TwoColoredTree& v) {
        auto [k, n] = input_counts(v);
        if (!vertex_ok(v.color, k, n)) throw std::invalid_argument("degenerate vertex in " + t.str());
        d += v.color == 'c' ? 2 * k - 3 : 2 * k + n - 2;
    });
    return d;
}

int e1_degree(const TwoColoredTree& t, int q)
{
    int d = q;
    vertices(t, [&](const TwoColoredTree& v) {
        auto [k, n] = input_counts(v);
        d += (v.color == 'c' ? 2 - 2 * k : 1 - 2 * k - n) + 1;
    });
    return d;
}

std::vector<long> vertex_poincare(char color, int k, int n)
{
    std::vector<long> p{1};
    for (int j = 1; j < k; ++j) {
        std::vector<long> r(p.size() + 1, 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            r[i] += p[i];
            r[i + 1] += j * p[i];
        }
        p = r;
    }
    if (color == 'o')
        for (int j = 2; j <= n; ++j)
            for (auto& x : p) x *= j;
    return p;
}

TwoColoredTree shape_of(const ColoredTree& t)
{
    std::function<TwoColoredTree(int)> rec = [&](int i) {
        const auto& v = t.v[i];
        TwoColoredTree s;
        s.color = v.dec.out;
        for (int l : v.dec.labels()) {
            auto it = std::find_if(v.children.begin(), v.children.end(), [&](auto& ch) { return ch.first == l; });
            if (it != v.children.end())
                s.children.push_back(rec(it->second));
            else
                s.children.push_back({v.dec.input_color(l), l, {}});
        }
        return s;
    };
    auto s = rec(0);
    canonicalize(s);
    return s;
}

E1Table e1_dimension_table(int k, int n, char root, int dmin, int dmax)
{
    E1Table r{k, n, root, dmin, dmax, {}, {}};
    for (const auto& t : enumerate_trees(k, n, root)) {
        std::vector<long> poly{1};
        vertices(t, [&](const TwoColoredTree& v) {
            auto [kv, nv] = input_counts(v);
            auto p = vertex_poincare(v.color, kv, nv);
            std::vector<long> prod(poly.size() + p.size() - 1, 0);
            for (std::size_t i = 0; i < poly.size(); ++i)
                for (std::size_t j = 0; j < p.size(); ++j) prod[i + j] += poly[i] * p[j];
            poly = prod;
        });
        for (std::size_t q = 0; q < poly.size(); ++q) {
            int d = e1_degree(t, static_cast<int>(q));
            if (d >= dmin && d <= dmax && poly[q]) r.enumeration[d] += poly[q];
        }
    }
    auto table = build_cooperad_tables(CoopKind::sc, std::max(k + n, 1));
    for (const auto& t : cobar_basis(table, {k, n, root})) {
        int d = t.degree();
        if (d >= dmin && d <= dmax) r.cobar[d] += 1;
    }
    if (r.enumeration != r.cobar)
        throw std::logic_error("E1 dimension routes disagree for (" + std::to_string(k) + "," + std::to_string(n) +
                               "," + std::string(1, root) + ")");
    return r;
}

std::vector<std::string> check_d1_dimension_drop(int k, int n, char root)
{
    std::vector<std::string> fails;
    auto table = build_cooperad_tables(CoopKind::sc, std::max(k + n, 1));
    for (const auto& t : cobar_basis(table, {k, n, root})) {
        int d = stratum_dimension(shape_of(t));
        for (const auto& [img, c] : cobar_differential(t, table))
            if (stratum_dimension(shape_of(img)) != d - 1) fails.push_back(t.str() + " -> " + img.str());
    }
    return fails;
}

}  // namespace opcalc

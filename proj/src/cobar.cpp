#include "opcalc/cobar.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace opcalc {

namespace {

int sort_sign(const std::vector<int>& seq)
{
    int inv = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            inv += seq[i] > seq[j];
    return inv % 2 ? -1 : 1;
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

void normal_form_rec(ArnoldMonomial m, Rational c, std::map<ArnoldMonomial, Rational>& out)
{
    for (auto& e : m)
        if (e.first > e.second) std::swap(e.first, e.second);
    auto key = [](const std::pair<int, int>& e) { return std::pair(e.second, e.first); };
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j + 1 < m.size() - i; ++j)
            if (key(m[j]) > key(m[j + 1])) {
                std::swap(m[j], m[j + 1]);
                c = -c;
            }
    for (std::size_t i = 0; i + 1 < m.size(); ++i)
        if (m[i] == m[i + 1]) return;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        if (m[i].second != m[i + 1].second) continue;
        // w_ab w_cb = -w_cb w_ac - w_ac w_ab  (a < c < b)
        int a = m[i].first, cc = m[i + 1].first, b = m[i].second;
        auto m1 = m, m2 = m;
        m1[i] = {cc, b};
        m1[i + 1] = {a, cc};
        m2[i] = {a, cc};
        m2[i + 1] = {a, b};
        normal_form_rec(std::move(m1), -c, out);
        normal_form_rec(std::move(m2), -c, out);
        return;
    }
    auto& slot = out[m];
    slot += c;
    if (slot == 0) out.erase(m);
}

bool valid_arity(char out, int k, int n)
{
    return out == 'c' ? (k >= 2 && n == 0) : (2 * k + n >= 2);
}

bool omega_allowed(CoopKind kind, char out)
{
    switch (kind) {
    case CoopKind::GerVee: return true;
    case CoopKind::S: return out == 'c';
    case CoopKind::OCVee: return false;
    case CoopKind::sc: return true;
    }
    return false;
}

// Arnold normal monomials on increasing labels: each label picks a smaller parent or none.
void forests(const std::vector<int>& labels, std::size_t i, ArnoldMonomial& cur, std::vector<ArnoldMonomial>& out)
{
    if (i == labels.size()) {
        out.push_back(cur);
        return;
    }
    forests(labels, i + 1, cur, out);
    for (std::size_t j = 0; j < i; ++j) {
        cur.push_back({labels[j], labels[i]});
        forests(labels, i + 1, cur, out);
        cur.pop_back();
    }
}

using TermKey = std::pair<CoopElem, CoopElem>;

// Cocomposition on the cohomology of the configuration spaces, twisted by the degree shifts.
// A cluster of c-labels B either collides in the interior (inner output c) or, together with a run R
// of the o-labels, at a point of the boundary line (inner output o). Arnold classes restrict to the
// pieces; a class joining B to its complement becomes w_{*b} in the first case and vanishes in the second.
std::vector<CoopTerm> raw_cocompose(const CoopElem& e)
{
    std::map<TermKey, Rational> acc;
    const int k = e.k(), n = e.n();
    const int sign_e = sort_sign(e.olabels);

    auto emit = [&](const std::vector<int>& B, const std::vector<int>& R, char y, int pos) {
        int star = std::numeric_limits<int>::max();
        for (int b : B) star = std::min(star, b);
        for (int r : R) star = std::min(star, r);
        ArnoldMonomial mo, mi;
        int kunneth = 0, inner_seen = 0;
        for (auto [a, b] : e.omega) {
            bool ia = contains(B, a), ib = contains(B, b);
            if (ia && ib) {
                mi.push_back({a, b});
                ++inner_seen;
            } else if (!ia && !ib) {
                mo.push_back({a, b});
                kunneth += inner_seen;
            } else {
                if (y == 'o') return;
                int other = ia ? b : a;
                mo.push_back({std::min(star, other), std::max(star, other)});
                kunneth += inner_seen;
            }
        }
        CoopElem outer, inner;
        outer.out = e.out;
        inner.out = y;
        inner.clabels = B;
        for (int c : e.clabels)
            if (!contains(B, c)) outer.clabels.push_back(c);
        if (y == 'c') {
            outer.clabels.push_back(star);
            std::sort(outer.clabels.begin(), outer.clabels.end());
            outer.olabels = e.olabels;
        } else {
            inner.olabels = R;
            if (R.empty()) {
                outer.olabels = e.olabels;
                outer.olabels.insert(outer.olabels.begin() + pos, star);
            } else {
                for (int i = 0; i < n; ++i) {
                    if (i == pos) outer.olabels.push_back(star);
                    if (i < pos || i >= pos + static_cast<int>(R.size())) outer.olabels.push_back(e.olabels[i]);
                }
            }
        }
        int sign = kunneth % 2 ? -1 : 1;
        if (y == 'o') {
            int at = static_cast<int>(std::find(outer.olabels.begin(), outer.olabels.end(), star) - outer.olabels.begin());
            int after = outer.n() - 1 - at;
            if ((1 + static_cast<int>(R.size())) * after % 2) sign = -sign;
        }
        int eout = e.out == 'o' ? 1 + outer.n() : 0;
        if (eout % 2 && mi.size() % 2) sign = -sign;
        sign *= sign_e * sort_sign(outer.olabels) * sort_sign(inner.olabels);
        auto nfo = arnold_normal_form(mo);
        auto nfi = arnold_normal_form(mi);
        for (const auto& [po, co] : nfo)
            for (const auto& [pi, ci] : nfi) {
                outer.omega = po;
                inner.omega = pi;
                acc[{outer, inner}] += sign * co * ci;
            }
    };

    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        std::vector<int> B;
        for (int i = 0; i < k; ++i)
            if (mask >> i & 1) B.push_back(e.clabels[i]);
        const int b = static_cast<int>(B.size());
        if (b >= 2 && !(e.out == 'c' && b == k)) emit(B, {}, 'c', -1);
        if (e.out != 'o') continue;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                std::vector<int> R(e.olabels.begin() + i, e.olabels.begin() + j + 1);
                int r = static_cast<int>(R.size());
                if (2 * b + r < 2 || (b == k && r == n)) continue;
                emit(B, R, 'o', i);
            }
        if (b >= 1 && !(b == k && n == 0))
            for (int pos = 0; pos <= n; ++pos) emit(B, {}, 'o', pos);
    }
    std::vector<CoopTerm> out;
    for (auto& [key, c] : acc)
        if (c != 0) out.push_back({c, key.first, key.second});
    return out;
}

int parity_of(const CoopElem& e, bool suspended) { return (e.degree() + (suspended ? 1 : 0)) & 1; }

std::pair<ColoredTree, int> make_tree_p(const std::vector<TreeVertex>& raw, bool suspended)
{
    std::vector<int> order;
    std::vector<char> seen(raw.size(), 0);
    std::function<void(int)> dfs = [&](int r) {
        if (seen.at(r)) throw std::logic_error("tree: vertex reached twice");
        seen[r] = 1;
        order.push_back(r);
        auto ch = raw[r].children;
        std::sort(ch.begin(), ch.end(), [&](const auto& x, const auto& y) {
            return std::pair(raw[r].dec.input_color(x.first), x.first) <
                   std::pair(raw[r].dec.input_color(y.first), y.first);
        });
        for (const auto& [label, idx] : ch) dfs(idx);
    };
    dfs(0);
    if (order.size() != raw.size()) throw std::logic_error("tree: unreachable vertex");
    std::vector<int> pos(raw.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    ColoredTree t;
    t.v.resize(raw.size());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        auto& v = t.v[pos[r]];
        v.dec = raw[r].dec;
        for (const auto& [label, idx] : raw[r].children) v.children.push_back({label, pos[idx]});
        std::sort(v.children.begin(), v.children.end());
    }
    int inv = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (order[i] > order[j] && parity_of(raw[order[i]].dec, suspended) &&
                parity_of(raw[order[j]].dec, suspended))
                ++inv;
    return {std::move(t), inv % 2 ? -1 : 1};
}

// Apply the cocomposition to vertex j. With `suspended`, the signs are those of the cobar differential.
std::vector<std::pair<ColoredTree, Rational>> split_vertex(const ColoredTree& t, std::size_t j, const CooperadTable& table,
                                                           bool suspended)
{
    std::vector<std::pair<ColoredTree, Rational>> out;
    const auto& vj = t.v[j];
    int pre = 0;
    for (std::size_t i = 0; i < j; ++i) pre += t.v[i].dec.degree() + 1;
    auto shift = [&](int idx) { return idx > static_cast<int>(j) ? idx + 1 : idx; };
    for (const auto& term : table.cocompose(vj.dec)) {
        auto inl = term.inner.labels();
        int star = *std::min_element(inl.begin(), inl.end());
        std::vector<TreeVertex> raw;
        raw.reserve(t.v.size() + 1);
        for (std::size_t i = 0; i < t.v.size(); ++i) {
            if (i == j) {
                TreeVertex o{term.outer, {}}, in{term.inner, {}};
                for (const auto& [label, idx] : vj.children) {
                    if (contains(inl, label))
                        in.children.push_back({label, shift(idx)});
                    else
                        o.children.push_back({label, shift(idx)});
                }
                o.children.push_back({star, static_cast<int>(j) + 1});
                std::sort(o.children.begin(), o.children.end());
                raw.push_back(std::move(o));
                raw.push_back(std::move(in));
            } else {
                TreeVertex w = t.v[i];
                for (auto& ch : w.children) ch.second = shift(ch.second);
                raw.push_back(std::move(w));
            }
        }
        auto [tree, s] = make_tree_p(raw, suspended);
        Rational c = term.coef * s;
        if (suspended) {
            if (pre % 2) c = -c;
            if (term.outer.degree() % 2) c = -c;
        }
        out.push_back({std::move(tree), c});
    }
    return out;
}

std::vector<std::vector<std::vector<int>>> set_partitions(const std::vector<int>& xs)
{
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == xs.size()) {
            out.push_back(cur);
            return;
        }
        for (std::size_t b = 0; b < cur.size(); ++b) {
            cur[b].push_back(xs[i]);
            rec(i + 1);
            cur[b].pop_back();
        }
        cur.push_back({xs[i]});
        rec(i + 1);
        cur.pop_back();
    };
    rec(0);
    return out;
}

}  // namespace

CoopKind parse_coop_kind(const std::string& s)
{
    if (s == "GerVee") return CoopKind::GerVee;
    if (s == "S") return CoopKind::S;
    if (s == "OCVee") return CoopKind::OCVee;
    if (s == "sc") return CoopKind::sc;
    throw std::invalid_argument("unknown cooperad: " + s);
}

std::string to_string(CoopKind k)
{
    switch (k) {
    case CoopKind::GerVee: return "GerVee";
    case CoopKind::S: return "S";
    case CoopKind::OCVee: return "OCVee";
    case CoopKind::sc: return "sc";
    }
    return "?";
}

std::map<ArnoldMonomial, Rational> arnold_normal_form(const ArnoldMonomial& product)
{
    std::map<ArnoldMonomial, Rational> out;
    normal_form_rec(product, 1, out);
    return out;
}

int CoopElem::degree() const
{
    int w = static_cast<int>(omega.size());
    return out == 'c' ? w + 2 - 2 * k() : w + 1 - 2 * k() - n();
}

char CoopElem::input_color(int label) const
{
    if (std::binary_search(clabels.begin(), clabels.end(), label)) return 'c';
    if (contains(olabels, label)) return 'o';
    throw std::logic_error("no input labelled " + std::to_string(label));
}

std::vector<int> CoopElem::labels() const
{
    auto l = clabels;
    l.insert(l.end(), olabels.begin(), olabels.end());
    return l;
}

std::string CoopElem::str() const
{
    std::ostringstream os;
    os << out << "(";
    for (std::size_t i = 0; i < clabels.size(); ++i) os << (i ? "," : "") << clabels[i];
    if (out == 'o') {
        os << ";";
        for (std::size_t i = 0; i < olabels.size(); ++i) os << (i ? "," : "") << olabels[i];
    }
    os << ")";
    for (auto [a, b] : omega) os << "w" << a << "." << b;
    return os.str();
}

bool CooperadTable::allows(const CoopElem& e) const
{
    if (kind == CoopKind::GerVee && e.out != 'c') return false;
    if (!valid_arity(e.out, e.k(), e.n())) return false;
    return e.omega.empty() || omega_allowed(kind, e.out);
}

std::vector<CoopElem> CooperadTable::basis_on(char out, const std::vector<int>& c, const std::vector<int>& o) const
{
    std::vector<CoopElem> res;
    if (kind == CoopKind::GerVee && out != 'c') return res;
    if (!valid_arity(out, static_cast<int>(c.size()), static_cast<int>(o.size()))) return res;
    CoopElem e;
    e.out = out;
    e.clabels = c;
    std::sort(e.clabels.begin(), e.clabels.end());
    std::vector<ArnoldMonomial> fs;
    ArnoldMonomial cur;
    if (omega_allowed(kind, out))
        forests(e.clabels, 0, cur, fs);
    else
        fs.push_back({});
    auto ord = o;
    std::sort(ord.begin(), ord.end());
    do {
        e.olabels = ord;
        for (const auto& f : fs) {
            e.omega = f;
            res.push_back(e);
        }
    } while (std::next_permutation(ord.begin(), ord.end()));
    std::sort(res.begin(), res.end());
    return res;
}

std::map<CoopElem, Rational> relabel(const CoopElem& e, const std::map<int, int>& pi)
{
    auto f = [&](int x) { return pi.at(x); };
    CoopElem r;
    r.out = e.out;
    for (int c : e.clabels) r.clabels.push_back(f(c));
    std::sort(r.clabels.begin(), r.clabels.end());
    for (int o : e.olabels) r.olabels.push_back(f(o));
    ArnoldMonomial m;
    for (auto [a, b] : e.omega) m.push_back({f(a), f(b)});
    int sign = sort_sign(e.olabels) * sort_sign(r.olabels);
    std::map<CoopElem, Rational> out;
    for (const auto& [mono, c] : arnold_normal_form(m)) {
        r.omega = mono;
        out[r] += sign * c;
    }
    return out;
}

std::vector<CoopTerm> CooperadTable::cocompose(const CoopElem& e) const
{
    if (e.k() + e.n() > cutoff) throw CutoffOverflow("cooperad arity " + std::to_string(e.k() + e.n()) +
                                                     " exceeds the table cutoff " + std::to_string(cutoff));
    // order-preserving standardization on each color
    auto cs = e.clabels;
    auto os = e.olabels;
    std::sort(os.begin(), os.end());
    std::map<int, int> to_std, from_std;
    int next = 1;
    for (int c : cs) to_std[c] = next++;
    for (int o : os) to_std[o] = next++;
    for (auto [a, b] : to_std) from_std[b] = a;
    CoopElem s;
    s.out = e.out;
    for (int c : e.clabels) s.clabels.push_back(to_std[c]);
    for (int o : e.olabels) s.olabels.push_back(to_std[o]);
    for (auto [a, b] : e.omega) s.omega.push_back({to_std[a], to_std[b]});
    auto it = delta.find(s);
    if (it == delta.end()) throw std::logic_error("not a basis element of the table: " + e.str());
    bool identity = true;
    for (auto [a, b] : to_std) identity = identity && a == b;
    if (identity) return it->second;

    std::map<TermKey, Rational> acc;
    for (const auto& term : it->second) {
        auto inner = relabel(term.inner, from_std);  // order-preserving on each color: a single basis element
        const auto& [in, cin] = *inner.begin();
        auto il = in.labels();
        int star = *std::min_element(il.begin(), il.end());
        auto sil = term.inner.labels();
        int sstar = *std::min_element(sil.begin(), sil.end());
        std::map<int, int> po;
        for (int l : term.outer.labels()) po[l] = l == sstar ? star : from_std.at(l);
        for (const auto& [out, cout] : relabel(term.outer, po)) acc[{out, in}] += term.coef * cin * cout;
    }
    std::vector<CoopTerm> res;
    for (auto& [key, c] : acc)
        if (c != 0) res.push_back({c, key.first, key.second});
    return res;
}

CooperadTable build_cooperad_tables(CoopKind which, int cutoff)
{
    if (cutoff < 1 || cutoff > max_cooperad_cutoff)
        throw CutoffOverflow("cooperad cutoff must lie in 1.." + std::to_string(max_cooperad_cutoff));
    CooperadTable t;
    t.kind = which;
    t.cutoff = cutoff;
    for (int k = 0; k <= cutoff; ++k)
        for (int n = 0; k + n <= cutoff; ++n)
            for (char out : {'c', 'o'}) {
                std::vector<int> c, o;
                for (int i = 1; i <= k; ++i) c.push_back(i);
                for (int i = k + 1; i <= k + n; ++i) o.push_back(i);
                auto b = t.basis_on(out, c, o);
                if (b.empty()) continue;
                for (const auto& e : b) {
                    auto terms = raw_cocompose(e);
                    for (const auto& term : terms)
                        if (!t.allows(term.outer) || !t.allows(term.inner))
                            throw std::logic_error("cocomposition leaves the cooperad at " + e.str());
                    t.delta[e] = std::move(terms);
                }
                t.basis[{k, n, out}] = std::move(b);
            }
    return t;
}

namespace {

std::map<TermKey, Rational> as_map(const std::vector<CoopTerm>& terms)
{
    std::map<TermKey, Rational> m;
    for (const auto& t : terms) {
        auto& s = m[{t.outer, t.inner}];
        s += t.coef;
        if (s == 0) m.erase({t.outer, t.inner});
    }
    return m;
}

std::vector<int> leaves_under(const ColoredTree& t, int v)
{
    std::vector<int> out;
    const auto& vert = t.v[v];
    for (int l : vert.dec.labels()) {
        auto it = std::find_if(vert.children.begin(), vert.children.end(), [&](auto& ch) { return ch.first == l; });
        if (it == vert.children.end()) {
            out.push_back(l);
        } else {
            auto sub = leaves_under(t, it->second);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::string> check_coassociativity(const CooperadTable& table, int max_arity)
{
    std::vector<std::string> fails;
    for (const auto& [e, terms] : table.delta) {
        if (e.k() + e.n() > max_arity) continue;
        std::map<ColoredTree, std::map<std::vector<int>, Rational>> acc;
        for (const auto& [t1, c1] : split_vertex(corolla(e), 0, table, false)) {
            auto tag = leaves_under(t1, 1);
            for (std::size_t j = 0; j < 2; ++j)
                for (const auto& [t2, c2] : split_vertex(t1, j, table, false)) acc[t2][tag] += c1 * c2;
        }
        for (const auto& [t2, bytag] : acc) {
            auto a = leaves_under(t2, 1), b = leaves_under(t2, 2);
            Rational ca = bytag.count(a) ? bytag.at(a) : Rational(0);
            Rational cb = bytag.count(b) ? bytag.at(b) : Rational(0);
            if (ca != cb) {
                fails.push_back("coassociativity fails at " + e.str() + " on " + t2.str());
                break;
            }
        }
    }
    return fails;
}

std::vector<std::string> check_equivariance(const CooperadTable& table, int max_arity)
{
    std::vector<std::string> fails;
    for (const auto& [e, terms] : table.delta) {
        if (e.k() + e.n() > max_arity) continue;
        std::vector<int> cs = e.clabels, os = e.olabels;
        std::sort(os.begin(), os.end());
        auto pc = cs;
        do {
            auto po = os;
            do {
                std::map<int, int> pi;
                for (std::size_t i = 0; i < cs.size(); ++i) pi[cs[i]] = pc[i];
                for (std::size_t i = 0; i < os.size(); ++i) pi[os[i]] = po[i];
                std::map<TermKey, Rational> lhs, rhs;
                for (const auto& [f, c] : relabel(e, pi))
                    for (const auto& [key, d] : as_map(table.cocompose(f))) lhs[key] += c * d;
                for (const auto& term : terms) {
                    auto il = term.inner.labels();
                    int sstar = *std::min_element(il.begin(), il.end());
                    int star = std::numeric_limits<int>::max();
                    for (int l : il) star = std::min(star, pi.at(l));
                    std::map<int, int> pio;
                    for (int l : term.outer.labels()) pio[l] = l == sstar ? star : pi.at(l);
                    for (const auto& [in, ci] : relabel(term.inner, pi))
                        for (const auto& [out, co] : relabel(term.outer, pio)) rhs[{out, in}] += term.coef * ci * co;
                }
                std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
                std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
                if (lhs != rhs) fails.push_back("equivariance fails at " + e.str());
            } while (std::next_permutation(po.begin(), po.end()));
        } while (std::next_permutation(pc.begin(), pc.end()));
    }
    return fails;
}

std::vector<std::string> check_embedding(const CooperadTable& sub, const CooperadTable& big)
{
    std::vector<std::string> fails;
    for (const auto& [e, terms] : sub.delta) {
        auto it = big.delta.find(e);
        if (it == big.delta.end()) {
            fails.push_back("missing in the larger cooperad: " + e.str());
            continue;
        }
        if (as_map(terms) != as_map(it->second)) fails.push_back("cocomposition differs at " + e.str());
    }
    return fails;
}

int element_weight(const CoopElem& e, const GeneratorWeights& w)
{
    int k = e.k(), n = e.n();
    int b = k - static_cast<int>(e.omega.size());
    if (e.out == 'c') return (k - b) * w.delta_c + (b - 1) * w.Delta_c;
    return (k - b) * w.delta_c + b * w.rho + (b + n - 1) * w.Delta_o;
}

// ---- trees

Signature ColoredTree::signature() const
{
    Signature s;
    s.out = v.at(0).dec.out;
    for (const auto& vert : v)
        for (int l : vert.dec.labels()) {
            bool child = std::any_of(vert.children.begin(), vert.children.end(), [&](auto& ch) { return ch.first == l; });
            if (!child) (vert.dec.input_color(l) == 'c' ? s.k : s.n) += 1;
        }
    return s;
}

int ColoredTree::degree() const
{
    int d = 0;
    for (const auto& vert : v) d += vert.dec.degree() + 1;
    return d;
}

std::string ColoredTree::str() const
{
    std::function<std::string(int)> rec = [&](int i) {
        const auto& vert = v[i];
        std::string s(1, vert.dec.out);
        if (!vert.dec.omega.empty()) {
            s += "<";
            for (std::size_t j = 0; j < vert.dec.omega.size(); ++j)
                s += (j ? "," : "") + std::to_string(vert.dec.omega[j].first) + "-" +
                     std::to_string(vert.dec.omega[j].second);
            s += ">";
        }
        auto input = [&](int l) {
            for (const auto& [label, idx] : vert.children)
                if (label == l) return rec(idx);
            return std::string(1, vert.dec.input_color(l)) + "(" + std::to_string(l) + ")";
        };
        s += "[";
        for (std::size_t j = 0; j < vert.dec.clabels.size(); ++j) s += (j ? "," : "") + input(vert.dec.clabels[j]);
        if (vert.dec.out == 'o') {
            s += ";";
            for (std::size_t j = 0; j < vert.dec.olabels.size(); ++j) s += (j ? "," : "") + input(vert.dec.olabels[j]);
        }
        return s + "]";
    };
    return v.empty() ? std::string("|") : rec(0);
}

void add_to(OperadElement& x, const ColoredTree& t, const Rational& c)
{
    if (c == 0) return;
    auto& s = x[t];
    s += c;
    if (s == 0) x.erase(t);
}

std::string to_string(const OperadElement& x)
{
    if (x.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [t, c] : x) {
        if (c < 0)
            s += first ? "-" : " - ";
        else if (!first)
            s += " + ";
        Rational a = abs(c);
        if (a != 1) s += opcalc::to_string(a) + "*";
        s += t.str();
        first = false;
    }
    return s;
}

std::pair<ColoredTree, int> make_tree(const std::vector<TreeVertex>& vertices) { return make_tree_p(vertices, true); }

ColoredTree corolla(const CoopElem& e) { return make_tree({{e, {}}}).first; }

OperadElement cobar_differential(const ColoredTree& x, const CooperadTable& t)
{
    OperadElement out;
    for (std::size_t j = 0; j < x.v.size(); ++j)
        for (const auto& [tree, c] : split_vertex(x, j, t, true)) add_to(out, tree, c);
    return out;
}

OperadElement cobar_differential(const OperadElement& x, const CooperadTable& t)
{
    OperadElement out;
    for (const auto& [tree, c] : x)
        for (const auto& [t2, d] : cobar_differential(tree, t)) add_to(out, t2, c * d);
    return out;
}

std::vector<ColoredTree> cobar_basis(const CooperadTable& table, const Signature& sig)
{
    if (sig.k + sig.n > table.cutoff) throw CutoffOverflow("signature exceeds the table cutoff");
    const int k = sig.k;
    auto color = [&](int l) { return l <= k ? 'c' : 'o'; };
    using Raw = std::vector<TreeVertex>;
    std::function<std::vector<Raw>(const std::vector<int>&, char)> gen = [&](const std::vector<int>& L, char x) {
        std::vector<Raw> res;
        for (const auto& P : set_partitions(L)) {
            // per block: 0 = leaf, 'c' or 'o' = subtree with that output
            std::vector<std::vector<char>> opts;
            for (const auto& blk : P) {
                std::vector<char> o;
                bool allc = std::all_of(blk.begin(), blk.end(), [&](int l) { return color(l) == 'c'; });
                if (blk.size() == 1) o.push_back(0);
                if (allc && blk.size() >= 2) o.push_back('c');
                if (!(blk.size() == 1 && !allc)) o.push_back('o');
                opts.push_back(o);
            }
            std::vector<std::size_t> idx(P.size(), 0);
            while (true) {
                std::vector<int> cin, oin;
                for (std::size_t b = 0; b < P.size(); ++b) {
                    char ch = opts[b][idx[b]];
                    char col = ch == 0 ? color(P[b][0]) : ch;
                    (col == 'c' ? cin : oin).push_back(P[b][0]);
                }
                bool ok = x == 'c' ? (oin.empty() && cin.size() >= 2)
                                   : (2 * cin.size() + oin.size() >= 2);
                if (ok) {
                    std::vector<std::pair<int, std::vector<Raw>>> subs;
                    for (std::size_t b = 0; b < P.size(); ++b)
                        if (opts[b][idx[b]] != 0) subs.push_back({P[b][0], gen(P[b], opts[b][idx[b]])});
                    bool empty = std::any_of(subs.begin(), subs.end(), [](auto& s) { return s.second.empty(); });
                    auto decs = table.basis_on(x, cin, oin);
                    if (!empty)
                        for (const auto& d : decs) {
                            std::vector<std::size_t> si(subs.size(), 0);
                            while (true) {
                                Raw r{{d, {}}};
                                for (std::size_t s = 0; s < subs.size(); ++s) {
                                    const Raw& sub = subs[s].second[si[s]];
                                    int off = static_cast<int>(r.size());
                                    r[0].children.push_back({subs[s].first, off});
                                    for (auto w : sub) {
                                        for (auto& ch : w.children) ch.second += off;
                                        r.push_back(std::move(w));
                                    }
                                }
                                std::sort(r[0].children.begin(), r[0].children.end());
                                res.push_back(std::move(r));
                                std::size_t s = 0;
                                while (s < subs.size() && ++si[s] == subs[s].second.size()) si[s++] = 0;
                                if (s == subs.size()) break;
                            }
                        }
                }
                std::size_t b = 0;
                while (b < P.size() && ++idx[b] == opts[b].size()) idx[b++] = 0;
                if (b == P.size()) break;
            }
        }
        return res;
    };
    std::vector<int> L;
    for (int i = 1; i <= sig.k + sig.n; ++i) L.push_back(i);
    std::set<ColoredTree> trees;
    if (!L.empty())
        for (const auto& raw : gen(L, sig.out)) trees.insert(make_tree(raw).first);
    return {trees.begin(), trees.end()};
}

namespace {

SparseMatrix differential_matrix(const std::vector<ColoredTree>& from, const std::vector<ColoredTree>& to,
                                 const CooperadTable& t)
{
    std::map<ColoredTree, std::size_t> index;
    for (std::size_t i = 0; i < to.size(); ++i) index[to[i]] = i;
    SparseMatrix m(to.size(), from.size());
    for (std::size_t j = 0; j < from.size(); ++j)
        for (const auto& [tree, c] : cobar_differential(from[j], t)) m.add(index.at(tree), j, c);
    return m;
}

std::vector<ColoredTree> in_degree(const std::vector<ColoredTree>& all, int d)
{
    std::vector<ColoredTree> out;
    for (const auto& t : all)
        if (t.degree() == d) out.push_back(t);
    return out;
}

}  // namespace

CohomologyData arity_cohomology(const CooperadTable& t, const Signature& s, int degree)
{
    auto all = cobar_basis(t, s);
    auto prev = in_degree(all, degree - 1), cur = in_degree(all, degree), next = in_degree(all, degree + 1);
    auto din = differential_matrix(prev, cur, t);
    auto dout = differential_matrix(cur, next, t);
    CohomologyData r;
    r.degree = degree;
    r.ambient = cur.size();
    r.basis = cur;
    r.dimension = cohomology_dimension(din, dout);
    r.coboundaries = rank(din);
    r.cocycles = cur.size() - rank(dout);
    // representatives: kernel vectors independent modulo the image
    std::vector<std::vector<Rational>> cols;
    for (std::size_t j = 0; j < din.cols(); ++j) {
        std::vector<Rational> c(cur.size());
        for (const auto& [i, v] : din.column(j)) c[i] = v;
        cols.push_back(c);
    }
    auto rank_of = [&](const std::vector<std::vector<Rational>>& vs) {
        SparseMatrix m(cur.size(), vs.size());
        for (std::size_t j = 0; j < vs.size(); ++j)
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (vs[j][i] != 0) m.add(i, j, vs[j][i]);
        return rank(m);
    };
    std::size_t rk = rank_of(cols);
    for (const auto& kv : kernel_basis(dout)) {
        cols.push_back(kv);
        std::size_t r2 = rank_of(cols);
        if (r2 == rk) {
            cols.pop_back();
            continue;
        }
        rk = r2;
        OperadElement x;
        for (std::size_t i = 0; i < cur.size(); ++i) add_to(x, cur[i], kv[i]);
        r.representatives.push_back(std::move(x));
    }
    return r;
}

bool is_coboundary(const OperadElement& y, const CooperadTable& t, const Signature& s)
{
    if (y.empty()) return true;
    int d = y.begin()->first.degree();
    auto all = cobar_basis(t, s);
    auto prev = in_degree(all, d - 1), cur = in_degree(all, d);
    std::map<ColoredTree, std::size_t> index;
    for (std::size_t i = 0; i < cur.size(); ++i) index[cur[i]] = i;
    std::vector<Rational> b(cur.size());
    for (const auto& [tree, c] : y) b.at(index.at(tree)) = c;
    return solve(differential_matrix(prev, cur, t), b).has_value();
}

// ---- obstruction

NonformalityElements nonformality_elements()
{
    auto elem = [](char out, std::vector<int> c, std::vector<int> o) {
        CoopElem e;
        e.out = out;
        e.clabels = std::move(c);
        e.olabels = std::move(o);
        return e;
    };
    auto one = [](const std::pair<ColoredTree, int>& p) { return OperadElement{{p.first, Rational(p.second)}}; };
    NonformalityElements r;
    r.X = one(make_tree({{elem('o', {1}, {2}), {}}}));
    r.Z = one(make_tree({{elem('o', {1, 2}, {}), {}}}));
    r.Y = one(make_tree({{elem('o', {1}, {}), {{1, 1}}}, {elem('c', {1, 2}, {}), {}}}));
    r.X_o2_rho = one(make_tree({{elem('o', {1}, {2}), {{2, 1}}}, {elem('o', {2}, {}), {}}}));
    r.X_o1_rho = one(make_tree({{elem('o', {2}, {1}), {{1, 1}}}, {elem('o', {1}, {}), {}}}));
    r.Do_o1_rho = one(make_tree({{elem('o', {}, {1, 2}), {{1, 1}}}, {elem('o', {1}, {}), {}}}));
    r.Do_o2_rho = one(make_tree({{elem('o', {}, {2, 1}), {{1, 1}}}, {elem('o', {1}, {}), {}}}));
    return r;
}

namespace {

OperadElement combo(std::initializer_list<std::pair<int, const OperadElement*>> parts)
{
    OperadElement x;
    for (const auto& [c, e] : parts)
        for (const auto& [t, d] : *e) add_to(x, t, c * d);
    return x;
}

}  // namespace

Certificate nonformality_witness(const CooperadTable& t)
{
    if (t.kind != CoopKind::S && t.kind != CoopKind::sc)
        throw std::invalid_argument("the non-formality witness is defined for S and sc");
    Certificate cert;
    cert.operad = to_string(t.kind);
    auto E = nonformality_elements();
    const Signature co{1, 1, 'o'}, cc{2, 0, 'o'};

    {
        auto a = check_coassociativity(t, 3);
        auto b = check_equivariance(t, 3);
        std::string w = std::to_string(a.size()) + " coassociativity and " + std::to_string(b.size()) +
                        " equivariance failures up to arity 3";
        if (!a.empty()) w += "; first: " + a.front();
        if (!b.empty()) w += "; first: " + b.front();
        cert.checks.push_back({"cooperad table", a.empty() && b.empty(), w});
    }
    {
        auto h = arity_cohomology(t, co, -1);
        const auto& x = E.X.begin()->first;
        bool pass = x.degree() == -1 && h.ambient == 1 && h.basis[0] == x && h.dimension == 0;
        cert.checks.push_back({"X spans degree -1 of (c,o->o)", pass,
                               "X = " + to_string(E.X) + ", degree " + std::to_string(x.degree()) +
                                   ", ambient dimension " + std::to_string(h.ambient) + ", cohomology dimension " +
                                   std::to_string(h.dimension)});
    }
    {
        auto dX = cobar_differential(E.X, t);
        auto expect = combo({{1, &E.Do_o1_rho}, {1, &E.Do_o2_rho}});
        cert.checks.push_back({"dX = sDo o1 s rho + sDo o2 s rho != 0", !dX.empty() && dX == expect,
                               "dX = " + to_string(dX)});
    }
    {
        auto dZ = cobar_differential(E.Z, t);
        auto expect = combo({{1, &E.X_o2_rho}, {1, &E.X_o1_rho}, {-1, &E.Y}});
        auto printed = combo({{1, &E.X_o2_rho}, {-1, &E.X_o1_rho}, {-1, &E.Y}});
        std::string w = "dZ = " + to_string(dZ) + "; X o2 s rho = " + to_string(E.X_o2_rho) +
                        ", X o1 s rho = " + to_string(E.X_o1_rho) + ", Y = " + to_string(E.Y);
        w += dZ == printed ? "; matches X o2 s rho - X o1 s rho - Y"
                           : "; differs from X o2 s rho - X o1 s rho - Y in the sign of X o1 s rho "
                             "(Z is invariant under swapping its two inputs, which exchanges the X-terms)";
        cert.checks.push_back({"dZ = X o2 s rho + X o1 s rho - Y", dZ == expect, w});
    }
    {
        auto dY = cobar_differential(E.Y, t);
        bool exact = is_coboundary(E.Y, t, cc);
        auto h = arity_cohomology(t, cc, -1);
        bool pass = dY.empty() && !exact && h.dimension == 1;
        cert.checks.push_back({"Y cocycle, not coboundary", pass,
                               "dY = " + to_string(dY) + ", Y " + (exact ? "is" : "is not") +
                                   " a coboundary, H^-1 of (c,c->o) has dimension " + std::to_string(h.dimension)});
    }
    bool all = std::all_of(cert.checks.begin(), cert.checks.end(), [](auto& c) { return c.pass; });
    cert.conclusion = all ? "nonformal" : "inconsistent";
    return cert;
}

Certificate nonformality_witness(CoopKind which) { return nonformality_witness(build_cooperad_tables(which, 3)); }

}  // namespace opcalc

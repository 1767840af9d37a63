#include "opcalc/scoalgebra.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace opcalc {

namespace {

std::vector<int> vdegs(const KeySpace& V, const VList& v)
{
    std::vector<int> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        d[i] = V.degree(v[i]);
    return d;
}

std::vector<int> abars(const KeySpace& A, const Tuple& a)
{
    std::vector<int> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = A.degree(a[i]) + 1;
    return d;
}

VList pick(const VList& v, const std::vector<int>& lambda, std::size_t from, std::size_t to)
{
    VList out;
    out.reserve(to - from);
    for (std::size_t j = from; j < to; ++j)
        out.push_back(v[lambda[j]]);
    return out;
}

Rational factorial(int n)
{
    Rational r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

// Restricted growth strings: all set partitions of {0..n-1}, blocks ordered by minimum.
void set_partitions(int n, const std::function<void(const std::vector<std::vector<int>>&)>& f)
{
    std::vector<int> rgs(n, 0);
    std::function<void(int, int)> rec = [&](int i, int nblocks) {
        if (i == n) {
            std::vector<std::vector<int>> blocks(nblocks);
            for (int j = 0; j < n; ++j)
                blocks[rgs[j]].push_back(j);
            f(blocks);
            return;
        }
        for (int b = 0; b <= nblocks; ++b) {
            rgs[i] = b;
            rec(i + 1, std::max(nblocks, b + 1));
        }
    };
    if (n == 0) {
        f({});
        return;
    }
    rec(0, 0);
}

}  // namespace

void add_to(OSum& s, const OMon& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, ins] = s.emplace(m, c);
    if (!ins) {
        it->second += c;
        if (it->second == 0)
            s.erase(it);
    }
}

void add_to(CSum& s, const VList& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, ins] = s.emplace(m, c);
    if (!ins) {
        it->second += c;
        if (it->second == 0)
            s.erase(it);
    }
}

int canonicalize_v(const KeySpace& V, VList& v)
{
    int s = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
            if (parity(static_cast<long>(V.degree(v[j - 1])) * V.degree(v[j])))
                s = -s;
            std::swap(v[j - 1], v[j]);
        }
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1] && parity(V.degree(v[i])))
            return 0;
    return s;
}

int omon_parity(const KeySpace& V, const KeySpace& A, const OMon& m)
{
    long p = 0;
    for (int x : m.v)
        p += V.degree(x);
    for (int x : m.a)
        p += A.degree(x) + 1;
    return parity(p);
}

std::vector<CoproductTerm> coproduct_o(const KeySpace& V, const KeySpace& A, const OMon& x)
{
    const int k = static_cast<int>(x.v.size()), n = static_cast<int>(x.a.size());
    std::vector<int> vd = vdegs(V, x.v), ad(x.a.size());
    for (int i = 0; i < n; ++i)
        ad[i] = A.degree(x.a[i]);
    std::vector<CoproductTerm> out;
    for (int p = 0; p <= k; ++p)
        for (int t = 0; t <= n; ++t) {
            if ((p == 0 && t == 0) || (p == k && t == n))
                continue;
            for (const auto& lam : shuffles(p, k)) {
                int s = sign_eta(lam, p, t, vd, ad);
                OMon l{pick(x.v, lam, 0, p), Tuple(x.a.begin(), x.a.begin() + t)};
                OMon r{pick(x.v, lam, p, k), Tuple(x.a.begin() + t, x.a.end())};
                out.push_back({std::move(l), std::move(r), s});
            }
        }
    return out;
}

std::vector<std::pair<std::pair<VList, VList>, int>> coproduct_c(const KeySpace& V, const VList& x)
{
    const int k = static_cast<int>(x.size());
    std::vector<int> vd = vdegs(V, x);
    std::vector<std::pair<std::pair<VList, VList>, int>> out;
    for (int p = 1; p < k; ++p)
        for (const auto& lam : shuffles(p, k))
            out.push_back({{pick(x, lam, 0, p), pick(x, lam, p, k)}, koszul_sign(lam, vd)});
    return out;
}

std::vector<std::pair<std::pair<VList, OMon>, int>> mu_left(const KeySpace& V, const KeySpace& A, const OMon& x)
{
    std::vector<std::pair<std::pair<VList, OMon>, int>> out;
    for (auto& t : coproduct_o(V, A, x))
        if (t.left.a.empty() && !t.left.v.empty())
            out.push_back({{t.left.v, t.right}, t.sign});
    return out;
}

// ---------------------------------------------------------------- coderivations

Coderivation memoized(const Coderivation& q)
{
    Coderivation r = q;
    auto cc = std::make_shared<std::map<VList, Vec>>();
    auto oc = std::make_shared<std::map<OMon, Vec>>();
    auto c = q.c;
    auto o = q.o;
    r.c = [cc, c](const VList& v) {
        auto it = cc->find(v);
        if (it != cc->end())
            return it->second;
        Vec val = c(v);
        cc->emplace(v, val);
        return val;
    };
    r.o = [oc, o](const VList& v, const Tuple& a) {
        OMon key{v, a};
        auto it = oc->find(key);
        if (it != oc->end())
            return it->second;
        Vec val = o(v, a);
        oc->emplace(std::move(key), val);
        return val;
    };
    return r;
}

Coderivation zero_coderivation(SpacePtr V, SpacePtr A, int degree)
{
    Coderivation q;
    q.V = std::move(V);
    q.A = std::move(A);
    q.degree = degree;
    q.c = [](const VList&) { return Vec{}; };
    q.o = [](const VList&, const Tuple&) { return Vec{}; };
    q.c_support = [](int) { return false; };
    q.o_support = [](int, int) { return false; };
    return q;
}

Coderivation table_coderivation(SpacePtr V, SpacePtr A, int degree, const std::map<VList, Vec>& c_table,
                                const std::map<OMon, Vec>& o_table)
{
    Coderivation q;
    q.V = std::move(V);
    q.A = std::move(A);
    q.degree = degree;
    auto ct = std::make_shared<std::map<VList, Vec>>(c_table);
    auto ot = std::make_shared<std::map<OMon, Vec>>(o_table);
    auto cs = std::make_shared<std::set<int>>();
    auto os = std::make_shared<std::set<std::pair<int, int>>>();
    for (const auto& [v, x] : c_table)
        cs->insert(static_cast<int>(v.size()));
    for (const auto& [m, x] : o_table)
        os->insert({static_cast<int>(m.v.size()), static_cast<int>(m.a.size())});
    q.c = [ct](const VList& v) {
        auto it = ct->find(v);
        return it == ct->end() ? Vec{} : it->second;
    };
    q.o = [ot](const VList& v, const Tuple& a) {
        auto it = ot->find(OMon{v, a});
        return it == ot->end() ? Vec{} : it->second;
    };
    q.c_support = [cs](int k) { return cs->count(k) > 0; };
    q.o_support = [os](int k, int n) { return os->count({k, n}) > 0; };
    return q;
}

OSum hat_o(const Coderivation& q, const OMon& x, const ShapeFilter& keep)
{
    const KeySpace& V = *q.V;
    const KeySpace& A = *q.A;
    const int k = static_cast<int>(x.v.size()), n = static_cast<int>(x.a.size());
    const int d = q.degree;
    std::vector<int> vd = vdegs(V, x.v), ab = abars(A, x.a);
    OSum out;
    // Q^c on p of the v's, placed in front
    for (int p = 1; p <= k; ++p) {
        if (!q.c_support(p))
            continue;
        if (keep && !keep(k - p + 1, n))
            continue;
        for (const auto& lam : shuffles(p, k)) {
            Vec val = q.c(pick(x.v, lam, 0, p));
            if (val.empty())
                continue;
            int s = koszul_sign(lam, vd);
            VList rest = pick(x.v, lam, p, k);
            for (const auto& [w, c] : val) {
                VList nv{w};
                nv.insert(nv.end(), rest.begin(), rest.end());
                int s2 = canonicalize_v(V, nv);
                if (s2 == 0)
                    continue;
                add_to(out, OMon{std::move(nv), x.a}, c * s * s2);
            }
        }
    }
    // Q^o on (v_{lambda(p+1..k)}; a_t..a_e) inserted at slot t, the first p v's staying outside
    std::vector<long> abar_prefix(n + 1, 0);
    for (int l = 0; l < n; ++l)
        abar_prefix[l + 1] = abar_prefix[l] + ab[l];
    for (int p = 0; p <= k; ++p) {
        const int s_in = k - p;
        for (const auto& lam : shuffles(p, k)) {
            long out_deg = 0, in_deg = 0;
            for (int j = 0; j < p; ++j)
                out_deg += vd[lam[j]];
            for (int j = p; j < k; ++j)
                in_deg += vd[lam[j]];
            int base = koszul_sign(lam, vd);
            VList rest = pick(x.v, lam, 0, p);
            VList ins = pick(x.v, lam, p, k);
            for (int t = 1; t <= n + 1; ++t)
                for (int e = t - 1; e <= n; ++e) {
                    const int len = e - t + 1;
                    if (s_in == 0 && len == 0)
                        continue;
                    if (!q.o_support(s_in, len))
                        continue;
                    if (keep && !keep(p, n - len + 1))
                        continue;
                    Tuple run(x.a.begin() + (t - 1), x.a.begin() + e);
                    Vec val = q.o(ins, run);
                    if (val.empty())
                        continue;
                    long pre = abar_prefix[t - 1];
                    long ex = static_cast<long>(d) * (out_deg + pre) + in_deg * pre;
                    int s = base * sign_of(ex);
                    for (const auto& [b, c] : val) {
                        Tuple na(x.a.begin(), x.a.begin() + (t - 1));
                        na.push_back(b);
                        na.insert(na.end(), x.a.begin() + e, x.a.end());
                        add_to(out, OMon{rest, std::move(na)}, c * s);
                    }
                }
        }
    }
    return out;
}

CSum hat_c(const Coderivation& q, const VList& x, const std::function<bool(int)>& keep)
{
    const KeySpace& V = *q.V;
    const int k = static_cast<int>(x.size());
    std::vector<int> vd = vdegs(V, x);
    CSum out;
    for (int p = 1; p <= k; ++p) {
        if (!q.c_support(p) || (keep && !keep(k - p + 1)))
            continue;
        for (const auto& lam : shuffles(p, k)) {
            Vec val = q.c(pick(x, lam, 0, p));
            if (val.empty())
                continue;
            int s = koszul_sign(lam, vd);
            VList rest = pick(x, lam, p, k);
            for (const auto& [w, c] : val) {
                VList nv{w};
                nv.insert(nv.end(), rest.begin(), rest.end());
                int s2 = canonicalize_v(V, nv);
                if (s2 == 0)
                    continue;
                add_to(out, nv, c * s * s2);
            }
        }
    }
    return out;
}

Vec apply_o(const Coderivation& q, const OSum& s)
{
    Vec out;
    for (const auto& [m, c] : s)
        if (q.o_support(static_cast<int>(m.v.size()), static_cast<int>(m.a.size())))
            axpy(out, c, q.o(m.v, m.a));
    return out;
}

Vec apply_c(const Coderivation& q, const CSum& s)
{
    Vec out;
    for (const auto& [m, c] : s)
        if (q.c_support(static_cast<int>(m.size())))
            axpy(out, c, q.c(m));
    return out;
}

std::vector<VList> multisets(const KeySpace& V, const std::vector<int>& vbasis, int k)
{
    std::vector<int> b(vbasis);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<VList> out;
    VList cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < b.size(); ++i) {
            if (!cur.empty() && cur.back() == b[i] && parity(V.degree(b[i])))
                continue;
            cur.push_back(b[i]);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

MonomialBasis enumerate_monomials(const KeySpace& V, const std::vector<int>& vbasis, const std::vector<int>& abasis,
                                  int kmax_c, int max_total, int kmax_o,
                                  const std::function<bool(bool, int, int)>& shape)
{
    MonomialBasis mb;
    for (int k = 1; k <= kmax_c; ++k) {
        if (shape && !shape(true, k, 0))
            continue;
        auto ms = multisets(V, vbasis, k);
        mb.c.insert(mb.c.end(), ms.begin(), ms.end());
    }
    int kmo = kmax_o < 0 ? max_total : std::min(kmax_o, max_total);
    for (int k = 0; k <= kmo; ++k) {
        std::vector<VList> ms = k == 0 ? std::vector<VList>{VList{}} : multisets(V, vbasis, k);
        for (int n = (k == 0 ? 1 : 0); k + n <= max_total; ++n) {
            if (shape && !shape(false, k, n))
                continue;
            auto ts = all_tuples(abasis, n, n);
            for (const auto& v : ms)
                for (const auto& t : ts)
                    mb.o.push_back(OMon{v, t});
        }
    }
    return mb;
}

std::vector<QSqViolation> q_square_check(const Coderivation& q, const MonomialBasis& basis)
{
    std::vector<QSqViolation> out;
    ShapeFilter keep = [&q](int k, int n) { return q.o_support(k, n); };
    for (const auto& v : basis.c) {
        Vec d = apply_c(q, hat_c(q, v));
        if (!d.empty())
            out.push_back({true, OMon{v, {}}, d});
    }
    for (const auto& m : basis.o) {
        Vec d = apply_o(q, hat_o(q, m, keep));
        if (!d.empty())
            out.push_back({false, m, d});
    }
    return out;
}

std::vector<QSqViolation> q_square_check(const Coderivation& q, const std::vector<int>& vbasis,
                                         const std::vector<int>& abasis, int kmax_c, int max_total)
{
    auto shape = [&q](bool c_color, int k, int n) {
        if (c_color) {
            for (int p = 1; p <= k; ++p)
                if (q.c_support(p) && q.c_support(k - p + 1))
                    return true;
            return false;
        }
        for (int p = 1; p <= k; ++p)
            if (q.c_support(p) && q.o_support(k - p + 1, n))
                return true;
        for (int s = 0; s <= k; ++s)
            for (int len = 0; len <= n; ++len) {
                if (s == 0 && len == 0)
                    continue;
                if (q.o_support(s, len) && q.o_support(k - s, n - len + 1))
                    return true;
            }
        return false;
    };
    return q_square_check(q, enumerate_monomials(*q.V, vbasis, abasis, kmax_c, max_total, -1, shape));
}

// ---------------------------------------------------------------- L-infinity morphisms

LInfinityMorphism extract_linf(const Coderivation& q, const std::vector<int>& abasis, int max_arity)
{
    LInfinityMorphism U;
    U.V = q.V;
    U.A = q.A;
    auto cache = std::make_shared<std::map<VList, Cochain>>();
    SpacePtr A = q.A;
    auto o = q.o;
    auto sup = q.o_support;
    U.U = [=](const VList& v) {
        auto it = cache->find(v);
        if (it != cache->end())
            return it->second;
        Cochain c = zero_cochain(A);
        const int k = static_cast<int>(v.size());
        if (!abasis.empty()) {
            for (const auto& t : all_tuples(abasis, 0, max_arity))
                if (sup(k, static_cast<int>(t.size())))
                    c.add(t, o(v, t));
        }
        else {
            for (int r = 0; r <= max_arity; ++r)
                if (sup(k, r))
                    c.rule_arities.insert(r);
            c.rule = [o, v](const Tuple& t) { return o(v, t); };
        }
        cache->emplace(v, c);
        return c;
    };
    U.support = [sup, max_arity](int k) {
        for (int n = 0; n <= max_arity; ++n)
            if (sup(k, n))
                return true;
        return false;
    };
    return U;
}

std::vector<CoherenceViolation> linf_coherence_check(const LInfinityMorphism& U, const Coderivation& qc,
                                                     const AInfinityStructure& m, const std::vector<VList>& vlists,
                                                     const std::vector<Tuple>& tuples)
{
    const KeySpace& V = *U.V;
    std::vector<CoherenceViolation> out;
    for (const auto& v : vlists) {
        const int k = static_cast<int>(v.size());
        std::vector<int> vd = vdegs(V, v);
        // linear part: U(Q^c(v_S), v_R)
        std::vector<std::pair<Rational, Cochain>> terms;
        for (int p = 1; p <= k; ++p) {
            if (!qc.c_support(p) || !U.support(k - p + 1))
                continue;
            for (const auto& lam : shuffles(p, k)) {
                Vec val = qc.c(pick(v, lam, 0, p));
                int s = koszul_sign(lam, vd);
                VList rest = pick(v, lam, p, k);
                for (const auto& [w, c] : val) {
                    VList nv{w};
                    nv.insert(nv.end(), rest.begin(), rest.end());
                    int s2 = canonicalize_v(V, nv);
                    if (s2 != 0)
                        terms.emplace_back(c * s * s2, U.U(nv));
                }
            }
        }
        if (U.support(k))
            terms.emplace_back(1, gerstenhaber_bracket(m.m, U.U(v)));
        for (int p = 1; p < k; ++p) {
            if (!U.support(p) || !U.support(k - p))
                continue;
            for (const auto& lam : shuffles(p, k)) {
                long sd = 0;
                for (int j = 0; j < p; ++j)
                    sd += vd[lam[j]];
                int s = koszul_sign(lam, vd) * sign_of(sd);
                terms.emplace_back(Rational(s, 2),
                                   gerstenhaber_bracket(U.U(pick(v, lam, 0, p)), U.U(pick(v, lam, p, k))));
            }
        }
        for (const auto& t : tuples) {
            Vec d;
            for (const auto& [c, co] : terms)
                axpy(d, c, co.eval(t));
            if (!d.empty())
                out.push_back({v, t, d});
        }
    }
    return out;
}

// ---------------------------------------------------------------- structures on (C(A,A), A)

SpacePtr cochain_space(SpacePtr A)
{
    return std::make_shared<KeySpace>(
        "C(" + A->name() + ")",
        [A](const Key& k) {
            Tuple in(k.begin() + 1, k.end());
            return component_degree(*A, in, k[0]);
        },
        [A](const Key& k) {
            std::string s = "(";
            for (std::size_t i = 1; i < k.size(); ++i)
                s += (i > 1 ? "," : "") + A->label(k[i]);
            return s + ")->" + A->label(k[0]);
        });
}

Vec cochain_to_v(KeySpace& V, const Cochain& c)
{
    if (c.is_rule())
        throw std::logic_error("cochain_to_v needs a table cochain");
    Vec out;
    for (const auto& [in, val] : c.table)
        for (const auto& [o, x] : val) {
            Key k{o};
            k.insert(k.end(), in.begin(), in.end());
            add_to(out, V.intern(k), x);
        }
    return out;
}

Cochain v_to_cochain(const KeySpace& V, SpacePtr A, const Vec& x)
{
    Cochain c = zero_cochain(std::move(A));
    for (const auto& [id, coef] : x) {
        Key k = V.key(id);
        c.add(Tuple(k.begin() + 1, k.end()), k[0], coef);
    }
    return c;
}

std::vector<int> cochain_basis(KeySpace& V, const std::vector<int>& abasis, int max_arity)
{
    std::vector<int> out;
    for (const auto& t : all_tuples(abasis, 0, max_arity))
        for (int o : abasis) {
            Key k{o};
            k.insert(k.end(), t.begin(), t.end());
            out.push_back(V.intern(k));
        }
    return out;
}

Coderivation build_tautological_ocha(const AInfinityStructure& m)
{
    const bool rule = m.m.is_rule();
    if (!rule && !maurer_cartan_check(m).empty())
        throw std::invalid_argument("A-infinity structure fails the Maurer-Cartan equation");
    Coderivation q;
    q.A = m.A;
    q.V = cochain_space(m.A);
    q.degree = 1;
    SpacePtr V = q.V, A = q.A;
    Cochain mm = m.m;
    std::set<int> ar = mm.arities();
    q.c = [V, A, mm, rule](const VList& v) -> Vec {
        if (rule && !v.empty())
            throw std::invalid_argument("c-component of the tautological structure needs a finite algebra");
        if (v.size() == 1) {
            Cochain p = v_to_cochain(*V, A, {{v[0], 1}});
            return cochain_to_v(*V, gerstenhaber_bracket(mm, p).scaled(-1));
        }
        if (v.size() == 2) {
            Cochain p1 = v_to_cochain(*V, A, {{v[0], 1}});
            Cochain p2 = v_to_cochain(*V, A, {{v[1], 1}});
            return cochain_to_v(*V, gerstenhaber_bracket(p1, p2).scaled(-sign_of(V->degree(v[0]))));
        }
        return {};
    };
    q.o = [V, mm](const VList& v, const Tuple& a) -> Vec {
        if (v.empty())
            return mm.eval(a);
        if (v.size() == 1) {
            const Key& k = V->key(v[0]);
            if (static_cast<std::size_t>(k.size() - 1) == a.size() && std::equal(a.begin(), a.end(), k.begin() + 1))
                return Vec{{k[0], 1}};
        }
        return {};
    };
    q.c_support = [](int k) { return k == 1 || k == 2; };
    q.o_support = [ar](int k, int n) { return k == 1 || (k == 0 && ar.count(n) > 0); };
    return memoized(q);
}

Coderivation build_explicit_o_part(const AInfinityStructure& alg)
{
    if (alg.m.is_rule())
        throw std::invalid_argument("explicit structure needs a finite algebra");
    for (int b : alg.basis)
        if (alg.A->degree(b) != 0)
            throw std::invalid_argument("explicit structure needs an algebra concentrated in degree 0");
    for (const auto& [in, out] : alg.m.table)
        if (in.size() != 2)
            throw std::invalid_argument("explicit structure needs a strict product");
    if (!maurer_cartan_check(alg).empty())
        throw std::invalid_argument("product is not associative");
    AInfinityStructure neg = alg;
    neg.m = alg.m.scaled(-1);
    return build_tautological_ocha(neg);
}

LInfinityMorphism hkr_morphism(PolyvectorAlgebra& pv, PolynomialAlgebra& alg)
{
    LInfinityMorphism F;
    F.V = pv.V;
    F.A = alg.A;
    PolyvectorAlgebra* p = &pv;
    PolynomialAlgebra* a = &alg;
    F.U = [p, a](const VList& v) {
        if (v.size() == 1)
            return hkr_cochain(*p, *a, Vec{{v[0], 1}});
        return zero_cochain(a->A);
    };
    F.support = [](int k) { return k == 1; };
    return F;
}

Coderivation linf_to_gerplus(const LInfinityMorphism& F, PolyvectorAlgebra& pv, PolynomialAlgebra& alg)
{
    if (F.V != pv.V || F.A != alg.A)
        throw std::invalid_argument("morphism spaces do not match the polyvector data");
    Coderivation q;
    q.V = pv.V;
    q.A = alg.A;
    q.degree = 1;
    PolyvectorAlgebra* p = &pv;
    PolynomialAlgebra* a = &alg;
    auto U = F.U;
    q.c = [p](const VList& v) -> Vec {
        if (v.size() != 2)
            return {};
        return scaled(p->schouten(Vec{{v[0], 1}}, Vec{{v[1], 1}}), -sign_of(p->vector_degree(v[0])));
    };
    q.o = [a, U](const VList& v, const Tuple& t) -> Vec {
        if (v.empty())
            return t.size() == 2 ? a->multiply(t[0], t[1]) : Vec{};
        return U(v).eval(t);
    };
    auto sup = F.support;
    q.c_support = [](int k) { return k == 2; };
    q.o_support = [sup](int k, int n) { return k == 0 ? n == 2 : sup(k); };
    return memoized(q);
}

bool validate_ocha_substructure(const Coderivation& q)
{
    return q.c_mixed.empty();
}

// ---------------------------------------------------------------- homotopies

Coderivation homotopy_conjugate(const Coderivation& q, const Coderivation& psi)
{
    if (psi.degree != 0)
        throw std::invalid_argument("homotopy data must have degree 0");
    if (psi.V != q.V || psi.A != q.A)
        throw std::invalid_argument("homotopy data over different spaces");
    Coderivation r = q;
    r.o_support = [](int, int) { return true; };
    auto psi_cache = std::make_shared<std::map<OMon, OSum>>();
    auto q_cache = std::make_shared<std::map<OMon, OSum>>();
    auto hat = [](const Coderivation& d, std::map<OMon, OSum>& cache, const OSum& s) {
        OSum out;
        for (const auto& [m, c] : s) {
            auto it = cache.find(m);
            if (it == cache.end())
                it = cache.emplace(m, hat_o(d, m)).first;
            for (const auto& [m2, c2] : it->second)
                add_to(out, m2, c * c2);
        }
        return out;
    };
    r.o = [q, psi, psi_cache, q_cache, hat](const VList& v, const Tuple& a) {
        const int k = static_cast<int>(v.size());
        Vec res;
        OSum y{{OMon{v, a}, 1}};
        for (int b = 0; !y.empty(); ++b) {
            if (b > k)
                throw std::runtime_error("homotopy series does not terminate");
            OSum w = hat(q, *q_cache, y);
            Rational cb = Rational(sign_of(b)) / factorial(b);
            axpy(res, cb, apply_o(q, y));
            for (int ai = 1; !w.empty(); ++ai) {
                if (ai > k + 1)
                    throw std::runtime_error("homotopy series does not terminate");
                axpy(res, cb / factorial(ai), apply_o(psi, w));
                w = hat(psi, *psi_cache, w);
            }
            y = hat(psi, *psi_cache, y);
        }
        return res;
    };
    return memoized(r);
}

std::function<Cochain(const VList&)> theta_from_psi(const Coderivation& psi, const std::vector<int>& abasis,
                                                    int max_arity)
{
    auto cache = std::make_shared<std::map<VList, Cochain>>();
    SpacePtr A = psi.A;
    auto o = psi.o;
    return [=](const VList& v) {
        auto it = cache->find(v);
        if (it != cache->end())
            return it->second;
        Cochain c = zero_cochain(A);
        for (const auto& t : all_tuples(abasis, 0, max_arity))
            c.add(t, o(v, t));
        cache->emplace(v, c);
        return c;
    };
}

namespace {

struct GaugeState {
    SpacePtr V, A;
    std::function<Cochain(const VList&)> U, theta;
    Coderivation qc;
    Cochain m;
    int max_arity;
    std::vector<std::map<VList, Cochain>> adU, adD;

    Cochain ad_level(std::vector<std::map<VList, Cochain>>& memo, int j, const VList& v,
                     const std::function<Cochain(const VList&)>& base)
    {
        if (static_cast<int>(memo.size()) <= j)
            memo.resize(j + 1);
        auto it = memo[j].find(v);
        if (it != memo[j].end())
            return it->second;
        Cochain r = zero_cochain(A);
        if (j == 0)
            r = base(v);
        else {
            const int k = static_cast<int>(v.size());
            std::vector<int> vd(k);
            for (int i = 0; i < k; ++i)
                vd[i] = V->degree(v[i]);
            for (int p = 1; p < k; ++p)
                for (const auto& lam : shuffles(p, k)) {
                    long sd = 0;
                    for (int i = 0; i < p; ++i)
                        sd += vd[lam[i]];
                    int s = koszul_sign(lam, vd) * sign_of(sd);
                    Cochain inner = ad_level(memo, j - 1, pick(v, lam, p, k), base);
                    if (inner.table.empty())
                        continue;
                    Cochain th = theta(pick(v, lam, 0, p));
                    r += gerstenhaber_bracket(th, inner).scaled(s);
                }
            r = r.truncated(max_arity);
        }
        memo[j].emplace(v, r);
        return r;
    }

    Cochain d_theta(const VList& v)
    {
        const int k = static_cast<int>(v.size());
        std::vector<int> vd(k);
        for (int i = 0; i < k; ++i)
            vd[i] = V->degree(v[i]);
        Cochain r = gerstenhaber_bracket(m, theta(v)).scaled(-1);
        for (int p = 1; p <= k; ++p) {
            if (!qc.c_support(p))
                continue;
            for (const auto& lam : shuffles(p, k)) {
                Vec val = qc.c(pick(v, lam, 0, p));
                int s = koszul_sign(lam, vd);
                VList rest = pick(v, lam, p, k);
                for (const auto& [w, c] : val) {
                    VList nv{w};
                    nv.insert(nv.end(), rest.begin(), rest.end());
                    int s2 = canonicalize_v(*V, nv);
                    if (s2 != 0)
                        r += theta(nv).scaled(c * s * s2);
                }
            }
        }
        return r.truncated(max_arity);
    }
};

}  // namespace

LInfinityMorphism linf_gauge_action(const LInfinityMorphism& U, const std::function<Cochain(const VList&)>& theta,
                                    const Coderivation& qc, const AInfinityStructure& m, int max_arity)
{
    auto st = std::make_shared<GaugeState>();
    st->V = U.V;
    st->A = U.A;
    st->U = U.U;
    st->theta = theta;
    st->qc = qc;
    st->m = m.m;
    st->max_arity = max_arity;
    auto cache = std::make_shared<std::map<VList, Cochain>>();
    LInfinityMorphism out;
    out.V = U.V;
    out.A = U.A;
    out.U = [st, cache](const VList& v) {
        auto it = cache->find(v);
        if (it != cache->end())
            return it->second;
        const int k = static_cast<int>(v.size());
        auto baseU = [st](const VList& w) { return st->U(w).truncated(st->max_arity); };
        auto baseD = [st](const VList& w) { return st->d_theta(w); };
        Cochain r = zero_cochain(st->A);
        for (int j = 0; j < std::max(k, 1); ++j) {
            r += st->ad_level(st->adU, j, v, baseU).scaled(1 / factorial(j));
            r += st->ad_level(st->adD, j, v, baseD).scaled(1 / factorial(j + 1));
        }
        cache->emplace(v, r);
        return r;
    };
    return out;
}

// ---------------------------------------------------------------- morphisms

SCoalgebraMorphism memoized(const SCoalgebraMorphism& t)
{
    SCoalgebraMorphism r = t;
    auto cc = std::make_shared<std::map<VList, Vec>>();
    auto oc = std::make_shared<std::map<OMon, Vec>>();
    auto c = t.c;
    auto o = t.o;
    r.c = [cc, c](const VList& v) {
        auto it = cc->find(v);
        if (it != cc->end())
            return it->second;
        Vec val = c(v);
        cc->emplace(v, val);
        return val;
    };
    r.o = [oc, o](const VList& v, const Tuple& a) {
        OMon key{v, a};
        auto it = oc->find(key);
        if (it != oc->end())
            return it->second;
        Vec val = o(v, a);
        oc->emplace(std::move(key), val);
        return val;
    };
    return r;
}

SCoalgebraMorphism identity_morphism(SpacePtr V, SpacePtr A)
{
    SCoalgebraMorphism t;
    t.V = t.V2 = std::move(V);
    t.A = t.A2 = std::move(A);
    t.c = [](const VList& v) { return v.size() == 1 ? Vec{{v[0], 1}} : Vec{}; };
    t.o = [](const VList& v, const Tuple& a) { return v.empty() && a.size() == 1 ? Vec{{a[0], 1}} : Vec{}; };
    t.c_support = [](int k) { return k == 1; };
    t.o_support = [](int k, int n) { return k == 0 && n == 1; };
    return t;
}

namespace {

// expand a product of vectors into (id-list, coefficient) pairs
void expand(const std::vector<Vec>& factors, std::size_t i, std::vector<int>& cur, const Rational& c,
            const std::function<void(const std::vector<int>&, const Rational&)>& f)
{
    if (i == factors.size()) {
        f(cur, c);
        return;
    }
    for (const auto& [id, x] : factors[i]) {
        cur.push_back(id);
        expand(factors, i + 1, cur, c * x, f);
        cur.pop_back();
    }
}

}  // namespace

CSum hat_T_c(const SCoalgebraMorphism& t, const VList& x, bool skip_single)
{
    const int k = static_cast<int>(x.size());
    std::vector<int> vd = vdegs(*t.V, x);
    CSum out;
    set_partitions(k, [&](const std::vector<std::vector<int>>& blocks) {
        if (skip_single && blocks.size() == 1)
            return;
        for (const auto& b : blocks)
            if (!t.c_support(static_cast<int>(b.size())))
                return;
        std::vector<int> perm;
        std::vector<Vec> vals;
        for (const auto& b : blocks) {
            perm.insert(perm.end(), b.begin(), b.end());
            VList sub;
            for (int i : b)
                sub.push_back(x[i]);
            vals.push_back(t.c(sub));
            if (vals.back().empty())
                return;
        }
        int s = koszul_sign(perm, vd);
        std::vector<int> cur;
        expand(vals, 0, cur, s, [&](const std::vector<int>& ids, const Rational& c) {
            VList nv(ids);
            int s2 = canonicalize_v(*t.V2, nv);
            if (s2 != 0)
                add_to(out, nv, c * s2);
        });
    });
    return out;
}

OSum hat_T_o(const SCoalgebraMorphism& t, const OMon& x, const ShapeFilter& keep)
{
    const int k = static_cast<int>(x.v.size()), n = static_cast<int>(x.a.size());
    std::vector<int> deg = vdegs(*t.V, x.v);
    for (int l = 0; l < n; ++l)
        deg.push_back(t.A->degree(x.a[l]) + 1);
    OSum out;
    for (int cmask = 0; cmask < (1 << k); ++cmask) {
        std::vector<int> cpos, opos;
        for (int i = 0; i < k; ++i)
            ((cmask >> i) & 1 ? cpos : opos).push_back(i);
        set_partitions(static_cast<int>(cpos.size()), [&](const std::vector<std::vector<int>>& bl) {
            std::vector<std::vector<int>> cblocks;
            for (const auto& b : bl) {
                if (!t.c_support(static_cast<int>(b.size())))
                    return;
                std::vector<int> bb;
                for (int i : b)
                    bb.push_back(cpos[i]);
                cblocks.push_back(bb);
            }
            std::vector<Vec> cvals;
            std::vector<int> cperm;
            for (const auto& b : cblocks) {
                VList sub;
                for (int i : b)
                    sub.push_back(x.v[i]);
                cvals.push_back(t.c(sub));
                if (cvals.back().empty())
                    return;
                cperm.insert(cperm.end(), b.begin(), b.end());
            }
            // o-words: sequence of (S_j subset of remaining o-positions; consecutive run)
            std::vector<Vec> ovals;
            std::vector<int> operm;
            const int q = static_cast<int>(cblocks.size());
            std::function<void(int, int)> rec = [&](int remaining, int tpos) {
                if (remaining == 0 && tpos == n) {
                    if (keep && !keep(q, static_cast<int>(ovals.size())))
                        return;
                    if (ovals.empty() && n > 0)
                        return;
                    std::vector<int> perm(cperm);
                    perm.insert(perm.end(), operm.begin(), operm.end());
                    int s = koszul_sign(perm, deg);
                    std::vector<Vec> all(cvals);
                    all.insert(all.end(), ovals.begin(), ovals.end());
                    std::vector<int> cur;
                    expand(all, 0, cur, s, [&](const std::vector<int>& ids, const Rational& c) {
                        VList nv(ids.begin(), ids.begin() + q);
                        int s2 = canonicalize_v(*t.V2, nv);
                        if (s2 == 0)
                            return;
                        add_to(out, OMon{std::move(nv), Tuple(ids.begin() + q, ids.end())}, c * s2);
                    });
                    return;
                }
                // choose S as a submask of remaining
                for (int sub = remaining;; sub = (sub - 1) & remaining) {
                    int ssize = __builtin_popcount(static_cast<unsigned>(sub));
                    for (int len = (sub == 0 ? 1 : 0); tpos + len <= n; ++len) {
                        if (!t.o_support(ssize, len))
                            continue;
                        if (keep && (remaining & ~sub) == 0 && tpos + len == n &&
                            !keep(q, static_cast<int>(ovals.size()) + 1))
                            continue;
                        VList S;
                        std::size_t mark = operm.size();
                        for (int i = 0; i < static_cast<int>(opos.size()); ++i)
                            if ((sub >> i) & 1) {
                                S.push_back(x.v[opos[i]]);
                                operm.push_back(opos[i]);
                            }
                        for (int l = tpos; l < tpos + len; ++l)
                            operm.push_back(k + l);
                        Vec val = t.o(S, Tuple(x.a.begin() + tpos, x.a.begin() + tpos + len));
                        if (!val.empty()) {
                            ovals.push_back(std::move(val));
                            rec(remaining & ~sub, tpos + len);
                            ovals.pop_back();
                        }
                        operm.resize(mark);
                    }
                    if (sub == 0)
                        break;
                }
            };
            int all_o = 0;
            for (std::size_t i = 0; i < opos.size(); ++i)
                all_o |= 1 << i;
            rec(all_o, 0);
        });
    }
    return out;
}

std::vector<CompatibilityViolation> morphism_compatibility_check(const SCoalgebraMorphism& t, const Coderivation& q,
                                                                 const Coderivation& q2, const MonomialBasis& basis,
                                                                 std::optional<int> only_k)
{
    std::vector<CompatibilityViolation> out;
    ShapeFilter keep2 = [&q2](int k, int n) { return q2.o_support(k, n); };
    ShapeFilter keep_t = [&t](int k, int n) { return t.o_support(k, n); };
    if (!only_k) {
        for (const auto& v : basis.c) {
            Vec lhs = apply_c(q2, hat_T_c(t, v));
            Vec rhs;
            for (const auto& [y, c] : hat_c(q, v))
                if (t.c_support(static_cast<int>(y.size())))
                    axpy(rhs, c, t.c(y));
            axpy(lhs, -1, rhs);
            if (!lhs.empty())
                out.push_back({true, OMon{v, {}}, lhs});
        }
    }
    for (const auto& x : basis.o) {
        if (only_k && static_cast<int>(x.v.size()) != *only_k)
            continue;
        Vec lhs;
        for (const auto& [y, c] : hat_T_o(t, x))
            if (q2.o_support(static_cast<int>(y.v.size()), static_cast<int>(y.a.size())))
                axpy(lhs, c, q2.o(y.v, y.a));
        Vec rhs;
        for (const auto& [y, c] : hat_o(q, x, keep_t))
            axpy(rhs, c, t.o(y.v, y.a));
        axpy(lhs, -1, rhs);
        if (!lhs.empty())
            out.push_back({false, x, lhs});
    }
    (void)keep2;
    return out;
}

// ---------------------------------------------------------------- Ger-dual basis

int GerCoMonomial::arity() const
{
    int k = 0;
    for (const auto& w : words)
        k += static_cast<int>(w.size());
    return k;
}

int GerCoMonomial::degree() const
{
    const int k = arity(), b = static_cast<int>(words.size());
    return 2 - 2 * k + (k - b);
}

std::vector<GerCoMonomial> ger_co_basis(int k)
{
    std::vector<GerCoMonomial> out;
    set_partitions(k, [&](const std::vector<std::vector<int>>& blocks) {
        std::vector<std::vector<std::vector<int>>> options;
        for (const auto& b : blocks) {
            std::vector<std::vector<int>> words;
            std::vector<int> rest(b.begin() + 1, b.end());
            do {
                std::vector<int> w{b[0] + 1};
                for (int x : rest)
                    w.push_back(x + 1);
                words.push_back(w);
            } while (std::next_permutation(rest.begin(), rest.end()));
            options.push_back(words);
        }
        std::vector<std::size_t> idx(options.size(), 0);
        while (true) {
            GerCoMonomial g;
            for (std::size_t i = 0; i < options.size(); ++i)
                g.words.push_back(options[i][idx[i]]);
            out.push_back(std::move(g));
            std::size_t i = 0;
            while (i < idx.size() && ++idx[i] == options[i].size())
                idx[i++] = 0;
            if (i == idx.size())
                break;
        }
    });
    return out;
}

}  // namespace opcalc

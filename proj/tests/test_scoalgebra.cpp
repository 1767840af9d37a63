#include "doctest.h"
#include "opcalc/scoalgebra.hpp"

#include <random>

using namespace opcalc;

namespace {

struct Spaces {
    SpacePtr V, A;
    std::vector<int> vb, ab;
};

Spaces graded_spaces()
{
    GradedSpace gv{"V", {{"u", 0}, {"w", 1}, {"y", 2}, {"z", 3}}};
    GradedSpace ga{"A", {{"p", 0}, {"q", 1}, {"r", -1}}};
    Spaces s{make_finite_space(gv), make_finite_space(ga), {0, 1, 2, 3}, {0, 1, 2}};
    return s;
}

int sum_shift_v(const KeySpace& V, const VList& v)
{
    int s = 0;
    for (int x : v)
        s += V.degree(x) - 2;
    return s;
}

int sum_shift_a(const KeySpace& A, const Tuple& a)
{
    int s = 0;
    for (int x : a)
        s += A.degree(x) - 1;
    return s;
}

// Random corestrictions of the given degree on all monomials with k + n <= max_total.
void random_tables(std::mt19937& rng, const Spaces& s, int degree, int max_total, int density,
                   std::map<VList, Vec>& ct, std::map<OMon, Vec>& ot, bool c_part = true, bool pure_a = true)
{
    auto mb = enumerate_monomials(*s.V, s.vb, s.ab, max_total, max_total);
    if (c_part)
        for (const auto& v : mb.c)
            for (int w : s.vb)
                if (s.V->degree(w) - 2 == degree + sum_shift_v(*s.V, v) && static_cast<int>(rng() % 100) < density)
                    ct[v][w] = static_cast<int>(rng() % 5) - 2;
    for (const auto& m : mb.o) {
        if (!pure_a && m.v.empty())
            continue;
        for (int b : s.ab)
            if (s.A->degree(b) - 1 == degree + sum_shift_v(*s.V, m.v) + sum_shift_a(*s.A, m.a) &&
                static_cast<int>(rng() % 100) < density)
                ot[m][b] = static_cast<int>(rng() % 5) - 2;
    }
    for (auto it = ct.begin(); it != ct.end();)
        it = (it->second.begin()->second == 0 && it->second.size() == 1) ? ct.erase(it) : std::next(it);
    for (auto& [k, v] : ct)
        for (auto i = v.begin(); i != v.end();)
            i = i->second == 0 ? v.erase(i) : std::next(i);
    for (auto& [k, v] : ot)
        for (auto i = v.begin(); i != v.end();)
            i = i->second == 0 ? v.erase(i) : std::next(i);
}

using Triple = std::tuple<OMon, OMon, OMon>;

std::map<Triple, Rational> coassoc_left(const KeySpace& V, const KeySpace& A, const OMon& x)
{
    std::map<Triple, Rational> r;
    for (const auto& t : coproduct_o(V, A, x))
        for (const auto& t2 : coproduct_o(V, A, t.left)) {
            auto& c = r[{t2.left, t2.right, t.right}];
            c += t.sign * t2.sign;
        }
    for (auto it = r.begin(); it != r.end();)
        it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

std::map<Triple, Rational> coassoc_right(const KeySpace& V, const KeySpace& A, const OMon& x)
{
    std::map<Triple, Rational> r;
    for (const auto& t : coproduct_o(V, A, x))
        for (const auto& t2 : coproduct_o(V, A, t.right)) {
            auto& c = r[{t.left, t2.left, t2.right}];
            c += t.sign * t2.sign;
        }
    for (auto it = r.begin(); it != r.end();)
        it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

// canonical form of a sum of tensors x (x) y with possibly unsorted v-lists
using Pair = std::pair<OMon, OMon>;
void add_pair(std::map<Pair, Rational>& s, OMon l, OMon r, Rational c, const KeySpace& V)
{
    int s1 = canonicalize_v(V, l.v), s2 = canonicalize_v(V, r.v);
    if (s1 * s2 == 0)
        return;
    auto& x = s[{l, r}];
    x += c * s1 * s2;
    if (x == 0)
        s.erase({l, r});
}

Coderivation taut_small(const AInfinityStructure& m) { return build_tautological_ocha(m); }

}  // namespace

TEST_CASE("coproduct examples")
{
    auto s = graded_spaces();
    CHECK(coproduct_o(*s.V, *s.A, OMon{{}, {0}}).empty());
    auto t2 = coproduct_o(*s.V, *s.A, OMon{{}, {1, 2}});
    REQUIRE(t2.size() == 1);
    CHECK(t2[0].left == OMon{{}, {1}});
    CHECK(t2[0].right == OMon{{}, {2}});
    CHECK(t2[0].sign == 1);
    // (v; a): E_{1,1} has the two pairs (0,1) and (1,0)
    for (int v : s.vb)
        for (int a : s.ab) {
            auto t = coproduct_o(*s.V, *s.A, OMon{{v}, {a}});
            REQUIRE(t.size() == 2);
            for (const auto& term : t) {
                if (term.left.v.empty()) {
                    // (;a) (x) (v;): moving v past a
                    CHECK(term.sign == transposition_chain_sign({1, 0}, {s.V->degree(v), s.A->degree(a) + 1}));
                }
                else {
                    CHECK(term.sign == 1);
                }
            }
        }
}

TEST_CASE("property: Delta_o is coassociative")
{
    auto s = graded_spaces();
    auto mb = enumerate_monomials(*s.V, s.vb, s.ab, 0, 4);
    for (const auto& x : mb.o)
        CHECK(coassoc_left(*s.V, *s.A, x) == coassoc_right(*s.V, *s.A, x));
}

TEST_CASE("property: mu_l is a left comodule structure")
{
    auto s = graded_spaces();
    auto mb = enumerate_monomials(*s.V, s.vb, s.ab, 0, 4);
    for (const auto& x : mb.o) {
        std::map<std::tuple<VList, VList, OMon>, Rational> lhs, rhs;
        for (const auto& [t, sg] : mu_left(*s.V, *s.A, x)) {
            for (const auto& [u, sg2] : coproduct_c(*s.V, t.first))
                lhs[{u.first, u.second, t.second}] += sg * sg2;
            for (const auto& [u, sg2] : mu_left(*s.V, *s.A, t.second))
                rhs[{t.first, u.first, u.second}] += sg * sg2;
        }
        for (auto* m : {&lhs, &rhs})
            for (auto it = m->begin(); it != m->end();)
                it = it->second == 0 ? m->erase(it) : std::next(it);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("property: extended coderivations are coderivations of Delta_o")
{
    auto s = graded_spaces();
    std::mt19937 rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        int d = trial % 2;
        std::map<VList, Vec> ct;
        std::map<OMon, Vec> ot;
        random_tables(rng, s, d, 3, 35, ct, ot);
        Coderivation q = table_coderivation(s.V, s.A, d, ct, ot);
        auto mb = enumerate_monomials(*s.V, s.vb, s.ab, 0, 3);
        for (const auto& x : mb.o) {
            std::map<Pair, Rational> lhs, rhs;
            for (const auto& [y, c] : hat_o(q, x))
                for (const auto& t : coproduct_o(*s.V, *s.A, y))
                    add_pair(lhs, t.left, t.right, c * t.sign, *s.V);
            for (const auto& t : coproduct_o(*s.V, *s.A, x)) {
                for (const auto& [y, c] : hat_o(q, t.left))
                    add_pair(rhs, y, t.right, c * t.sign, *s.V);
                int sl = sign_of(static_cast<long>(d) * omon_parity(*s.V, *s.A, t.left));
                for (const auto& [y, c] : hat_o(q, t.right))
                    add_pair(rhs, t.left, y, c * t.sign * sl, *s.V);
            }
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("extension examples")
{
    auto A = truncated_polynomial_algebra(2);
    auto q = build_tautological_ocha(A);
    // pure a-part: (;a1,a2,a3) -> (;m(a1,a2),a3) + (-1)^{|a1|+1} (;a1,m(a2,a3)) for ungraded A
    OSum r = hat_o(q, OMon{{}, {1, 0, 1}});
    OSum expect;
    for (const auto& [b, c] : A.m.eval({1, 0}))
        add_to(expect, OMon{{}, {b, 1}}, c);
    for (const auto& [b, c] : A.m.eval({0, 1}))
        add_to(expect, OMon{{}, {1, b}}, -c);
    CHECK(r == expect);
    // (v;) with Q^o(v;) defined: one insertion term, t = 1, p = 0
    KeySpace& V = *q.V;
    int b = V.intern({1});  // the 0-cochain x
    OSum r1 = hat_o(q, OMon{{b}, {}});
    OSum e1;
    for (const auto& [w, c] : q.c({b}))
        add_to(e1, OMon{{w}, {}}, c);
    add_to(e1, OMon{{}, {1}}, 1);
    CHECK(r1 == e1);
    auto z = zero_coderivation(q.V, q.A);
    CHECK(hat_o(z, OMon{{b}, {1, 0}}).empty());
}

TEST_CASE("tautological OCHA squares to zero")
{
    for (auto m : {ground_field(), truncated_polynomial_algebra(2)}) {
        auto q = build_tautological_ocha(m);
        auto vb = cochain_basis(*q.V, m.basis, 2);
        CHECK(q_square_check(q, vb, m.basis, 3, 3).empty());
        CHECK(validate_ocha_substructure(q));
    }
    auto z = zero_coderivation(std::make_shared<KeySpace>("V", [](const Key&) { return 0; }),
                               truncated_polynomial_algebra(2).A);
    z.V->intern({0});
    CHECK(q_square_check(z, {0}, {0, 1}, 2, 3).empty());
    CHECK(validate_ocha_substructure(z));
    z.c_mixed["wedge"] = Vec{{0, 1}};
    CHECK_FALSE(validate_ocha_substructure(z));
}

TEST_CASE("non-associative product is caught at (;a1,a2,a3)")
{
    auto A = truncated_polynomial_algebra(2);
    std::map<OMon, Vec> ot;
    for (const auto& [in, out] : A.m.table)
        ot[OMon{{}, in}] = out;
    ot[OMon{{}, {1, 1}}] = Vec{{0, 1}};  // x*x = 1
    ot[OMon{{}, {0, 1}}] = Vec{{1, 1}, {0, 1}};
    auto V = std::make_shared<KeySpace>("V", [](const Key&) { return 0; });
    auto q = table_coderivation(V, A.A, 1, {}, ot);
    auto viol = q_square_check(q, MonomialBasis{{}, enumerate_monomials(*V, {}, A.basis, 0, 3).o});
    REQUIRE_FALSE(viol.empty());
    for (const auto& v : viol) {
        CHECK_FALSE(v.c_color);
        CHECK(v.mon.a.size() == 3);
    }
}

TEST_CASE("extract_linf of the tautological OCHA is the identity")
{
    auto m = truncated_polynomial_algebra(2);
    auto q = build_tautological_ocha(m);
    auto U = extract_linf(q, m.basis, 4);
    auto vb = cochain_basis(*q.V, m.basis, 2);
    for (int v : vb) {
        Cochain P = v_to_cochain(*q.V, m.A, {{v, 1}});
        CHECK(equal_tables(U.U({v}), P));
    }
    for (int v : vb)
        for (int w : vb)
            if (v <= w)
                CHECK(U.U({v, w}).table.empty());
    std::vector<VList> vl;
    for (int k = 1; k <= 2; ++k)
        for (auto& x : multisets(*q.V, vb, k))
            vl.push_back(x);
    CHECK(linf_coherence_check(U, q, m, vl, all_tuples(m.basis, 0, 3)).empty());
    LInfinityMorphism Z{q.V, m.A, [&](const VList&) { return zero_cochain(m.A); }};
    CHECK(linf_coherence_check(Z, q, m, vl, all_tuples(m.basis, 0, 3)).empty());
}

TEST_CASE("explicit structure on an associative algebra")
{
    auto m = truncated_polynomial_algebra(2);
    auto q = build_explicit_o_part(m);
    CHECK(q.o({}, {1, 1}).empty());
    CHECK(q.o({}, {0, 1}) == Vec{{1, -1}});
    int p1 = q.V->intern({1, 0}), p2 = q.V->intern({0, 1});
    CHECK(q.o({p1, p2}, {1}).empty());
    CHECK(q.o({p1}, {0}) == Vec{{1, 1}});
    CHECK(q.o({p1}, {0, 0}).empty());
    int b = q.V->intern({1});
    CHECK(q.o({b}, {}) == Vec{{1, 1}});
    auto vb = cochain_basis(*q.V, m.basis, 2);
    CHECK(q_square_check(q, vb, m.basis, 3, 3).empty());
    auto U = extract_linf(q, m.basis, 3);
    std::vector<VList> vl;
    for (auto& x : multisets(*q.V, vb, 1))
        vl.push_back(x);
    AInfinityStructure neg = m;
    neg.m = m.m.scaled(-1);
    CHECK(linf_coherence_check(U, q, neg, vl, all_tuples(m.basis, 0, 2)).empty());
    GradedSpace g{"E", {{"1", 0}, {"e", 1}}};
    auto E = algebra_from_product(g, {{{0, 0}, Vec{{0, 1}}}, {{0, 1}, Vec{{1, 1}}}, {{1, 0}, Vec{{1, 1}}}});
    CHECK_THROWS(build_explicit_o_part(E));
}

TEST_CASE("Ger-dual basis has k! elements")
{
    int f = 1;
    for (int k = 1; k <= 5; ++k) {
        f *= k;
        CHECK(ger_co_basis(k).size() == static_cast<std::size_t>(f));
    }
    for (const auto& g : ger_co_basis(3))
        for (const auto& w : g.words)
            CHECK(std::min_element(w.begin(), w.end()) == w.begin());
}

TEST_CASE("polyvector structures from L-infinity morphisms")
{
    for (int d = 1; d <= 2; ++d) {
        PolyvectorAlgebra pv(d, 12);
        PolynomialAlgebra alg(d);
        auto F = hkr_morphism(pv, alg);
        auto q = linf_to_gerplus(F, pv, alg);
        std::vector<int> vb;
        for (int id : pv.all_basis())
            if (pv.coefficient_degree(id) <= 1)
                vb.push_back(id);
        auto ab = alg.monomials_up_to(2);
        auto qs = q_square_check(q, vb, ab, 3, 3);
        auto U = extract_linf(q, {}, 3);
        std::vector<VList> vl;
        for (int k = 1; k <= 2; ++k)
            for (auto& x : multisets(*pv.V, vb, k))
                vl.push_back(x);
        auto coh = linf_coherence_check(U, q, alg.product_structure(), vl, all_tuples(ab, 0, 2));
        // Property round trip
        for (const auto& v : vl)
            for (const auto& t : all_tuples(ab, 0, 2))
                CHECK(U.U(v).eval(t) == F.U(v).eval(t));
        CHECK(qs.empty() == coh.empty());
        if (d == 1) {
            CHECK(qs.empty());
        }
        else {
            CHECK_FALSE(qs.empty());
        }
    }
    PolyvectorAlgebra pv(1, 6);
    PolynomialAlgebra alg(1);
    LInfinityMorphism Z{pv.V, alg.A, [&](const VList&) { return zero_cochain(alg.A); }, [](int) { return false; }};
    auto q = linf_to_gerplus(Z, pv, alg);
    std::vector<int> vb;
    for (int id : pv.all_basis())
        if (pv.coefficient_degree(id) <= 2)
            vb.push_back(id);
    CHECK(q_square_check(q, vb, alg.monomials_up_to(2), 3, 3).empty());
}

#include "doctest.h"
#include "opcalc/cobar.hpp"
#include "opcalc/transfer.hpp"

#include <set>

using namespace opcalc;

namespace {

CoopElem elem(char out, std::vector<int> c, std::vector<int> o, ArnoldMonomial w = {})
{
    CoopElem e;
    e.out = out;
    e.clabels = std::move(c);
    e.olabels = std::move(o);
    e.omega = std::move(w);
    return e;
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// unsigned Stirling numbers of the first kind
long stirling1(int n, int k)
{
    if (n == 0) return k == 0;
    if (k == 0) return 0;
    return (n - 1) * stirling1(n - 1, k) + stirling1(n - 1, k - 1);
}

const std::vector<CoopKind> kinds{CoopKind::GerVee, CoopKind::S, CoopKind::OCVee, CoopKind::sc};

}  // namespace

TEST_CASE("Arnold relation and graded dimensions")
{
    auto r = arnold_normal_form({{1, 2}, {2, 3}});
    for (const auto& [m, c] : arnold_normal_form({{2, 3}, {1, 3}})) r[m] += c;
    for (const auto& [m, c] : arnold_normal_form({{1, 3}, {1, 2}})) r[m] += c;
    std::erase_if(r, [](auto& kv) { return kv.second == 0; });
    CHECK(r.empty());
    CHECK(arnold_normal_form({{1, 2}, {1, 2}}).empty());
    CHECK(arnold_normal_form({{1, 2}, {2, 3}, {1, 3}}).empty());
    CHECK(arnold_normal_form({{2, 3}, {1, 2}}) == std::map<ArnoldMonomial, Rational>{{{{1, 2}, {2, 3}}, -1}});

    // the span of all products of j distinct generators on 4 points has dimension c(4, 4 - j)
    std::vector<std::pair<int, int>> gens;
    for (int a = 1; a <= 4; ++a)
        for (int b = a + 1; b <= 4; ++b) gens.push_back({a, b});
    for (int j = 0; j <= 3; ++j) {
        std::set<ArnoldMonomial> span;
        for (unsigned mask = 0; mask < (1u << gens.size()); ++mask) {
            if (__builtin_popcount(mask) != j) continue;
            ArnoldMonomial m;
            for (std::size_t i = 0; i < gens.size(); ++i)
                if (mask >> i & 1) m.push_back(gens[i]);
            for (const auto& [mono, c] : arnold_normal_form(m)) span.insert(mono);
        }
        CHECK(static_cast<long>(span.size()) == stirling1(4, 4 - j));
    }
}

TEST_CASE("cooperad table dimensions")
{
    auto ger = build_cooperad_tables(CoopKind::GerVee, 4);
    auto S = build_cooperad_tables(CoopKind::S, 4);
    auto oc = build_cooperad_tables(CoopKind::OCVee, 4);
    auto sc = build_cooperad_tables(CoopKind::sc, 4);
    CHECK(ger.basis.at({3, 0, 'c'}).size() == 6);
    CHECK(ger.basis.count({1, 1, 'o'}) == 0);
    CHECK(S.basis.at({1, 1, 'o'}).size() == 1);
    CHECK(S.basis.at({1, 1, 'o'})[0].degree() == -2);
    CHECK(sc.basis.at({2, 0, 'o'}).size() == 2);
    for (int k = 0; k <= 4; ++k)
        for (int n = 0; k + n <= 4; ++n) {
            if (2 * k + n < 2) continue;
            Signature s{k, n, 'o'};
            CHECK(S.basis.at(s).size() == static_cast<std::size_t>(factorial(n)));
            CHECK(oc.basis.at(s).size() == static_cast<std::size_t>(factorial(n)));
            CHECK(sc.basis.at(s).size() == static_cast<std::size_t>(factorial(k) * factorial(n)));
            for (const auto& e : S.basis.at(s)) CHECK(e.degree() == 1 - 2 * k - n);
            std::map<int, long> by_deg;
            for (const auto& e : sc.basis.at(s)) by_deg[e.degree()] += 1;
            for (int j = 0; j < std::max(k, 1); ++j)
                CHECK(by_deg[j + 1 - 2 * k - n] == stirling1(k, k - j) * factorial(n));
        }
    for (int k = 2; k <= 4; ++k) {
        CHECK(S.basis.at({k, 0, 'c'}).size() == static_cast<std::size_t>(factorial(k)));
        CHECK(oc.basis.at({k, 0, 'c'}).size() == 1);
        CHECK(oc.basis.at({k, 0, 'c'})[0].degree() == 2 - 2 * k);
    }
    // generators
    CHECK(elem('o', {1}, {}).degree() == -1);
    CHECK(elem('o', {}, {1, 2}).degree() == -1);
    CHECK(elem('c', {1, 2}, {}).degree() == -2);
    CHECK(elem('c', {1, 2}, {}, {{1, 2}}).degree() == -1);
}

TEST_CASE("cocomposition of the generators and of X and Z")
{
    auto S = build_cooperad_tables(CoopKind::S, 3);
    CHECK(S.cocompose(elem('o', {1}, {})).empty());
    CHECK(S.cocompose(elem('o', {}, {1, 2})).empty());
    CHECK(S.cocompose(elem('c', {1, 2}, {})).empty());
    auto dx = S.cocompose(elem('o', {1}, {2}));
    REQUIRE(dx.size() == 2);
    for (const auto& t : dx) {
        CHECK(t.coef == -1);
        CHECK(t.inner == elem('o', {1}, {}));
    }
    auto dz = S.cocompose(elem('o', {1, 2}, {}));
    CHECK(dz.size() == 3);
    for (const auto& t : dz) CHECK(t.coef == 1);
}

TEST_CASE("coassociativity, equivariance and embeddings")
{
    std::map<CoopKind, CooperadTable> t;
    for (auto k : kinds) {
        t[k] = build_cooperad_tables(k, 4);
        CHECK(check_coassociativity(t[k], 4).empty());
        CHECK(check_equivariance(t[k], 3).empty());
    }
    CHECK(check_embedding(t[CoopKind::S], t[CoopKind::sc]).empty());
    CHECK(check_embedding(t[CoopKind::OCVee], t[CoopKind::S]).empty());
    CHECK(check_embedding(t[CoopKind::GerVee], t[CoopKind::S]).empty());
    CHECK(!check_embedding(t[CoopKind::sc], t[CoopKind::S]).empty());
}

TEST_CASE("injected sign fault breaks coassociativity")
{
    auto t = build_cooperad_tables(CoopKind::S, 3);
    auto& terms = t.delta.at(elem('o', {1, 2}, {}));
    terms[0].coef = -terms[0].coef;
    CHECK(!check_coassociativity(t, 3).empty());
}

TEST_CASE("relabeling")
{
    auto r = relabel(elem('o', {1}, {2, 3}), {{1, 1}, {2, 3}, {3, 2}});
    CHECK(r == std::map<CoopElem, Rational>{{elem('o', {1}, {3, 2}), -1}});
    auto w = relabel(elem('c', {1, 2, 3}, {}, {{1, 2}, {2, 3}}), {{1, 3}, {2, 2}, {3, 1}});
    // w_32 w_21 = w_23 w_12 = -w_12 w_23
    CHECK(w == std::map<CoopElem, Rational>{{elem('c', {1, 2, 3}, {}, {{1, 2}, {2, 3}}), -1}});
}

TEST_CASE("property: d^2 = 0 on every basis tree")
{
    for (auto kind : kinds) {
        auto t = build_cooperad_tables(kind, 4);
        std::size_t trees = 0;
        for (int k = 0; k <= 4; ++k)
            for (int n = 0; k + n <= 4; ++n)
                for (char out : {'c', 'o'}) {
                    if (out == 'c' && n) continue;
                    for (const auto& x : cobar_basis(t, {k, n, out})) {
                        ++trees;
                        auto dx = cobar_differential(x, t);
                        for (const auto& [y, c] : dx) CHECK(y.degree() == x.degree() + 1);
                        CHECK(cobar_differential(dx, t).empty());
                    }
                }
        CHECK(trees > 200);
    }
}

TEST_CASE("trees are canonical")
{
    auto E = nonformality_elements();
    auto [t1, s1] = make_tree({{elem('o', {}, {2, 1}), {{1, 1}}}, {elem('o', {1}, {}), {}}});
    CHECK(E.Do_o2_rho == OperadElement{{t1, Rational(s1)}});
    CHECK(t1.str() == "o[;o(2),o[c(1);]]");
    CHECK(t1.signature() == Signature{1, 1, 'o'});
    // listing the two odd vertices against the canonical order costs a sign
    CoopElem root = elem('o', {}, {1, 3});        // suspended degree 0
    CoopElem x = elem('o', {1}, {2});             // suspended degree -1
    CoopElem tri = elem('o', {}, {3, 4, 5});      // suspended degree -1
    auto [a, sa] = make_tree({{root, {{1, 2}, {3, 1}}}, {tri, {}}, {x, {}}});
    auto [b, sb] = make_tree({{root, {{1, 1}, {3, 2}}}, {x, {}}, {tri, {}}});
    CHECK(a == b);
    CHECK(sa == -1);
    CHECK(sb == 1);
    CHECK(a.signature() == Signature{1, 4, 'o'});
    CHECK(a.str() == "o[;o[c(1);o(2)],o[;o(3),o(4),o(5)]]");
}

TEST_CASE("cobar differential on the obstruction elements")
{
    auto S = build_cooperad_tables(CoopKind::S, 3);
    auto E = nonformality_elements();
    OperadElement dX_expected = E.Do_o1_rho;
    for (const auto& [t, c] : E.Do_o2_rho) add_to(dX_expected, t, c);
    CHECK(cobar_differential(E.X, S) == dX_expected);
    auto dZ = cobar_differential(E.Z, S);
    CHECK(dZ.size() == 3);
    CHECK(dZ.at(E.Y.begin()->first) == -E.Y.begin()->second);
    CHECK(dZ.at(E.X_o2_rho.begin()->first) == E.X_o2_rho.begin()->second);
    // Z is symmetric in its two inputs, so both X-terms come with the same coefficient
    CHECK(dZ.at(E.X_o1_rho.begin()->first) == E.X_o1_rho.begin()->second);
    CHECK(cobar_differential(E.Y, S).empty());
    CHECK(cobar_differential(corolla(elem('o', {1}, {})), S).empty());
}

TEST_CASE("arity cohomology")
{
    auto S = build_cooperad_tables(CoopKind::S, 3);
    auto h = arity_cohomology(S, {1, 1, 'o'}, -1);
    CHECK(h.ambient == 1);
    CHECK(h.dimension == 0);
    auto h0 = arity_cohomology(S, {1, 1, 'o'}, 0);
    CHECK(h0.ambient == 2);
    CHECK(h0.dimension == 1);
    CHECK(h0.representatives.size() == 1);
    auto r = arity_cohomology(S, {1, 0, 'o'}, 0);
    CHECK(r.ambient == 1);
    CHECK(r.dimension == 1);
    auto z = arity_cohomology(S, {0, 1, 'o'}, 0);
    CHECK(z.ambient == 0);
    CHECK(z.dimension == 0);
    auto y = arity_cohomology(S, {2, 0, 'o'}, -1);
    CHECK(y.dimension == 1);
    CHECK(!is_coboundary(nonformality_elements().Y, S, {2, 0, 'o'}));
}

TEST_CASE("non-formality certificates")
{
    for (auto kind : {CoopKind::S, CoopKind::sc}) {
        auto c = nonformality_witness(kind);
        CHECK(c.conclusion == "nonformal");
        CHECK(c.checks.size() == 5);
        for (const auto& ch : c.checks) CHECK_MESSAGE(ch.pass, ch.name);
    }
    CHECK_THROWS_AS(nonformality_witness(CoopKind::GerVee), std::invalid_argument);
}

TEST_CASE("injected fault: the cobracket under rho loses its cocomposition")
{
    auto t = build_cooperad_tables(CoopKind::sc, 3);
    t.delta.at(elem('o', {1, 2}, {}, {{1, 2}})).clear();
    auto c = nonformality_witness(t);
    CHECK(c.conclusion == "inconsistent");
    CHECK(!c.checks[0].pass);
    CHECK(!c.checks[4].pass);  // H^-1 of (c,c->o) grows to dimension 2
}

TEST_CASE("cutoffs")
{
    auto S = build_cooperad_tables(CoopKind::S, 2);
    CHECK_THROWS_AS(S.cocompose(elem('o', {1}, {2, 3})), CutoffOverflow);
    CHECK_THROWS_AS(build_cooperad_tables(CoopKind::S, max_cooperad_cutoff + 1), CutoffOverflow);
    CHECK_THROWS_AS(cobar_basis(S, {2, 1, 'o'}), CutoffOverflow);
}

TEST_CASE("minimal model condition")
{
    auto S = build_cooperad_tables(CoopKind::S, 5);
    CHECK(check_minimal_model_condition(S, 4));
    CHECK(check_minimal_model_condition(S, 1));
    CHECK(check_minimal_model_condition(build_cooperad_tables(CoopKind::sc, 5), 4));
    CHECK(!check_minimal_model_condition(S, 4, {1, 1, 1, 2}));
    CHECK(element_weight(elem('o', {1, 2}, {}), {}) == 3);
    CHECK(element_weight(elem('c', {1, 2, 3}, {}), {}) == 4);
    CHECK_THROWS_AS(check_minimal_model_condition(build_cooperad_tables(CoopKind::S, 4), 4), CutoffOverflow);
}

#include "doctest.h"
#include "opcalc/transfer.hpp"

using namespace opcalc;

namespace {

struct Instance {
    AInfinityStructure big;
    Coderivation q2;
    std::vector<int> vb;
    Contraction c;
};

Instance make_instance(const AInfinityStructure& big, int e, int f, int v_arity)
{
    Instance in{big, build_tautological_ocha(big), {}, {}};
    in.vb = cochain_basis(*in.q2.V, big.basis, v_arity);
    in.c = acyclic_pair_contraction(in.q2.V, in.vb, big, e, f);
    return in;
}

}  // namespace

TEST_CASE("example algebras are dgas")
{
    CHECK(maurer_cartan_check(acyclic_unit_extension()).empty());
    CHECK(maurer_cartan_check(massey_extension()).empty());
}

TEST_CASE("contraction conditions")
{
    auto in = make_instance(massey_extension(), 4, 5, 1);
    CHECK(in.c.a_basis.size() == 4);
    CHECK(check_contraction(in.c, in.q2).empty());
    auto bad = in.c;
    bad.hA = table_map({{5, Vec{{4, 1}}}});
    CHECK(!check_contraction(bad, in.q2).empty());
    auto bad2 = in.c;
    bad2.hA = table_map({{5, Vec{{4, -1}}}, {4, Vec{{4, 1}}}});
    CHECK(!check_contraction(bad2, in.q2).empty());
}

TEST_CASE("oracle: trivial contractions leave the structure unchanged")
{
    auto m = truncated_polynomial_algebra(2);
    auto c = trivial_contraction(cochain_space(m.A), m.A, {}, m.basis);
    auto r = ainf_transfer_oracle(m, c, 4);
    CHECK(equal_tables(r.m, m.m.restricted(all_tuples(m.basis, 1, 4))));
}

TEST_CASE("oracle: triple Massey product on the cohomology")
{
    auto big = massey_extension();
    auto in = make_instance(big, 4, 5, 0);
    auto r = ainf_transfer_oracle(big, in.c, 4);
    CHECK(maurer_cartan_check(r).empty());
    // small basis 1, x, y, z = 0..3
    CHECK(r.m.eval({1, 2, 1}) == Vec{{3, -1}});
    CHECK(r.m.eval({1, 2}).empty());
    CHECK(r.m.eval({0, 1}) == Vec{{1, 1}});
    CHECK(r.m.eval({1, 0}) == Vec{{1, -1}});
    CHECK(r.m.eval({2, 1, 2}).empty());
}

TEST_CASE("transfer along a trivial contraction")
{
    auto m = truncated_polynomial_algebra(2);
    auto q2 = build_tautological_ocha(m);
    auto vb = cochain_basis(*q2.V, m.basis, 1);
    auto res = transfer_structure(q2, trivial_contraction(q2.V, q2.A, vb, m.basis), 3);
    auto basis = weight_basis(*q2.V, vb, m.basis, 3);
    for (const auto& x : basis.o) {
        CHECK(res.q.o(x.v, x.a) == q2.o(x.v, x.a));
        if (!(x.v.empty() && x.a.size() == 1))
            CHECK(res.t.o(x.v, x.a).empty());
    }
    for (const auto& v : basis.c) {
        CHECK(res.q.c(v) == q2.c(v));
        if (v.size() > 1)
            CHECK(res.t.c(v).empty());
    }
    CHECK_THROWS_AS(res.q.o({}, {0, 0, 0, 0, 0}), CutoffOverflow);
}

TEST_CASE("transfer onto the cohomology of an acyclic extension")
{
    for (int which = 0; which < 2; ++which) {
        auto big = which == 0 ? acyclic_unit_extension() : massey_extension();
        int e = which == 0 ? 1 : 4, f = which == 0 ? 2 : 5;
        auto in = make_instance(big, e, f, 1);
        const int W = which == 0 ? 4 : 3;
        auto res = transfer_structure(in.q2, in.c, W);
        auto basis = weight_basis(*in.q2.V, in.vb, in.c.a_basis, W);
        CHECK(q_square_check(res.q, basis).empty());
        CHECK(morphism_compatibility_check(res.t, res.q, in.q2, basis).empty());
        auto oracle = ainf_transfer_oracle(big, in.c, W + 1);
        for (const auto& t : all_tuples(in.c.a_basis, 1, W + 1))
            CHECK(res.q.o({}, t) == oracle.m.eval(t));
    }
}

TEST_CASE("raising the weight cutoff extends without modifying")
{
    auto in = make_instance(massey_extension(), 4, 5, 1);
    auto lo = transfer_structure(in.q2, in.c, 2);
    auto hi = transfer_structure(in.q2, in.c, 3);
    auto basis = weight_basis(*in.q2.V, in.vb, in.c.a_basis, 2);
    int nonzero = 0;
    for (const auto& x : basis.o) {
        CHECK(lo.q.o(x.v, x.a) == hi.q.o(x.v, x.a));
        CHECK(lo.t.o(x.v, x.a) == hi.t.o(x.v, x.a));
        nonzero += !lo.t.o(x.v, x.a).empty() && !x.v.empty();
    }
    CHECK(nonzero > 0);
    CHECK_THROWS_AS(lo.q.o({}, {1, 2, 1, 2}), CutoffOverflow);
}

TEST_CASE("a wrong homotopy is caught by the checks")
{
    auto in = make_instance(massey_extension(), 4, 5, 1);
    in.c.hA = table_map({{5, Vec{{4, 1}}}});
    auto res = transfer_structure(in.q2, in.c, 3);
    auto basis = weight_basis(*in.q2.V, in.vb, in.c.a_basis, 3);
    CHECK(!morphism_compatibility_check(res.t, res.q, in.q2, basis).empty());
}

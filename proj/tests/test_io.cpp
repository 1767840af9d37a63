#include "doctest.h"
#include "opcalc/io.hpp"

using namespace opcalc;

TEST_CASE("rationals as p/q")
{
    CHECK(rational_str(Rational(3)) == "3/1");
    CHECK(rational_str(Rational(-2, 4)) == "-1/2");
    CHECK(parse_rational(json("6/4")) == Rational(3, 2));
    CHECK(parse_rational(json(-5)) == -5);
    CHECK(parse_rational(json{{"coeff_num", "7"}, {"coeff_den", "2"}}) == Rational(7, 2));
    CHECK(parse_rational(json{{"label", "x"}, {"coeff", "1/3"}}) == Rational(1, 3));
    CHECK_THROWS_AS(parse_rational(json("1/0")), InputError);
    CHECK_THROWS_AS(parse_rational(json("abc")), InputError);
    CHECK_THROWS_AS(parse_rational(json{{"coeff_num", "1"}, {"coeff_den", "0"}}), InputError);
}

TEST_CASE("algebra round trip")
{
    for (const auto& m : {truncated_polynomial_algebra(3), massey_extension()}) {
        auto j = algebra_to_json(m, 2);
        auto back = algebra_from_json(j);
        CHECK(back.basis.size() == m.basis.size());
        for (const auto& t : all_tuples(m.basis, 1, 2)) CHECK(back.m.eval(t) == m.m.eval(t));
        CHECK(algebra_to_json(back, 2) == j);
    }
}

TEST_CASE("input errors")
{
    json base = algebra_to_json(truncated_polynomial_algebra(2), 2);
    auto dup = base;
    dup["basis"].push_back({{"label", "x"}, {"degree", 0}});
    CHECK_THROWS_AS(algebra_from_json(dup), InputError);
    auto unknown = base;
    unknown["m"]["2"][0]["inputs"][0] = "y";
    CHECK_THROWS_AS(algebra_from_json(unknown), InputError);
    auto arity = base;
    arity["m"]["3"] = arity["m"]["2"];
    CHECK_THROWS_AS(algebra_from_json(arity), InputError);
    CHECK_THROWS_AS(algebra_from_json(json::object()), InputError);
    CHECK_THROWS_AS(structure_from_json({{"structure", "nope"}, {"algebra", base}}, 1), InputError);
    json tab = {{"V", {{"basis", json::array({{{"label", "v"}, {"degree", 1}}})}}},
                {"A", {{"basis", json::array()}}},
                {"c", json::array({{{"v_part", {"v", "v"}}, {"value", json::array()}}})}};
    CHECK_THROWS_AS(structure_from_json(tab, 1), InputError);
}

TEST_CASE("table structures")
{
    json tab = {{"V", {{"basis", json::array({{{"label", "v"}, {"degree", 0}}, {{"label", "w"}, {"degree", 1}}})}}},
                {"A", {{"basis", json::array({{{"label", "a"}, {"degree", 0}}})}}},
                {"degree", 1},
                {"c", json::array({{{"v_part", {"w", "v"}}, {"value", {{{"label", "w"}, {"coeff", "2"}}}}}})},
                {"o", json::array({{{"v_part", {"v"}}, {"a_part", {"a"}}, {"value", {{{"label", "a"}, {"coeff", "1/2"}}}}}})}};
    auto s = structure_from_json(tab, 1);
    CHECK(s.v_basis == std::vector<int>{0, 1});
    CHECK(s.q.c({0, 1}) == Vec{{1, 2}});
    CHECK(s.q.o({0}, {0}) == Vec{{0, Rational(1, 2)}});
}

TEST_CASE("certificate and table json")
{
    auto j = certificate_to_json(nonformality_witness(CoopKind::S));
    CHECK(j["operad"] == "S");
    CHECK(j["conclusion"] == "nonformal");
    CHECK(j["checks"].size() == 5);
    auto t = e1_table_to_json(e1_dimension_table(1, 1, 'o', -8, 2));
    CHECK(t["dimensions"] == json::array({{{"degree", -1}, {"trees", 1}, {"cobar", 1}}, {{"degree", 0}, {"trees", 2}, {"cobar", 2}}}));
}

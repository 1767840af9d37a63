#pragma once

#include "opcalc/cobar.hpp"
#include "opcalc/swisscheese.hpp"
#include "opcalc/transfer.hpp"

#include <json.hpp>
#include <stdexcept>
#include <string>

namespace opcalc {

using json = nlohmann::ordered_json;

// Malformed or inconsistent input files.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// "p/q" always, also for integers.
std::string rational_str(const Rational& r);
// Accepts "p/q", "p", a JSON integer, or {"coeff_num", "coeff_den"} (also inside an output entry).
Rational parse_rational(const json& j);

GradedSpace space_from_json(const json& basis, const std::string& name);
// [{"label", "coeff"}] with coefficients in the given space.
Vec vec_from_json(const json& j, const KeySpace& space);
json vec_to_json(const Vec& v, const KeySpace& space);

// { "basis": [{"label","degree"}], "m": { "k": [ {"inputs":[labels], "output":[...]} ] }, "cutoff"? }
AInfinityStructure algebra_from_json(const json& j);
json algebra_to_json(const AInfinityStructure& m, int max_arity);
json cochain_to_json(const Cochain& c);

// Named structures {"structure": "tautological_ocha" | "explicit_o_part", "algebra": {...}} or a table
// { "V": {"basis"}, "A": {"basis"}, "degree", "c": [{"v_part","value"}], "o": [{"v_part","a_part","value"}] }.
struct StructureInput {
    Coderivation q;
    std::vector<int> v_basis, a_basis;
    bool named = false;
    AInfinityStructure algebra;  // set for named structures
};
// v_arity bounds the arity of the elementary cochains spanning V for named structures.
StructureInput structure_from_json(const json& j, int v_arity);

// { "basis": [...small A...], "i": [{"input","output"}], "p": [...], "h": [...] } against the
// algebra A2 of a named structure; V is contracted trivially.
Contraction contraction_from_json(const json& j, const StructureInput& big);

json certificate_to_json(const Certificate& c);
json e1_table_to_json(const E1Table& t);

}  // namespace opcalc

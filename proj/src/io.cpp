#include "opcalc/io.hpp"

#include <set>

namespace opcalc {

namespace {

int find_label(const KeySpace& s, const std::string& label)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.label(static_cast<int>(i)) == label) return static_cast<int>(i);
    throw InputError("unknown basis label '" + label + "' in " + s.name());
}

const json& need(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::vector<int> labels_to_ids(const json& j, const KeySpace& s)
{
    if (!j.is_array()) throw InputError("expected a list of labels");
    std::vector<int> r;
    for (const auto& l : j) r.push_back(find_label(s, l.get<std::string>()));
    return r;
}

std::vector<int> all_ids(const KeySpace& s)
{
    std::vector<int> r(s.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<int>(i);
    return r;
}

json ids_to_labels(const std::vector<int>& ids, const KeySpace& s)
{
    json r = json::array();
    for (int i : ids) r.push_back(s.label(i));
    return r;
}

LinearMap map_from_json(const json& j, const KeySpace& from, const KeySpace& to)
{
    std::map<int, Vec> tab;
    if (!j.is_array()) throw InputError("a linear map is a list of {input, output}");
    for (const auto& e : j) {
        int in = find_label(from, need(e, "input").get<std::string>());
        tab[in] = vec_from_json(need(e, "output"), to);
    }
    return table_map(tab);
}

}  // namespace

std::string rational_str(const Rational& r)
{
    Rational c = r;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(const json& j)
{
    try {
        if (j.is_object()) {
            if (j.contains("coeff")) return parse_rational(j.at("coeff"));
            Rational num(mpz_class(need(j, "coeff_num").is_string() ? j.at("coeff_num").get<std::string>()
                                                                     : std::to_string(j.at("coeff_num").get<long>())));
            Rational den(1);
            if (j.contains("coeff_den"))
                den = Rational(mpz_class(j.at("coeff_den").is_string() ? j.at("coeff_den").get<std::string>()
                                                                       : std::to_string(j.at("coeff_den").get<long>())));
            if (den == 0) throw InputError("zero denominator");
            return num / den;
        }
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_string()) {
            Rational r(j.get<std::string>());
            if (r.get_den() == 0) throw InputError("zero denominator");
            r.canonicalize();
            return r;
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError("bad rational " + j.dump() + ": " + e.what());
    }
    throw InputError("bad rational " + j.dump());
}

GradedSpace space_from_json(const json& basis, const std::string& name)
{
    if (!basis.is_array()) throw InputError("basis must be a list");
    GradedSpace g;
    g.name = name;
    std::set<std::string> seen;
    for (const auto& b : basis) {
        auto l = need(b, "label").get<std::string>();
        if (!seen.insert(l).second) throw InputError("duplicate basis label '" + l + "'");
        g.basis.emplace_back(l, need(b, "degree").get<int>());
    }
    return g;
}

Vec vec_from_json(const json& j, const KeySpace& space)
{
    if (!j.is_array()) throw InputError("a vector is a list of {label, coeff}");
    Vec v;
    for (const auto& e : j) add_to(v, find_label(space, need(e, "label").get<std::string>()), parse_rational(e));
    return v;
}

json vec_to_json(const Vec& v, const KeySpace& space)
{
    json r = json::array();
    for (const auto& [id, c] : v) r.push_back({{"label", space.label(id)}, {"coeff", rational_str(c)}});
    return r;
}

AInfinityStructure algebra_from_json(const json& j)
{
    try {
        AInfinityStructure s;
        s.A = make_finite_space(space_from_json(need(j, "basis"), j.value("name", std::string("A"))));
        s.basis = all_ids(*s.A);
        s.m = zero_cochain(s.A);
        for (const auto& [k, entries] : need(j, "m").items()) {
            int arity = std::stoi(k);
            for (const auto& e : entries) {
                auto in = labels_to_ids(need(e, "inputs"), *s.A);
                if (static_cast<int>(in.size()) != arity)
                    throw InputError("entry of m_" + k + " has " + std::to_string(in.size()) + " inputs");
                s.m.add(in, vec_from_json(need(e, "output"), *s.A));
            }
        }
        s.cutoff = j.value("cutoff", 3);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("algebra: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("algebra: ") + e.what());
    }
}

json cochain_to_json(const Cochain& c)
{
    json r = json::array();
    for (const auto& [in, out] : c.table) {
        if (out.empty()) continue;
        r.push_back({{"inputs", ids_to_labels(in, *c.space)}, {"output", vec_to_json(out, *c.space)}});
    }
    return r;
}

json algebra_to_json(const AInfinityStructure& m, int max_arity)
{
    json j;
    json basis = json::array();
    for (int b : m.basis) basis.push_back({{"label", m.A->label(b)}, {"degree", m.A->degree(b)}});
    j["basis"] = basis;
    json mm = json::object();
    for (int k = 1; k <= max_arity; ++k) {
        json entries = json::array();
        for (const auto& t : all_tuples(m.basis, k, k)) {
            Vec out = m.m.eval(t);
            if (!out.empty()) entries.push_back({{"inputs", ids_to_labels(t, *m.A)}, {"output", vec_to_json(out, *m.A)}});
        }
        if (!entries.empty()) mm[std::to_string(k)] = entries;
    }
    j["m"] = mm;
    return j;
}

StructureInput structure_from_json(const json& j, int v_arity)
{
    try {
        StructureInput r;
        if (j.contains("structure")) {
            auto name = j.at("structure").get<std::string>();
            r.algebra = algebra_from_json(need(j, "algebra"));
            if (name == "tautological_ocha")
                r.q = build_tautological_ocha(r.algebra);
            else if (name == "explicit_o_part")
                r.q = build_explicit_o_part(r.algebra);
            else
                throw InputError("unknown structure '" + name + "'");
            r.named = true;
            r.a_basis = r.algebra.basis;
            r.v_basis = cochain_basis(*r.q.V, r.algebra.basis, v_arity);
            return r;
        }
        auto V = make_finite_space(space_from_json(need(need(j, "V"), "basis"), "V"));
        auto A = make_finite_space(space_from_json(need(need(j, "A"), "basis"), "A"));
        std::map<VList, Vec> c_tab;
        std::map<OMon, Vec> o_tab;
        for (const auto& e : j.value("c", json::array())) {
            VList v = labels_to_ids(need(e, "v_part"), *V);
            if (v.empty()) throw InputError("c entry with empty v_part");
            int s = canonicalize_v(*V, v);
            if (s == 0) throw InputError("c entry repeats an odd element");
            axpy(c_tab[v], s, vec_from_json(need(e, "value"), *V));
        }
        for (const auto& e : j.value("o", json::array())) {
            OMon m{labels_to_ids(e.value("v_part", json::array()), *V), labels_to_ids(e.value("a_part", json::array()), *A)};
            if (m.v.empty() && m.a.empty()) throw InputError("o entry with empty v_part and a_part");
            int s = canonicalize_v(*V, m.v);
            if (s == 0) throw InputError("o entry repeats an odd element");
            axpy(o_tab[m], s, vec_from_json(need(e, "value"), *A));
        }
        r.q = table_coderivation(V, A, j.value("degree", 1), c_tab, o_tab);
        r.v_basis = all_ids(*V);
        r.a_basis = all_ids(*A);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("structure: ") + e.what());
    }
}

Contraction contraction_from_json(const json& j, const StructureInput& big)
{
    if (!big.named) throw InputError("transfer needs a named structure on (C(A2,A2), A2)");
    try {
        Contraction c;
        c.V = c.V2 = big.q.V;
        c.v_basis = c.v2_basis = big.v_basis;
        c.iV = c.pV = identity_map();
        c.hV = zero_map();
        c.A2 = big.q.A;
        c.a2_basis = big.a_basis;
        c.A = make_finite_space(space_from_json(need(j, "basis"), big.q.A->name() + " small"));
        c.a_basis = all_ids(*c.A);
        c.iA = map_from_json(need(j, "i"), *c.A, *c.A2);
        c.pA = map_from_json(need(j, "p"), *c.A2, *c.A);
        c.hA = map_from_json(j.value("h", json::array()), *c.A2, *c.A2);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("contraction: ") + e.what());
    }
}

json certificate_to_json(const Certificate& c)
{
    json checks = json::array();
    for (const auto& k : c.checks) checks.push_back({{"name", k.name}, {"pass", k.pass}, {"witness", k.witness}});
    return {{"operad", c.operad}, {"checks", checks}, {"conclusion", c.conclusion}};
}

json e1_table_to_json(const E1Table& t)
{
    json rows = json::array();
    std::set<int> degs;
    for (const auto& [d, c] : t.enumeration) degs.insert(d);
    for (const auto& [d, c] : t.cobar) degs.insert(d);
    for (int d : degs) {
        auto get = [d](const std::map<int, long>& m) { return m.count(d) ? m.at(d) : 0L; };
        rows.push_back({{"degree", d}, {"trees", get(t.enumeration)}, {"cobar", get(t.cobar)}});
    }
    return {{"k", t.k}, {"n", t.n}, {"root", std::string(1, t.root)}, {"dmin", t.dmin}, {"dmax", t.dmax}, {"dimensions", rows}};
}

}  // namespace opcalc

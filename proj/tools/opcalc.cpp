// opcalc: command-line front end.
// Exit codes: 0 pass, 1 mathematical failure, 2 input error, 3 cutoff overflow.
#include "opcalc/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace opcalc;

namespace {

enum Exit { pass = 0, math_failure = 1, input_error = 2, cutoff_overflow = 3 };

struct RunConfig {
    std::vector<std::string> inputs;
    std::string output;
    std::string format = "json";
    int arity = 4;
    int weight = 4;
    int poly_degree = 3;
    int tree_bound = 4;
    std::string operad;
    // command specific
    int degree = 0;
    bool degree_set = false;
    int k = -1, n = -1;
    std::string root = "o";
    int dmin = -8, dmax = 2;
};

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string only_input(const RunConfig& cfg)
{
    if (cfg.inputs.size() != 1) throw InputError("expected exactly one --input");
    return cfg.inputs[0];
}

unsigned thread_cap()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* s = std::getenv("OPCALC_THREADS");
    if (!s) return hw;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*s == '\0' || *end != '\0' || v < 1) throw InputError("OPCALC_THREADS must be a positive integer");
    return static_cast<unsigned>(std::min<long>(v, hw));
}

void text_lines(const json& j, const std::string& prefix, std::ostream& out)
{
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) text_lines(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); })) {
        for (std::size_t i = 0; i < j.size(); ++i) text_lines(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

std::string render(const json& report, const std::string& format, const std::string& csv)
{
    if (format == "json") return report.dump(2) + "\n";
    if (format == "csv") {
        if (csv.empty()) throw InputError("csv output is not available for this command");
        return csv;
    }
    std::ostringstream s;
    text_lines(report, "", s);
    return s.str();
}

void emit(const RunConfig& cfg, const json& report, const std::string& csv = {})
{
    std::string text = render(report, cfg.format, csv);
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw InputError("cannot write " + cfg.output);
    out << text;
}

int cmd_check_mc(const RunConfig& cfg)
{
    auto m = algebra_from_json(read_json(only_input(cfg)));
    m.cutoff = cfg.arity;
    auto viol = maurer_cartan_check(m);
    json vs = json::array();
    for (const auto& v : viol) {
        json in = json::array();
        for (int a : v.inputs) in.push_back(m.A->label(a));
        vs.push_back({{"arity", v.arity}, {"inputs", in}, {"defect", vec_to_json(v.defect, *m.A)}});
    }
    emit(cfg, {{"command", "check-mc"}, {"arity", cfg.arity}, {"pass", viol.empty()}, {"violations", vs}});
    return viol.empty() ? pass : math_failure;
}

int cmd_qsq(const RunConfig& cfg)
{
    auto s = structure_from_json(read_json(only_input(cfg)), std::max(cfg.arity - 2, 0));
    auto viol = q_square_check(s.q, s.v_basis, s.a_basis, cfg.arity, cfg.arity);
    json vs = json::array();
    for (const auto& v : viol) {
        json vp = json::array(), ap = json::array();
        for (int x : v.mon.v) vp.push_back(s.q.V->label(x));
        for (int x : v.mon.a) ap.push_back(s.q.A->label(x));
        json e = {{"color", v.c_color ? "c" : "o"}, {"v_part", vp}};
        if (!v.c_color) e["a_part"] = ap;
        e["defect"] = vec_to_json(v.defect, v.c_color ? *s.q.V : *s.q.A);
        vs.push_back(e);
    }
    emit(cfg, {{"command", "qsq"}, {"arity", cfg.arity}, {"pass", viol.empty()}, {"violations", vs}});
    return viol.empty() ? pass : math_failure;
}

int cmd_nonformality(const RunConfig& cfg)
{
    if (cfg.operad.empty()) throw InputError("--operad S|sc is required");
    CoopKind kind = parse_coop_kind(cfg.operad);
    if (kind != CoopKind::S && kind != CoopKind::sc) throw InputError("--operad must be S or sc");
    if (cfg.arity < 3) throw InputError("the certificate needs --arity >= 3");
    if (cfg.arity > max_cooperad_cutoff)
        throw CutoffOverflow("cooperad arity cutoff " + std::to_string(max_cooperad_cutoff));
    auto cert = nonformality_witness(build_cooperad_tables(kind, cfg.arity));
    emit(cfg, certificate_to_json(cert));
    return cert.conclusion == "nonformal" ? pass : math_failure;
}

int cmd_sc_table(const RunConfig& cfg)
{
    if (cfg.tree_bound > max_tree_bound) throw CutoffOverflow("tree bound k + n <= " + std::to_string(max_tree_bound));
    if (cfg.root != "o" && cfg.root != "c") throw InputError("--root must be o or c");
    if (cfg.dmin > cfg.dmax) throw InputError("empty degree range");
    const char root = cfg.root[0];
    std::vector<std::pair<int, int>> sigs;
    if (cfg.k >= 0 || cfg.n >= 0) {
        int k = std::max(cfg.k, 0), n = std::max(cfg.n, 0);
        if (k + n < 1) throw InputError("need k + n >= 1");
        if (root == 'c' && n) throw InputError("a c-rooted tree has no o-leaves");
        if (k + n > cfg.tree_bound) throw CutoffOverflow("k + n exceeds --tree-bound " + std::to_string(cfg.tree_bound));
        sigs.push_back({k, n});
    } else {
        for (int t = 1; t <= cfg.tree_bound; ++t)
            for (int k = t; k >= 0; --k)
                if (root == 'o' || k == t) sigs.push_back({k, t - k});
    }
    std::vector<E1Table> tables(sigs.size());
    std::vector<std::string> errors(sigs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < sigs.size();) {
            try {
                tables[i] = e1_dimension_table(sigs[i].first, sigs[i].second, root, cfg.dmin, cfg.dmax);
            } catch (const std::logic_error& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min<std::size_t>(thread_cap(), sigs.size()); ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (!e.empty()) {
            std::cerr << e << "\n";
            return math_failure;
        }

    json rows = json::array();
    std::string csv = "k,n,root,degree,trees,cobar\n";
    for (const auto& t : tables) {
        json j = e1_table_to_json(t);
        rows.push_back(j);
        for (const auto& r : j["dimensions"])
            csv += std::to_string(t.k) + "," + std::to_string(t.n) + "," + root + "," + r["degree"].dump() + "," +
                   r["trees"].dump() + "," + r["cobar"].dump() + "\n";
    }
    emit(cfg, {{"command", "sc-table"}, {"tree_bound", cfg.tree_bound}, {"tables", rows}}, csv);
    return pass;
}

int cmd_transfer(const RunConfig& cfg)
{
    if (cfg.inputs.size() != 2) throw InputError("transfer needs --input structure.json --input contraction.json");
    json cj = read_json(cfg.inputs[1]);
    auto big = structure_from_json(read_json(cfg.inputs[0]), cj.value("v_arity", 1));
    auto c = contraction_from_json(cj, big);
    if (auto bad = check_contraction(c, big.q); !bad.empty()) {
        std::string msg = "not a contraction:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw InputError(msg);
    }
    auto res = transfer_structure(big.q, c, cfg.weight);
    auto basis = weight_basis(*big.q.V, c.v_basis, c.a_basis, cfg.weight);
    auto qsq = q_square_check(res.q, basis);
    auto compat = morphism_compatibility_check(res.t, res.q, big.q, basis);

    AInfinityStructure small;
    small.A = c.A;
    small.basis = c.a_basis;
    small.m = zero_cochain(c.A);
    for (const auto& x : basis.o)
        if (x.v.empty()) small.m.add(x.a, res.q.o({}, x.a));
    const bool ok = qsq.empty() && compat.empty();
    json report = {{"command", "transfer"},
                   {"weight", cfg.weight},
                   {"algebra", algebra_to_json(small, cfg.weight + 1)},
                   {"q_square_violations", qsq.size()},
                   {"compatibility_violations", compat.size()},
                   {"pass", ok}};
    emit(cfg, report);
    return ok ? pass : math_failure;
}

int cmd_hh(const RunConfig& cfg)
{
    if (!cfg.degree_set) throw InputError("--degree is required");
    json j = read_json(only_input(cfg));
    json report = {{"command", "hh"}, {"degree", cfg.degree}};
    std::string csv = "degree,dimension\n";
    if (j.contains("polynomial")) {
        int vars = j["polynomial"].value("vars", 1);
        if (vars < 1) throw InputError("polynomial.vars must be positive");
        auto d = polynomial_hh_dimension(vars, cfg.poly_degree, cfg.degree);
        report["poly_degree"] = cfg.poly_degree;
        report["dimension"] = d;
        csv += std::to_string(cfg.degree) + "," + std::to_string(d) + "\n";
    } else {
        auto m = algebra_from_json(j);
        auto r = hochschild_cohomology(m, cfg.degree, cfg.arity);
        json reps = json::array();
        for (const auto& c : r.representatives) reps.push_back(cochain_to_json(c));
        report["arity"] = cfg.arity;
        report["dimension"] = r.dimension;
        report["representatives"] = reps;
        csv += std::to_string(cfg.degree) + "," + std::to_string(r.dimension) + "\n";
    }
    emit(cfg, report, csv);
    return pass;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"opcalc: exact computations for two-colored operads and their algebras"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto positive = CLI::Range(1, 1 << 20);
    auto common = [&](CLI::App* s) {
        s->add_option("--output", cfg.output, "write the report here instead of stdout");
        s->add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    };
    auto* mc = app.add_subcommand("check-mc", "Maurer-Cartan equation of an A-infinity algebra");
    auto* qsq = app.add_subcommand("qsq", "Q^2 = 0 for a structure on (V, A)");
    auto* nf = app.add_subcommand("nonformality", "nonformality certificate for S or sc");
    auto* sc = app.add_subcommand("sc-table", "E1 dimensions of the Swiss Cheese spectral sequence");
    auto* tr = app.add_subcommand("transfer", "homotopy transfer along a contraction");
    auto* hh = app.add_subcommand("hh", "Hochschild cohomology");
    for (auto* s : {mc, qsq, tr, hh}) s->add_option("--input", cfg.inputs, "input file")->required();
    for (auto* s : {mc, qsq, nf, hh}) s->add_option("--arity", cfg.arity, "arity cutoff")->check(positive);
    for (auto* s : {mc, qsq, nf, sc, tr, hh}) common(s);
    tr->add_option("--weight", cfg.weight, "weight cutoff")->check(positive);
    hh->add_option("--poly-degree", cfg.poly_degree, "polynomial degree cutoff")->check(positive);
    hh->add_option("--degree", cfg.degree, "cohomological degree")->each([&](const std::string&) { cfg.degree_set = true; });
    nf->add_option("--operad", cfg.operad, "S or sc");
    sc->add_option("--tree-bound", cfg.tree_bound, "bound on k + n")->check(positive);
    sc->add_option("--k", cfg.k, "c-leaves")->check(CLI::NonNegativeNumber);
    sc->add_option("--n", cfg.n, "o-leaves")->check(CLI::NonNegativeNumber);
    sc->add_option("--root", cfg.root, "o or c");
    sc->add_option("--dmin", cfg.dmin, "lowest degree");
    sc->add_option("--dmax", cfg.dmax, "highest degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return input_error;
    }

    try {
        thread_cap();
        if (mc->parsed()) return cmd_check_mc(cfg);
        if (qsq->parsed()) return cmd_qsq(cfg);
        if (nf->parsed()) return cmd_nonformality(cfg);
        if (sc->parsed()) return cmd_sc_table(cfg);
        if (tr->parsed()) return cmd_transfer(cfg);
        if (hh->parsed()) return cmd_hh(cfg);
    } catch (const CutoffOverflow& e) {
        std::cerr << "cutoff overflow: " << e.what() << "\n";
        return cutoff_overflow;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return math_failure;
    }
    return input_error;
}

#include "opcalc/transfer.hpp"

#include <memory>
#include <tuple>
#include <stdexcept>

namespace opcalc {

Vec LinearMap::operator()(const Vec& x) const
{
    Vec y;
    for (const auto& [id, c] : x)
        axpy(y, c, on_basis(id));
    return y;
}

LinearMap identity_map()
{
    return {[](int id) { return Vec{{id, 1}}; }};
}

LinearMap zero_map()
{
    return {[](int) { return Vec{}; }};
}

LinearMap table_map(const std::map<int, Vec>& table)
{
    return {[table](int id) {
        auto it = table.find(id);
        return it == table.end() ? Vec{} : it->second;
    }};
}

int o_weight(int k, int n)
{
    return 2 * k + n - 1;
}

int c_weight(int k)
{
    return 2 * (k - 1);
}

Contraction trivial_contraction(SpacePtr V, SpacePtr A, std::vector<int> v_basis, std::vector<int> a_basis)
{
    Contraction c;
    c.V = c.V2 = std::move(V);
    c.A = c.A2 = std::move(A);
    c.iV = c.pV = c.iA = c.pA = identity_map();
    c.hV = c.hA = zero_map();
    c.v_basis = c.v2_basis = std::move(v_basis);
    c.a_basis = c.a2_basis = std::move(a_basis);
    return c;
}

std::vector<std::string> check_contraction(const Contraction& c, const Coderivation& q2)
{
    std::vector<std::string> bad;
    LinearMap dA2{[&q2](int a) { return q2.o({}, {a}); }};
    LinearMap dV2{[&q2](int v) { return q2.c({v}); }};
    auto check = [&bad](const std::string& what, const std::vector<int>& basis, const std::function<Vec(int)>& f) {
        for (int x : basis)
            if (!f(x).empty()) {
                bad.push_back(what);
                return;
            }
    };
    auto side = [&](const std::string& tag, const LinearMap& i, const LinearMap& p, const LinearMap& h,
                    const LinearMap& d2, const std::vector<int>& small, const std::vector<int>& big) {
        check(tag + ": p i = id", small, [&](int x) {
            Vec r = p(i(x));
            add_to(r, x, -1);
            return r;
        });
        check(tag + ": i is a chain map", small, [&](int x) {
            Vec r = d2(i(x));
            axpy(r, -1, i(p(d2(i(x)))));
            return r;
        });
        check(tag + ": i p - id = d h + h d", big, [&](int x) {
            Vec r = i(p(x));
            add_to(r, x, -1);
            axpy(r, -1, d2(h(x)));
            axpy(r, -1, h(d2(x)));
            return r;
        });
        check(tag + ": h h = 0", big, [&](int x) { return h(h(x)); });
        check(tag + ": p h = 0", big, [&](int x) { return p(h(x)); });
        check(tag + ": h i = 0", small, [&](int x) { return h(i(x)); });
    };
    side("A", c.iA, c.pA, c.hA, dA2, c.a_basis, c.a2_basis);
    side("V", c.iV, c.pV, c.hV, dV2, c.v_basis, c.v2_basis);
    return bad;
}

namespace {

struct TransferState {
    Coderivation q2;
    Contraction c;
    int W;
    std::map<VList, Vec> qc, tc;
    std::map<OMon, Vec> qo, to;
    Coderivation q;
    SCoalgebraMorphism t;

    void compute_c(const VList& v)
    {
        const int k = static_cast<int>(v.size());
        if (c_weight(k) > W)
            throw CutoffOverflow("transfer: c-component of weight " + std::to_string(c_weight(k)) +
                                 " beyond the weight cutoff");
        Vec K = apply_c(q2, hat_T_c(t, v, true));
        auto keep = [k](int len) { return len != 1 && len != k; };
        for (const auto& [y, coef] : hat_c(q, v, keep))
            axpy(K, -coef, Tc(y));
        qc.emplace(v, c.pV(K));
        tc.emplace(v, c.hV(K));
    }

    void compute_o(const OMon& x)
    {
        const int k = static_cast<int>(x.v.size()), n = static_cast<int>(x.a.size());
        if (o_weight(k, n) > W)
            throw CutoffOverflow("transfer: o-component of weight " + std::to_string(o_weight(k, n)) +
                                 " beyond the weight cutoff");
        Vec K = apply_o(q2, hat_T_o(t, x, [](int nc, int no) { return !(nc == 0 && no == 1); }));
        auto keep = [k, n](int k2, int n2) { return !(k2 == 0 && n2 == 1) && !(k2 == k && n2 == n); };
        for (const auto& [y, coef] : hat_o(q, x, keep))
            axpy(K, -coef, To(y.v, y.a));
        qo.emplace(x, c.pA(K));
        to.emplace(x, c.hA(K));
    }

    Vec Qc(const VList& v)
    {
        if (v.size() == 1) {
            CSum s;
            for (const auto& [w, x] : c.iV(v[0]))
                add_to(s, VList{w}, x);
            return c.pV(apply_c(q2, s));
        }
        if (!qc.count(v))
            compute_c(v);
        return qc.at(v);
    }

    Vec Tc(const VList& v)
    {
        if (v.size() == 1)
            return c.iV(v[0]);
        if (!tc.count(v))
            compute_c(v);
        return tc.at(v);
    }

    Vec Qo(const VList& v, const Tuple& a)
    {
        if (v.empty() && a.size() == 1) {
            OSum s;
            for (const auto& [b, x] : c.iA(a[0]))
                add_to(s, OMon{{}, {b}}, x);
            return c.pA(apply_o(q2, s));
        }
        if (v.empty() && a.empty())
            return {};
        OMon x{v, a};
        if (!qo.count(x))
            compute_o(x);
        return qo.at(x);
    }

    Vec To(const VList& v, const Tuple& a)
    {
        if (v.empty() && a.size() == 1)
            return c.iA(a[0]);
        if (v.empty() && a.empty())
            return {};
        OMon x{v, a};
        if (!to.count(x))
            compute_o(x);
        return to.at(x);
    }
};

}  // namespace

TransferResult transfer_structure(const Coderivation& q2, const Contraction& c, int max_weight)
{
    if (q2.V != c.V2 || q2.A != c.A2)
        throw std::invalid_argument("transfer: structure and contraction live on different spaces");
    auto st = std::make_shared<TransferState>();
    st->q2 = q2;
    st->c = c;
    st->W = max_weight;
    TransferState* raw = st.get();
    // internal views hold a raw pointer; the returned ones keep the state alive
    auto views = [&c, &q2](auto holder) {
        Coderivation q;
        q.V = c.V;
        q.A = c.A;
        q.degree = q2.degree;
        q.c = [holder](const VList& v) { return holder->Qc(v); };
        q.o = [holder](const VList& v, const Tuple& a) { return holder->Qo(v, a); };
        SCoalgebraMorphism t;
        t.V = c.V;
        t.A = c.A;
        t.V2 = c.V2;
        t.A2 = c.A2;
        t.c = [holder](const VList& v) { return holder->Tc(v); };
        t.o = [holder](const VList& v, const Tuple& a) { return holder->To(v, a); };
        return std::make_pair(q, t);
    };
    std::tie(st->q, st->t) = views(raw);
    TransferResult r;
    r.max_weight = max_weight;
    std::tie(r.q, r.t) = views(st);
    return r;
}

MonomialBasis weight_basis(const KeySpace& V, const std::vector<int>& vbasis, const std::vector<int>& abasis,
                           int max_weight)
{
    auto shape = [max_weight](bool is_c, int k, int n) {
        return is_c ? c_weight(k) <= max_weight : o_weight(k, n) <= max_weight;
    };
    return enumerate_monomials(V, vbasis, abasis, max_weight / 2 + 1, max_weight + 1, -1, shape);
}

AInfinityStructure ainf_transfer_oracle(const AInfinityStructure& m2, const Contraction& c, int max_arity)
{
    if (m2.A != c.A2)
        throw std::invalid_argument("transfer oracle: algebra and contraction live on different spaces");
    std::map<Tuple, Vec> phi_memo;
    std::function<Vec(const Tuple&)> phi, psi;
    // multilinear evaluation of m2 on a list of vectors
    auto eval_on = [&m2](const std::vector<Vec>& args) {
        Vec out;
        std::function<void(std::size_t, Tuple&, const Rational&)> rec = [&](std::size_t i, Tuple& cur,
                                                                             const Rational& coef) {
            if (i == args.size()) {
                axpy(out, coef, m2.m.eval(cur));
                return;
            }
            for (const auto& [id, x] : args[i]) {
                cur.push_back(id);
                rec(i + 1, cur, coef * x);
                cur.pop_back();
            }
        };
        Tuple cur;
        rec(0, cur, 1);
        return out;
    };
    psi = [&](const Tuple& run) { return run.size() == 1 ? c.iA(run[0]) : c.hA(phi(run)); };
    phi = [&](const Tuple& t) {
        auto it = phi_memo.find(t);
        if (it != phi_memo.end())
            return it->second;
        const int n = static_cast<int>(t.size());
        Vec out;
        // compositions of n: bit j set means a cut after position j
        for (unsigned cuts = 1; cuts < (1u << (n - 1)); ++cuts) {
            std::vector<Vec> args;
            int start = 0;
            for (int j = 0; j < n; ++j)
                if (j == n - 1 || ((cuts >> j) & 1)) {
                    args.push_back(psi(Tuple(t.begin() + start, t.begin() + j + 1)));
                    start = j + 1;
                }
            axpy(out, 1, eval_on(args));
        }
        phi_memo.emplace(t, out);
        return out;
    };
    AInfinityStructure r;
    r.A = c.A;
    r.basis = c.a_basis;
    r.m = zero_cochain(c.A);
    r.cutoff = max_arity;
    for (const auto& t : all_tuples(c.a_basis, 1, max_arity)) {
        Vec v = t.size() == 1 ? c.pA(eval_on({c.iA(t[0])})) : c.pA(phi(t));
        r.m.add(t, v);
    }
    return r;
}

}  // namespace opcalc

namespace opcalc {

Contraction acyclic_pair_contraction(SpacePtr V, std::vector<int> v_basis, const AInfinityStructure& big, int e, int f)
{
    Vec de = big.m.eval({e});
    if (de.size() != 1 || !de.count(f))
        throw std::invalid_argument("acyclic pair: d e must be a multiple of f");
    const Rational lam = de.at(f);
    GradedSpace g;
    g.name = big.A->name() + " cohomology";
    std::map<int, Vec> i_tab, p_tab;
    for (int b : big.basis) {
        if (b == e || b == f)
            continue;
        int id = static_cast<int>(g.basis.size());
        g.basis.emplace_back(big.A->label(b), big.A->degree(b));
        i_tab[id] = Vec{{b, 1}};
        p_tab[b] = Vec{{id, 1}};
    }
    Contraction c;
    c.V = c.V2 = std::move(V);
    c.v_basis = c.v2_basis = std::move(v_basis);
    c.iV = c.pV = identity_map();
    c.hV = zero_map();
    c.A2 = big.A;
    c.A = make_finite_space(g);
    for (std::size_t i = 0; i < g.dim(); ++i)
        c.a_basis.push_back(static_cast<int>(i));
    c.a2_basis = big.basis;
    c.iA = table_map(i_tab);
    c.pA = table_map(p_tab);
    c.hA = table_map({{f, Vec{{e, -1 / lam}}}});
    return c;
}

AInfinityStructure acyclic_unit_extension()
{
    GradedSpace g{"Q+<e,f>", {{"1", 0}, {"e", 1}, {"f", 2}}};
    std::map<std::pair<int, int>, Vec> prod;
    for (int b = 0; b < 3; ++b) {
        prod[{0, b}] = Vec{{b, 1}};
        if (b)
            prod[{b, 0}] = Vec{{b, 1}};
    }
    return algebra_from_product(g, prod, {{1, Vec{{2, 1}}}}, 4);
}

AInfinityStructure massey_extension()
{
    GradedSpace g{"Massey", {{"1", 0}, {"x", 1}, {"y", 1}, {"z", 2}, {"e", 1}, {"f", 2}}};
    std::map<std::pair<int, int>, Vec> prod;
    for (int b = 0; b < 6; ++b) {
        prod[{0, b}] = Vec{{b, 1}};
        if (b)
            prod[{b, 0}] = Vec{{b, 1}};
    }
    prod[{1, 2}] = Vec{{5, 1}};  // x y = f
    prod[{4, 1}] = Vec{{3, 1}};  // e x = z
    return algebra_from_product(g, prod, {{4, Vec{{5, 1}}}}, 4);
}

bool check_minimal_model_condition(const CooperadTable& t, int W, const GeneratorWeights& w)
{
    if (t.cutoff < W + 1) throw CutoffOverflow("cooperad table arity below weight cutoff + 1");
    for (const auto& [e, terms] : t.delta) {
        int we = element_weight(e, w);
        if (we > W) continue;
        if (we < 1) return false;
        for (const auto& term : terms) {
            int a = element_weight(term.outer, w), b = element_weight(term.inner, w);
            if (a < 1 || b < 1 || a + b != we) return false;
        }
    }
    return true;
}

}  // namespace opcalc

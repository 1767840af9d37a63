#include "opcalc/hochschild.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace opcalc {

KeySpace::KeySpace(std::string name, std::function<int(const Key&)> degree_fn,
                   std::function<std::string(const Key&)> label_fn)
    : name_(std::move(name)), degree_fn_(std::move(degree_fn)), label_fn_(std::move(label_fn))
{
}

int KeySpace::intern(const Key& k)
{
    auto it = index_.find(k);
    if (it != index_.end())
        return it->second;
    int id = static_cast<int>(keys_.size());
    keys_.push_back(k);
    degrees_.push_back(degree_fn_(k));
    index_.emplace(k, id);
    return id;
}

int KeySpace::find(const Key& k) const
{
    auto it = index_.find(k);
    return it == index_.end() ? -1 : it->second;
}

std::string KeySpace::label(int id) const
{
    if (label_fn_)
        return label_fn_(keys_.at(id));
    std::string s = "[";
    for (std::size_t i = 0; i < keys_.at(id).size(); ++i)
        s += (i ? "," : "") + std::to_string(keys_[id][i]);
    return s + "]";
}

void add_to(Vec& y, int id, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, ins] = y.emplace(id, c);
    if (!ins) {
        it->second += c;
        if (it->second == 0)
            y.erase(it);
    }
}

void axpy(Vec& y, const Rational& c, const Vec& x)
{
    if (c == 0)
        return;
    for (const auto& [id, v] : x)
        add_to(y, id, c * v);
}

Vec scaled(const Vec& x, const Rational& c)
{
    Vec y;
    axpy(y, c, x);
    return y;
}

SpacePtr make_finite_space(const GradedSpace& g)
{
    auto labels = std::make_shared<std::vector<std::string>>();
    auto degs = std::make_shared<std::vector<int>>();
    for (const auto& [l, d] : g.basis) {
        labels->push_back(l);
        degs->push_back(d);
    }
    auto sp = std::make_shared<KeySpace>(
        g.name, [degs](const Key& k) { return degs->at(k.at(0)); },
        [labels](const Key& k) { return labels->at(k.at(0)); });
    for (std::size_t i = 0; i < g.basis.size(); ++i)
        sp->intern({static_cast<int>(i)});
    return sp;
}

// ---------------------------------------------------------------- cochains

Vec Cochain::eval(const Tuple& in) const
{
    if (rule)
        return rule(in);
    auto it = table.find(in);
    return it == table.end() ? Vec{} : it->second;
}

std::set<int> Cochain::arities() const
{
    if (rule)
        return rule_arities;
    std::set<int> s;
    for (const auto& [in, out] : table)
        s.insert(static_cast<int>(in.size()));
    return s;
}

void Cochain::add(const Tuple& in, int out, const Rational& c)
{
    if (c == 0)
        return;
    Vec& v = table[in];
    add_to(v, out, c);
    if (v.empty())
        table.erase(in);
}

void Cochain::add(const Tuple& in, const Vec& out, const Rational& c)
{
    if (c == 0 || out.empty())
        return;
    Vec& v = table[in];
    axpy(v, c, out);
    if (v.empty())
        table.erase(in);
}

bool Cochain::is_zero() const
{
    if (rule)
        throw std::logic_error("is_zero on a rule cochain");
    return table.empty();
}

Cochain& Cochain::operator+=(const Cochain& o)
{
    if (rule || o.rule) {
        auto a = *this, b = o;
        rule = [a, b](const Tuple& t) {
            Vec v = a.eval(t);
            axpy(v, 1, b.eval(t));
            return v;
        };
        std::set<int> ar = a.arities();
        for (int x : b.arities())
            ar.insert(x);
        rule_arities = ar;
        table.clear();
        return *this;
    }
    for (const auto& [in, out] : o.table)
        add(in, out);
    return *this;
}

Cochain Cochain::scaled(const Rational& c) const
{
    Cochain r{space, {}, {}, {}};
    if (rule) {
        auto a = *this;
        r.rule = [a, c](const Tuple& t) { return opcalc::scaled(a.eval(t), c); };
        r.rule_arities = rule_arities;
        return r;
    }
    for (const auto& [in, out] : table)
        r.add(in, out, c);
    return r;
}

Cochain Cochain::restricted(const std::vector<Tuple>& inputs) const
{
    Cochain r{space, {}, {}, {}};
    for (const auto& t : inputs)
        r.add(t, eval(t));
    return r;
}

Cochain Cochain::truncated(int max_arity) const
{
    if (rule)
        throw std::logic_error("truncated on a rule cochain");
    Cochain r{space, {}, {}, {}};
    for (const auto& [in, out] : table)
        if (static_cast<int>(in.size()) <= max_arity)
            r.table.emplace(in, out);
    return r;
}

Cochain zero_cochain(SpacePtr A)
{
    return Cochain{std::move(A), {}, {}, {}};
}

Cochain elementary_cochain(SpacePtr A, const Tuple& in, int out, const Rational& c)
{
    Cochain r{std::move(A), {}, {}, {}};
    r.add(in, out, c);
    return r;
}

int component_degree(const KeySpace& A, const Tuple& in, int out)
{
    int d = static_cast<int>(in.size()) + A.degree(out);
    for (int x : in)
        d -= A.degree(x);
    return d;
}

bool equal_tables(const Cochain& a, const Cochain& b)
{
    return a.table == b.table;
}

namespace {

// outer o inner, optionally multiplied by -(-1)^{(|outer|+1)(|inner|+1)} (the second bracket term)
void insert_tables(const Cochain& outer, const Cochain& inner, bool antisym, Cochain& result)
{
    const KeySpace& A = *outer.space;
    struct InnerEntry {
        const Tuple* in;
        Rational coef;
        int deg;
    };
    std::unordered_map<int, std::vector<InnerEntry>> by_out;
    for (const auto& [in, out] : inner.table)
        for (const auto& [b, c] : out)
            by_out[b].push_back({&in, c, component_degree(A, in, b)});
    for (const auto& [bin, out1] : outer.table) {
        long shifted = 0;  // sum of |a_l|+1 over slots before i
        for (std::size_t i = 0; i < bin.size(); ++i) {
            auto it = by_out.find(bin[i]);
            if (it != by_out.end()) {
                for (const auto& e : it->second) {
                    Tuple t(bin.begin(), bin.begin() + i);
                    t.insert(t.end(), e.in->begin(), e.in->end());
                    t.insert(t.end(), bin.begin() + i + 1, bin.end());
                    long ex = static_cast<long>(e.deg + 1) * shifted;
                    if (!antisym) {
                        result.add(t, out1, sign_of(ex) * e.coef);
                    }
                    else {
                        // outer degree depends on the output component
                        for (const auto& [o, c] : out1) {
                            int kout = component_degree(A, bin, o);
                            long ex2 = ex + static_cast<long>(kout + 1) * (e.deg + 1) + 1;
                            result.add(t, o, sign_of(ex2) * e.coef * c);
                        }
                    }
                }
            }
            shifted += A.degree(bin[i]) + 1;
        }
    }
}

Vec insert_eval(const Cochain& outer, const Cochain& inner, bool antisym, const Tuple& a)
{
    const KeySpace& A = *outer.space;
    Vec res;
    const int n = static_cast<int>(a.size());
    std::set<int> oar = outer.arities();
    for (int r2 : inner.arities()) {
        if (r2 > n)
            continue;
        int r1 = n - r2 + 1;
        if (!oar.count(r1))
            continue;
        long shifted = 0;
        for (int i = 0; i + r2 <= n; ++i) {
            Tuple sub(a.begin() + i, a.begin() + i + r2);
            Vec iv = inner.eval(sub);
            for (const auto& [b, c] : iv) {
                int kin = component_degree(A, sub, b);
                Tuple t(a.begin(), a.begin() + i);
                t.push_back(b);
                t.insert(t.end(), a.begin() + i + r2, a.end());
                long ex = static_cast<long>(kin + 1) * shifted;
                Vec ov = outer.eval(t);
                for (const auto& [o, c2] : ov) {
                    long e = ex;
                    if (antisym)
                        e += static_cast<long>(component_degree(A, t, o) + 1) * (kin + 1) + 1;
                    add_to(res, o, sign_of(e) * c * c2);
                }
            }
            if (i < n)
                shifted += A.degree(a[i]) + 1;
        }
    }
    return res;
}

std::set<int> composite_arities(const Cochain& outer, const Cochain& inner)
{
    std::set<int> s;
    for (int r1 : outer.arities())
        if (r1 >= 1)
            for (int r2 : inner.arities())
                s.insert(r1 + r2 - 1);
    return s;
}

}  // namespace

Cochain compose(const Cochain& p1, const Cochain& p2)
{
    Cochain r = zero_cochain(p1.space);
    if (!p1.is_rule() && !p2.is_rule()) {
        insert_tables(p1, p2, false, r);
        return r;
    }
    r.rule = [p1, p2](const Tuple& t) { return insert_eval(p1, p2, false, t); };
    r.rule_arities = composite_arities(p1, p2);
    return r;
}

Cochain gerstenhaber_bracket(const Cochain& q1, const Cochain& q2)
{
    if (q1.space != q2.space)
        throw std::invalid_argument("bracket of cochains over different spaces");
    Cochain r = zero_cochain(q1.space);
    if (!q1.is_rule() && !q2.is_rule()) {
        insert_tables(q1, q2, false, r);
        insert_tables(q2, q1, true, r);
        return r;
    }
    r.rule = [q1, q2](const Tuple& t) {
        Vec v = insert_eval(q1, q2, false, t);
        axpy(v, 1, insert_eval(q2, q1, true, t));
        return v;
    };
    r.rule_arities = composite_arities(q1, q2);
    for (int x : composite_arities(q2, q1))
        r.rule_arities.insert(x);
    return r;
}

Cochain cup_product(const Cochain& p1, const Cochain& p2, const Cochain& m2)
{
    SpacePtr sp = p1.space;
    std::set<int> ar;
    for (int a : p1.arities())
        for (int b : p2.arities())
            ar.insert(a + b);
    Cochain r = zero_cochain(sp);
    r.rule_arities = ar;
    r.rule = [p1, p2, m2, sp](const Tuple& t) {
        Vec res;
        for (int r1 : p1.arities()) {
            if (r1 > static_cast<int>(t.size()))
                continue;
            Tuple ta(t.begin(), t.begin() + r1), tb(t.begin() + r1, t.end());
            if (!p2.arities().count(static_cast<int>(tb.size())))
                continue;
            long shifted = 0;
            for (int x : ta)
                shifted += sp->degree(x) + 1;
            Vec va = p1.eval(ta), vb = p2.eval(tb);
            for (const auto& [b, cb] : vb) {
                int k2 = component_degree(*sp, tb, b);
                long ex = static_cast<long>(k2 + 1) * shifted;
                for (const auto& [a, ca] : va)
                    axpy(res, sign_of(ex) * ca * cb, m2.eval({a, b}));
            }
        }
        return res;
    };
    if (!p1.is_rule() && !p2.is_rule() && !m2.is_rule()) {
        // materialize on the support
        Cochain tab = zero_cochain(sp);
        for (const auto& [ia, oa] : p1.table)
            for (const auto& [ib, ob] : p2.table) {
                Tuple t(ia);
                t.insert(t.end(), ib.begin(), ib.end());
                if (!tab.table.count(t))
                    tab.add(t, r.rule(t));
            }
        return tab;
    }
    return r;
}

// ---------------------------------------------------------------- A-infinity

std::vector<Tuple> all_tuples(const std::vector<int>& basis, int min_arity, int max_arity)
{
    std::vector<Tuple> out;
    std::vector<Tuple> layer{{}};
    for (int r = 0; r <= max_arity; ++r) {
        if (r >= min_arity)
            out.insert(out.end(), layer.begin(), layer.end());
        if (r == max_arity)
            break;
        std::vector<Tuple> next;
        next.reserve(layer.size() * basis.size());
        for (const auto& t : layer)
            for (int b : basis) {
                Tuple u(t);
                u.push_back(b);
                next.push_back(std::move(u));
            }
        layer = std::move(next);
    }
    return out;
}

std::vector<MCViolation> maurer_cartan_check(const AInfinityStructure& m)
{
    std::vector<MCViolation> out;
    Cochain mm = gerstenhaber_bracket(m.m, m.m);
    if (mm.is_rule()) {
        for (const auto& t : all_tuples(m.basis, 0, m.cutoff)) {
            Vec v = mm.eval(t);
            if (!v.empty())
                out.push_back({static_cast<int>(t.size()), t, v});
        }
        return out;
    }
    for (const auto& [in, v] : mm.table)
        if (static_cast<int>(in.size()) <= m.cutoff)
            out.push_back({static_cast<int>(in.size()), in, v});
    return out;
}

Cochain hochschild_differential(const AInfinityStructure& m, const Cochain& p)
{
    return gerstenhaber_bracket(m.m, p);
}

namespace {

struct CochainBasis {
    std::vector<std::pair<Tuple, int>> elems;
    std::map<std::pair<Tuple, int>, std::size_t> index;
    void add(const Tuple& t, int o)
    {
        index.emplace(std::make_pair(t, o), elems.size());
        elems.emplace_back(t, o);
    }
};

CochainBasis degree_basis(const AInfinityStructure& m, int degree, int min_arity, int max_arity)
{
    CochainBasis b;
    for (const auto& t : all_tuples(m.basis, min_arity, max_arity))
        for (int o : m.basis)
            if (component_degree(*m.A, t, o) == degree)
                b.add(t, o);
    return b;
}

SparseMatrix differential_matrix(const AInfinityStructure& m, const CochainBasis& src, const CochainBasis& dst,
                                 int max_arity)
{
    SparseMatrix d(dst.elems.size(), src.elems.size());
    for (std::size_t j = 0; j < src.elems.size(); ++j) {
        Cochain e = elementary_cochain(m.A, src.elems[j].first, src.elems[j].second);
        Cochain de = hochschild_differential(m, e);
        for (const auto& [in, out] : de.table) {
            for (const auto& [o, c] : out) {
                if (static_cast<int>(in.size()) > max_arity)
                    throw CutoffOverflow("arity cutoff too small to close the Hochschild complex");
                auto it = dst.index.find({in, o});
                if (it == dst.index.end())
                    throw std::logic_error("differential left the enumerated basis");
                d.add(it->second, j, c);
            }
        }
    }
    return d;
}

}  // namespace

HHResult hochschild_cohomology(const AInfinityStructure& m, int degree, int arity_cutoff)
{
    if (m.basis.empty())
        throw std::invalid_argument("hochschild_cohomology needs a finite basis");
    // components of total degree n-1..n+1 must all live in arity <= cutoff
    for (int dd = degree - 1; dd <= degree + 1; ++dd)
        if (!degree_basis(m, dd, arity_cutoff + 1, arity_cutoff + 1).elems.empty())
            throw CutoffOverflow("arity cutoff too small to close the Hochschild complex at degree " +
                                     std::to_string(degree));
    CochainBasis bm = degree_basis(m, degree - 1, 0, arity_cutoff);
    CochainBasis b0 = degree_basis(m, degree, 0, arity_cutoff);
    CochainBasis bp = degree_basis(m, degree + 1, 0, arity_cutoff);
    SparseMatrix din = differential_matrix(m, bm, b0, arity_cutoff);
    SparseMatrix dout = differential_matrix(m, b0, bp, arity_cutoff);
    HHResult res;
    res.dimension = cohomology_dimension(din, dout);
    // representatives: kernel vectors independent modulo the image, in pivot order
    auto ker = kernel_basis(dout);
    SparseMatrix acc(b0.elems.size(), 0);
    std::vector<std::vector<Rational>> cols;
    for (std::size_t j = 0; j < din.cols(); ++j) {
        std::vector<Rational> c(b0.elems.size());
        for (const auto& [r, v] : din.column(j))
            c[r] = v;
        cols.push_back(std::move(c));
    }
    auto rank_of = [&](const std::vector<std::vector<Rational>>& cs) {
        SparseMatrix mm(b0.elems.size(), cs.size());
        for (std::size_t j = 0; j < cs.size(); ++j)
            for (std::size_t r = 0; r < cs[j].size(); ++r)
                mm.add(r, j, cs[j][r]);
        return rank(mm);
    };
    std::size_t cur = rank_of(cols);
    for (const auto& k : ker) {
        if (res.representatives.size() == res.dimension)
            break;
        cols.push_back(k);
        std::size_t nr = rank_of(cols);
        if (nr > cur) {
            cur = nr;
            Cochain c = zero_cochain(m.A);
            for (std::size_t r = 0; r < k.size(); ++r)
                c.add(b0.elems[r].first, b0.elems[r].second, k[r]);
            res.representatives.push_back(std::move(c));
        }
        else
            cols.pop_back();
    }
    return res;
}

AInfinityStructure algebra_from_product(const GradedSpace& g, const std::map<std::pair<int, int>, Vec>& product,
                                        const std::map<int, Vec>& differential, int cutoff)
{
    AInfinityStructure s;
    s.A = make_finite_space(g);
    for (std::size_t i = 0; i < g.dim(); ++i)
        s.basis.push_back(static_cast<int>(i));
    s.m = zero_cochain(s.A);
    for (const auto& [a, v] : differential)
        s.m.add({a}, v);
    for (const auto& [ab, v] : product)
        s.m.add({ab.first, ab.second}, v, sign_of(g.degree(ab.first)));
    s.cutoff = cutoff;
    return s;
}

AInfinityStructure truncated_polynomial_algebra(int nilpotency)
{
    GradedSpace g;
    g.name = "Q[x]/(x^" + std::to_string(nilpotency) + ")";
    for (int i = 0; i < nilpotency; ++i)
        g.basis.emplace_back(i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i)), 0);
    std::map<std::pair<int, int>, Vec> prod;
    for (int i = 0; i < nilpotency; ++i)
        for (int j = 0; i + j < nilpotency; ++j)
            prod[{i, j}] = Vec{{i + j, 1}};
    return algebra_from_product(g, prod);
}

AInfinityStructure ground_field()
{
    GradedSpace g{"Q", {{"1", 0}}};
    return algebra_from_product(g, {{{0, 0}, Vec{{0, 1}}}});
}

// ---------------------------------------------------------------- polynomials

PolynomialAlgebra::PolynomialAlgebra(int vars) : d(vars)
{
    A = std::make_shared<KeySpace>(
        "Q[x1..x" + std::to_string(vars) + "]", [](const Key&) { return 0; },
        [](const Key& k) {
            std::string s;
            for (std::size_t i = 0; i < k.size(); ++i)
                if (k[i])
                    s += "x" + std::to_string(i + 1) + (k[i] > 1 ? "^" + std::to_string(k[i]) : "");
            return s.empty() ? std::string("1") : s;
        });
}

int PolynomialAlgebra::monomial(const std::vector<int>& exps)
{
    if (static_cast<int>(exps.size()) != d)
        throw std::invalid_argument("exponent vector length");
    return A->intern(exps);
}

int PolynomialAlgebra::poly_degree(int id) const
{
    const Key& k = A->key(id);
    return std::accumulate(k.begin(), k.end(), 0);
}

std::vector<int> PolynomialAlgebra::monomials_up_to(int max_degree, int min_degree)
{
    std::vector<int> out;
    std::vector<int> e(d, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == d) {
            int deg = max_degree - left;
            if (deg >= min_degree)
                out.push_back(monomial(e));
            return;
        }
        for (int x = 0; x <= left; ++x) {
            e[i] = x;
            rec(i + 1, left - x);
        }
        e[i] = 0;
    };
    rec(0, max_degree);
    std::sort(out.begin(), out.end(), [&](int a, int b) {
        int da = poly_degree(a), db = poly_degree(b);
        return da != db ? da < db : A->key(a) > A->key(b);
    });
    return out;
}

Vec PolynomialAlgebra::multiply(int a, int b)
{
    Key k = A->key(a);
    const Key& kb = A->key(b);
    for (int i = 0; i < d; ++i)
        k[i] += kb[i];
    return Vec{{A->intern(k), 1}};
}

AInfinityStructure PolynomialAlgebra::product_structure(const Rational& sign)
{
    AInfinityStructure s;
    s.A = A;
    s.m = zero_cochain(A);
    s.m.rule_arities = {2};
    s.m.rule = [this, sign](const Tuple& t) -> Vec {
        if (t.size() != 2)
            return {};
        return scaled(multiply(t[0], t[1]), sign);
    };
    s.cutoff = 3;
    return s;
}

namespace {

// weight-w normalized cochains on tuples of positive-degree monomials with total degree <= window
struct PolyComplexBasis {
    std::vector<std::pair<Tuple, int>> elems;
    std::map<std::pair<Tuple, int>, std::size_t> index;
};

void tuples_rec(PolynomialAlgebra& alg, const std::vector<int>& pos, int n, int budget, Tuple& cur,
                std::vector<Tuple>& out)
{
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (int u : pos) {
        int du = alg.poly_degree(u);
        if (du > budget)
            continue;
        cur.push_back(u);
        tuples_rec(alg, pos, n, budget - du, cur, out);
        cur.pop_back();
    }
}

PolyComplexBasis poly_basis(PolynomialAlgebra& alg, int n, int w, int window)
{
    std::vector<int> pos = alg.monomials_up_to(window, 1);
    std::vector<Tuple> ts;
    Tuple cur;
    tuples_rec(alg, pos, n, window, cur, ts);
    PolyComplexBasis b;
    for (const auto& t : ts) {
        int s = 0;
        for (int u : t)
            s += alg.poly_degree(u);
        if (s + w < 0)
            continue;
        for (int o : alg.monomials_up_to(s + w, s + w)) {
            b.index.emplace(std::make_pair(t, o), b.elems.size());
            b.elems.emplace_back(t, o);
        }
    }
    return b;
}

int mult_id(PolynomialAlgebra& alg, int a, int b)
{
    return alg.multiply(a, b).begin()->first;
}

// d: C^n -> C^{n+1}, (df)(u_1..u_{n+1}) = u_1 f(u_2..) + sum (-1)^i f(..u_i u_{i+1}..) + (-1)^{n+1} f(u_1..u_n) u_{n+1}
SparseMatrix poly_differential(PolynomialAlgebra& alg, const PolyComplexBasis& src, const PolyComplexBasis& dst,
                               int window)
{
    SparseMatrix d(dst.elems.size(), src.elems.size());
    std::vector<int> pos = alg.monomials_up_to(window, 1);
    for (std::size_t r = 0; r < dst.elems.size(); ++r) {
        const Tuple& u = dst.elems[r].first;
        int o = dst.elems[r].second;
        int n1 = static_cast<int>(u.size());
        auto coeff_of = [&](const Tuple& t, int out_needed, const Rational& c) {
            auto it = src.index.find({t, out_needed});
            if (it != src.index.end())
                d.add(r, it->second, c);
        };
        // quotient of o by a monomial (if divisible)
        auto divide = [&](int num, int den) -> int {
            Key k = alg.A->key(num);
            const Key& kd = alg.A->key(den);
            for (int i = 0; i < alg.d; ++i) {
                k[i] -= kd[i];
                if (k[i] < 0)
                    return -1;
            }
            return alg.monomial(k);
        };
        {
            int q = divide(o, u[0]);
            if (q >= 0)
                coeff_of(Tuple(u.begin() + 1, u.end()), q, 1);
        }
        for (int i = 0; i + 1 < n1; ++i) {
            Tuple t(u.begin(), u.begin() + i);
            t.push_back(mult_id(alg, u[i], u[i + 1]));
            t.insert(t.end(), u.begin() + i + 2, u.end());
            coeff_of(t, o, sign_of(i + 1));
        }
        {
            int q = divide(o, u[n1 - 1]);
            if (q >= 0)
                coeff_of(Tuple(u.begin(), u.end() - 1), q, sign_of(n1));
        }
    }
    (void)pos;
    return d;
}

}  // namespace

std::size_t polynomial_hh_dimension(int vars, int max_poly_degree, int degree, int window)
{
    if (window < 0)
        window = degree + 1;
    if (degree > window)
        throw CutoffOverflow("input-degree window too small for Hochschild degree " + std::to_string(degree));
    PolynomialAlgebra alg(vars);
    std::size_t total = 0;
    for (int w = -degree; w <= max_poly_degree - degree; ++w) {
        PolyComplexBasis bm = degree > 0 ? poly_basis(alg, degree - 1, w, window) : PolyComplexBasis{};
        PolyComplexBasis b0 = poly_basis(alg, degree, w, window);
        PolyComplexBasis bp = poly_basis(alg, degree + 1, w, window);
        SparseMatrix din = degree > 0 ? poly_differential(alg, bm, b0, window) : SparseMatrix(b0.elems.size(), 0);
        SparseMatrix dout = poly_differential(alg, b0, bp, window);
        total += cohomology_dimension(din, dout);
    }
    return total;
}

// ---------------------------------------------------------------- polyvectors

PolyvectorAlgebra::PolyvectorAlgebra(int vars, int max_degree) : d(vars), D(max_degree)
{
    int dv = vars;
    V = std::make_shared<KeySpace>(
        "polyvectors", [dv](const Key& k) { return static_cast<int>(k.size()) - dv; },
        [dv](const Key& k) {
            std::string s;
            for (int i = 0; i < dv; ++i)
                if (k[i])
                    s += "x" + std::to_string(i + 1) + (k[i] > 1 ? "^" + std::to_string(k[i]) : "");
            if (s.empty())
                s = "1";
            for (std::size_t j = dv; j < k.size(); ++j)
                s += (j == static_cast<std::size_t>(dv) ? "*" : "^") + std::string("d") + std::to_string(k[j] + 1);
            return s;
        });
}

int PolyvectorAlgebra::monomial(const std::vector<int>& exps, const std::vector<int>& derivs)
{
    int deg = std::accumulate(exps.begin(), exps.end(), 0);
    if (deg > D)
        throw CutoffOverflow("polyvector coefficient degree exceeds cutoff");
    Key k(exps);
    k.insert(k.end(), derivs.begin(), derivs.end());
    return V->intern(k);
}

int PolyvectorAlgebra::vector_degree(int id) const
{
    return static_cast<int>(V->key(id).size()) - d;
}

int PolyvectorAlgebra::coefficient_degree(int id) const
{
    const Key& k = V->key(id);
    return std::accumulate(k.begin(), k.begin() + d, 0);
}

std::vector<int> PolyvectorAlgebra::basis(int j) const
{
    auto* self = const_cast<PolyvectorAlgebra*>(this);
    std::vector<int> out;
    std::vector<std::vector<int>> exps;
    std::vector<int> e(d, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == d) {
            exps.push_back(e);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            e[i] = x;
            rec(i + 1, left - x);
        }
        e[i] = 0;
    };
    rec(0, D);
    std::vector<std::vector<int>> subsets;
    for (int mask = 0; mask < (1 << d); ++mask)
        if (__builtin_popcount(mask) == j) {
            std::vector<int> s;
            for (int i = 0; i < d; ++i)
                if (mask & (1 << i))
                    s.push_back(i);
            subsets.push_back(s);
        }
    std::sort(subsets.begin(), subsets.end());
    for (const auto& ex : exps)
        for (const auto& s : subsets)
            out.push_back(self->monomial(ex, s));
    return out;
}

std::vector<int> PolyvectorAlgebra::all_basis() const
{
    std::vector<int> out;
    for (int j = 0; j <= d; ++j) {
        auto b = basis(j);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

namespace {

// sign of merging two sorted disjoint index lists, 0 if they overlap
int merge_sign(const std::vector<int>& I, const std::vector<int>& J, std::vector<int>& merged)
{
    merged.clear();
    long inv = 0;
    std::size_t i = 0, j = 0;
    while (i < I.size() || j < J.size()) {
        if (j == J.size() || (i < I.size() && I[i] < J[j]))
            merged.push_back(I[i++]);
        else if (i == I.size() || J[j] < I[i]) {
            inv += static_cast<long>(I.size() - i);
            merged.push_back(J[j++]);
        }
        else
            return 0;
    }
    return sign_of(inv);
}

}  // namespace

Vec PolyvectorAlgebra::wedge(const Vec& a, const Vec& b)
{
    Vec res;
    for (const auto& [ia, ca] : a)
        for (const auto& [ib, cb] : b) {
            const Key& ka = V->key(ia);
            const Key& kb = V->key(ib);
            std::vector<int> ex(d), I(ka.begin() + d, ka.end()), J(kb.begin() + d, kb.end()), M;
            for (int i = 0; i < d; ++i)
                ex[i] = ka[i] + kb[i];
            int s = merge_sign(I, J, M);
            if (s == 0)
                continue;
            add_to(res, monomial(ex, M), s * ca * cb);
        }
    return res;
}

Vec PolyvectorAlgebra::schouten(const Vec& a, const Vec& b)
{
    // [P,Q] = P.Q - (-1)^{(p-1)(q-1)} Q.P with P.Q = sum_i (d_r P / d xi_i) (d Q / d x_i)
    auto dot = [this](int ip, int iq, const Rational& c, Vec& out) {
        const Key& kp = V->key(ip);
        const Key& kq = V->key(iq);
        std::vector<int> I(kp.begin() + d, kp.end()), J(kq.begin() + d, kq.end());
        for (std::size_t pos = 0; pos < I.size(); ++pos) {
            int i = I[pos];
            if (kq[i] == 0)
                continue;
            int s = sign_of(static_cast<long>(I.size() - pos - 1));
            std::vector<int> Ir(I);
            Ir.erase(Ir.begin() + pos);
            std::vector<int> ex(d), M;
            for (int l = 0; l < d; ++l)
                ex[l] = kp[l] + kq[l];
            ex[i] -= 1;
            int ms = merge_sign(Ir, J, M);
            if (ms == 0)
                continue;
            add_to(out, monomial(ex, M), c * s * ms * kq[i]);
        }
    };
    Vec res;
    for (const auto& [ia, ca] : a)
        for (const auto& [ib, cb] : b) {
            int p = vector_degree(ia), q = vector_degree(ib);
            Vec t;
            dot(ia, ib, ca * cb, t);
            dot(ib, ia, -sign_of(static_cast<long>(p - 1) * (q - 1)) * ca * cb, t);
            axpy(res, 1, t);
        }
    return res;
}

Cochain hkr_cochain(PolyvectorAlgebra& pv, PolynomialAlgebra& alg, const Vec& gamma)
{
    if (pv.d != alg.d)
        throw std::invalid_argument("variable count mismatch");
    Cochain c = zero_cochain(alg.A);
    for (const auto& [id, coef] : gamma)
        c.rule_arities.insert(pv.vector_degree(id));
    PolyvectorAlgebra* pvp = &pv;
    PolynomialAlgebra* ap = &alg;
    c.rule = [pvp, ap, gamma](const Tuple& t) {
        Vec res;
        const int d = ap->d;
        for (const auto& [id, coef] : gamma) {
            const Key& k = pvp->V->key(id);
            std::vector<int> I(k.begin() + d, k.end());
            if (I.size() != t.size())
                continue;
            std::vector<int> perm(I.size());
            std::iota(perm.begin(), perm.end(), 0);
            do {
                // sign of perm
                long inv = 0;
                for (std::size_t x = 0; x < perm.size(); ++x)
                    for (std::size_t y = x + 1; y < perm.size(); ++y)
                        if (perm[x] > perm[y])
                            ++inv;
                Rational c = coef * sign_of(inv);
                Key e(k.begin(), k.begin() + d);
                bool zero = false;
                for (std::size_t l = 0; l < t.size() && !zero; ++l) {
                    const Key& ka = ap->A->key(t[l]);
                    int var = I[perm[l]];
                    if (ka[var] == 0) {
                        zero = true;
                        break;
                    }
                    c *= ka[var];
                    for (int i = 0; i < d; ++i)
                        e[i] += ka[i] - (i == var ? 1 : 0);
                }
                if (!zero)
                    add_to(res, ap->monomial(e), c);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return res;
    };
    return c;
}

}  // namespace opcalc

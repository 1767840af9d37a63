#pragma once

#include "opcalc/graded.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace opcalc {

using Key = std::vector<int>;
using Tuple = std::vector<int>;

struct KeyHash {
    std::size_t operator()(const std::vector<int>& k) const noexcept
    {
        std::size_t h = k.size();
        for (int x : k)
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Graded space with a basis interned on demand. Keys are opaque integer vectors.
class KeySpace {
public:
    KeySpace(std::string name, std::function<int(const Key&)> degree_fn,
             std::function<std::string(const Key&)> label_fn = nullptr);

    int intern(const Key& k);
    const Key& key(int id) const { return keys_.at(id); }
    int degree(int id) const { return degrees_.at(id); }
    std::string label(int id) const;
    std::size_t size() const { return keys_.size(); }
    const std::string& name() const { return name_; }
    int find(const Key& k) const;  // -1 if absent

private:
    std::string name_;
    std::function<int(const Key&)> degree_fn_;
    std::function<std::string(const Key&)> label_fn_;
    std::vector<Key> keys_;
    std::vector<int> degrees_;
    std::unordered_map<Key, int, KeyHash> index_;
};

using SpacePtr = std::shared_ptr<KeySpace>;
using Vec = std::map<int, Rational>;

void add_to(Vec& y, int id, const Rational& c);
void axpy(Vec& y, const Rational& c, const Vec& x);
Vec scaled(const Vec& x, const Rational& c);

// Finite graded space from labels and degrees; ids coincide with positions.
SpacePtr make_finite_space(const GradedSpace& g);

// Element of C(A,A): a sparse table of components (input tuple -> output vector), possibly of
// mixed arity, or a rule evaluated on demand (for algebras with an unbounded basis).
struct Cochain {
    SpacePtr space;
    std::map<Tuple, Vec> table;
    std::function<Vec(const Tuple&)> rule;
    std::set<int> rule_arities;

    bool is_rule() const { return static_cast<bool>(rule); }
    Vec eval(const Tuple& in) const;
    std::set<int> arities() const;
    void add(const Tuple& in, int out, const Rational& c);
    void add(const Tuple& in, const Vec& out, const Rational& c = 1);
    bool is_zero() const;
    Cochain& operator+=(const Cochain& o);
    Cochain scaled(const Rational& c) const;
    // table of the components whose inputs satisfy the predicate, evaluated from the rule if needed
    Cochain restricted(const std::vector<Tuple>& inputs) const;
    Cochain truncated(int max_arity) const;
};

Cochain zero_cochain(SpacePtr A);
Cochain elementary_cochain(SpacePtr A, const Tuple& in, int out, const Rational& c = 1);
int component_degree(const KeySpace& A, const Tuple& in, int out);
bool equal_tables(const Cochain& a, const Cochain& b);

// Insertion P1 o P2 with the sign (-1)^{(|P2|+1)(|a_1|+...+|a_{i-1}| + i - 1)}.
Cochain compose(const Cochain& p1, const Cochain& p2);
Cochain gerstenhaber_bracket(const Cochain& q1, const Cochain& q2);
// Cup product m2{P1, P2}: (a_1..a_r, b_1..b_s) -> (-1)^{(|P2|+1)(sum_l |a_l|+1)} m2(P1(a), P2(b)).
Cochain cup_product(const Cochain& p1, const Cochain& p2, const Cochain& m2);

struct AInfinityStructure {
    SpacePtr A;
    std::vector<int> basis;  // finite basis ids (empty for rule-based algebras)
    Cochain m;
    int cutoff = 3;
};

struct MCViolation {
    int arity;
    Tuple inputs;
    Vec defect;
};

std::vector<MCViolation> maurer_cartan_check(const AInfinityStructure& m);
Cochain hochschild_differential(const AInfinityStructure& m, const Cochain& p);

// Basis tuples of A of length <= max_arity.
std::vector<Tuple> all_tuples(const std::vector<int>& basis, int min_arity, int max_arity);

struct HHResult {
    std::size_t dimension = 0;
    std::vector<Cochain> representatives;
};
HHResult hochschild_cohomology(const AInfinityStructure& m, int degree, int arity_cutoff);

// Algebra builders
AInfinityStructure algebra_from_product(const GradedSpace& g, const std::map<std::pair<int, int>, Vec>& product,
                                        const std::map<int, Vec>& differential = {}, int cutoff = 3);
AInfinityStructure truncated_polynomial_algebra(int nilpotency);  // Q[x]/(x^nilpotency), basis 1, x, ...
AInfinityStructure ground_field();

// Polynomial algebra Q[x_1..x_d] (all monomials interned lazily, degree 0).
struct PolynomialAlgebra {
    int d = 1;
    SpacePtr A;
    explicit PolynomialAlgebra(int vars);
    int monomial(const std::vector<int>& exps);
    std::vector<int> monomials_up_to(int max_degree, int min_degree = 0);
    int poly_degree(int id) const;
    AInfinityStructure product_structure(const Rational& sign = 1);
    Vec multiply(int a, int b);
};

// Truncated Hochschild cohomology of Q[x_1..x_d] in polyvector weights -n..D-n, computed on the
// normalized cochains restricted to input tuples of total degree <= window.
std::size_t polynomial_hh_dimension(int vars, int max_poly_degree, int degree, int window = -1);

// Polyvector fields sum f * d_I on Q[x_1..x_d] with coefficient degree <= D.
struct PolyvectorAlgebra {
    int d = 1;
    int D = 3;
    SpacePtr V;  // keys: exponents (d entries) followed by the sorted derivation indices
    PolyvectorAlgebra(int vars, int max_degree);
    int monomial(const std::vector<int>& exps, const std::vector<int>& derivs);
    std::vector<int> basis(int j) const;  // j-vectors with coefficient degree <= D
    std::vector<int> all_basis() const;
    Vec wedge(const Vec& a, const Vec& b);
    Vec schouten(const Vec& a, const Vec& b);
    int vector_degree(int id) const;
    int coefficient_degree(int id) const;
};

// HKR map: f d_I  |->  (a_1..a_j) -> sum_sigma sgn(sigma) f d_{i_sigma(1)} a_1 ... d_{i_sigma(j)} a_j.
Cochain hkr_cochain(PolyvectorAlgebra& pv, PolynomialAlgebra& alg, const Vec& gamma);

}  // namespace opcalc

#pragma once

#include "opcalc/hochschild.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace opcalc {

// Sorted multiset of V basis ids (graded symmetric with parity |v|).
using VList = std::vector<int>;

// o-colored monomial (v_1..v_k; a_1..a_n) of S(V,A); the v's are kept sorted.
struct OMon {
    VList v;
    Tuple a;
    auto operator<=>(const OMon&) const = default;
};

using OSum = std::map<OMon, Rational>;
using CSum = std::map<VList, Rational>;

void add_to(OSum& s, const OMon& m, const Rational& c);
void add_to(CSum& s, const VList& m, const Rational& c);

// Sort a v-list in place; returns the Koszul sign of the reordering, or 0 if an odd element repeats.
int canonicalize_v(const KeySpace& V, VList& v);

// Shifted-parity degree of an o-monomial: sum |v| + sum (|a|+1).
int omon_parity(const KeySpace& V, const KeySpace& A, const OMon& m);

struct CoproductTerm {
    OMon left, right;
    int sign;
};
// Delta_o(v; a) summed over E_{k,n} and (p, k-p)-shuffles with sign (-1)^eta.
std::vector<CoproductTerm> coproduct_o(const KeySpace& V, const KeySpace& A, const OMon& x);

// Unshuffle coproduct of a c-monomial into two nonempty pieces.
std::vector<std::pair<std::pair<VList, VList>, int>> coproduct_c(const KeySpace& V, const VList& x);

// Left coaction mu_l = (rho x id) Delta_o: terms (v-block) x (o-monomial) with the a-part untouched.
std::vector<std::pair<std::pair<VList, OMon>, int>> mu_left(const KeySpace& V, const KeySpace& A, const OMon& x);

// Coderivation of S(V,A) of a given degree, given by its corestrictions.
//   c : sorted v-list (k >= 1)            -> V
//   o : (sorted v-list; a-tuple), k+n >= 1 -> A
// Supports report where a component may be nonzero; they drive pruning only.
struct Coderivation {
    SpacePtr V, A;
    int degree = 1;
    std::function<Vec(const VList&)> c;
    std::function<Vec(const VList&, const Tuple&)> o;
    std::function<bool(int)> c_support = [](int) { return true; };
    std::function<bool(int, int)> o_support = [](int, int) { return true; };
    // Ger-dual entries outside the symmetric (L-infinity) part, keyed by a description.
    std::map<std::string, Vec> c_mixed;
};

// Wrap the corestrictions in caches.
Coderivation memoized(const Coderivation& q);
Coderivation zero_coderivation(SpacePtr V, SpacePtr A, int degree = 1);

// Table-backed coderivation.
Coderivation table_coderivation(SpacePtr V, SpacePtr A, int degree, const std::map<VList, Vec>& c_table,
                                const std::map<OMon, Vec>& o_table);

using ShapeFilter = std::function<bool(int k, int n)>;

// Extension of Q to the o-colored part: sum over Q^c insertions and Q^o insertions.
OSum hat_o(const Coderivation& q, const OMon& x, const ShapeFilter& keep = nullptr);
// Standard coderivation extension on the symmetric c-part (terms of output length accepted by keep).
CSum hat_c(const Coderivation& q, const VList& x, const std::function<bool(int)>& keep = nullptr);
Vec apply_o(const Coderivation& q, const OSum& s);
Vec apply_c(const Coderivation& q, const CSum& s);

struct MonomialBasis {
    std::vector<VList> c;
    std::vector<OMon> o;
};
// Multisets of vbasis of size 1..kmax_c; o-monomials with k + n <= max_total (k <= kmax_o if given).
// If a filter is given only shapes it accepts are produced.
MonomialBasis enumerate_monomials(const KeySpace& V, const std::vector<int>& vbasis, const std::vector<int>& abasis,
                                  int kmax_c, int max_total, int kmax_o = -1,
                                  const std::function<bool(bool, int, int)>& shape = nullptr);
std::vector<VList> multisets(const KeySpace& V, const std::vector<int>& vbasis, int k);

struct QSqViolation {
    bool c_color;
    OMon mon;  // for c-color only mon.v is used
    Vec defect;
};
// p Q^ Q^ on every basis monomial.
std::vector<QSqViolation> q_square_check(const Coderivation& q, const MonomialBasis& basis);
// Same, enumerating only monomial shapes at which p Q^ Q^ can be nonzero.
std::vector<QSqViolation> q_square_check(const Coderivation& q, const std::vector<int>& vbasis,
                                         const std::vector<int>& abasis, int kmax_c, int max_total);

// ---------------------------------------------------------------- L-infinity morphisms into C(A,A)

struct LInfinityMorphism {
    SpacePtr V, A;
    std::function<Cochain(const VList&)> U;
    std::function<bool(int)> support = [](int) { return true; };
};

// U(v)(a) = Q^o(v; a). With a finite abasis U(v) is a table on tuples of arity <= max_arity,
// otherwise a rule with arities 0..max_arity.
LInfinityMorphism extract_linf(const Coderivation& q, const std::vector<int>& abasis, int max_arity);

struct CoherenceViolation {
    VList v;
    Tuple a;
    Vec defect;
};
// sum_{p,lambda} (-1)^eps U(Q^c(v_S), v_R) + [m, U(v)]
//   + 1/2 sum_{p=1}^{k-1} sum_lambda (-1)^{eps + |v_S|} [U(v_S), U(v_R)] = 0
// on every listed v-list and every input tuple of arity <= max_arity.
std::vector<CoherenceViolation> linf_coherence_check(const LInfinityMorphism& U, const Coderivation& qc,
                                                     const AInfinityStructure& m, const std::vector<VList>& vlists,
                                                     const std::vector<Tuple>& tuples);

// ---------------------------------------------------------------- structures on (C(A,A), A)

// V = C(A,A) with basis the elementary cochains, key [out, in_1, .., in_r].
SpacePtr cochain_space(SpacePtr A);
Vec cochain_to_v(KeySpace& V, const Cochain& c);
Cochain v_to_cochain(const KeySpace& V, SpacePtr A, const Vec& x);
// Elementary cochains of arity <= max_arity on the finite basis of A.
std::vector<int> cochain_basis(KeySpace& V, const std::vector<int>& abasis, int max_arity);

// Q^c(P) = -[m,P], Q^c(P1,P2) = -(-1)^{|P1|}[P1,P2], Q^o(;a) = m(a), Q^o(P;a) = P(a).
// For a rule-based m only the o-component can be evaluated.
Coderivation build_tautological_ocha(const AInfinityStructure& m);
// Same shape on an ungraded associative algebra with Q^o(a1,a2) = -a1 a2.
Coderivation build_explicit_o_part(const AInfinityStructure& product_algebra);

// Ger+ structure on (polyvectors, functions): Schouten c-part, product on A, Q^o(g; a) = F(g)(a).
Coderivation linf_to_gerplus(const LInfinityMorphism& F, PolyvectorAlgebra& pv, PolynomialAlgebra& alg);
// F_1 = HKR, F_k = 0 for k >= 2.
LInfinityMorphism hkr_morphism(PolyvectorAlgebra& pv, PolynomialAlgebra& alg);

bool validate_ocha_substructure(const Coderivation& q);

// ---------------------------------------------------------------- homotopies

// Corestriction of exp([psi^, .]) Q^: sum_{a,b} (-1)^b / (a! b!) p psi^a Q^ psi^b.
// psi must have degree 0 and vanish on the c-part and on pure a-monomials.
Coderivation homotopy_conjugate(const Coderivation& q, const Coderivation& psi);

// theta(v)(a) = psi(v; a), as tables of arity <= max_arity.
std::function<Cochain(const VList&)> theta_from_psi(const Coderivation& psi, const std::vector<int>& abasis,
                                                    int max_arity);

// U' = sum_j ad^j U / j! + sum_j ad^j (d_H theta) / (j+1)!, with
//   d_H theta(v) = sum (-1)^eps theta(Q^c(v_S), v_R) - [m, theta(v)],
//   [theta, F]_H(v) = sum_{p=1}^{k-1} sum_lambda (-1)^{eps + |v_S|} [theta(v_S), F(v_R)].
// Tables are kept to arity max_arity.
LInfinityMorphism linf_gauge_action(const LInfinityMorphism& U, const std::function<Cochain(const VList&)>& theta,
                                    const Coderivation& qc, const AInfinityStructure& m, int max_arity);

// ---------------------------------------------------------------- morphisms

struct SCoalgebraMorphism {
    SpacePtr V, A, V2, A2;
    std::function<Vec(const VList&)> c;              // -> V2
    std::function<Vec(const VList&, const Tuple&)> o;  // -> A2
    std::function<bool(int)> c_support = [](int) { return true; };
    std::function<bool(int, int)> o_support = [](int, int) { return true; };
};

SCoalgebraMorphism memoized(const SCoalgebraMorphism& t);
SCoalgebraMorphism identity_morphism(SpacePtr V, SpacePtr A);

// skip_single drops the one-block term T(x) (which is then never evaluated).
CSum hat_T_c(const SCoalgebraMorphism& t, const VList& x, bool skip_single = false);
// keep filters on (number of c-blocks, number of o-pieces), checked before the last piece is evaluated.
OSum hat_T_o(const SCoalgebraMorphism& t, const OMon& x, const ShapeFilter& keep = nullptr);

struct CompatibilityViolation {
    bool c_color;
    OMon mon;
    Vec defect;
};
// Q2 T^ = T^ Q^ projected to cogenerators, on every basis monomial (o-monomials restricted to
// v-count only_k when given).
std::vector<CompatibilityViolation> morphism_compatibility_check(const SCoalgebraMorphism& t, const Coderivation& q,
                                                                 const Coderivation& q2, const MonomialBasis& basis,
                                                                 std::optional<int> only_k = std::nullopt);

// ---------------------------------------------------------------- Ger-dual basis

// A basis element of Ger-dual(k): blocks of a set partition, each a co-Lie word in Lyndon form
// (the block minimum first, the remaining letters in any order).
struct GerCoMonomial {
    std::vector<std::vector<int>> words;
    int degree() const;
    int arity() const;
};
std::vector<GerCoMonomial> ger_co_basis(int k);

}  // namespace opcalc

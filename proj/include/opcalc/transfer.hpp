#pragma once

#include "opcalc/cobar.hpp"
#include "opcalc/scoalgebra.hpp"

#include <map>
#include <string>
#include <vector>

namespace opcalc {

// Linear map given on basis ids.
struct LinearMap {
    std::function<Vec(int)> on_basis;
    Vec operator()(const Vec& x) const;
    Vec operator()(int id) const { return on_basis(id); }
};
LinearMap identity_map();
LinearMap zero_map();
LinearMap table_map(const std::map<int, Vec>& table);

// Filtration weights: o-monomial (k, n) has weight 2k + n - 1, c-monomial of length k has 2(k - 1).
int o_weight(int k, int n);
int c_weight(int k);

// i: (V,A) -> (V2,A2), p: (V2,A2) -> (V,A), h on (V2,A2) with i p - id = d h + h d.
struct Contraction {
    SpacePtr V, A, V2, A2;
    LinearMap iV, pV, hV, iA, pA, hA;
    std::vector<int> v_basis, a_basis, v2_basis, a2_basis;  // finite parts used by the checks
};

// V2 = V, A2 = A, i = p = id, h = 0.
Contraction trivial_contraction(SpacePtr V, SpacePtr A, std::vector<int> v_basis, std::vector<int> a_basis);

// Failed conditions, described in words; the differentials are the linear parts of q2 and of p q2 i.
std::vector<std::string> check_contraction(const Contraction& c, const Coderivation& q2);

struct TransferResult {
    Coderivation q;         // on (V, A)
    SCoalgebraMorphism t;   // (V, A) -> (V2, A2)
    int max_weight = 0;
};

// Weight by weight: K = Q2(T^ x minus T(x)) - T(Q^ x minus the weight-0 and full insertions),
// then Q(x) = p K(x) and T(x) = h K(x). Components above max_weight raise CutoffOverflow.
TransferResult transfer_structure(const Coderivation& q2, const Contraction& c, int max_weight);

// A2 = A + span(e, f) with d e = f; A gets the remaining basis of A2 (same labels and degrees),
// i and p are the obvious inclusion and projection, h(f) = -e. On V: the trivial contraction.
Contraction acyclic_pair_contraction(SpacePtr V, std::vector<int> v_basis, const AInfinityStructure& big, int e, int f);

// Q with unit 1 plus e (rank-1 acyclic pair).
AInfinityStructure acyclic_unit_extension();
// Basis 1, x, y, z, e, f with |x| = |y| = |e| = 1, |z| = |f| = 2; d e = f, x y = f, e x = z.
// The cohomology {1, x, y, z} carries m_3(x, y, x) = -z and no binary product beyond the unit.
AInfinityStructure massey_extension();

// Monomials of weight <= max_weight built from the given bases.
MonomialBasis weight_basis(const KeySpace& V, const std::vector<int>& vbasis, const std::vector<int>& abasis,
                           int max_weight);

// Sum over planar trees: phi_n = sum_{k>=2} m2_k(psi(run_1), .., psi(run_k)) over compositions of the
// input into k runs, psi(a) = i a, psi(run) = h phi(run); m_n = p phi_n, m_1 = p m2_1 i.
AInfinityStructure ainf_transfer_oracle(const AInfinityStructure& m2, const Contraction& c, int max_arity);

// Every cocomposition term of an element of weight <= W has outer and inner weights >= 1 adding up to
// the weight of the element; this is the filtration F^n spanned by weights <= n together with
// Delta(F^n) in the sum of F^p (x) F^q over p + q = n. Needs table arity >= W + 1.
bool check_minimal_model_condition(const CooperadTable& t, int W, const GeneratorWeights& w = {});

}  // namespace opcalc

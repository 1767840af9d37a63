#pragma once

#include "opcalc/linalg.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace opcalc {

// Raised when a computation needs data beyond a configured cutoff.
struct CutoffOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GradedSpace {
    std::string name;
    std::vector<std::pair<std::string, int>> basis;  // (label, degree)

    int index_of(const std::string& label) const;
    int degree(int i) const { return basis.at(i).second; }
    std::size_t dim() const { return basis.size(); }
};

struct GradedElement {
    const GradedSpace* space = nullptr;
    std::map<std::string, Rational> coeffs;

    void add(const std::string& label, const Rational& c);
    // degree of a homogeneous element; throws if mixed or zero
    int degree() const;
};

// s^shift: placing a degree-d element in degree d + shift
struct Suspension {
    int shift = 1;
    int apply(int degree) const { return degree + shift; }
    Suspension inverse() const { return {-shift}; }
};

inline int parity(long x) { return static_cast<int>(((x % 2) + 2) % 2); }
inline int sign_of(long exponent) { return parity(exponent) ? -1 : 1; }

// Permutations are 0-based: the reordered sequence is (v[perm[0]], ..., v[perm[k-1]]).
int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees);
bool is_shuffle(const std::vector<int>& perm, int p);

// (-1)^eta for the coproduct term indexed by (lambda, p, t); o-slots enter as |a|+1.
int sign_eta(const std::vector<int>& lambda, int p, int t, const std::vector<int>& v_degrees,
             const std::vector<int>& a_degrees);
// (-1)^eps for the insertion term indexed by (lambda, t, p), t >= 1 (1-based as in the coderivation formula).
int sign_eps_tp(const std::vector<int>& lambda, int t, int p, const std::vector<int>& v_degrees,
                const std::vector<int>& a_degrees);

// All (p, k-p)-shuffles, lexicographic in the chosen first block.
std::vector<std::vector<int>> shuffles(int p, int k);

// Koszul sign of reordering a sequence of symbols with the given parities, computed by
// adjacent transpositions (used as an oracle).
int transposition_chain_sign(const std::vector<int>& perm, const std::vector<int>& degrees);

}  // namespace opcalc

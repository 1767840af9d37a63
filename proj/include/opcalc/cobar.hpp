#pragma once

#include "opcalc/graded.hpp"
#include "opcalc/linalg.hpp"

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace opcalc {

enum class CoopKind { GerVee, S, OCVee, sc };
CoopKind parse_coop_kind(const std::string& s);
std::string to_string(CoopKind k);

using ArnoldMonomial = std::vector<std::pair<int, int>>;  // edges (a, b), a < b

// Normal form in the Arnold algebra: w_ab w_bc + w_bc w_ca + w_ca w_ab = 0, generators of degree 1.
// Normal monomials have at most one edge per larger endpoint and are sorted by it.
std::map<ArnoldMonomial, Rational> arnold_normal_form(const ArnoldMonomial& product);

// Basis element of a cooperad on explicit input labels. An Arnold monomial in the c-labels times,
// for output o, the indicator of a planar order of the o-labels (o-labels carry the sign twist,
// normalized so that the element with increasing order is the plain one).
struct CoopElem {
    char out = 'o';
    std::vector<int> clabels;  // increasing
    std::vector<int> olabels;  // planar order
    ArnoldMonomial omega;      // normal form

    int k() const { return static_cast<int>(clabels.size()); }
    int n() const { return static_cast<int>(olabels.size()); }
    int degree() const;  // #omega + 2 - 2k for c, #omega + 1 - 2k - n for o
    char input_color(int label) const;
    std::vector<int> labels() const;
    std::string str() const;
    auto operator<=>(const CoopElem&) const = default;
};

// Term of the reduced infinitesimal cocomposition. The outer element has one new input carrying the
// smallest label of the inner element, of color inner.out.
struct CoopTerm {
    Rational coef;
    CoopElem outer, inner;
};

struct Signature {
    int k = 0, n = 0;
    char out = 'o';
    auto operator<=>(const Signature&) const = default;
};

inline constexpr int max_cooperad_cutoff = 6;

struct CooperadTable {
    CoopKind kind = CoopKind::S;
    int cutoff = 0;
    std::map<Signature, std::vector<CoopElem>> basis;  // c-labels 1..k, o-labels k+1..k+n
    std::map<CoopElem, std::vector<CoopTerm>> delta;   // keyed by standard basis elements

    bool allows(const CoopElem& e) const;  // e is (up to labels) a basis element of this cooperad
    // Cocomposition of a basis element with arbitrary labels, through the table. CutoffOverflow past the cutoff.
    std::vector<CoopTerm> cocompose(const CoopElem& e) const;
    // All basis elements with the given input labels.
    std::vector<CoopElem> basis_on(char out, const std::vector<int>& c, const std::vector<int>& o) const;
};

CooperadTable build_cooperad_tables(CoopKind which, int cutoff = 4);

// Relabel inputs (c to c, o to o); the result is expanded in the basis.
std::map<CoopElem, Rational> relabel(const CoopElem& e, const std::map<int, int>& pi);

// Failures, in words.
std::vector<std::string> check_coassociativity(const CooperadTable& t, int max_arity);
std::vector<std::string> check_equivariance(const CooperadTable& t, int max_arity);
std::vector<std::string> check_embedding(const CooperadTable& sub, const CooperadTable& big);

// Weights of the generators rho, Delta_o, Delta_c, delta_c. An element with b blocks is counted as
// (k - b) delta_c + (b - 1) Delta_c for output c and (k - b) delta_c + b rho + (b + n - 1) Delta_o for o.
struct GeneratorWeights {
    int rho = 1, Delta_o = 1, Delta_c = 2, delta_c = 2;
};
int element_weight(const CoopElem& e, const GeneratorWeights& w);

// Decorated trees. Each input of a vertex is labelled by the smallest leaf above it.
struct TreeVertex {
    CoopElem dec;
    std::vector<std::pair<int, int>> children;  // (input label, vertex index), increasing labels
    auto operator<=>(const TreeVertex&) const = default;
};

struct ColoredTree {
    std::vector<TreeVertex> v;  // pre-order, inputs visited by (color, label); v[0] is the root

    Signature signature() const;
    int degree() const;  // sum of (decoration degree + 1)
    std::string str() const;
    auto operator<=>(const ColoredTree&) const = default;
};

using OperadElement = std::map<ColoredTree, Rational>;

void add_to(OperadElement& x, const ColoredTree& t, const Rational& c);
std::string to_string(const OperadElement& x);

// Builds a tree from vertices listed in the order of the tensor factors (vertex 0 is the root);
// returns the canonical tree and the Koszul sign of the reordering.
std::pair<ColoredTree, int> make_tree(const std::vector<TreeVertex>& vertices);
ColoredTree corolla(const CoopElem& e);

OperadElement cobar_differential(const OperadElement& x, const CooperadTable& t);
OperadElement cobar_differential(const ColoredTree& x, const CooperadTable& t);

// Every decorated tree of the signature (leaves c: 1..k, o: k+1..k+n), sorted.
std::vector<ColoredTree> cobar_basis(const CooperadTable& t, const Signature& s);

struct CohomologyData {
    int degree = 0;
    std::size_t ambient = 0, cocycles = 0, coboundaries = 0, dimension = 0;
    std::vector<ColoredTree> basis;              // ambient basis in this degree
    std::vector<OperadElement> representatives;  // one per cohomology class
};
CohomologyData arity_cohomology(const CooperadTable& t, const Signature& s, int degree);
bool is_coboundary(const OperadElement& y, const CooperadTable& t, const Signature& s);

struct CertificateCheck {
    std::string name;
    bool pass = false;
    std::string witness;
};
struct Certificate {
    std::string operad;
    std::vector<CertificateCheck> checks;
    std::string conclusion;  // "nonformal" or "inconsistent"
};

// The elements X, Y, Z of the obstruction argument, as trees with leaves c: 1(, 2), o: 2.
struct NonformalityElements {
    OperadElement X, Z, Y, X_o2_rho, X_o1_rho, Do_o1_rho, Do_o2_rho;
};
NonformalityElements nonformality_elements();

Certificate nonformality_witness(const CooperadTable& t);
Certificate nonformality_witness(CoopKind which);

}  // namespace opcalc

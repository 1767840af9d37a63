#pragma once

#include "opcalc/cobar.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace opcalc {

// Two-colored tree up to re-planarization: children sorted by (color, smallest leaf).
// Leaves 1..k are c-colored, k+1..k+n are o-colored.
struct TwoColoredTree {
    char color = 'o';  // color of the outgoing edge
    int leaf = 0;      // > 0 for a leaf
    std::vector<TwoColoredTree> children;

    bool is_leaf() const { return leaf > 0; }
    int min_leaf() const;
    int vertex_count() const;
    std::string str() const;  // e.g. o[c(1),c(2);o(4)]
    friend bool operator==(const TwoColoredTree& a, const TwoColoredTree& b)
    {
        return a.color == b.color && a.leaf == b.leaf && a.children == b.children;
    }
    friend bool operator<(const TwoColoredTree& a, const TwoColoredTree& b)
    {
        if (a.color != b.color) return a.color < b.color;
        if (a.leaf != b.leaf) return a.leaf < b.leaf;
        return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(), b.children.end());
    }
};

inline constexpr int max_tree_bound = 5;

TwoColoredTree parse_tree(const std::string& s);
void canonicalize(TwoColoredTree& t);

// An o-input forces an o-output; c-vertices have k >= 2 inputs, o-vertices 2k + n >= 2.
bool is_admissible(const TwoColoredTree& t);

// All trees with leaves c: 1..k, o: k+1..k+n and the given root color. CutoffOverflow past max_tree_bound.
std::vector<TwoColoredTree> enumerate_trees(int k, int n, char root = 'o');

int stratum_dimension(const TwoColoredTree& t);  // invalid_argument on a degenerate vertex
int e1_degree(const TwoColoredTree& t, int q);

// Dimensions of the vertex cohomology by degree q: prod_{j<k} (1 + j t), times n! for an o-vertex.
std::vector<long> vertex_poincare(char color, int k, int n);

TwoColoredTree shape_of(const ColoredTree& t);

struct E1Table {
    int k = 0, n = 0;
    char root = 'o';
    int dmin = 0, dmax = 0;
    std::map<int, long> enumeration;  // trees times vertex cohomology
    std::map<int, long> cobar;        // basis of Cobar(sc)
};
// logic_error when the two counts disagree.
E1Table e1_dimension_table(int k, int n, char root, int dmin, int dmax);

// Trees of Cobar(sc) in the signature whose differential contains a tree of the wrong dimension.
std::vector<std::string> check_d1_dimension_drop(int k, int n, char root);

}  // namespace opcalc

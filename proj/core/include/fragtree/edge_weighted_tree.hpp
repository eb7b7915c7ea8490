#pragma once

#include <map>
#include <span>
#include <vector>

#include "fragtree/cladogram.hpp"

namespace fragtree {

// Cladogram shape plus a positive length on every edge (the edge above each
// non-root node).
class EdgeWeightedTree {
public:
    EdgeWeightedTree(Cladogram shape, std::vector<double> edge_lengths);

    static EdgeWeightedTree unit(const Cladogram& shape);

    const Cladogram& shape() const { return shape_; }
    // length of the edge between `v` and its parent
    double edge_length(int v) const { return lengths_[v]; }
    double total_length() const;
    double leaf_height(Label label) const; // distance ROOT -> leaf

    EdgeWeightedTree scaled(double factor) const;

private:
    Cladogram shape_;
    std::vector<double> lengths_; // indexed by node id; lengths_[0] unused
};

// R(tree, leaves): union of root-to-leaf paths, degree-2 vertices suppressed
// with their edge lengths summed.
EdgeWeightedTree reduce(const EdgeWeightedTree& tree, std::span<const Label> leaves);
EdgeWeightedTree reduce(const Cladogram& tree, std::span<const Label> leaves); // unit lengths

struct LeafDepths {
    std::map<Label, int> depth;
    int height = 0; // H_n
};
LeafDepths leaf_depths(const Cladogram& tree);

// Piecewise-linear leaf-height function of an ordered tree: breakpoints at
// i/(n+1) carry the depth of the i-th leaf left to right, 0 at both ends.
class LeafHeightFunction {
public:
    LeafHeightFunction(std::vector<double> interior_values);
    double operator()(double t) const; // linear interpolation on [0,1]
    double max_value() const;
    int leaf_count() const { return static_cast<int>(values_.size()) - 2; }
    const std::vector<double>& breakpoint_values() const { return values_; }

private:
    std::vector<double> values_; // includes the zero endpoints
};

LeafHeightFunction leaf_height_function(const OrderedCladogram& tree);

// Distances between {ROOT} and all leaves; row/column 0 is ROOT, then leaves
// in increasing label order.
struct DistanceMatrix {
    std::vector<Label> leaf_order;
    std::vector<std::vector<double>> d;

    double at(int i, int j) const { return d[i][j]; }
    int size() const { return static_cast<int>(d.size()); }
};

DistanceMatrix distance_matrix(const EdgeWeightedTree& tree);

// max over {ROOT} + leaves pairs of |d_a - d_b| under the identity
// correspondence; requires equal leaf label sets.
double distortion(const EdgeWeightedTree& a, const EdgeWeightedTree& b);

} // namespace fragtree

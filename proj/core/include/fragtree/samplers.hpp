#pragma once

#include <map>
#include <vector>

#include "fragtree/cladogram.hpp"
#include "fragtree/edge_weighted_tree.hpp"
#include "fragtree/qtable.hpp"
#include "fragtree/rng.hpp"

namespace fragtree {

// Recursive Markov branching sampler; caches per-size split distributions so
// batches of trees from one rule amortize the kernel evaluations.
class MarkovBranchingSampler {
public:
    explicit MarkovBranchingSampler(RuleSpec rule);

    Cladogram sample(int n, Rng& rng);

    // Shape-only fast paths used by the scaling diagnostics.
    int sample_height(int n, Rng& rng);
    int sample_leaf_depth(int n, Rng& rng); // depth of leaf 1 (exchangeable)

    const RuleSpec& rule() const { return rule_; }

private:
    struct ShapeTable {
        std::vector<IntegerPartition> shapes;
        std::vector<double> cdf;
    };

    bool binary() const;
    const std::vector<double>& split_cdf(int m);        // folded, k = 1..m/2
    const std::vector<double>& tagged_cdf(int m);       // size-biased, j = 1..m-1
    const ShapeTable& shape_table(int m);
    IntegerPartition draw_shape(int m, Rng& rng);

    RuleSpec rule_;
    RuleSplitRule q_;
    std::map<int, std::vector<double>> split_cdf_cache_;
    std::map<int, std::vector<double>> tagged_cdf_cache_;
    std::map<int, ShapeTable> shape_table_cache_;
};

Cladogram sample_markov_branching(const RuleSpec& rule, int n, Rng& rng);

// Ford's sequential construction, kept incremental so reduced-tree and spine
// statistics can be read along a single coupled growth path.  Leaves are
// labeled 1..n in order of appearance and children carry planar order.
class FordGrowth {
public:
    FordGrowth(double alpha, Rng& rng);

    void grow_to(int n);
    int leaf_count() const { return static_cast<int>(leaf_nodes_.size()); }

    OrderedCladogram ordered_tree() const;
    int leaf_depth(Label label) const;
    int height() const;

    // depth of the new leaf right after it appeared (for the height-2 check)
    int depth_of_last_insertion() const;

    // Reduced tree spanned by ROOT and leaves 1..k, unit edge lengths summed.
    EdgeWeightedTree reduced_tree(int k) const;
    double reduced_tree_length(int k) const;
    // Distances between {ROOT} and leaves 1..k, straight off the growth arena.
    DistanceMatrix reduced_distances(int k) const;

    // Number of leaves in subtrees strictly left of the ROOT -> leaf-1 spine.
    int leaves_left_of_spine() const;

private:
    struct Node {
        int parent = -1;
        Label label = -1;
        std::vector<int> children;
    };

    int node_depth(int v) const;
    int subtree_leaf_count(int v) const;
    std::vector<int> root_path(Label label) const; // ROOT ... leaf

    double alpha_;
    Rng* rng_;
    std::vector<Node> nodes_;
    std::vector<int> leaf_nodes_;  // leaf_nodes_[i] carries label i+1
    std::vector<int> inner_nodes_; // non-root internal nodes (edge above is inner)
    int last_insert_depth_ = 1;
};

// Coupled sequence T~_1..T~_n (materialized; guarded for large n).
std::vector<OrderedCladogram> sample_ford_growth(double alpha, int n, Rng& rng);

// Marchal's growth for the stable tree shapes: edge weight 1 - 1/alpha,
// branch-point weight (#children)/alpha - 1; total weight n - 1/alpha.
class MarchalGrowth {
public:
    MarchalGrowth(double alpha, Rng& rng);

    void grow_to(int n);
    int leaf_count() const { return n_; }
    Cladogram tree() const;
    int leaf_depth_of(Label label) const;
    int depth_of_random_leaf(Rng& rng) const;
    int height() const;
    IntegerPartition first_split() const;

private:
    struct Node {
        int parent = -1;
        Label label = -1;
        std::vector<int> children;
    };

    double alpha_;
    Rng* rng_;
    int n_ = 0;
    std::vector<Node> nodes_;
    std::vector<int> edge_nodes_;   // every non-root node
    std::vector<int> branch_nodes_; // internal non-root nodes (base weight)
    std::vector<int> extra_slots_;  // one entry per child beyond the second
};

Cladogram sample_marchal_growth(double alpha, int n, Rng& rng);

// (alpha, theta) seating plan; blocks ordered by first customer.
SetPartition sample_crp(double alpha, double theta, int customers, Rng& rng);
std::vector<int> sample_crp_table_sizes(double alpha, double theta, int customers, Rng& rng);

// Independent uniform child orders per internal node.
OrderedCladogram attach_exchangeable_order(const Cladogram& tree, Rng& rng);

// Consistent order extensions: a leaf joining an r-child vertex takes each of
// the r+1 positions with probability 1/(r+1); a leaf subdividing the edge
// above `child_node` goes left or right of the new vertex with probability 1/2.
OrderedCladogram extend_order_at_vertex(const OrderedCladogram& tree, int vertex_node,
                                        Label new_label, Rng& rng);
OrderedCladogram extend_order_subdividing(const OrderedCladogram& tree, int child_node,
                                          Label new_label, Rng& rng);

// Uniformly relabels leaves 1..n (exchangeable labels over a fixed shape).
Cladogram relabel_uniform(const Cladogram& tree, Rng& rng);

} // namespace fragtree

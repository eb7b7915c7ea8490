#pragma once

#include <vector>

#include "fragtree/partition.hpp"

namespace fragtree {

// Planted rooted leaf-labeled tree without degree-2 vertices.  Node 0 is
// ROOT and has exactly one child (the common ancestor of all leaves); every
// other internal node has >= 2 children.  Semantically a node is identified
// with its leaf-label set, so equality is set-system equality; the children
// arrays keep a construction order that only OrderedCladogram treats as
// meaningful.
class Cladogram {
public:
    struct Node {
        int parent = -1;
        std::vector<int> children;
        Label label = -1; // leaf label, -1 for internal nodes and ROOT
        int size = 0;     // number of leaves below
    };

    static constexpr int kRoot = 0;

    static Cladogram leaf(Label label);
    // <t_1,...,t_k>: joins subtrees over disjoint label sets under a new
    // common ancestor (k = 1 returns the single subtree unchanged).
    static Cladogram join(const std::vector<Cladogram>& subtrees);
    static Cladogram from_leaf_sets(const std::vector<std::vector<Label>>& sets);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const Node& node(int v) const { return nodes_[v]; }
    int top() const { return nodes_[kRoot].children.front(); }
    bool is_leaf(int v) const { return nodes_[v].label >= 0; }
    int leaf_count() const { return nodes_[kRoot].size; }

    std::vector<Label> leaf_labels() const; // sorted
    int leaf_node(Label label) const;       // node index of a leaf, throws if absent

    // depth in edges from ROOT
    int depth(int v) const;

    std::vector<Label> node_leaf_set(int v) const; // sorted

    // The full t_B representation: leaf set of every non-root node, sorted.
    std::vector<std::vector<Label>> leaf_sets() const;

    // Children of `v` as a set partition of its leaf set.
    SetPartition children_partition(int v) const;

    bool is_binary() const;

    // set-system equality
    friend bool operator==(const Cladogram& a, const Cladogram& b);

    // Canonical order: children sorted by least leaf label (used by
    // unordered equality and as a stable display form).
    Cladogram canonicalized() const;

    // Validates the structural invariants; throws std::invalid_argument.
    void validate() const;

    // Low-level builder used by samplers and parsers.
    class Builder {
    public:
        Builder();
        int add_root();                       // returns ROOT id (0)
        int add_leaf(int parent, Label label);
        int add_internal(int parent);
        // inserts at a given position among the parent's children
        int add_leaf_at(int parent, Label label, int position);
        int add_internal_at(int parent, int position);
        Cladogram build() &&; // fills sizes, validates
    private:
        std::vector<Node> nodes_;
    };

private:
    friend class Builder;
    std::vector<Node> nodes_;
};

// Cladogram whose children arrays carry a planar (left-to-right) order.
class OrderedCladogram {
public:
    explicit OrderedCladogram(Cladogram tree) : tree_(std::move(tree)) {}

    const Cladogram& tree() const { return tree_; }

    // Leaf node ids in depth-first (left-to-right) order.
    std::vector<int> leaves_in_order() const;

    friend bool operator==(const OrderedCladogram& a, const OrderedCladogram& b);

private:
    Cladogram tree_;
};

} // namespace fragtree

#include "fragtree/edge_weighted_tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fragtree {

EdgeWeightedTree::EdgeWeightedTree(Cladogram shape, std::vector<double> edge_lengths)
    : shape_(std::move(shape)), lengths_(std::move(edge_lengths)) {
    if (static_cast<int>(lengths_.size()) != shape_.node_count())
        throw std::invalid_argument("EdgeWeightedTree: one length per non-root node required");
    for (int v = 1; v < shape_.node_count(); ++v)
        if (!(lengths_[v] > 0.0) || !std::isfinite(lengths_[v]))
            throw std::invalid_argument("EdgeWeightedTree: edge lengths must be positive and finite");
    lengths_[Cladogram::kRoot] = 0.0;
}

EdgeWeightedTree EdgeWeightedTree::unit(const Cladogram& shape) {
    return EdgeWeightedTree(shape, std::vector<double>(shape.node_count(), 1.0));
}

double EdgeWeightedTree::total_length() const {
    double s = 0.0;
    for (int v = 1; v < shape_.node_count(); ++v) s += lengths_[v];
    return s;
}

double EdgeWeightedTree::leaf_height(Label label) const {
    int v = shape_.leaf_node(label);
    double h = 0.0;
    while (v != Cladogram::kRoot) {
        h += lengths_[v];
        v = shape_.node(v).parent;
    }
    return h;
}

EdgeWeightedTree EdgeWeightedTree::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("EdgeWeightedTree::scaled: factor must be positive");
    std::vector<double> lens = lengths_;
    for (int v = 1; v < shape_.node_count(); ++v) lens[v] *= factor;
    return EdgeWeightedTree(shape_, std::move(lens));
}

EdgeWeightedTree reduce(const EdgeWeightedTree& tree, std::span<const Label> leaves) {
    if (leaves.empty()) throw std::domain_error("reduce: empty leaf selection");
    const Cladogram& shape = tree.shape();

    std::set<Label> want(leaves.begin(), leaves.end());
    // mark nodes on root-to-leaf paths
    std::vector<char> keep(shape.node_count(), 0);
    for (Label lab : want) {
        int v = shape.leaf_node(lab); // throws on unknown label
        while (v != Cladogram::kRoot && !keep[v]) {
            keep[v] = 1;
            v = shape.node(v).parent;
        }
    }

    // kept-children counts decide which internal nodes survive suppression
    Cladogram::Builder builder;
    builder.add_root();
    std::vector<double> lengths = {0.0}; // lengths[v] for builder node v

    // walk from the top, accumulating suppressed edge lengths
    struct Item {
        int src;        // node in the original tree
        int dst_parent; // node in the reduced tree
        double carried; // length accumulated through suppressed vertices
    };
    std::vector<Item> stack;
    stack.push_back({shape.top(), Cladogram::kRoot, 0.0});
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        double len = it.carried + tree.edge_length(it.src);
        std::vector<int> kept_children;
        for (int c : shape.node(it.src).children)
            if (keep[c]) kept_children.push_back(c);
        bool is_wanted_leaf = shape.is_leaf(it.src) && want.count(shape.node(it.src).label);
        if (is_wanted_leaf) {
            builder.add_leaf(it.dst_parent, shape.node(it.src).label);
            lengths.push_back(len);
        } else if (kept_children.size() == 1) {
            stack.push_back({kept_children[0], it.dst_parent, len});
        } else {
            int id = builder.add_internal(it.dst_parent);
            lengths.push_back(len);
            for (auto c = kept_children.rbegin(); c != kept_children.rend(); ++c)
                stack.push_back({*c, id, 0.0});
        }
    }
    Cladogram reduced = std::move(builder).build();
    return EdgeWeightedTree(std::move(reduced), std::move(lengths));
}

EdgeWeightedTree reduce(const Cladogram& tree, std::span<const Label> leaves) {
    return reduce(EdgeWeightedTree::unit(tree), leaves);
}

LeafDepths leaf_depths(const Cladogram& tree) {
    LeafDepths out;
    std::vector<std::pair<int, int>> stack = {{Cladogram::kRoot, 0}};
    while (!stack.empty()) {
        auto [v, d] = stack.back();
        stack.pop_back();
        if (tree.is_leaf(v)) {
            out.depth[tree.node(v).label] = d;
            out.height = std::max(out.height, d);
            continue;
        }
        for (int c : tree.node(v).children) stack.push_back({c, d + 1});
    }
    return out;
}

LeafHeightFunction::LeafHeightFunction(std::vector<double> interior_values) {
    values_.reserve(interior_values.size() + 2);
    values_.push_back(0.0);
    for (double v : interior_values) {
        if (v < 0.0) throw std::invalid_argument("LeafHeightFunction: negative height");
        values_.push_back(v);
    }
    values_.push_back(0.0);
}

double LeafHeightFunction::operator()(double t) const {
    if (t < 0.0 || t > 1.0) throw std::domain_error("LeafHeightFunction: t outside [0,1]");
    double m = static_cast<double>(values_.size() - 1);
    double x = t * m;
    std::size_t i = std::min(static_cast<std::size_t>(x), values_.size() - 2);
    double frac = x - static_cast<double>(i);
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

double LeafHeightFunction::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

LeafHeightFunction leaf_height_function(const OrderedCladogram& tree) {
    std::vector<double> heights;
    for (int v : tree.leaves_in_order())
        heights.push_back(static_cast<double>(tree.tree().depth(v)));
    return LeafHeightFunction(std::move(heights));
}

DistanceMatrix distance_matrix(const EdgeWeightedTree& tree) {
    const Cladogram& shape = tree.shape();
    DistanceMatrix out;
    out.leaf_order = shape.leaf_labels();
    int m = static_cast<int>(out.leaf_order.size()) + 1;
    out.d.assign(m, std::vector<double>(m, 0.0));

    // root-to-node heights once, then d(x,y) = h(x) + h(y) - 2 h(mrca)
    std::vector<double> height(shape.node_count(), 0.0);
    std::vector<int> order;
    order.reserve(shape.node_count());
    order.push_back(Cladogram::kRoot);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int c : shape.node(order[i]).children) {
            height[c] = height[order[i]] + tree.edge_length(c);
            order.push_back(c);
        }

    auto mrca_height = [&](int u, int v) {
        // climb to equal depth then in lockstep
        int du = shape.depth(u), dv = shape.depth(v);
        while (du > dv) { u = shape.node(u).parent; --du; }
        while (dv > du) { v = shape.node(v).parent; --dv; }
        while (u != v) { u = shape.node(u).parent; v = shape.node(v).parent; }
        return height[u];
    };

    for (int i = 0; i < m - 1; ++i) {
        int u = shape.leaf_node(out.leaf_order[i]);
        out.d[0][i + 1] = out.d[i + 1][0] = height[u];
        for (int j = i + 1; j < m - 1; ++j) {
            int v = shape.leaf_node(out.leaf_order[j]);
            double dij = height[u] + height[v] - 2.0 * mrca_height(u, v);
            out.d[i + 1][j + 1] = out.d[j + 1][i + 1] = dij;
        }
    }
    return out;
}

double distortion(const EdgeWeightedTree& a, const EdgeWeightedTree& b) {
    if (a.shape().leaf_labels() != b.shape().leaf_labels())
        throw std::domain_error("distortion: leaf label sets differ");
    DistanceMatrix da = distance_matrix(a);
    DistanceMatrix db = distance_matrix(b);
    double worst = 0.0;
    for (int i = 0; i < da.size(); ++i)
        for (int j = i + 1; j < da.size(); ++j)
            worst = std::max(worst, std::fabs(da.at(i, j) - db.at(i, j)));
    return worst;
}

} // namespace fragtree

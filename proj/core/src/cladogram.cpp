#include "fragtree/cladogram.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace fragtree {

Cladogram Cladogram::leaf(Label label) {
    Cladogram t;
    Node root;
    root.children = {1};
    root.size = 1;
    Node lf;
    lf.parent = kRoot;
    lf.label = label;
    lf.size = 1;
    t.nodes_ = {root, lf};
    return t;
}

Cladogram Cladogram::join(const std::vector<Cladogram>& subtrees) {
    if (subtrees.empty()) throw std::invalid_argument("Cladogram::join: no subtrees");
    if (subtrees.size() == 1) return subtrees.front();
    Cladogram t;
    Node root;
    root.size = 0;
    t.nodes_.push_back(root);
    Node anc;
    anc.parent = kRoot;
    t.nodes_.push_back(anc);
    t.nodes_[kRoot].children = {1};
    for (const auto& sub : subtrees) {
        // graft the subtree below its own ROOT under the new ancestor;
        // old node v (v >= 1) lands at base + v - 1
        int base = t.node_count();
        const auto& sn = sub.nodes_;
        for (int v = 1; v < static_cast<int>(sn.size()); ++v) {
            Node n = sn[v];
            n.parent = (sn[v].parent == kRoot) ? 1 : sn[v].parent + base - 1;
            for (int& c : n.children) c += base - 1;
            t.nodes_.push_back(n);
        }
        t.nodes_[1].children.push_back(base + sub.top() - 1);
        t.nodes_[1].size += sn[sub.top()].size;
    }
    t.nodes_[kRoot].size = t.nodes_[1].size;
    t.validate();
    return t;
}

Cladogram Cladogram::from_leaf_sets(const std::vector<std::vector<Label>>& sets) {
    std::vector<std::vector<Label>> sorted = sets;
    for (auto& s : sorted) {
        if (s.empty()) throw std::invalid_argument("from_leaf_sets: empty node set");
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a < b;
              });
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty()) throw std::invalid_argument("from_leaf_sets: no nodes");

    Cladogram t;
    Node root;
    t.nodes_.push_back(root);
    // sorted by decreasing size: each set's parent is the smallest earlier
    // superset; the first set must be the full leaf set
    std::vector<int> ids(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        Node n;
        n.size = static_cast<int>(sorted[i].size());
        if (n.size == 1) n.label = sorted[i][0];
        // sets are sorted by decreasing size, so scanning backwards finds the
        // smallest strict superset first
        int parent = -1;
        for (int j = static_cast<int>(i) - 1; j >= 0; --j) {
            if (std::includes(sorted[j].begin(), sorted[j].end(),
                              sorted[i].begin(), sorted[i].end())) {
                parent = j;
                break;
            }
        }
        if (i == 0) {
            n.parent = kRoot;
        } else {
            if (parent == -1)
                throw std::invalid_argument("from_leaf_sets: sets are not laminar over a common ancestor");
            n.parent = ids[parent];
        }
        ids[i] = t.node_count();
        t.nodes_.push_back(n);
        t.nodes_[n.parent].children.push_back(ids[i]);
    }
    t.nodes_[kRoot].size = t.nodes_[1].size;
    t.validate();
    return t;
}

std::vector<Label> Cladogram::leaf_labels() const {
    std::vector<Label> out;
    for (const auto& n : nodes_)
        if (n.label >= 0) out.push_back(n.label);
    std::sort(out.begin(), out.end());
    return out;
}

int Cladogram::leaf_node(Label label) const {
    for (int v = 0; v < node_count(); ++v)
        if (nodes_[v].label == label) return v;
    throw std::domain_error("Cladogram::leaf_node: unknown leaf label");
}

int Cladogram::depth(int v) const {
    int d = 0;
    while (v != kRoot) {
        v = nodes_[v].parent;
        ++d;
    }
    return d;
}

std::vector<Label> Cladogram::node_leaf_set(int v) const {
    std::vector<Label> out;
    std::vector<int> stack = {v};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (nodes_[u].label >= 0) out.push_back(nodes_[u].label);
        for (int c : nodes_[u].children) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<Label>> Cladogram::leaf_sets() const {
    std::vector<std::vector<Label>> out;
    for (int v = 1; v < node_count(); ++v) out.push_back(node_leaf_set(v));
    std::sort(out.begin(), out.end());
    return out;
}

SetPartition Cladogram::children_partition(int v) const {
    std::vector<std::vector<Label>> blocks;
    for (int c : nodes_[v].children) blocks.push_back(node_leaf_set(c));
    return SetPartition(std::move(blocks));
}

bool Cladogram::is_binary() const {
    for (int v = 1; v < node_count(); ++v)
        if (!is_leaf(v) && nodes_[v].children.size() != 2) return false;
    return true;
}

bool operator==(const Cladogram& a, const Cladogram& b) {
    if (a.leaf_count() != b.leaf_count()) return false;
    return a.leaf_sets() == b.leaf_sets();
}

namespace {
void canonical_order(const Cladogram& t, int v, std::vector<int>& min_leaf,
                     Cladogram::Builder& builder, int built_parent) {
    const auto& n = t.node(v);
    if (t.is_leaf(v)) {
        builder.add_leaf(built_parent, n.label);
        return;
    }
    int me = (v == Cladogram::kRoot) ? builder.add_root() : builder.add_internal(built_parent);
    std::vector<int> kids = n.children;
    std::sort(kids.begin(), kids.end(),
              [&](int x, int y) { return min_leaf[x] < min_leaf[y]; });
    for (int c : kids) canonical_order(t, c, min_leaf, builder, me);
}
} // namespace

Cladogram Cladogram::canonicalized() const {
    std::vector<int> min_leaf(node_count(), 0);
    for (int v = node_count() - 1; v >= 0; --v) {
        if (is_leaf(v)) {
            min_leaf[v] = nodes_[v].label;
        } else {
            int m = INT32_MAX;
            for (int c : nodes_[v].children) m = std::min(m, min_leaf[c]);
            min_leaf[v] = m;
        }
    }
    Builder builder;
    canonical_order(*this, kRoot, min_leaf, builder, -1);
    return std::move(builder).build();
}

void Cladogram::validate() const {
    if (nodes_.size() < 2) throw std::invalid_argument("Cladogram: too few nodes");
    if (nodes_[kRoot].children.size() != 1)
        throw std::invalid_argument("Cladogram: ROOT must have exactly one child");
    std::set<Label> labels;
    for (int v = 1; v < node_count(); ++v) {
        const Node& n = nodes_[v];
        if (n.parent < 0 || n.parent >= node_count())
            throw std::invalid_argument("Cladogram: bad parent link");
        if (n.label >= 0) {
            if (!n.children.empty())
                throw std::invalid_argument("Cladogram: labeled node with children");
            if (!labels.insert(n.label).second)
                throw std::invalid_argument("Cladogram: duplicate leaf label");
        } else if (n.children.size() < 2) {
            throw std::invalid_argument("Cladogram: internal node with fewer than 2 children");
        }
        int sz = 0;
        if (n.label >= 0) sz = 1;
        for (int c : n.children) {
            if (nodes_[c].parent != v)
                throw std::invalid_argument("Cladogram: inconsistent child link");
            sz += nodes_[c].size;
        }
        if (sz != n.size) throw std::invalid_argument("Cladogram: bad subtree size");
    }
}

Cladogram::Builder::Builder() = default;

int Cladogram::Builder::add_root() {
    if (!nodes_.empty()) throw std::logic_error("Builder: root already added");
    nodes_.emplace_back();
    return kRoot;
}

int Cladogram::Builder::add_leaf(int parent, Label label) {
    if (label < 0) throw std::invalid_argument("Builder: leaf labels must be >= 0");
    Node n;
    n.parent = parent;
    n.label = label;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    nodes_[parent].children.push_back(id);
    return id;
}

int Cladogram::Builder::add_internal(int parent) {
    Node n;
    n.parent = parent;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    nodes_[parent].children.push_back(id);
    return id;
}

int Cladogram::Builder::add_leaf_at(int parent, Label label, int position) {
    int id = add_leaf(parent, label);
    auto& kids = nodes_[parent].children;
    kids.pop_back();
    kids.insert(kids.begin() + position, id);
    return id;
}

int Cladogram::Builder::add_internal_at(int parent, int position) {
    int id = add_internal(parent);
    auto& kids = nodes_[parent].children;
    kids.pop_back();
    kids.insert(kids.begin() + position, id);
    return id;
}

Cladogram Cladogram::Builder::build() && {
    Cladogram t;
    t.nodes_ = std::move(nodes_);
    // fill sizes bottom-up; children always have larger ids than parents here
    for (int v = t.node_count() - 1; v >= 0; --v) {
        auto& n = t.nodes_[v];
        n.size = n.label >= 0 ? 1 : 0;
        for (int c : n.children) n.size += t.nodes_[c].size;
    }
    t.validate();
    return t;
}

std::vector<int> OrderedCladogram::leaves_in_order() const {
    std::vector<int> out;
    std::vector<int> stack = {Cladogram::kRoot};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (tree_.is_leaf(v)) {
            out.push_back(v);
            continue;
        }
        const auto& kids = tree_.node(v).children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

bool operator==(const OrderedCladogram& a, const OrderedCladogram& b) {
    // compare shapes with order and labels via parallel DFS
    const Cladogram& x = a.tree();
    const Cladogram& y = b.tree();
    if (x.node_count() != y.node_count()) return false;
    std::vector<std::pair<int, int>> stack = {{Cladogram::kRoot, Cladogram::kRoot}};
    while (!stack.empty()) {
        auto [u, v] = stack.back();
        stack.pop_back();
        if (x.node(u).label != y.node(v).label) return false;
        if (x.node(u).children.size() != y.node(v).children.size()) return false;
        for (std::size_t i = 0; i < x.node(u).children.size(); ++i)
            stack.push_back({x.node(u).children[i], y.node(v).children[i]});
    }
    return true;
}

} // namespace fragtree

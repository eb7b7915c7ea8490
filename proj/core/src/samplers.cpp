#include "fragtree/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fragtree {

namespace {

int draw_from_cdf(const std::vector<double>& cdf, Rng& rng) {
    double u = rng.next_double() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    int idx = static_cast<int>(it - cdf.begin());
    return std::min(idx, static_cast<int>(cdf.size()) - 1);
}

} // namespace

MarkovBranchingSampler::MarkovBranchingSampler(RuleSpec rule)
    : rule_(std::move(rule)), q_(rule_) {}

bool MarkovBranchingSampler::binary() const {
    return rule_.get_if<BetaSplit>() != nullptr || rule_.get_if<FordAlpha>() != nullptr;
}

const std::vector<double>& MarkovBranchingSampler::split_cdf(int m) {
    auto it = split_cdf_cache_.find(m);
    if (it != split_cdf_cache_.end()) return it->second;
    std::vector<double> row;
    if (const auto* b = rule_.get_if<BetaSplit>())
        row = qtilde_beta_row(b->beta, m);
    else
        row = qtilde_ford_row(rule_.get_if<FordAlpha>()->alpha, m);
    // fold to k = 1..floor(m/2)
    std::vector<double> cdf(m / 2 + 1, 0.0);
    double acc = 0.0;
    for (int k = 1; k <= m / 2; ++k) {
        acc += (2 * k == m) ? row[k] : row[k] + row[m - k];
        cdf[k] = acc;
    }
    return split_cdf_cache_.emplace(m, std::move(cdf)).first->second;
}

const std::vector<double>& MarkovBranchingSampler::tagged_cdf(int m) {
    auto it = tagged_cdf_cache_.find(m);
    if (it != tagged_cdf_cache_.end()) return it->second;
    std::vector<double> row;
    if (const auto* b = rule_.get_if<BetaSplit>())
        row = qtilde_beta_row(b->beta, m);
    else
        row = qtilde_ford_row(rule_.get_if<FordAlpha>()->alpha, m);
    std::vector<double> cdf(m, 0.0);
    double acc = 0.0;
    for (int j = 1; j <= m - 1; ++j) {
        acc += (row[j] + row[m - j]) * j / m;
        cdf[j] = acc;
    }
    return tagged_cdf_cache_.emplace(m, std::move(cdf)).first->second;
}

const MarkovBranchingSampler::ShapeTable& MarkovBranchingSampler::shape_table(int m) {
    auto it = shape_table_cache_.find(m);
    if (it != shape_table_cache_.end()) return it->second;
    if (m > 40)
        throw std::length_error(
            "MarkovBranchingSampler: multifurcating rules are table-driven and capped at n = 40");
    ShapeTable table;
    double acc = 0.0;
    for (auto& shape : IntegerPartition::all_of(m, 2)) {
        double p = q_.q(m, shape);
        if (p <= 0.0) continue;
        acc += p;
        table.shapes.push_back(std::move(shape));
        table.cdf.push_back(acc);
    }
    if (table.shapes.empty())
        throw std::domain_error("MarkovBranchingSampler: rule assigns no mass at this size");
    return shape_table_cache_.emplace(m, std::move(table)).first->second;
}

IntegerPartition MarkovBranchingSampler::draw_shape(int m, Rng& rng) {
    if (binary()) {
        const auto& cdf = split_cdf(m);
        int k = draw_from_cdf(cdf, rng);
        if (k < 1) k = 1;
        return IntegerPartition({m - k, k});
    }
    const ShapeTable& table = shape_table(m);
    double u = rng.next_double() * table.cdf.back();
    auto it = std::upper_bound(table.cdf.begin(), table.cdf.end(), u);
    std::size_t idx = std::min<std::size_t>(it - table.cdf.begin(), table.shapes.size() - 1);
    return table.shapes[idx];
}

Cladogram MarkovBranchingSampler::sample(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_markov_branching: n must be >= 1");
    if (n == 1) return Cladogram::leaf(1);

    std::vector<Label> labels(n);
    std::iota(labels.begin(), labels.end(), 1);

    Cladogram::Builder builder;
    builder.add_root();

    struct Job {
        int parent;
        int begin, end; // label span
    };
    std::vector<Job> stack = {{Cladogram::kRoot, 0, n}};
    while (!stack.empty()) {
        Job job = stack.back();
        stack.pop_back();
        int m = job.end - job.begin;
        if (m == 1) {
            builder.add_leaf(job.parent, labels[job.begin]);
            continue;
        }
        IntegerPartition shape = draw_shape(m, rng);
        // uniform compatible labeled partition: shuffle the span, deal runs
        for (int i = 0; i < m - 1; ++i) {
            int j = i + static_cast<int>(rng.below(m - i));
            std::swap(labels[job.begin + i], labels[job.begin + j]);
        }
        int me = builder.add_internal(job.parent);
        int offset = job.begin;
        for (int part : shape.parts()) {
            stack.push_back({me, offset, offset + part});
            offset += part;
        }
    }
    return std::move(builder).build();
}

int MarkovBranchingSampler::sample_height(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_height: n must be >= 1");
    int height = 0;
    struct Job {
        int size, depth;
    };
    std::vector<Job> stack = {{n, 1}};
    while (!stack.empty()) {
        Job job = stack.back();
        stack.pop_back();
        if (job.size == 1) {
            height = std::max(height, job.depth);
            continue;
        }
        if (binary()) {
            const auto& cdf = split_cdf(job.size);
            int k = std::max(1, draw_from_cdf(cdf, rng));
            // both sides need a uniformly chosen orientation only for labels,
            // heights are label-free
            stack.push_back({k, job.depth + 1});
            stack.push_back({job.size - k, job.depth + 1});
        } else {
            IntegerPartition shape = draw_shape(job.size, rng);
            for (int part : shape.parts()) stack.push_back({part, job.depth + 1});
        }
    }
    return height;
}

int MarkovBranchingSampler::sample_leaf_depth(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_leaf_depth: n must be >= 1");
    if (!binary()) {
        // size-biased walk through the shape table
        int m = n;
        int depth = 1;
        while (m > 1) {
            IntegerPartition shape = draw_shape(m, rng);
            double u = rng.next_double() * m;
            int chosen = shape.part(0);
            for (int part : shape.parts()) {
                if (u < part) {
                    chosen = part;
                    break;
                }
                u -= part;
            }
            m = chosen;
            ++depth;
        }
        return depth;
    }
    int m = n;
    int depth = 1;
    while (m > 1) {
        const auto& cdf = tagged_cdf(m);
        int j = std::max(1, draw_from_cdf(cdf, rng));
        m = j;
        ++depth;
    }
    return depth;
}

Cladogram sample_markov_branching(const RuleSpec& rule, int n, Rng& rng) {
    MarkovBranchingSampler sampler(rule);
    return sampler.sample(n, rng);
}

// --- Ford growth ---------------------------------------------------------------

FordGrowth::FordGrowth(double alpha, Rng& rng) : alpha_(alpha), rng_(&rng) {
    if (!(alpha >= 0.0) || alpha > 1.0)
        throw std::domain_error("FordGrowth: alpha must lie in [0,1]");
    nodes_.resize(2);
    nodes_[0].parent = -1;
    nodes_[0].children = {1};
    nodes_[1].parent = 0;
    nodes_[1].label = 1;
    leaf_nodes_ = {1};
}

void FordGrowth::grow_to(int n) {
    while (leaf_count() < n) {
        // weights: alpha per inner edge (m-1 of them), 1-alpha per leaf edge
        double inner_mass = alpha_ * static_cast<double>(inner_nodes_.size());
        double total = inner_mass + (1.0 - alpha_) * static_cast<double>(leaf_nodes_.size());
        double u = rng_->next_double() * total;
        int v;
        if (u < inner_mass && !inner_nodes_.empty()) {
            v = inner_nodes_[rng_->below(inner_nodes_.size())];
        } else {
            v = leaf_nodes_[rng_->below(leaf_nodes_.size())];
        }
        // subdivide the edge above v with w; hang the new leaf off w
        int w = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        int leaf = static_cast<int>(nodes_.size());
        nodes_.emplace_back();

        int p = nodes_[v].parent;
        nodes_[w].parent = p;
        std::replace(nodes_[p].children.begin(), nodes_[p].children.end(), v, w);
        nodes_[v].parent = w;
        nodes_[leaf].parent = w;
        nodes_[leaf].label = leaf_count() + 1;
        if (rng_->bernoulli(0.5))
            nodes_[w].children = {leaf, v};
        else
            nodes_[w].children = {v, leaf};

        inner_nodes_.push_back(w);
        leaf_nodes_.push_back(leaf);
        last_insert_depth_ = node_depth(leaf);
    }
}

int FordGrowth::node_depth(int v) const {
    int d = 0;
    while (v != 0) {
        v = nodes_[v].parent;
        ++d;
    }
    return d;
}

int FordGrowth::leaf_depth(Label label) const {
    if (label < 1 || label > leaf_count())
        throw std::domain_error("FordGrowth: unknown leaf label");
    return node_depth(leaf_nodes_[label - 1]);
}

std::vector<int> FordGrowth::root_path(Label label) const {
    std::vector<int> path;
    for (int v = leaf_nodes_[label - 1]; v != -1; v = nodes_[v].parent) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

int FordGrowth::depth_of_last_insertion() const { return last_insert_depth_; }

int FordGrowth::height() const {
    int best = 0;
    std::vector<std::pair<int, int>> stack = {{0, 0}};
    while (!stack.empty()) {
        auto [v, d] = stack.back();
        stack.pop_back();
        if (nodes_[v].label >= 0) best = std::max(best, d);
        for (int c : nodes_[v].children) stack.push_back({c, d + 1});
    }
    return best;
}

OrderedCladogram FordGrowth::ordered_tree() const {
    Cladogram::Builder builder;
    builder.add_root();
    struct Item {
        int src, dst_parent;
    };
    std::vector<Item> stack = {{nodes_[0].children[0], Cladogram::kRoot}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const Node& n = nodes_[it.src];
        if (n.label >= 0) {
            builder.add_leaf(it.dst_parent, n.label);
            continue;
        }
        int me = builder.add_internal(it.dst_parent);
        for (auto c = n.children.rbegin(); c != n.children.rend(); ++c)
            stack.push_back({*c, me});
    }
    return OrderedCladogram(std::move(builder).build());
}

EdgeWeightedTree FordGrowth::reduced_tree(int k) const {
    if (k < 1 || k > leaf_count()) throw std::domain_error("reduced_tree: bad k");
    std::vector<Label> want(k);
    std::iota(want.begin(), want.end(), 1);
    return reduce(ordered_tree().tree(), want);
}

double FordGrowth::reduced_tree_length(int k) const {
    if (k < 1 || k > leaf_count()) throw std::domain_error("reduced_tree_length: bad k");
    // number of edges in the union of the k root-to-leaf paths
    std::vector<int> nodes;
    for (Label lab = 1; lab <= k; ++lab) {
        auto path = root_path(lab);
        nodes.insert(nodes.end(), path.begin() + 1, path.end()); // skip ROOT
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return static_cast<double>(nodes.size());
}

DistanceMatrix FordGrowth::reduced_distances(int k) const {
    if (k < 1 || k > leaf_count()) throw std::domain_error("reduced_distances: bad k");
    std::vector<std::vector<int>> paths;
    paths.reserve(k);
    for (Label lab = 1; lab <= k; ++lab) paths.push_back(root_path(lab));

    DistanceMatrix out;
    out.leaf_order.resize(k);
    std::iota(out.leaf_order.begin(), out.leaf_order.end(), 1);
    out.d.assign(k + 1, std::vector<double>(k + 1, 0.0));
    for (int i = 0; i < k; ++i) {
        double di = static_cast<double>(paths[i].size()) - 1.0;
        out.d[0][i + 1] = out.d[i + 1][0] = di;
        for (int j = i + 1; j < k; ++j) {
            std::size_t common = 0;
            while (common < paths[i].size() && common < paths[j].size() &&
                   paths[i][common] == paths[j][common])
                ++common;
            double dj = static_cast<double>(paths[j].size()) - 1.0;
            out.d[i + 1][j + 1] = out.d[j + 1][i + 1] = di + dj - 2.0 * (common - 1.0);
        }
    }
    return out;
}

int FordGrowth::leaves_left_of_spine() const {
    // mark the spine ROOT -> leaf 1, then count leaves hanging in subtrees
    // attached strictly to the left of it
    int leaf1 = leaf_nodes_[0];
    std::vector<char> on_spine(nodes_.size(), 0);
    for (int v = leaf1; v != -1; v = nodes_[v].parent) on_spine[v] = 1;

    int count = 0;
    for (int v = leaf1; v != 0; v = nodes_[v].parent) {
        int p = nodes_[v].parent;
        for (int c : nodes_[p].children) {
            if (c == v) break; // children after v are on the right
            if (!on_spine[c]) count += subtree_leaf_count(c);
        }
    }
    return count;
}

int FordGrowth::subtree_leaf_count(int v) const {
    int count = 0;
    std::vector<int> stack = {v};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (nodes_[u].label >= 0) ++count;
        for (int c : nodes_[u].children) stack.push_back(c);
    }
    return count;
}

std::vector<OrderedCladogram> sample_ford_growth(double alpha, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_ford_growth: n must be >= 1");
    if (n > 2000) throw std::length_error("sample_ford_growth: materialized sequence capped at n = 2000");
    FordGrowth growth(alpha, rng);
    std::vector<OrderedCladogram> out;
    out.reserve(n);
    out.push_back(growth.ordered_tree());
    for (int m = 2; m <= n; ++m) {
        growth.grow_to(m);
        out.push_back(growth.ordered_tree());
    }
    return out;
}

// --- Marchal growth ---------------------------------------------------------------

MarchalGrowth::MarchalGrowth(double alpha, Rng& rng) : alpha_(alpha), rng_(&rng) {
    if (!(alpha > 1.0) || !(alpha < 2.0))
        throw std::domain_error("MarchalGrowth: alpha must lie in (1,2)");
    // start from the two-leaf cherry
    nodes_.resize(4);
    nodes_[0].parent = -1;
    nodes_[0].children = {1};
    nodes_[1].parent = 0; // common ancestor
    nodes_[1].children = {2, 3};
    nodes_[2].parent = 1;
    nodes_[2].label = 1;
    nodes_[3].parent = 1;
    nodes_[3].label = 2;
    n_ = 2;
    edge_nodes_ = {1, 2, 3};
    branch_nodes_ = {1};
}

void MarchalGrowth::grow_to(int n) {
    if (n < 2) throw std::invalid_argument("MarchalGrowth: n must be >= 2");
    const double edge_w = 1.0 - 1.0 / alpha_;
    const double branch_w = 2.0 / alpha_ - 1.0;
    const double slot_w = 1.0 / alpha_;
    while (n_ < n) {
        double total = edge_w * edge_nodes_.size() + branch_w * branch_nodes_.size() +
                       slot_w * extra_slots_.size();
        double expected = n_ - 1.0 / alpha_;
        if (std::fabs(total - expected) > 1e-9 * std::max(1.0, expected))
            throw std::logic_error("MarchalGrowth: stage weight invariant violated");

        double u = rng_->next_double() * total;
        int leaf = static_cast<int>(nodes_.size());
        if (u < edge_w * edge_nodes_.size()) {
            // subdivide an edge with a new binary branch point
            int v = edge_nodes_[rng_->below(edge_nodes_.size())];
            int w = leaf;
            nodes_.emplace_back();
            leaf = static_cast<int>(nodes_.size());
            nodes_.emplace_back();
            int p = nodes_[v].parent;
            nodes_[w].parent = p;
            std::replace(nodes_[p].children.begin(), nodes_[p].children.end(), v, w);
            nodes_[v].parent = w;
            nodes_[w].children = {v, leaf};
            nodes_[leaf].parent = w;
            edge_nodes_.push_back(w);
            branch_nodes_.push_back(w);
        } else {
            int v;
            u -= edge_w * edge_nodes_.size();
            if (u < slot_w * extra_slots_.size() && !extra_slots_.empty()) {
                v = extra_slots_[rng_->below(extra_slots_.size())];
            } else {
                v = branch_nodes_[rng_->below(branch_nodes_.size())];
            }
            nodes_.emplace_back();
            nodes_[leaf].parent = v;
            nodes_[v].children.push_back(leaf);
            extra_slots_.push_back(v);
        }
        nodes_[leaf].label = ++n_;
        edge_nodes_.push_back(leaf);
    }
}

Cladogram MarchalGrowth::tree() const {
    Cladogram::Builder builder;
    builder.add_root();
    struct Item {
        int src, dst_parent;
    };
    std::vector<Item> stack = {{nodes_[0].children[0], Cladogram::kRoot}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const Node& n = nodes_[it.src];
        if (n.label >= 0) {
            builder.add_leaf(it.dst_parent, n.label);
            continue;
        }
        int me = builder.add_internal(it.dst_parent);
        for (auto c = n.children.rbegin(); c != n.children.rend(); ++c)
            stack.push_back({*c, me});
    }
    return std::move(builder).build();
}

int MarchalGrowth::leaf_depth_of(Label label) const {
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        if (nodes_[v].label == label) {
            int d = 0;
            int u = static_cast<int>(v);
            while (u != 0) {
                u = nodes_[u].parent;
                ++d;
            }
            return d;
        }
    }
    throw std::domain_error("MarchalGrowth: unknown leaf label");
}

int MarchalGrowth::depth_of_random_leaf(Rng& rng) const {
    Label label = static_cast<Label>(rng.below(n_)) + 1;
    return leaf_depth_of(label);
}

int MarchalGrowth::height() const {
    int best = 0;
    std::vector<std::pair<int, int>> stack = {{0, 0}};
    while (!stack.empty()) {
        auto [v, d] = stack.back();
        stack.pop_back();
        if (nodes_[v].label >= 0) best = std::max(best, d);
        for (int c : nodes_[v].children) stack.push_back({c, d + 1});
    }
    return best;
}

IntegerPartition MarchalGrowth::first_split() const {
    int top = nodes_[0].children[0];
    std::vector<int> parts;
    for (int c : nodes_[top].children) {
        int count = 0;
        std::vector<int> stack = {c};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (nodes_[u].label >= 0) ++count;
            for (int k : nodes_[u].children) stack.push_back(k);
        }
        parts.push_back(count);
    }
    return IntegerPartition(std::move(parts));
}

Cladogram sample_marchal_growth(double alpha, int n, Rng& rng) {
    MarchalGrowth growth(alpha, rng);
    growth.grow_to(n);
    return growth.tree();
}

// --- Chinese restaurant ---------------------------------------------------------------

std::vector<int> sample_crp_table_sizes(double alpha, double theta, int customers, Rng& rng) {
    if (!(alpha >= 0.0) || alpha >= 1.0 || !(theta > -alpha))
        throw std::domain_error("sample_crp: need alpha in [0,1) and theta > -alpha");
    if (customers < 1) throw std::domain_error("sample_crp: need at least one customer");
    std::vector<int> sizes;
    std::vector<int> seats; // one entry per seated customer, value = table index
    for (int m = 0; m < customers; ++m) {
        int t = static_cast<int>(sizes.size());
        double p_new = (m == 0) ? 1.0 : (theta + t * alpha) / (m + theta);
        if (rng.next_double() < p_new) {
            sizes.push_back(1);
            seats.push_back(t);
            continue;
        }
        // joint table pick proportional to n_i - alpha via seat rejection
        for (;;) {
            int i = seats[static_cast<int>(rng.below(seats.size()))];
            if (rng.next_double() * sizes[i] < sizes[i] - alpha) {
                sizes[i] += 1;
                seats.push_back(i);
                break;
            }
        }
    }
    return sizes;
}

SetPartition sample_crp(double alpha, double theta, int customers, Rng& rng) {
    if (!(alpha >= 0.0) || alpha >= 1.0 || !(theta > -alpha))
        throw std::domain_error("sample_crp: need alpha in [0,1) and theta > -alpha");
    if (customers < 1) throw std::domain_error("sample_crp: need at least one customer");
    std::vector<std::vector<Label>> tables;
    std::vector<int> seats;
    for (int m = 0; m < customers; ++m) {
        int t = static_cast<int>(tables.size());
        double p_new = (m == 0) ? 1.0 : (theta + t * alpha) / (m + theta);
        if (rng.next_double() < p_new) {
            tables.push_back({m + 1});
            seats.push_back(t);
            continue;
        }
        for (;;) {
            int i = seats[static_cast<int>(rng.below(seats.size()))];
            double sz = static_cast<double>(tables[i].size());
            if (rng.next_double() * sz < sz - alpha) {
                tables[i].push_back(m + 1);
                seats.push_back(i);
                break;
            }
        }
    }
    return SetPartition(std::move(tables));
}

// --- planar orders ---------------------------------------------------------------

OrderedCladogram attach_exchangeable_order(const Cladogram& tree, Rng& rng) {
    Cladogram::Builder builder;
    builder.add_root();
    struct Item {
        int src, dst_parent;
    };
    std::vector<Item> stack = {{tree.top(), Cladogram::kRoot}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (tree.is_leaf(it.src)) {
            builder.add_leaf(it.dst_parent, tree.node(it.src).label);
            continue;
        }
        int me = builder.add_internal(it.dst_parent);
        std::vector<int> kids = tree.node(it.src).children;
        for (int i = static_cast<int>(kids.size()) - 1; i > 0; --i) {
            int j = static_cast<int>(rng.below(i + 1));
            std::swap(kids[i], kids[j]);
        }
        for (auto c = kids.rbegin(); c != kids.rend(); ++c) stack.push_back({*c, me});
    }
    return OrderedCladogram(std::move(builder).build());
}

namespace {

// Copies `tree` while inserting a new leaf.  Stack items with src == kNewLeaf
// emit the new leaf; src == ~v means "copy node v without target handling",
// which lets the subdivided node be revisited as a plain subtree.
OrderedCladogram rebuild_with_insertion(const Cladogram& tree, int target, bool subdivide,
                                        int position, Label new_label) {
    constexpr int kNewLeaf = INT32_MIN;
    Cladogram::Builder builder;
    builder.add_root();
    struct Item {
        int src, dst_parent;
    };
    std::vector<Item> stack = {{tree.top(), Cladogram::kRoot}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (it.src == kNewLeaf) {
            builder.add_leaf(it.dst_parent, new_label);
            continue;
        }
        bool plain = it.src < 0;
        int src = plain ? ~it.src : it.src;
        if (!plain && src == target) {
            if (subdivide) {
                int w = builder.add_internal(it.dst_parent);
                if (position == 0) {
                    stack.push_back({~target, w});
                    stack.push_back({kNewLeaf, w});
                } else {
                    stack.push_back({kNewLeaf, w});
                    stack.push_back({~target, w});
                }
            } else {
                int me = builder.add_internal(it.dst_parent);
                const auto& kids = tree.node(src).children;
                std::vector<int> order;
                for (int i = 0; i <= static_cast<int>(kids.size()); ++i) {
                    if (i == position) order.push_back(kNewLeaf);
                    if (i < static_cast<int>(kids.size())) order.push_back(kids[i]);
                }
                for (auto c = order.rbegin(); c != order.rend(); ++c) stack.push_back({*c, me});
            }
            continue;
        }
        if (tree.is_leaf(src)) {
            builder.add_leaf(it.dst_parent, tree.node(src).label);
        } else {
            int me = builder.add_internal(it.dst_parent);
            const auto& kids = tree.node(src).children;
            for (auto c = kids.rbegin(); c != kids.rend(); ++c) stack.push_back({*c, me});
        }
    }
    return OrderedCladogram(std::move(builder).build());
}

} // namespace

OrderedCladogram extend_order_at_vertex(const OrderedCladogram& tree, int vertex_node,
                                        Label new_label, Rng& rng) {
    const Cladogram& t = tree.tree();
    if (vertex_node <= 0 || vertex_node >= t.node_count() || t.is_leaf(vertex_node))
        throw std::domain_error("extend_order_at_vertex: not an internal vertex");
    int r = static_cast<int>(t.node(vertex_node).children.size());
    int position = static_cast<int>(rng.below(r + 1));
    return rebuild_with_insertion(t, vertex_node, false, position, new_label);
}

OrderedCladogram extend_order_subdividing(const OrderedCladogram& tree, int child_node,
                                          Label new_label, Rng& rng) {
    const Cladogram& t = tree.tree();
    if (child_node <= 0 || child_node >= t.node_count())
        throw std::domain_error("extend_order_subdividing: bad node");
    int position = rng.bernoulli(0.5) ? 0 : 1;
    return rebuild_with_insertion(t, child_node, true, position, new_label);
}

Cladogram relabel_uniform(const Cladogram& tree, Rng& rng) {
    std::vector<Label> labels = tree.leaf_labels();
    std::vector<Label> shuffled = labels;
    for (int i = static_cast<int>(shuffled.size()) - 1; i > 0; --i) {
        int j = static_cast<int>(rng.below(i + 1));
        std::swap(shuffled[i], shuffled[j]);
    }
    std::map<Label, Label> perm;
    for (std::size_t i = 0; i < labels.size(); ++i) perm[labels[i]] = shuffled[i];

    Cladogram::Builder builder;
    builder.add_root();
    struct Item {
        int src, dst_parent;
    };
    std::vector<Item> stack = {{tree.top(), Cladogram::kRoot}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (tree.is_leaf(it.src)) {
            builder.add_leaf(it.dst_parent, perm.at(tree.node(it.src).label));
            continue;
        }
        int me = builder.add_internal(it.dst_parent);
        const auto& kids = tree.node(it.src).children;
        for (auto c = kids.rbegin(); c != kids.rend(); ++c) stack.push_back({*c, me});
    }
    return std::move(builder).build();
}

} // namespace fragtree

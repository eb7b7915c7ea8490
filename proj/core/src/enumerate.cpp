#include "fragtree/enumerate.hpp"

#include <stdexcept>

namespace fragtree {

namespace {

// restricted growth strings
void set_partitions_rec(const std::vector<Label>& ground, std::size_t i,
                        std::vector<std::vector<Label>>& blocks,
                        int min_blocks,
                        const std::function<void(const SetPartition&)>& visit) {
    if (i == ground.size()) {
        if (static_cast<int>(blocks.size()) >= min_blocks)
            visit(SetPartition(blocks));
        return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        blocks[b].push_back(ground[i]);
        set_partitions_rec(ground, i + 1, blocks, min_blocks, visit);
        blocks[b].pop_back();
    }
    blocks.push_back({ground[i]});
    set_partitions_rec(ground, i + 1, blocks, min_blocks, visit);
    blocks.pop_back();
}

void trees_over(const std::vector<Label>& labels, bool binary_only,
                const std::function<void(const Cladogram&)>& visit);

// enumerate tuples of subtrees over the blocks of pi, then join
void tuples_over_blocks(const SetPartition& pi, std::size_t j, bool binary_only,
                        std::vector<Cladogram>& acc,
                        const std::function<void(const Cladogram&)>& visit) {
    if (j == pi.blocks().size()) {
        visit(Cladogram::join(acc));
        return;
    }
    trees_over(pi.blocks()[j], binary_only, [&](const Cladogram& sub) {
        acc.push_back(sub);
        tuples_over_blocks(pi, j + 1, binary_only, acc, visit);
        acc.pop_back();
    });
}

void trees_over(const std::vector<Label>& labels, bool binary_only,
                const std::function<void(const Cladogram&)>& visit) {
    if (labels.size() == 1) {
        visit(Cladogram::leaf(labels[0]));
        return;
    }
    for_each_set_partition(labels, 2, [&](const SetPartition& pi) {
        if (binary_only && pi.block_count() != 2) return;
        std::vector<Cladogram> acc;
        tuples_over_blocks(pi, 0, binary_only, acc, visit);
    });
}

} // namespace

void for_each_set_partition(const std::vector<Label>& ground, int min_blocks,
                            const std::function<void(const SetPartition&)>& visit) {
    if (ground.empty()) throw std::invalid_argument("for_each_set_partition: empty ground set");
    std::vector<std::vector<Label>> blocks;
    set_partitions_rec(ground, 0, blocks, min_blocks, visit);
}

void for_each_cladogram(int n, bool binary_only,
                        const std::function<void(const Cladogram&)>& visit) {
    if (n < 1) throw std::invalid_argument("for_each_cladogram: n must be >= 1");
    if (n > 8) throw std::length_error("for_each_cladogram: supported only up to n = 8");
    std::vector<Label> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i + 1;
    trees_over(labels, binary_only, visit);
}

std::vector<Cladogram> enumerate_cladograms(int n, bool binary_only) {
    std::vector<Cladogram> out;
    for_each_cladogram(n, binary_only, [&](const Cladogram& t) { out.push_back(t); });
    return out;
}

} // namespace fragtree

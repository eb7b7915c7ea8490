#pragma once

#include <functional>
#include <vector>

#include "fragtree/cladogram.hpp"

namespace fragtree {

// Visits every labeled cladogram on {1..n}; exact-distribution oracle for
// small n.  Throws std::length_error beyond n = 8.
void for_each_cladogram(int n, bool binary_only,
                        const std::function<void(const Cladogram&)>& visit);

std::vector<Cladogram> enumerate_cladograms(int n, bool binary_only);

// All set partitions of `ground` (optionally requiring >= min_blocks).
void for_each_set_partition(const std::vector<Label>& ground, int min_blocks,
                            const std::function<void(const SetPartition&)>& visit);

} // namespace fragtree

#pragma once

#include <stdexcept>
#include <string>

#include "fragtree/edge_weighted_tree.hpp"

namespace fragtree {

struct NewickError : std::runtime_error {
    NewickError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position(position) {}
    std::size_t position;
};

// "((1:1,2:1):1);" — the outer group is the planted tree below ROOT, its
// trailing length is the root edge.  Children are emitted in stored order,
// so ordered trees round-trip with their planar order.
std::string to_newick(const EdgeWeightedTree& tree);
std::string to_newick(const Cladogram& tree); // unit edge lengths

EdgeWeightedTree parse_newick(const std::string& text);

} // namespace fragtree

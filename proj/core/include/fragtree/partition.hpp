#pragma once

#include <span>
#include <vector>

#include "fragtree/rng.hpp"

namespace fragtree {

using Label = int;

// Partition of the integer n into nonincreasing positive parts.
class IntegerPartition {
public:
    explicit IntegerPartition(std::vector<int> parts);

    int n() const { return n_; }
    int part_count() const { return static_cast<int>(parts_.size()); }
    const std::vector<int>& parts() const { return parts_; }
    int part(int j) const { return parts_[j]; }

    // number of parts equal to i (1-based part size)
    int multiplicity(int i) const;

    // Partition obtained by incrementing part j and re-sorting.
    IntegerPartition with_increment(int j) const;
    // Partition with an extra part equal to 1.
    IntegerPartition with_extra_singleton() const;

    // All partitions of n with at least `min_parts` parts.
    static std::vector<IntegerPartition> all_of(int n, int min_parts = 1);

    std::string str() const; // dash-separated, e.g. "3-1"

    friend bool operator==(const IntegerPartition& a, const IntegerPartition& b) {
        return a.parts_ == b.parts_;
    }
    friend bool operator<(const IntegerPartition& a, const IntegerPartition& b) {
        return a.parts_ < b.parts_;
    }

private:
    std::vector<int> parts_;
    int n_ = 0;
};

// Partition of a finite label set into disjoint blocks, blocks ordered by
// least element and each block sorted.
class SetPartition {
public:
    explicit SetPartition(std::vector<std::vector<Label>> blocks);

    static SetPartition trivial(const std::vector<Label>& ground);    // 1_B
    static SetPartition singletons(const std::vector<Label>& ground); // 0_B

    const std::vector<std::vector<Label>>& blocks() const { return blocks_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    std::vector<Label> ground_set() const;
    int size() const; // number of elements

    IntegerPartition shape() const;

    // true if every block of *this is contained in a block of `coarser`
    bool refines(const SetPartition& coarser) const;

    friend bool operator==(const SetPartition& a, const SetPartition& b) {
        return a.blocks_ == b.blocks_;
    }

private:
    std::vector<std::vector<Label>> blocks_;
};

// pi restricted to B, empty intersections dropped, reordered canonically.
SetPartition restrict_to(const SetPartition& pi, const std::vector<Label>& B);

// Kingman paintbox: i.i.d. urn assignments from the mass sequence `s`
// (nonincreasing, sum <= 1; the deficit is dust and yields singletons).
SetPartition paintbox_sample(std::span<const double> s, int n, Rng& rng);

// Eq-style bridge between the unlabeled rule value q_n(shape) and the
// probability of one compatible labeled partition.
double exchangeable_weight(double q_value, const IntegerPartition& shape,
                           const SetPartition& pi);

// Number of set partitions of an n-set compatible with the shape:
// multinomial(n; k_1..k_r) / prod_i m_i!
double compatible_partition_count(const IntegerPartition& shape);

} // namespace fragtree

#pragma once

#include <map>
#include <memory>
#include <vector>

#include "fragtree/cladogram.hpp"
#include "fragtree/edge_weighted_tree.hpp"
#include "fragtree/rng.hpp"
#include "fragtree/stable_density.hpp"

namespace fragtree {

// State of the line-breaking chain: ordered binary shape with k leaves
// (labels 1..k in appearance order), total length S_k, and the absolute edge
// lengths.  Canonical proportion coordinates list the k-1 inner edges first,
// then the k leaf edges, each in depth-first order.
class LineBreakState {
public:
    LineBreakState(OrderedCladogram shape, std::vector<double> edge_abs);

    const OrderedCladogram& shape() const { return shape_; }
    int k() const { return shape_.tree().leaf_count(); }
    double total_length() const;
    double edge_abs(int node) const { return edge_abs_[node]; }

    std::vector<int> canonical_edge_nodes() const; // node ids, inner then leaf
    std::vector<double> proportions() const;       // matching canonical order

private:
    OrderedCladogram shape_;
    std::vector<double> edge_abs_; // by node id, [0] = 0
};

// Record of one chain step for trace output.
struct LineBreakStep {
    int k_after = 0;
    double total_length = 0.0;
    int split_edge_index = -1; // canonical index of the edge that was split
    double root_side_fraction = 0.0;
    bool placed_left = false;
};

// Line-breaking chain for the alpha-model limit trees.
class LineBreaker {
public:
    explicit LineBreaker(double alpha);

    double alpha() const { return alpha_; }

    // Total-length law at stage k: density Gamma(k+1-a)/Gamma(k/a) s^{k/a-1} g_a(s).
    double sample_initial_length(int k, Rng& rng);
    double initial_length_log_density(int k, double s) const;

    // Fresh chain at k = 1.
    LineBreakState start(Rng& rng);

    LineBreakState transition(const LineBreakState& state, Rng& rng,
                              LineBreakStep* step = nullptr);

    // Conditional next-length density f(y | S_k = z), supported on y > z.
    double transition_log_density(double z, double y) const;
    double sample_next_length(double z, Rng& rng);

    const MittagLeffler& density() const { return ml_; }

private:
    double envelope_log_max(double theta, double z) const;

    double alpha_;
    MittagLeffler ml_;
    mutable std::map<int, std::pair<double, double>> initial_envelope_; // k -> (theta, logM)
};

// Renewal hazard of the chain at time t given last renewal at t - y.
double hazard(double alpha, double t, double y);

// The normalization integral behind the hazard:
// int_0^inf y^{(1-a)/a - 1} (z+y) g_a(z+y) dy  (equals Gamma((1-a)/a)/a * g_a(z)).
double hazard_normalization_integral(double alpha, double z);

// Spinal proportion via stick breaking over the spine's restaurant:
// V1 = sum_k A_k W_k prod_{i<k} (1-W_i), sticks W_i ~ Beta(1-a, 1-a+ia),
// i >= 1, A_k fair coin in {0,1}.  Truncation remainder is reported, never
// silently dropped.
double sample_spinal_proportion(double alpha, int truncation, Rng& rng,
                                double* remainder = nullptr);

// Expected truncation remainder E prod_{i=1..K} (1 - W_i).
double expected_spinal_remainder(double alpha, int truncation);

EdgeWeightedTree assemble_tree(const LineBreakState& state);

} // namespace fragtree

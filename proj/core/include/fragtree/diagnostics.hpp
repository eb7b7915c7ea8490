#pragma once

#include <map>
#include <string>
#include <vector>

#include "fragtree/qtable.hpp"
#include "fragtree/rng.hpp"
#include "fragtree/samplers.hpp"
#include "fragtree/stats.hpp"

namespace fragtree {

// Which generator realizes the model.
enum class SamplerKind {
    MarkovBranching, // recursive sampler driven by the rule's q tables
    FordGrowth,      // sequential alpha-model growth
    MarchalGrowth,   // sequential stable-shape growth
};

struct ModelSpec {
    RuleSpec rule;
    SamplerKind kind = SamplerKind::MarkovBranching;

    static ModelSpec markov(RuleSpec r) { return {std::move(r), SamplerKind::MarkovBranching}; }
    static ModelSpec ford_growth(double alpha) {
        return {RuleSpec::ford(alpha), SamplerKind::FordGrowth};
    }
    static ModelSpec marchal(double alpha) {
        return {RuleSpec::stable(alpha), SamplerKind::MarchalGrowth};
    }
};

struct SplitDistributionReport {
    int n = 0;
    int reps = 0;
    std::map<IntegerPartition, long long> counts;
    std::map<IntegerPartition, double> expected; // from the exact q table
    Chi2Result chi2;
};

// First-split frequencies against the exact rule table.
SplitDistributionReport empirical_split_distribution(const ModelSpec& model, int n, int reps,
                                                     Rng& rng);

struct ScalingRow {
    int n = 0;
    EmpiricalSummary leaf_depth_scaled; // D_1^n / n^gamma
    EmpiricalSummary height_scaled;     // H_n / n^gamma
    double ks_height_vs_prev = -1.0;    // KS statistic against the previous n
    double ks_p_vs_prev = -1.0;
};

// Per-n scaled depth/height statistics with cross-n KS of scaled heights.
std::vector<ScalingRow> scaling_report(const ModelSpec& model, double gamma,
                                       const std::vector<int>& n_list, int reps, Rng& rng);

struct ReducedConvergenceReport {
    std::vector<int> n_list;
    // scaled reduced-tree total lengths S_k^(n)/n^alpha, one sample per path per n
    std::vector<std::vector<double>> scaled_lengths;
    // distortion between consecutive scaled reduced trees, per path
    std::vector<std::vector<double>> step_distortions;
    // fraction of paths whose reduced shape stopped changing by each step
    std::vector<double> shape_settled_fraction;
};

ReducedConvergenceReport reduced_tree_convergence(double alpha, int k,
                                                  const std::vector<int>& n_list, int reps,
                                                  Rng& rng);

struct SpinalReport {
    double alpha = 0.0;
    // conditional P(V1 = 0 | 3-leaf ordered shape): cherry-first and leaf-first
    double p_zero_given_cherry_first = 0.0;
    double p_zero_given_leaf_first = 0.0;
    long long cherry_first_count = 0;
    long long leaf_first_count = 0;
    double expected_cherry_first = 0.0; // 1/(4-2a)
    double expected_leaf_first = 0.0;   // (2-2a)/(4-2a)
    // large-n spinal proportions against the stick-breaking law
    EmpiricalSummary v1_over_n;
    KsResult ks_vs_stick_breaking;
};

SpinalReport spinal_proportion_check(double alpha, int reps_small, int n_large, int reps_large,
                                     int stick_truncation, Rng& rng);

// --- conditioned Galton-Watson oracle ---------------------------------------

// Offspring law with pgf z + (1/alpha)(1-z)^alpha: p_0 = 1/alpha, p_1 = 0,
// p_r = (-1)^r binom(alpha, r)/alpha.
std::vector<double> gw_offspring_pmf(double alpha, int r_max);
std::vector<Rational> gw_offspring_pmf_exact(const Rational& alpha, int r_max);

// First-split law of the GW tree conditioned to have n leaves.
std::map<IntegerPartition, double> gw_conditioned_first_split(double alpha, int n);
std::map<IntegerPartition, Rational> gw_conditioned_first_split_exact(const Rational& alpha,
                                                                      int n);

// Full conditioned-GW splitting rule as a SplitRule (for shape-law recursion).
class GwSplitRule : public SplitRule {
public:
    GwSplitRule(double alpha, int n_max);
    double q(int n, const IntegerPartition& shape) const override;

private:
    std::map<int, std::map<IntegerPartition, double>> tables_;
};

} // namespace fragtree

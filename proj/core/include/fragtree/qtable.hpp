#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "fragtree/cladogram.hpp"
#include "fragtree/partition.hpp"
#include "fragtree/rational.hpp"
#include "fragtree/rule.hpp"

namespace fragtree {

// Distribution q_n over partitions of n with >= 2 parts.
class QTable {
public:
    QTable(int n, std::map<IntegerPartition, double> probs);

    int n() const { return n_; }
    double at(const IntegerPartition& shape) const; // 0 for absent shapes
    const std::map<IntegerPartition, double>& probs() const { return probs_; }
    double sum() const;

private:
    int n_;
    std::map<IntegerPartition, double> probs_;
};

// --- closed-form splitting kernels -----------------------------------------

// Aldous beta-splitting symmetric kernel, normalized over k = 1..n-1.
// Returned vector is indexed by k (entry 0 unused).
std::vector<double> qtilde_beta_row(double beta, int n);
double qtilde_beta(double beta, int n, int k);

// Ford alpha symmetric kernel (the Gamma_alpha product form); the explicit
// formula already sums to 1 and is renormalized only to absorb float error.
std::vector<double> qtilde_ford_row(double alpha, int n);
double qtilde_ford(double alpha, int n, int k);

// Stable-tree splitting rule for a single partition of n with >= 2 parts.
double q_stable(double alpha, int n, const IntegerPartition& shape);

// Finite dislocation measure with erosion: exact evaluation of the integral
// representation with the atom sums expanded by dynamic programming over
// distinct urn indices.
double q_finite_dislocation(const FiniteDislocation& fd, int n, const IntegerPartition& shape);
Rational q_finite_dislocation_exact(const RationalDislocation& fd, int n,
                                    const IntegerPartition& shape);

// Normalization constant paired with the dislocation-measure view:
//   beta in (-2,-1): Z_n of the density C_beta x^beta (1-x)^beta;
//   other beta:      Z_n of the density x^beta (1-x)^beta;
//   Ford alpha:      2 Gamma(n-alpha)/Gamma(n-2alpha);
//   stable:          1 (the splitting rule is already normalized);
//   finite:          n c + sum_a w_a (1 - sum_i s_i^n).
double normalizer(const RuleSpec& rule, int n);

// Folds a symmetric kernel into the unordered binary rule:
// q_n(n-k,k) = qt[k] + qt[n-k] for k < n/2, q_n(n/2,n/2) = qt[n/2].
QTable symmetrize(std::span<const double> qtilde, int n);
std::vector<double> desymmetrize(const QTable& binary_table);

// --- rule tables ------------------------------------------------------------

// Access to q_n(shape) for arbitrary n; lets tests plug in hand-built rules.
class SplitRule {
public:
    virtual ~SplitRule() = default;
    virtual double q(int n, const IntegerPartition& shape) const = 0;
    QTable table(int n) const; // enumerates partitions of n (guarded for large n)
};

class RuleSplitRule : public SplitRule {
public:
    explicit RuleSplitRule(RuleSpec rule) : rule_(std::move(rule)) {}
    double q(int n, const IntegerPartition& shape) const override;
    const RuleSpec& rule() const { return rule_; }

private:
    std::vector<double> binary_row(int n) const;
    RuleSpec rule_;
    mutable std::map<int, std::vector<double>> row_cache_;
};

class TableSplitRule : public SplitRule {
public:
    explicit TableSplitRule(std::vector<QTable> tables);
    double q(int n, const IntegerPartition& shape) const override;

private:
    std::map<int, QTable> tables_;
};

QTable qtable(const RuleSpec& rule, int n);

// Max over partitions of n of the absolute defect in the one-leaf-removal
// recursion linking q_n to q_{n+1}.
double consistency_residual(const SplitRule& rule, int n);
double consistency_residual(const RuleSpec& rule, int n);

// Holding rates lambda_2..lambda_N of the induced fragmentation chain
// (lambda_2 = 1); throws if a removal probability reaches 1.
std::vector<double> holding_rates(const RuleSpec& rule, int N);

// Pre-limit mass Z_n * sum_{an<=k<=bn} qtilde_n(k); for 1/2 <= a < b < 1 this
// approximates the mass nu(s_1 in [a,b]) of the binary dislocation measure.
double recover_dislocation_mass(const RuleSpec& binary_rule, int n, double a, double b);

// --- dislocation densities ---------------------------------------------------

// nu_{Aldous-beta}(s_1 in dx)/dx, supported on [1/2,1); beta in (-2,-1).
double dislocation_density_beta(double beta, double x);
// Ford limit kernel f and the measure 2 f 1{x >= 1/2}.
double ford_limit_kernel(double alpha, double x);
double dislocation_density_ford(double alpha, double x);
// Levy density of the tagged-fragment subordinator of the stable tree.
double stable_levy_density(double alpha, double x);

// Probability of one specific labeled cladogram under the Markov branching
// law of `rule` (product of exchangeable splitting probabilities).
double exact_labeled_probability(const SplitRule& rule, const Cladogram& tree);

} // namespace fragtree

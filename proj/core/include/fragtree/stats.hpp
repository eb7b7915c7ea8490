#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fragtree {

// Streaming moment accumulator whose merge is associative and commutative,
// so parallel reps can be combined in any order.
struct EmpiricalSummary {
    std::size_t count = 0;
    long double sum = 0.0L;
    long double sumsq = 0.0L;
    double min = 0.0;
    double max = 0.0;

    void add(double x);
    void merge(const EmpiricalSummary& other);
    double mean() const;
    double variance() const; // unbiased
};

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

struct Chi2Result {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
    bool zero_expected_violation = false; // observed mass in a zero-probability cell
};

// Two-sample Kolmogorov-Smirnov; inputs need not be sorted.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS against a CDF.
KsResult ks_vs_cdf(std::vector<double> sample, const std::function<double(double)>& cdf);

// Goodness of fit of observed counts against cell probabilities.
Chi2Result chi2_goodness_of_fit(const std::vector<long long>& observed,
                                const std::vector<double>& expected_probs);

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> values);

} // namespace fragtree

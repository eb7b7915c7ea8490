#include "fragtree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fragtree/special.hpp"

namespace fragtree {

void EmpiricalSummary::add(double x) {
    if (count == 0) {
        min = max = x;
    } else {
        min = std::min(min, x);
        max = std::max(max, x);
    }
    ++count;
    sum += x;
    sumsq += (long double)x * x;
}

void EmpiricalSummary::merge(const EmpiricalSummary& other) {
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    count += other.count;
    sum += other.sum;
    sumsq += other.sumsq;
    min = std::min(min, other.min);
    max = std::max(max, other.max);
}

double EmpiricalSummary::mean() const {
    if (count == 0) throw std::logic_error("EmpiricalSummary::mean: empty");
    return static_cast<double>(sum / count);
}

double EmpiricalSummary::variance() const {
    if (count < 2) return 0.0;
    long double m = sum / count;
    long double v = (sumsq - count * m * m) / (count - 1);
    return v > 0 ? static_cast<double>(v) : 0.0;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    double ne = na * nb / (na + nb);
    double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    return {d, kolmogorov_sf(lambda)};
}

KsResult ks_vs_cdf(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_vs_cdf: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double c = cdf(sample[i]);
        d = std::max(d, std::fabs(c - i / n));
        d = std::max(d, std::fabs((i + 1) / n - c));
    }
    double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    return {d, kolmogorov_sf(lambda)};
}

Chi2Result chi2_goodness_of_fit(const std::vector<long long>& observed,
                                const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size() || observed.empty())
        throw std::invalid_argument("chi2_goodness_of_fit: size mismatch");
    long long total = 0;
    for (long long o : observed) total += o;
    if (total <= 0) throw std::invalid_argument("chi2_goodness_of_fit: empty counts");

    Chi2Result res;
    double stat = 0.0;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = expected_probs[i] * total;
        if (e <= 0.0) {
            if (observed[i] > 0) res.zero_expected_violation = true;
            continue;
        }
        double diff = observed[i] - e;
        stat += diff * diff / e;
        ++cells;
    }
    res.statistic = stat;
    res.dof = cells > 1 ? cells - 1 : 1;
    res.p_value = res.zero_expected_violation ? 0.0 : chi2_sf(stat, static_cast<double>(res.dof));
    return res;
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson_correlation: bad inputs");
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size();
    my /= y.size();
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        long double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0 || syy <= 0) return 0.0;
    return static_cast<double>(sxy / std::sqrt((double)sxx * (double)syy));
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty");
    std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

} // namespace fragtree

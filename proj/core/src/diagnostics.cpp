#include "fragtree/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fragtree/linebreak.hpp"
#include "fragtree/special.hpp"

namespace fragtree {

namespace {

IntegerPartition first_split_of(const Cladogram& tree) {
    return tree.children_partition(tree.top()).shape();
}

} // namespace

SplitDistributionReport empirical_split_distribution(const ModelSpec& model, int n, int reps,
                                                     Rng& rng) {
    if (n < 2) throw std::invalid_argument("empirical_split_distribution: n must be >= 2");
    if (reps < 1) throw std::invalid_argument("empirical_split_distribution: reps must be >= 1");

    SplitDistributionReport report;
    report.n = n;
    report.reps = reps;

    MarkovBranchingSampler mb(model.rule);
    for (int rep = 0; rep < reps; ++rep) {
        Rng sub = rng.substream(rep);
        IntegerPartition split = [&]() {
            switch (model.kind) {
            case SamplerKind::MarkovBranching:
                return first_split_of(mb.sample(n, sub));
            case SamplerKind::FordGrowth: {
                FordGrowth g(model.rule.get_if<FordAlpha>()->alpha, sub);
                g.grow_to(n);
                return first_split_of(g.ordered_tree().tree());
            }
            case SamplerKind::MarchalGrowth: {
                MarchalGrowth g(model.rule.get_if<StableAlpha>()->alpha, sub);
                g.grow_to(n);
                return g.first_split();
            }
            }
            throw std::logic_error("unreachable");
        }();
        report.counts[split] += 1;
    }

    RuleSplitRule q(model.rule);
    std::vector<long long> observed;
    std::vector<double> expected;
    for (const auto& shape : IntegerPartition::all_of(n, 2)) {
        double p = q.q(n, shape);
        report.expected.emplace(shape, p);
        expected.push_back(p);
        auto it = report.counts.find(shape);
        observed.push_back(it == report.counts.end() ? 0 : it->second);
    }
    report.chi2 = chi2_goodness_of_fit(observed, expected);
    return report;
}

std::vector<ScalingRow> scaling_report(const ModelSpec& model, double gamma,
                                       const std::vector<int>& n_list, int reps, Rng& rng) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("scaling_report: gamma must be >= 0");
    std::vector<ScalingRow> rows;
    MarkovBranchingSampler mb(model.rule);
    std::vector<double> prev_heights;
    std::uint64_t stream_index = 0;
    for (int n : n_list) {
        ScalingRow row;
        row.n = n;
        double scale = std::pow(static_cast<double>(n), gamma);
        std::vector<double> heights;
        heights.reserve(reps);
        for (int rep = 0; rep < reps; ++rep) {
            Rng sub = rng.substream(stream_index++);
            int d1 = 0, h = 0;
            switch (model.kind) {
            case SamplerKind::MarkovBranching:
                d1 = mb.sample_leaf_depth(n, sub);
                h = mb.sample_height(n, sub);
                break;
            case SamplerKind::FordGrowth: {
                FordGrowth g(model.rule.get_if<FordAlpha>()->alpha, sub);
                g.grow_to(n);
                // labels are not exchangeable under growth: measure a uniform leaf
                d1 = g.leaf_depth(static_cast<Label>(sub.below(n)) + 1);
                h = g.height();
                break;
            }
            case SamplerKind::MarchalGrowth: {
                MarchalGrowth g(model.rule.get_if<StableAlpha>()->alpha, sub);
                g.grow_to(n);
                d1 = g.depth_of_random_leaf(sub);
                h = g.height();
                break;
            }
            }
            row.leaf_depth_scaled.add(d1 / scale);
            row.height_scaled.add(h / scale);
            heights.push_back(h / scale);
        }
        if (!prev_heights.empty()) {
            KsResult ks = ks_two_sample(prev_heights, heights);
            row.ks_height_vs_prev = ks.statistic;
            row.ks_p_vs_prev = ks.p_value;
        }
        prev_heights = std::move(heights);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

double matrix_distortion(const DistanceMatrix& a, const DistanceMatrix& b, double scale_a,
                         double scale_b) {
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i)
        for (int j = i + 1; j < a.size(); ++j)
            worst = std::max(worst, std::fabs(a.at(i, j) * scale_a - b.at(i, j) * scale_b));
    return worst;
}

std::string shape_key(const Cladogram& t) {
    // reduced shapes are small; the canonical newick-less key is the sorted
    // leaf-set stream
    std::string key;
    for (const auto& s : t.leaf_sets()) {
        for (Label x : s) {
            key += std::to_string(x);
            key += ',';
        }
        key += '|';
    }
    return key;
}

} // namespace

ReducedConvergenceReport reduced_tree_convergence(double alpha, int k,
                                                  const std::vector<int>& n_list, int reps,
                                                  Rng& rng) {
    if (k < 1 || k > 6) throw std::invalid_argument("reduced_tree_convergence: need 1 <= k <= 6");
    if (n_list.empty() || n_list.front() < k)
        throw std::invalid_argument("reduced_tree_convergence: n_list must start at >= k");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("reduced_tree_convergence: n_list must increase");

    ReducedConvergenceReport report;
    report.n_list = n_list;
    report.scaled_lengths.assign(n_list.size(), {});
    report.step_distortions.assign(n_list.size() - 1, {});
    std::vector<long long> settled(n_list.size(), 0);

    for (int rep = 0; rep < reps; ++rep) {
        Rng sub = rng.substream(rep);
        FordGrowth growth(alpha, sub);
        DistanceMatrix prev;
        double prev_scale = 0.0;
        std::string final_key;
        std::vector<std::string> keys(n_list.size());
        for (std::size_t i = 0; i < n_list.size(); ++i) {
            growth.grow_to(n_list[i]);
            double scale = std::pow(static_cast<double>(n_list[i]), -alpha);
            DistanceMatrix dm = growth.reduced_distances(k);
            double total = growth.reduced_tree_length(k);
            report.scaled_lengths[i].push_back(total * scale);
            if (i > 0)
                report.step_distortions[i - 1].push_back(
                    matrix_distortion(prev, dm, prev_scale, scale));
            prev = std::move(dm);
            prev_scale = scale;
            keys[i] = shape_key(growth.reduced_tree(k).shape());
        }
        final_key = keys.back();
        for (std::size_t i = 0; i < n_list.size(); ++i)
            if (keys[i] == final_key) settled[i] += 1;
    }
    for (std::size_t i = 0; i < n_list.size(); ++i)
        report.shape_settled_fraction.push_back(static_cast<double>(settled[i]) / reps);
    return report;
}

SpinalReport spinal_proportion_check(double alpha, int reps_small, int n_large, int reps_large,
                                     int stick_truncation, Rng& rng) {
    SpinalReport report;
    report.alpha = alpha;
    report.expected_cherry_first = 1.0 / (4.0 - 2.0 * alpha);
    report.expected_leaf_first = (2.0 - 2.0 * alpha) / (4.0 - 2.0 * alpha);

    long long zero_cherry = 0, zero_leaf = 0;
    for (int rep = 0; rep < reps_small; ++rep) {
        Rng sub = rng.substream(rep);
        FordGrowth growth(alpha, sub);
        growth.grow_to(3);
        // the two ordered 3-leaf shapes: first child of the top vertex is
        // either the cherry or a leaf
        OrderedCladogram t = growth.ordered_tree();
        int top = t.tree().top();
        bool cherry_first = !t.tree().is_leaf(t.tree().node(top).children.front());
        int v1 = growth.leaves_left_of_spine();
        if (cherry_first) {
            report.cherry_first_count += 1;
            zero_cherry += (v1 == 0);
        } else {
            report.leaf_first_count += 1;
            zero_leaf += (v1 == 0);
        }
    }
    if (report.cherry_first_count > 0)
        report.p_zero_given_cherry_first =
            static_cast<double>(zero_cherry) / report.cherry_first_count;
    if (report.leaf_first_count > 0)
        report.p_zero_given_leaf_first = static_cast<double>(zero_leaf) / report.leaf_first_count;

    std::vector<double> empirical, stick;
    empirical.reserve(reps_large);
    stick.reserve(reps_large);
    for (int rep = 0; rep < reps_large; ++rep) {
        Rng sub = rng.substream(1000000 + rep);
        FordGrowth growth(alpha, sub);
        growth.grow_to(n_large);
        double v = static_cast<double>(growth.leaves_left_of_spine()) / n_large;
        report.v1_over_n.add(v);
        empirical.push_back(v);
        stick.push_back(sample_spinal_proportion(alpha, stick_truncation, sub));
    }
    report.ks_vs_stick_breaking = ks_two_sample(empirical, stick);
    return report;
}

// --- conditioned Galton-Watson oracle ---------------------------------------

std::vector<double> gw_offspring_pmf(double alpha, int r_max) {
    if (!(alpha > 1.0) || alpha > 2.0)
        throw std::domain_error("gw_offspring_pmf: alpha must lie in (1,2]");
    std::vector<double> p(r_max + 1, 0.0);
    p[0] = 1.0 / alpha;
    // p_r = (-1)^r binom(alpha, r) / alpha, r >= 2
    double binom = alpha; // binom(alpha,1) = alpha
    for (int r = 2; r <= r_max; ++r) {
        binom *= (alpha - (r - 1)) / r;
        double value = ((r % 2 == 0) ? 1.0 : -1.0) * binom / alpha;
        p[r] = value < 0.0 && value > -1e-15 ? 0.0 : value;
        if (p[r] < 0.0) throw std::logic_error("gw_offspring_pmf: negative mass");
    }
    return p;
}

std::vector<Rational> gw_offspring_pmf_exact(const Rational& alpha, int r_max) {
    std::vector<Rational> p(r_max + 1, Rational(0));
    p[0] = Rational(1) / alpha;
    Rational binom = alpha;
    for (int r = 2; r <= r_max; ++r) {
        binom = binom * (alpha - Rational(r - 1)) / Rational(r);
        Rational value = (r % 2 == 0 ? binom : -binom) / alpha;
        p[r] = value;
    }
    return p;
}

namespace {

// w(m) = sum over plane trees with m leaves of prod p_{c_v}; p_1 = 0 keeps
// the recursion finite
template <class T>
std::vector<T> gw_leaf_weights(const std::vector<T>& p, int n, const T& zero, const T& one) {
    std::vector<T> w(n + 1, zero);
    w[1] = p[0];
    for (int m = 2; m <= n; ++m) {
        // comp[j][s]: sum over ordered j-tuples of positive sizes summing to s
        // of prod w(size)
        std::vector<std::vector<T>> comp(m + 1, std::vector<T>(m + 1, zero));
        comp[0][0] = one;
        for (int j = 1; j <= m; ++j)
            for (int s = j; s <= m; ++s) {
                T acc = zero;
                for (int last = 1; last <= s - (j - 1); ++last)
                    acc = acc + comp[j - 1][s - last] * w[last];
                comp[j][s] = acc;
            }
        T total = zero;
        for (int r = 2; r <= m && r < static_cast<int>(p.size()); ++r)
            total = total + p[r] * comp[r][m];
        w[m] = total;
    }
    return w;
}

template <class T>
std::map<IntegerPartition, T> gw_first_split(const std::vector<T>& p, const std::vector<T>& w,
                                             int n, const T& zero) {
    std::map<IntegerPartition, T> out;
    for (const auto& shape : IntegerPartition::all_of(n, 2)) {
        int r = shape.part_count();
        if (r >= static_cast<int>(p.size())) continue;
        // number of ordered arrangements of the size multiset: r!/prod m_i!
        long long num = 1, den = 1;
        for (int i = 2; i <= r; ++i) num *= i;
        for (int i = 1; i <= n; ++i) {
            int m = shape.multiplicity(i);
            for (int j = 2; j <= m; ++j) den *= j;
        }
        T prob = p[r] * T(num) / T(den);
        for (int part : shape.parts()) prob = prob * w[part];
        prob = prob / w[n];
        if (!(prob == zero)) out.emplace(shape, prob);
    }
    return out;
}

} // namespace

std::map<IntegerPartition, double> gw_conditioned_first_split(double alpha, int n) {
    if (n < 2 || n > 8) throw std::length_error("gw_conditioned_first_split: supported for 2 <= n <= 8");
    std::vector<double> p = gw_offspring_pmf(alpha, n);
    std::vector<double> w = gw_leaf_weights(p, n, 0.0, 1.0);
    return gw_first_split(p, w, n, 0.0);
}

std::map<IntegerPartition, Rational> gw_conditioned_first_split_exact(const Rational& alpha,
                                                                      int n) {
    if (n < 2 || n > 8)
        throw std::length_error("gw_conditioned_first_split_exact: supported for 2 <= n <= 8");
    std::vector<Rational> p = gw_offspring_pmf_exact(alpha, n);
    std::vector<Rational> w = gw_leaf_weights(p, n, Rational(0), Rational(1));
    return gw_first_split(p, w, n, Rational(0));
}

GwSplitRule::GwSplitRule(double alpha, int n_max) {
    for (int n = 2; n <= n_max; ++n) tables_[n] = gw_conditioned_first_split(alpha, n);
}

double GwSplitRule::q(int n, const IntegerPartition& shape) const {
    auto it = tables_.find(n);
    if (it == tables_.end()) throw std::domain_error("GwSplitRule: no table for this n");
    auto jt = it->second.find(shape);
    return jt == it->second.end() ? 0.0 : jt->second;
}

} // namespace fragtree

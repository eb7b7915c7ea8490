#include "fragtree/linebreak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fragtree/quadrature.hpp"

namespace fragtree {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_half(double a) { return std::fabs(a - 0.5) < 1e-12; }

} // namespace

LineBreakState::LineBreakState(OrderedCladogram shape, std::vector<double> edge_abs)
    : shape_(std::move(shape)), edge_abs_(std::move(edge_abs)) {
    const Cladogram& t = shape_.tree();
    if (static_cast<int>(edge_abs_.size()) != t.node_count())
        throw std::invalid_argument("LineBreakState: one length per node required");
    if (!t.is_binary()) throw std::invalid_argument("LineBreakState: shape must be binary");
    for (int v = 1; v < t.node_count(); ++v)
        if (!(edge_abs_[v] > 0.0))
            throw std::invalid_argument("LineBreakState: edge lengths must be positive");
    edge_abs_[Cladogram::kRoot] = 0.0;
}

double LineBreakState::total_length() const {
    double s = 0.0;
    for (int v = 1; v < shape_.tree().node_count(); ++v) s += edge_abs_[v];
    return s;
}

std::vector<int> LineBreakState::canonical_edge_nodes() const {
    const Cladogram& t = shape_.tree();
    std::vector<int> inner, leaves;
    std::vector<int> stack = {t.top()};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (t.is_leaf(v))
            leaves.push_back(v);
        else
            inner.push_back(v);
        const auto& kids = t.node(v).children;
        for (auto c = kids.rbegin(); c != kids.rend(); ++c) stack.push_back(*c);
    }
    inner.insert(inner.end(), leaves.begin(), leaves.end());
    return inner;
}

std::vector<double> LineBreakState::proportions() const {
    double total = total_length();
    std::vector<double> out;
    for (int v : canonical_edge_nodes()) out.push_back(edge_abs_[v] / total);
    return out;
}

LineBreaker::LineBreaker(double alpha) : alpha_(alpha), ml_(alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("LineBreaker: alpha must lie in (0,1)");
}

double LineBreaker::initial_length_log_density(int k, double s) const {
    if (k < 1) throw std::domain_error("initial_length_log_density: k must be >= 1");
    if (!(s > 0.0)) return kNegInf;
    double ka = static_cast<double>(k) / alpha_;
    return std::lgamma(k + 1.0 - alpha_) - std::lgamma(ka) + (ka - 1.0) * std::log(s) +
           ml_.log_g_exact(s);
}

double LineBreaker::envelope_log_max(double theta, double z) const {
    // max over y > z of log y + log g(y) + (y - z)/theta, coarse grid plus
    // local parabolic refinement and a safety margin
    auto value = [&](double y) { return std::log(y) + ml_.log_g(y) + (y - z) / theta; };
    double best = kNegInf, best_y = z + theta;
    for (int i = 0; i <= 80; ++i) {
        double y = z + theta * 0.05 * std::exp(0.12 * i); // roughly z..z+750*theta
        double v = value(y);
        if (v > best) {
            best = v;
            best_y = y;
        }
    }
    double lo = std::max(z * 1e-12 + best_y / 1.2, z + 1e-12);
    double hi = best_y * 1.2;
    for (int it = 0; it < 40; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (value(m1) < value(m2))
            lo = m1;
        else
            hi = m2;
    }
    best = std::max(best, value(0.5 * (lo + hi)));
    return best + 1e-3;
}

double LineBreaker::sample_initial_length(int k, Rng& rng) {
    if (k < 1) throw std::domain_error("sample_initial_length: k must be >= 1");
    if (is_half(alpha_)) {
        // density prop to s^{2k-1} exp(-s^2/4): S = 2 sqrt(Gamma(k,1))
        return 2.0 * std::sqrt(rng.gamma(static_cast<double>(k)));
    }
    double a = k / alpha_;
    double theta = std::exp(std::lgamma(k + 1.0 - alpha_) - std::lgamma(k + 1.0));
    auto it = initial_envelope_.find(k);
    if (it == initial_envelope_.end()) {
        // envelope over the ratio log g(s) + s/theta
        auto value = [&](double s) { return ml_.log_g(s) + s / theta; };
        double best = value(1e-8);
        for (int i = 0; i <= 120; ++i) {
            double s = 1e-3 * std::exp(0.12 * i);
            best = std::max(best, value(s));
        }
        it = initial_envelope_.emplace(k, std::make_pair(theta, best + 1e-3)).first;
    }
    const double log_m = it->second.second;
    for (int tries = 0; tries < 100000; ++tries) {
        double s = rng.gamma(a, theta);
        if (!(s > 0.0)) continue;
        double log_ratio = ml_.log_g(s) + s / theta - log_m;
        if (log_ratio > 1e-9)
            throw std::logic_error("sample_initial_length: envelope violated");
        if (std::log(rng.next_double() + 1e-300) <= log_ratio) return s;
    }
    throw std::runtime_error("sample_initial_length: envelope rejected too often");
}

double LineBreaker::transition_log_density(double z, double y) const {
    if (!(z >= 0.0) || !(y > z)) return kNegInf;
    double a = (1.0 - alpha_) / alpha_; // exponent + 1
    // f(y|z) = (alpha / Gamma((1-a)/a)) (y-z)^{1/a - 2} y g(y) / g(z)
    return std::log(alpha_) - std::lgamma(a) + (a - 1.0) * std::log(y - z) + std::log(y) +
           ml_.log_g_exact(y) - ml_.log_g_exact(z);
}

double LineBreaker::sample_next_length(double z, Rng& rng) {
    if (!(z > 0.0)) throw std::domain_error("sample_next_length: need z > 0");
    if (is_half(alpha_)) {
        // target prop to y exp(-y^2/4) on (z, inf): y = sqrt(z^2 + 4 E)
        return std::sqrt(z * z + 4.0 * rng.exponential());
    }
    double a = (1.0 - alpha_) / alpha_;
    // local decay rate of y g(y) sets the proposal scale
    double scale_ref = std::max(z, std::exp(std::lgamma(2.0 - alpha_)) / alpha_);
    double lambda = -(1.0 / scale_ref + ml_.dlog_g(scale_ref));
    double theta = 1.0 / std::max(0.25, lambda);
    double log_m = envelope_log_max(theta, z);
    for (int tries = 0; tries < 100000; ++tries) {
        double y = z + rng.gamma(a, theta);
        if (!(y > z)) continue;
        double log_ratio = std::log(y) + ml_.log_g(y) + (y - z) / theta - log_m;
        if (log_ratio > 1e-9)
            throw std::logic_error("sample_next_length: envelope violated");
        if (std::log(rng.next_double() + 1e-300) <= log_ratio) return y;
    }
    throw std::runtime_error("sample_next_length: envelope rejected too often");
}

LineBreakState LineBreaker::start(Rng& rng) {
    double s1 = sample_initial_length(1, rng);
    Cladogram path = Cladogram::leaf(1);
    return LineBreakState(OrderedCladogram(std::move(path)), {0.0, s1});
}

LineBreakState LineBreaker::transition(const LineBreakState& state, Rng& rng,
                                       LineBreakStep* step) {
    const Cladogram& t = state.shape().tree();
    const int k = state.k();
    const double s_old = state.total_length();

    // (i) edge choice by length proportions
    std::vector<int> canonical = state.canonical_edge_nodes();
    double u = rng.next_double() * s_old;
    int pick_index = 0;
    for (std::size_t i = 0; i < canonical.size(); ++i) {
        double len = state.edge_abs(canonical[i]);
        if (u < len || i + 1 == canonical.size()) {
            pick_index = static_cast<int>(i);
            break;
        }
        u -= len;
    }
    int target = canonical[pick_index];
    bool leaf_edge = t.is_leaf(target);

    // (ii) next total length
    double s_new = sample_next_length(s_old, rng);

    // (iii) root-side split fraction
    double c = leaf_edge ? rng.beta(1.0, (1.0 - alpha_) / alpha_) : rng.next_double();

    // (iv) rebuild with the subdivided edge and the new leaf edge
    bool left = rng.bernoulli(0.5);
    Cladogram::Builder builder;
    builder.add_root();
    std::vector<double> abs = {0.0};
    constexpr int kNewLeaf = INT32_MIN;
    struct Item {
        int src, dst_parent;
    };
    std::vector<Item> stack = {{t.top(), Cladogram::kRoot}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (it.src == kNewLeaf) {
            builder.add_leaf(it.dst_parent, k + 1);
            abs.push_back(s_new - s_old);
            continue;
        }
        bool plain = it.src < 0;
        int src = plain ? ~it.src : it.src;
        if (!plain && src == target) {
            int w = builder.add_internal(it.dst_parent);
            abs.push_back(c * state.edge_abs(target));
            if (left) {
                stack.push_back({~target, w});
                stack.push_back({kNewLeaf, w});
            } else {
                stack.push_back({kNewLeaf, w});
                stack.push_back({~target, w});
            }
            continue;
        }
        if (t.is_leaf(src)) {
            builder.add_leaf(it.dst_parent, t.node(src).label);
            abs.push_back(plain && src == target ? (1.0 - c) * state.edge_abs(src)
                                                 : state.edge_abs(src));
            continue;
        }
        int me = builder.add_internal(it.dst_parent);
        abs.push_back(plain && src == target ? (1.0 - c) * state.edge_abs(src)
                                             : state.edge_abs(src));
        const auto& kids = t.node(src).children;
        for (auto ch = kids.rbegin(); ch != kids.rend(); ++ch) stack.push_back({*ch, me});
    }

    if (step) {
        step->k_after = k + 1;
        step->total_length = s_new;
        step->split_edge_index = pick_index;
        step->root_side_fraction = c;
        step->placed_left = left;
    }
    return LineBreakState(OrderedCladogram(std::move(builder).build()), std::move(abs));
}

double hazard(double alpha, double t, double y) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::domain_error("hazard: alpha outside (0,1)");
    if (!(t > 0.0) || y < 0.0 || y > t) throw std::domain_error("hazard: need 0 <= y <= t, t > 0");
    double a = (1.0 - alpha) / alpha;
    if (y == 0.0) {
        if (a > 1.0) return 0.0;
        if (a < 1.0) return std::numeric_limits<double>::infinity();
    }
    double log_num = (a - 1.0) * std::log(y) + std::log(t) + log_g_density(alpha, t);
    // denominator decays superexponentially; walk the cutoff out until g dies
    double x_hi = 1.0;
    while (log_g_density(alpha, t + x_hi) > -740.0 && x_hi < 1e12) x_hi *= 2.0;
    auto integrand = [&](double x) {
        if (x <= 0.0) x = 0.0;
        double lg = log_g_density(alpha, t + x);
        if (lg == kNegInf) return 0.0;
        return std::exp((a - 1.0) * std::log(y + x) + std::log(t + x) + lg);
    };
    double denom = integrate(integrand, 0.0, x_hi, 1e-13, 48);
    return std::exp(log_num) / denom;
}

double hazard_normalization_integral(double alpha, double z) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("hazard_normalization_integral: alpha outside (0,1)");
    if (!(z >= 0.0)) throw std::domain_error("hazard_normalization_integral: z must be >= 0");
    double a = (1.0 - alpha) / alpha;
    // substitute y = u^{1/a} so the endpoint singularity disappears:
    // int y^{a-1} (z+y) g(z+y) dy = (1/a) int (z + u^{1/a}) g(z + u^{1/a}) du
    double u_hi = 1.0;
    while (log_g_density(alpha, z + std::pow(u_hi, 1.0 / a)) > -740.0 && u_hi < 1e12) u_hi *= 2.0;
    auto integrand = [&](double u) {
        double yv = std::pow(u, 1.0 / a);
        double lg = log_g_density(alpha, z + yv);
        if (lg == kNegInf) return 0.0;
        return (z + yv) * std::exp(lg);
    };
    return integrate(integrand, 0.0, u_hi, 1e-13, 48) / a;
}

double sample_spinal_proportion(double alpha, int truncation, Rng& rng, double* remainder) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("sample_spinal_proportion: alpha outside (0,1)");
    if (truncation < 1) throw std::domain_error("sample_spinal_proportion: truncation must be >= 1");
    double v = 0.0;
    double stick = 1.0;
    for (int i = 1; i <= truncation; ++i) {
        double w = rng.beta(1.0 - alpha, 1.0 - alpha + i * alpha);
        if (rng.bernoulli(0.5)) v += stick * w;
        stick *= (1.0 - w);
    }
    if (remainder) *remainder = stick;
    return v;
}

double expected_spinal_remainder(double alpha, int truncation) {
    double r = 1.0;
    for (int i = 1; i <= truncation; ++i) {
        double a = 1.0 - alpha, b = 1.0 - alpha + i * alpha;
        r *= b / (a + b);
    }
    return r;
}

EdgeWeightedTree assemble_tree(const LineBreakState& state) {
    std::vector<double> lengths(state.shape().tree().node_count());
    for (int v = 1; v < state.shape().tree().node_count(); ++v) lengths[v] = state.edge_abs(v);
    return EdgeWeightedTree(state.shape().tree(), std::move(lengths));
}

} // namespace fragtree

#include "fragtree/qtable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fragtree/special.hpp"

namespace fragtree {

QTable::QTable(int n, std::map<IntegerPartition, double> probs)
    : n_(n), probs_(std::move(probs)) {
    if (n < 2) throw std::invalid_argument("QTable: n must be >= 2");
    for (const auto& [shape, p] : probs_) {
        if (shape.n() != n) throw std::invalid_argument("QTable: shape does not partition n");
        if (shape.part_count() < 2) throw std::invalid_argument("QTable: shapes need >= 2 parts");
        if (p < -1e-15) throw std::invalid_argument("QTable: negative probability");
    }
}

double QTable::at(const IntegerPartition& shape) const {
    auto it = probs_.find(shape);
    return it == probs_.end() ? 0.0 : it->second;
}

double QTable::sum() const {
    double s = 0.0;
    for (const auto& [shape, p] : probs_) s += p;
    return s;
}

// --- beta ---------------------------------------------------------------

std::vector<double> qtilde_beta_row(double beta, int n) {
    if (!(beta > -2.0)) throw std::domain_error("qtilde_beta: beta must exceed -2");
    if (n < 2) throw std::domain_error("qtilde_beta: n must be >= 2");
    std::vector<double> row(n, 0.0);
    double logc = -std::lgamma(n + 2.0 * beta + 2.0);
    double total = 0.0;
    for (int k = 1; k <= n - 1; ++k) {
        double lw = log_binomial(n, k) + std::lgamma(beta + k + 1.0) +
                    std::lgamma(beta + n - k + 1.0) + logc;
        row[k] = std::exp(lw);
        total += row[k];
    }
    for (int k = 1; k <= n - 1; ++k) row[k] /= total;
    return row;
}

double qtilde_beta(double beta, int n, int k) {
    if (k < 1 || k > n - 1) throw std::domain_error("qtilde_beta: k out of range");
    return qtilde_beta_row(beta, n)[k];
}

// --- Ford ---------------------------------------------------------------

std::vector<double> qtilde_ford_row(double alpha, int n) {
    if (!(alpha >= 0.0) || !(alpha < 1.0))
        throw std::domain_error("qtilde_ford: alpha must lie in [0,1)");
    if (n < 2) throw std::domain_error("qtilde_ford: n must be >= 2");
    std::vector<double> row(n, 0.0);
    // Gamma_a(m) = Gamma(m - a) / Gamma(1 - a)
    double lg1ma = std::lgamma(1.0 - alpha);
    double lgn = std::lgamma(n - alpha) - lg1ma;
    double total = 0.0;
    for (int k = 1; k <= n - 1; ++k) {
        double lgk = std::lgamma(k - alpha) - lg1ma;
        double lgnk = std::lgamma(n - k - alpha) - lg1ma;
        double bracket = 0.5 * alpha * std::exp(log_binomial(n, k));
        if (k >= 1 && k <= n - 1 && n >= 2) {
            double comb = (k - 1 <= n - 2 && k - 1 >= 0) ? std::exp(log_binomial(n - 2, k - 1)) : 0.0;
            bracket += (1.0 - 2.0 * alpha) * comb;
        }
        double v = std::exp(lgk + lgnk - lgn) * bracket;
        if (v < 0.0 && v > -1e-12) v = 0.0;
        if (v < 0.0) throw std::logic_error("qtilde_ford: negative kernel value");
        row[k] = v;
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-10)
        throw std::logic_error("qtilde_ford: kernel does not sum to 1");
    for (int k = 1; k <= n - 1; ++k) row[k] /= total;
    return row;
}

double qtilde_ford(double alpha, int n, int k) {
    if (k < 1 || k > n - 1) throw std::domain_error("qtilde_ford: k out of range");
    return qtilde_ford_row(alpha, n)[k];
}

// --- stable ---------------------------------------------------------------

namespace {

double log_combinatorial_factor(const IntegerPartition& shape) {
    // C = n! / (prod k_j! prod m_i!)
    double lc = log_factorial(shape.n());
    for (int p : shape.parts()) lc -= log_factorial(p);
    for (int i = 1; i <= shape.n(); ++i) lc -= log_factorial(shape.multiplicity(i));
    return lc;
}

} // namespace

double q_stable(double alpha, int n, const IntegerPartition& shape) {
    if (!(alpha > 1.0) || !(alpha < 2.0))
        throw std::domain_error("q_stable: alpha must lie in (1,2)");
    if (shape.n() != n || shape.part_count() < 2)
        throw std::domain_error("q_stable: shape must partition n into >= 2 parts");
    const double ia = 1.0 / alpha;
    const int r = shape.part_count();
    double lq = log_combinatorial_factor(shape);
    lq += std::lgamma(2.0 - ia) - (r - 2) * std::log(alpha) + std::lgamma(r - alpha);
    lq -= std::lgamma(n - ia) + std::lgamma(2.0 - alpha);
    for (int p : shape.parts()) lq += std::lgamma(p - ia) - std::lgamma(1.0 - ia);
    return std::exp(lq);
}

// --- finite dislocation -----------------------------------------------------

namespace {

// Sum over injective assignments of the parts to distinct coordinates of
// prod_j s_{i_j}^{kappa_j}; DP over subsets of parts.
template <class T>
T distinct_index_sum(const std::vector<int>& parts, const std::vector<T>& coords, const T& zero,
                     const T& one) {
    const int q = static_cast<int>(parts.size());
    if (q == 0) return one;
    if (q > 20) throw std::length_error("distinct_index_sum: too many parts");
    if (static_cast<int>(coords.size()) < q) return zero;
    std::vector<T> dp(static_cast<std::size_t>(1) << q, zero);
    dp[0] = one;
    for (const T& s : coords) {
        // iterate masks descending so each coordinate is used at most once
        std::vector<T> powers(q, zero);
        for (int j = 0; j < q; ++j) {
            T p = one;
            for (int e = 0; e < parts[j]; ++e) p = p * s;
            powers[j] = p;
        }
        for (int mask = (1 << q) - 1; mask >= 1; --mask) {
            T acc = dp[mask];
            for (int j = 0; j < q; ++j) {
                if (mask & (1 << j)) acc = acc + dp[mask ^ (1 << j)] * powers[j];
            }
            dp[mask] = acc;
        }
    }
    return dp[(1 << q) - 1];
}

template <class T>
T binomial_T(int n, int k) {
    long long c = 1;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return T(c);
}

// Shared core of the double and exact evaluations.
template <class T, class Atom>
T q_finite_core(const T& erosion, const std::vector<Atom>& atoms, int n,
                const IntegerPartition& shape, const T& zero, const T& one,
                bool (*positive)(const T&)) {
    if (shape.n() != n || shape.part_count() < 2)
        throw std::domain_error("q_finite_dislocation: shape must partition n into >= 2 parts");
    if (n > 20) throw std::length_error("q_finite_dislocation: n too large for exact expansion");

    const int r = shape.part_count();
    const int m1 = shape.multiplicity(1);

    // erosion enters as m_1 c on the (n-1,1) shape (2c on (1,1)); see the
    // kappa representation where each singleton-shedding partition
    // epsilon_i restricts to it
    T total = zero;
    if (r == 2 && shape.part(1) == 1) total = total + T(m1) * erosion;

    for (const auto& atom : atoms) {
        T s0 = one;
        std::vector<T> coords;
        for (const auto& f : atom.fragments) {
            s0 = s0 - f;
            if (positive(f)) coords.push_back(f);
        }
        if (!positive(s0)) s0 = zero;

        T atom_sum = zero;
        int lmax = positive(s0) ? m1 : 0;
        for (int l = 0; l <= lmax; ++l) {
            std::vector<int> remaining(shape.parts().begin(), shape.parts().end() - l);
            T dust = one;
            for (int e = 0; e < l; ++e) dust = dust * s0;
            atom_sum = atom_sum +
                       binomial_T<T>(m1, l) * dust *
                           distinct_index_sum<T>(remaining, coords, zero, one);
        }
        total = total + atom.weight * atom_sum;
    }

    // Z_n = n c + sum_a w_a (1 - sum_i s_i^n)
    T z = T(n) * erosion;
    for (const auto& atom : atoms) {
        T inner = one;
        for (const auto& f : atom.fragments) {
            T p = one;
            for (int e = 0; e < n; ++e) p = p * f;
            inner = inner - p;
        }
        z = z + atom.weight * inner;
    }
    if (!positive(z)) throw std::domain_error("q_finite_dislocation: degenerate measure (Z_n = 0)");

    // combinatorial factor n! / (prod k_j! prod m_i!)
    long long c_num = 1;
    for (int i = 2; i <= n; ++i) c_num *= i;
    long long c_den = 1;
    for (int p : shape.parts())
        for (int i = 2; i <= p; ++i) c_den *= i;
    for (int i = 1; i <= n; ++i) {
        int m = shape.multiplicity(i);
        for (int j = 2; j <= m; ++j) c_den *= j;
    }
    return T(c_num) / T(c_den) * total / z;
}

bool positive_double(const double& x) { return x > 1e-12; }
bool positive_rational(const Rational& x) { return Rational(0) < x; }

} // namespace

double q_finite_dislocation(const FiniteDislocation& fd, int n, const IntegerPartition& shape) {
    if (fd.erosion <= 0.0 && fd.atoms.empty())
        throw std::domain_error("q_finite_dislocation: measure is identically zero");
    return q_finite_core<double, DislocationAtom>(fd.erosion, fd.atoms, n, shape, 0.0, 1.0,
                                                  &positive_double);
}

Rational q_finite_dislocation_exact(const RationalDislocation& fd, int n,
                                    const IntegerPartition& shape) {
    return q_finite_core<Rational, RationalAtom>(fd.erosion, fd.atoms, n, shape, Rational(0),
                                                 Rational(1), &positive_rational);
}

// --- normalizers -------------------------------------------------------------

namespace {

double beta_measure_normalizer(double beta, int n) {
    // Z_n = int (1 - x^n - (1-x)^n) x^beta (1-x)^beta dx, continued across the
    // divergent-beta range as B(b+1,b+1) - 2 Gamma(b+1) Gamma(n+b+1) / Gamma(n+2b+2)
    double first;
    double two_b2 = 2.0 * beta + 2.0;
    if (two_b2 <= 0.0 && std::fabs(two_b2 - std::round(two_b2)) < 1e-13) {
        first = 0.0; // 1/Gamma pole
    } else {
        int sg_num = 1, sg_den = 1;
        double lg_num = 2.0 * lgamma_signed(beta + 1.0, &sg_num);
        double lg_den = lgamma_signed(two_b2, &sg_den);
        first = sg_den * std::exp(lg_num - lg_den);
        // sign of Gamma(beta+1)^2 is positive
    }
    int sg = 1;
    double lg_b1 = lgamma_signed(beta + 1.0, &sg);
    double second = 2.0 * sg * std::exp(lg_b1 + std::lgamma(n + beta + 1.0) -
                                        std::lgamma(n + two_b2));
    return first - second;
}

} // namespace

double normalizer(const RuleSpec& rule, int n) {
    if (n < 2) throw std::domain_error("normalizer: n must be >= 2");
    if (const auto* b = rule.get_if<BetaSplit>()) {
        double z = beta_measure_normalizer(b->beta, n);
        if (b->beta > -2.0 && b->beta < -1.0)
            z *= (-b->beta - 1.0) * gamma_reciprocal(2.0 + b->beta);
        return z;
    }
    if (const auto* f = rule.get_if<FordAlpha>()) {
        return 2.0 * std::exp(std::lgamma(n - f->alpha) - std::lgamma(n - 2.0 * f->alpha));
    }
    if (rule.get_if<StableAlpha>()) return 1.0;
    const auto& fd = *rule.get_if<FiniteDislocation>();
    double z = n * fd.erosion;
    for (const auto& atom : fd.atoms) {
        double inner = 1.0;
        for (double s : atom.fragments) inner -= std::pow(s, n);
        z += atom.weight * inner;
    }
    return z;
}

// --- symmetrization -----------------------------------------------------------

QTable symmetrize(std::span<const double> qtilde, int n) {
    if (static_cast<int>(qtilde.size()) != n)
        throw std::invalid_argument("symmetrize: kernel must have size n (index 0 unused)");
    std::map<IntegerPartition, double> probs;
    for (int k = 1; k <= n / 2; ++k) {
        double p = (2 * k == n) ? qtilde[k] : qtilde[k] + qtilde[n - k];
        probs.emplace(IntegerPartition({n - k, k}), p);
    }
    return QTable(n, std::move(probs));
}

std::vector<double> desymmetrize(const QTable& binary_table) {
    const int n = binary_table.n();
    std::vector<double> row(n, 0.0);
    for (const auto& [shape, p] : binary_table.probs()) {
        if (shape.part_count() != 2)
            throw std::domain_error("desymmetrize: table is not binary");
        int k = shape.part(1);
        if (2 * k == n) {
            row[k] = p;
        } else {
            row[k] = 0.5 * p;
            row[n - k] = 0.5 * p;
        }
    }
    return row;
}

// --- rule tables ----------------------------------------------------------------

QTable SplitRule::table(int n) const {
    if (n > 40) throw std::length_error("SplitRule::table: partition enumeration too large");
    std::map<IntegerPartition, double> probs;
    for (const auto& shape : IntegerPartition::all_of(n, 2)) {
        double p = q(n, shape);
        if (p != 0.0) probs.emplace(shape, p);
    }
    return QTable(n, std::move(probs));
}

const std::vector<double>& rule_binary_row_cached(const RuleSpec& rule, int n,
                                                  std::map<int, std::vector<double>>& cache) {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> row;
    if (const auto* b = rule.get_if<BetaSplit>())
        row = qtilde_beta_row(b->beta, n);
    else if (const auto* f = rule.get_if<FordAlpha>())
        row = qtilde_ford_row(f->alpha, n);
    else
        throw std::logic_error("rule_binary_row_cached: not a kernel family");
    return cache.emplace(n, std::move(row)).first->second;
}

double RuleSplitRule::q(int n, const IntegerPartition& shape) const {
    if (shape.n() != n || shape.part_count() < 2)
        throw std::domain_error("SplitRule::q: shape must partition n into >= 2 parts");
    if (rule_.get_if<BetaSplit>() || rule_.get_if<FordAlpha>()) {
        if (shape.part_count() != 2) return 0.0;
        const auto& row = rule_binary_row_cached(rule_, n, row_cache_);
        int k = shape.part(1);
        return (2 * k == n) ? row[k] : row[k] + row[n - k];
    }
    if (const auto* s = rule_.get_if<StableAlpha>()) return q_stable(s->alpha, n, shape);
    return q_finite_dislocation(*rule_.get_if<FiniteDislocation>(), n, shape);
}

TableSplitRule::TableSplitRule(std::vector<QTable> tables) {
    for (auto& t : tables) {
        int n = t.n();
        tables_.emplace(n, std::move(t));
    }
}

double TableSplitRule::q(int n, const IntegerPartition& shape) const {
    auto it = tables_.find(n);
    if (it == tables_.end()) throw std::domain_error("TableSplitRule: no table for this n");
    return it->second.at(shape);
}

QTable qtable(const RuleSpec& rule, int n) {
    return RuleSplitRule(rule).table(n);
}

// --- consistency ------------------------------------------------------------------

double consistency_residual(const SplitRule& rule, int n) {
    if (n < 2) throw std::domain_error("consistency_residual: n must be >= 2");
    double worst = 0.0;
    const double qn1_removal = rule.q(n + 1, IntegerPartition({n, 1}));
    for (const auto& shape : IntegerPartition::all_of(n, 2)) {
        double lhs = rule.q(n, shape);
        double rhs = 0.0;
        for (int j = 0; j < shape.part_count(); ++j) {
            int kj = shape.part(j);
            double coeff = (kj + 1.0) * (shape.multiplicity(kj + 1) + 1.0) /
                           ((n + 1.0) * shape.multiplicity(kj));
            rhs += coeff * rule.q(n + 1, shape.with_increment(j));
        }
        rhs += (shape.multiplicity(1) + 1.0) / (n + 1.0) *
               rule.q(n + 1, shape.with_extra_singleton());
        rhs += qn1_removal / (n + 1.0) * lhs;
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

double consistency_residual(const RuleSpec& rule, int n) {
    return consistency_residual(RuleSplitRule(rule), n);
}

std::vector<double> holding_rates(const RuleSpec& rule, int N) {
    if (N < 2) throw std::domain_error("holding_rates: N must be >= 2");
    RuleSplitRule q(rule);
    std::vector<double> rates = {1.0}; // lambda_2
    for (int n = 2; n < N; ++n) {
        double p_removal = q.q(n + 1, IntegerPartition({n, 1})) / (n + 1.0);
        if (p_removal >= 1.0)
            throw std::domain_error("holding_rates: removal probability reached 1");
        rates.push_back(rates.back() / (1.0 - p_removal));
    }
    return rates;
}

double recover_dislocation_mass(const RuleSpec& rule, int n, double a, double b) {
    if (!(0.0 < a) || !(a <= b) || !(b < 1.0))
        throw std::domain_error("recover_dislocation_mass: need 0 < a <= b < 1");
    std::vector<double> row;
    if (const auto* bb = rule.get_if<BetaSplit>()) {
        if (!(bb->beta > -2.0) || !(bb->beta < -1.0))
            throw std::domain_error("recover_dislocation_mass: beta must lie in (-2,-1)");
        row = qtilde_beta_row(bb->beta, n);
    } else if (const auto* f = rule.get_if<FordAlpha>()) {
        if (!(f->alpha > 0.0))
            throw std::domain_error("recover_dislocation_mass: Ford alpha must be positive");
        row = qtilde_ford_row(f->alpha, n);
    } else {
        throw std::domain_error("recover_dislocation_mass: rule is not a binary kernel family");
    }
    int klo = std::max(1, static_cast<int>(std::ceil(a * n - 1e-12)));
    int khi = std::min(n - 1, static_cast<int>(std::floor(b * n + 1e-12)));
    double s = 0.0;
    for (int k = klo; k <= khi; ++k) s += row[k];
    return normalizer(rule, n) * s;
}

// --- densities ----------------------------------------------------------------------

double dislocation_density_beta(double beta, double x) {
    if (!(beta > -2.0) || !(beta < -1.0))
        throw std::domain_error("dislocation_density_beta: beta must lie in (-2,-1)");
    if (!(x > 0.0) || !(x < 1.0)) throw std::domain_error("dislocation_density_beta: x outside (0,1)");
    if (x < 0.5) return 0.0;
    double c = (-beta - 1.0) * gamma_reciprocal(2.0 + beta);
    return c * std::pow(x, beta) * std::pow(1.0 - x, beta);
}

double ford_limit_kernel(double alpha, double x) {
    if (!(alpha >= 0.0) || !(alpha < 1.0))
        throw std::domain_error("ford_limit_kernel: alpha must lie in [0,1)");
    if (!(x > 0.0) || !(x < 1.0)) throw std::domain_error("ford_limit_kernel: x outside (0,1)");
    double u = x * (1.0 - x);
    return (0.5 * alpha * std::pow(u, -alpha - 1.0) + (1.0 - 2.0 * alpha) * std::pow(u, -alpha)) /
           std::tgamma(1.0 - alpha);
}

double dislocation_density_ford(double alpha, double x) {
    if (!(x > 0.0) || !(x < 1.0))
        throw std::domain_error("dislocation_density_ford: x outside (0,1)");
    if (x < 0.5) return 0.0;
    return 2.0 * ford_limit_kernel(alpha, x);
}

double stable_levy_density(double alpha, double x) {
    if (!(alpha > 1.0) || !(alpha < 2.0))
        throw std::domain_error("stable_levy_density: alpha must lie in (1,2)");
    if (!(x > 0.0)) throw std::domain_error("stable_levy_density: x must be positive");
    double ia = 1.0 / alpha;
    return (alpha - 1.0) / std::tgamma(ia) * std::pow(-std::expm1(-x), ia - 2.0) *
           std::exp(-(1.0 - ia) * x);
}

double exact_labeled_probability(const SplitRule& rule, const Cladogram& tree) {
    double p = 1.0;
    for (int v = 1; v < tree.node_count(); ++v) {
        if (tree.is_leaf(v)) continue;
        SetPartition split = tree.children_partition(v);
        IntegerPartition shape = split.shape();
        p *= exchangeable_weight(rule.q(tree.node(v).size, shape), shape, split);
    }
    return p;
}

} // namespace fragtree

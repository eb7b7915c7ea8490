#pragma once

#include <memory>
#include <vector>

namespace fragtree {

// One-sided stable density f_a with Laplace transform exp(-lambda^a),
// a in (0,1).  Evaluation switches between the closed form at a = 1/2,
// a convergent power series for large t, and the Zolotarev integral
// representation elsewhere (in log form, so extreme tails stay finite).
double stable_density(double alpha_hat, double t);
double log_stable_density(double alpha_hat, double t); // -inf where f underflows

// Mittag-Leffler-type density g_a(s) = (1/a) s^{-1-1/a} f_a(s^{-1/a}),
// the law of sigma^{-a} for sigma stable(a).
double g_density(double alpha, double s);
double log_g_density(double alpha, double s);

// Cached evaluator for hot sampling loops: one cubic table of log g per
// alpha, built on first use and immutable afterwards.
class MittagLeffler {
public:
    explicit MittagLeffler(double alpha);

    double alpha() const { return alpha_; }
    double log_g(double s) const;      // table lookup with exact fallback
    double g(double s) const;
    double log_g_exact(double s) const;

    // d/ds log g, finite-difference on the table scale
    double dlog_g(double s) const;

private:
    void build_table();

    double alpha_;
    double u_lo_, u_hi_, du_;
    std::vector<double> values_; // log g at u = log s grid
    std::vector<double> slopes_; // dh/du for cubic Hermite
};

} // namespace fragtree

#include "fragtree/stable_density.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fragtree/quadrature.hpp"

namespace fragtree {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_half(double a) { return std::fabs(a - 0.5) < 1e-12; }

void check_alpha_hat(double a) {
    if (!(a > 0.0) || !(a < 1.0))
        throw std::domain_error("stable_density: index must lie in (0,1)");
}

// log f_{1/2}(t) with f = (2 sqrt(pi))^{-1} t^{-3/2} exp(-1/(4t))
double log_f_half(double t) {
    return -0.5 * std::log(4.0 * M_PI) - 1.5 * std::log(t) - 0.25 / t;
}

// Convergent series f(t) = (1/pi) sum_k (-1)^{k+1} Gamma(k a + 1)/k! sin(pi k a) t^{-ka-1};
// used where the term envelope is geometric from the first term on.
double series_threshold(double a) {
    return 1.05 * std::pow(std::exp(std::lgamma(2.0 * a + 1.0) - std::lgamma(a + 1.0)), 1.0 / a);
}

double stable_series(double a, double t) {
    double sum = 0.0;
    double logt = std::log(t);
    for (int k = 1; k <= 400; ++k) {
        double lt = std::lgamma(k * a + 1.0) - std::lgamma(k + 1.0) - (k * a + 1.0) * logt;
        double term = std::exp(lt) * std::sin(M_PI * k * a);
        double sign = (k % 2 == 1) ? 1.0 : -1.0;
        sum += sign * term;
        if (std::exp(lt) < 1e-18 * std::fabs(sum) && k > 3) break;
    }
    return sum / M_PI;
}

// Zolotarev kernel A(phi) = [sin(a phi)^a sin((1-a) phi)^(1-a) / sin(phi)]^{1/(1-a)}
double log_zolotarev_A(double a, double phi) {
    return (a * std::log(std::sin(a * phi)) + (1.0 - a) * std::log(std::sin((1.0 - a) * phi)) -
            std::log(std::sin(phi))) /
           (1.0 - a);
}

double log_zolotarev_f(double a, double t) {
    const double log_a_min =
        (a * std::log(a) + (1.0 - a) * std::log1p(-a)) / (1.0 - a);
    const double a_min = std::exp(log_a_min);
    const double c = std::pow(t, -a / (1.0 - a));
    auto integrand = [&](double phi) {
        if (phi <= 0.0) return a_min;
        if (phi >= M_PI) return 0.0;
        double A = std::exp(log_zolotarev_A(a, phi));
        double e = -c * (A - a_min);
        return e < -745.0 ? 0.0 : A * std::exp(e);
    };
    double integral = integrate(integrand, 0.0, M_PI, 1e-14, 48);
    if (!(integral > 0.0)) return kNegInf;
    return std::log(a / (1.0 - a)) - std::log(M_PI) - std::log(t) / (1.0 - a) - c * a_min +
           std::log(integral);
}

} // namespace

double log_stable_density(double alpha_hat, double t) {
    check_alpha_hat(alpha_hat);
    if (!(t > 0.0)) throw std::domain_error("stable_density: t must be positive");
    if (is_half(alpha_hat)) return log_f_half(t);
    if (t >= series_threshold(alpha_hat)) {
        double v = stable_series(alpha_hat, t);
        if (v > 0.0) return std::log(v);
        return kNegInf;
    }
    return log_zolotarev_f(alpha_hat, t);
}

double stable_density(double alpha_hat, double t) {
    double lf = log_stable_density(alpha_hat, t);
    return lf == kNegInf ? 0.0 : std::exp(lf);
}

double log_g_density(double alpha, double s) {
    check_alpha_hat(alpha);
    if (!(s > 0.0)) throw std::domain_error("g_density: s must be positive");
    double t = std::pow(s, -1.0 / alpha);
    return -std::log(alpha) - (1.0 + 1.0 / alpha) * std::log(s) + log_stable_density(alpha, t);
}

double g_density(double alpha, double s) {
    double lg = log_g_density(alpha, s);
    return lg == kNegInf ? 0.0 : std::exp(lg);
}

MittagLeffler::MittagLeffler(double alpha) : alpha_(alpha) {
    check_alpha_hat(alpha);
    build_table();
}

double MittagLeffler::log_g_exact(double s) const { return log_g_density(alpha_, s); }

void MittagLeffler::build_table() {
    // left edge: g tends to 1/Gamma(1-alpha); right edge: walk out until the
    // log-density drops below the double floor
    u_lo_ = std::log(1e-5);
    double s_hi = 1.0;
    while (log_g_exact(s_hi) > -720.0 && s_hi < 1e6) s_hi *= 1.3;
    u_hi_ = std::log(s_hi);
    const int n = 1200;
    du_ = (u_hi_ - u_lo_) / (n - 1);
    values_.resize(n);
    for (int i = 0; i < n; ++i) values_[i] = log_g_exact(std::exp(u_lo_ + i * du_));
    slopes_.resize(n);
    for (int i = 0; i < n; ++i) {
        if (i == 0)
            slopes_[i] = (values_[1] - values_[0]) / du_;
        else if (i == n - 1)
            slopes_[i] = (values_[n - 1] - values_[n - 2]) / du_;
        else
            slopes_[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * du_);
    }
}

double MittagLeffler::log_g(double s) const {
    if (!(s > 0.0)) throw std::domain_error("MittagLeffler::log_g: s must be positive");
    double u = std::log(s);
    if (u < u_lo_ || u > u_hi_) return log_g_exact(s);
    double x = (u - u_lo_) / du_;
    int i = std::min(static_cast<int>(x), static_cast<int>(values_.size()) - 2);
    double w = x - i;
    double h00 = (1.0 + 2.0 * w) * (1.0 - w) * (1.0 - w);
    double h10 = w * (1.0 - w) * (1.0 - w);
    double h01 = w * w * (3.0 - 2.0 * w);
    double h11 = w * w * (w - 1.0);
    return h00 * values_[i] + h10 * du_ * slopes_[i] + h01 * values_[i + 1] +
           h11 * du_ * slopes_[i + 1];
}

double MittagLeffler::g(double s) const {
    double lg = log_g(s);
    return lg == kNegInf ? 0.0 : std::exp(lg);
}

double MittagLeffler::dlog_g(double s) const {
    double u = std::log(s);
    double h = std::max(du_, 1e-6);
    return (log_g(std::exp(u + h)) - log_g(std::exp(u - h))) / (2.0 * h) / s;
}

} // namespace fragtree

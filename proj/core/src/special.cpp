#include "fragtree/special.hpp"

#include <cmath>
#include <stdexcept>

namespace fragtree {

double lgamma_signed(double x, int* sign) {
    if (sign) *sign = 1;
    if (x > 0.0) return std::lgamma(x);
    if (x == std::floor(x))
        throw std::domain_error("lgamma_signed: pole at nonpositive integer");
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
    double s = std::sin(M_PI * x);
    if (sign) *sign = s < 0.0 ? -1 : 1;
    return std::log(M_PI / std::fabs(s)) - std::lgamma(1.0 - x);
}

double gamma_reciprocal(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    int sign = 1;
    double lg = lgamma_signed(x, &sign);
    return sign * std::exp(-lg);
}

double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    return std::lgamma(n + 1.0);
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw std::domain_error("log_binomial: k out of range");
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

long long double_factorial_odd(int n) {
    if (n < 1) throw std::domain_error("double_factorial_odd: n must be >= 1");
    long long r = 1;
    for (int m = 2 * n - 3; m > 1; m -= 2) r *= m;
    return r;
}

namespace {

// Series expansion of P(a,x), good for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), good for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * x);
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    double p = 2.0 * sum;
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

} // namespace fragtree

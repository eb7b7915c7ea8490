#pragma once

#include <cmath>
#include <stdexcept>

namespace fragtree {

namespace detail {

// Gauss-Kronrod 15(7) nodes/weights on [-1,1].
inline constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000, 0.207784955007898467600689403773245,
    0.405845151377397166906606412076961, 0.586087235467691130294144838258730,
    0.741531185599394439863864773280788, 0.864864423359769072789712788640926,
    0.949107912342758524526189684047851, 0.991455371120812639206854697526329};
inline constexpr double kKronrodWeights[8] = {
    0.209482141084727828012999174891714, 0.204432940075298892414161999234649,
    0.190350578064785409913256402421014, 0.169004726639267902826583426598550,
    0.140653259715525918745189590510238, 0.104790010322250183839876322541518,
    0.063092092629978553290700663189204, 0.022935322010529224963732008058970};
inline constexpr double kGaussWeights[4] = {
    0.417959183673469387755102040816327, 0.381830050505118944950369775488975,
    0.279705391489276667901467771423780, 0.129484966168869693270611432679082};

template <class F>
void gk15(const F& f, double a, double b, double* result, double* err) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resk = fc * kKronrodWeights[0];
    double resg = fc * kGaussWeights[0];
    for (int i = 1; i < 8; ++i) {
        double x = h * kKronrodNodes[i];
        double f1 = f(c - x);
        double f2 = f(c + x);
        resk += kKronrodWeights[i] * (f1 + f2);
        if (i % 2 == 0) resg += kGaussWeights[i / 2] * (f1 + f2);
    }
    *result = resk * h;
    *err = std::fabs((resk - resg) * h);
}

template <class F>
double adapt(const F& f, double a, double b, double abs_tol, int depth) {
    double r, e;
    gk15(f, a, b, &r, &e);
    // the relative floor stops the recursion once the panel is converged to
    // roundoff, which an absolute budget alone cannot detect
    if (e <= abs_tol || e <= 1e-14 * std::fabs(r) || depth <= 0) return r;
    double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * abs_tol, depth - 1) +
           adapt(f, m, b, 0.5 * abs_tol, depth - 1);
}

} // namespace detail

// Adaptive Gauss-Kronrod on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 48) {
    if (!(a <= b)) throw std::invalid_argument("integrate: bad interval");
    if (a == b) return 0.0;
    double r0, e0;
    detail::gk15(f, a, b, &r0, &e0);
    double scale = std::max(std::fabs(r0), 1e-30);
    double tol = std::max(abs_tol, 1e-13 * scale);
    if (e0 <= tol) return r0;
    double m = 0.5 * (a + b);
    return detail::adapt(f, a, m, 0.5 * tol, max_depth) +
           detail::adapt(f, m, b, 0.5 * tol, max_depth);
}

// Integral over (a, +inf) via x = a + t/(1-t).
template <class F>
double integrate_upper(F&& f, double a, double abs_tol = 1e-12, int max_depth = 48) {
    auto g = [&](double t) {
        double omt = 1.0 - t;
        double x = a + t / omt;
        double v = f(x);
        return v / (omt * omt);
    };
    return integrate(g, 0.0, 1.0, abs_tol, max_depth);
}

} // namespace fragtree

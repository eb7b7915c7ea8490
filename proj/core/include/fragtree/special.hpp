#pragma once

#include <cstdint>

namespace fragtree {

// log|Gamma(x)| with the sign of Gamma(x) in *sign; handles negative
// non-integer arguments through the reflection formula.
double lgamma_signed(double x, int* sign);

// Gamma(x) allowing negative non-integer x; returns 0 at nonpositive
// integer poles of 1/Gamma (i.e. evaluates the reciprocal's zero).
double gamma_reciprocal(double x);

double log_factorial(int n);
double log_binomial(int n, int k);

// (2n-3)!! — number of binary cladograms with n leaves.
long long double_factorial_odd(int n);

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Survival function of the chi-square distribution.
double chi2_sf(double x, double dof);

// Kolmogorov distribution tail Q_KS(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda);

} // namespace fragtree

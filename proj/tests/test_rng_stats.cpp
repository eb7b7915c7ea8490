#include "doctest.h"

#include <cmath>
#include <vector>

#include "fragtree/quadrature.hpp"
#include "fragtree/rational.hpp"
#include "fragtree/rng.hpp"
#include "fragtree/special.hpp"
#include "fragtree/stats.hpp"

using namespace fragtree;

TEST_CASE("rng determinism and substreams") {
    Rng a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c(42, 8);
    bool all_equal = true;
    Rng a2(42, 7);
    for (int i = 0; i < 100; ++i) all_equal = all_equal && (a2.next_u64() == c.next_u64());
    CHECK_FALSE(all_equal);

    // substream derivation ignores generator consumption
    Rng base(1, 0);
    Rng s1 = base.substream(3);
    base.next_u64();
    Rng s2 = base.substream(3);
    CHECK(s1.next_u64() == s2.next_u64());
}

TEST_CASE("rng moments") {
    Rng rng(2024);
    EmpiricalSummary unif, gam, bet;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        unif.add(rng.next_double());
        gam.add(rng.gamma(2.5, 1.0));
        bet.add(rng.beta(0.7, 1.8));
    }
    CHECK(unif.mean() == doctest::Approx(0.5).epsilon(0.01));
    CHECK(gam.mean() == doctest::Approx(2.5).epsilon(0.02));
    CHECK(gam.variance() == doctest::Approx(2.5).epsilon(0.05));
    CHECK(bet.mean() == doctest::Approx(0.7 / 2.5).epsilon(0.02));
}

TEST_CASE("gamma sampler with shape below one") {
    Rng rng(5);
    EmpiricalSummary s;
    for (int i = 0; i < 200000; ++i) s.add(rng.gamma(0.4));
    CHECK(s.mean() == doctest::Approx(0.4).epsilon(0.03));
    CHECK(s.variance() == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("special functions") {
    CHECK(double_factorial_odd(2) == 1);
    CHECK(double_factorial_odd(3) == 3);
    CHECK(double_factorial_odd(4) == 15);
    CHECK(double_factorial_odd(6) == 945);

    int sign = 0;
    double lg = lgamma_signed(-0.5, &sign);
    CHECK(sign == -1);
    CHECK(std::exp(lg) == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(gamma_reciprocal(-1.0) == 0.0);
    CHECK(gamma_reciprocal(3.0) == doctest::Approx(0.5));

    // chi-square survival against known quantiles
    CHECK(chi2_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-8));
    CHECK(chi2_sf(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-8));
}

TEST_CASE("quadrature basics") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(integrate_upper([](double x) { return std::exp(-x); }, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    // integrable endpoint singularity
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-300, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("rational arithmetic") {
    Rational a(1, 2), b(1, 3);
    CHECK((a + b) == Rational(5, 6));
    CHECK((a * b) == Rational(1, 6));
    CHECK((a - b) == Rational(1, 6));
    CHECK((a / b) == Rational(3, 2));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, 2).pow(4) == Rational(1, 16));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("ks statistics") {
    std::vector<double> a, b;
    Rng rng(11);
    for (int i = 0; i < 5000; ++i) {
        a.push_back(rng.next_double());
        b.push_back(rng.next_double());
    }
    KsResult same = ks_two_sample(a, a);
    CHECK(same.statistic == doctest::Approx(0.0));
    KsResult iid = ks_two_sample(a, b);
    CHECK(iid.p_value > 0.001);
    std::vector<double> shifted;
    for (double x : a) shifted.push_back(x + 10.0);
    CHECK(ks_two_sample(a, shifted).statistic == doctest::Approx(1.0));

    KsResult vs = ks_vs_cdf(a, [](double x) { return std::min(1.0, std::max(0.0, x)); });
    CHECK(vs.p_value > 0.001);
}

TEST_CASE("ks calibration: p-values are roughly uniform under the null") {
    Rng rng(333);
    int below = 0;
    const int runs = 1000;
    for (int r = 0; r < runs; ++r) {
        Rng sub = rng.substream(r);
        std::vector<double> a, b;
        for (int i = 0; i < 400; ++i) {
            a.push_back(sub.next_double());
            b.push_back(sub.next_double());
        }
        if (ks_two_sample(a, b).p_value < 0.05) ++below;
    }
    CHECK(below >= 20);
    CHECK(below <= 85);
}

TEST_CASE("chi2 goodness of fit") {
    std::vector<long long> obs = {250, 250, 250, 250};
    std::vector<double> probs = {0.25, 0.25, 0.25, 0.25};
    Chi2Result r = chi2_goodness_of_fit(obs, probs);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0));

    Chi2Result z = chi2_goodness_of_fit({50, 40, 10}, {0.5, 0.5, 0.0});
    CHECK(z.zero_expected_violation);
    CHECK(z.p_value == 0.0);
}

TEST_CASE("empirical summary merge is order independent") {
    Rng rng(9);
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(rng.normal());
    EmpiricalSummary a, b, c;
    for (int i = 0; i < 1000; ++i) (i % 2 ? a : b).add(xs[i]);
    EmpiricalSummary ab = a;
    ab.merge(b);
    EmpiricalSummary ba = b;
    ba.merge(a);
    for (double x : xs) c.add(x);
    CHECK(ab.mean() == doctest::Approx(ba.mean()).epsilon(1e-14));
    CHECK(ab.variance() == doctest::Approx(c.variance()).epsilon(1e-12));
    CHECK(ab.count == 1000);
}

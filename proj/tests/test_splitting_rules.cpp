#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "fragtree/enumerate.hpp"
#include "fragtree/qtable.hpp"
#include "fragtree/quadrature.hpp"
#include "fragtree/special.hpp"

using namespace fragtree;

namespace {

// Exhaustive urn-assignment oracle for a finite dislocation measure with
// erosion: exact law of the first-split shape, independent of the dynamic
// programming route in the library.
std::map<IntegerPartition, Rational> shape_law_oracle(const RationalDislocation& fd, int n) {
    std::map<IntegerPartition, Rational> weights;
    for (const auto& atom : fd.atoms) {
        Rational dust(1);
        for (const auto& m : atom.fragments) dust -= m;
        std::vector<Rational> urn = atom.fragments;
        urn.insert(urn.begin(), dust);
        std::vector<int> assign(n, 0);
        for (;;) {
            Rational p = atom.weight;
            for (int i = 0; i < n; ++i) p *= urn[assign[i]];
            if (!(p == Rational(0))) {
                std::map<int, int> sizes;
                std::vector<int> parts;
                for (int i = 0; i < n; ++i) {
                    if (assign[i] == 0)
                        parts.push_back(1);
                    else
                        sizes[assign[i]] += 1;
                }
                for (auto& [urn_id, c] : sizes) parts.push_back(c);
                IntegerPartition shape(parts);
                if (shape.part_count() >= 2) weights[shape] += p;
            }
            int i = 0;
            while (i < n && ++assign[i] > static_cast<int>(atom.fragments.size())) assign[i++] = 0;
            if (i == n) break;
        }
    }
    // erosion: each singleton-shedding jump restricts to ({i}, rest)
    if (!(fd.erosion == Rational(0))) {
        std::vector<int> parts = {n - 1, 1};
        if (n == 2) parts = {1, 1};
        IntegerPartition removal(parts);
        weights[removal] += Rational(n == 2 ? 2 : n) * fd.erosion;
    }
    Rational total(0);
    for (const auto& [shape, w] : weights) total += w;
    std::map<IntegerPartition, Rational> law;
    for (const auto& [shape, w] : weights) law[shape] = w / total;
    return law;
}

RationalDislocation half_half() {
    RationalDislocation fd;
    fd.erosion = Rational(0);
    fd.atoms.push_back({Rational(1), {Rational(1, 2), Rational(1, 2)}});
    return fd;
}

} // namespace

TEST_CASE("beta kernel: Yule flatness and uniform-model values") {
    for (int n : {2, 3, 5, 9, 17}) {
        auto row = qtilde_beta_row(0.0, n);
        for (int k = 1; k <= n - 1; ++k)
            CHECK(row[k] == doctest::Approx(1.0 / (n - 1)).epsilon(1e-12));
    }

    // first-split law of the uniform binary model from exhaustive enumeration
    std::map<std::vector<int>, long long> counts;
    long long total = 0;
    for_each_cladogram(4, true, [&](const Cladogram& t) {
        counts[t.children_partition(t.top()).shape().parts()] += 1;
        ++total;
    });
    CHECK(total == 15);
    CHECK(counts[{3, 1}] == 12);
    CHECK(counts[{2, 2}] == 3);

    auto row4 = qtilde_beta_row(-1.5, 4);
    CHECK(row4[1] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(row4[2] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(row4[3] == doctest::Approx(0.4).epsilon(1e-12));

    auto row3 = qtilde_beta_row(-1.5, 3);
    CHECK(row3[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row3[2] == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(qtilde_beta(-2.0, 4, 1), std::domain_error);
}

TEST_CASE("uniform-model first splits match the beta table for n = 5, 6") {
    for (int n : {5, 6}) {
        std::map<std::vector<int>, long long> counts;
        long long total = 0;
        for_each_cladogram(n, true, [&](const Cladogram& t) {
            counts[t.children_partition(t.top()).shape().parts()] += 1;
            ++total;
        });
        QTable table = qtable(RuleSpec::beta_split(-1.5), n);
        for (const auto& [parts, c] : counts) {
            double expected = static_cast<double>(c) / static_cast<double>(total);
            CHECK(table.at(IntegerPartition(parts)) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("Ford kernel: Yule at 0, symmetry, and the half identity") {
    for (int n : {2, 4, 7}) {
        auto row = qtilde_ford_row(0.0, n);
        for (int k = 1; k <= n - 1; ++k)
            CHECK(row[k] == doctest::Approx(1.0 / (n - 1)).epsilon(1e-12));
    }
    auto row3 = qtilde_ford_row(0.5, 3);
    CHECK(row3[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row3[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(qtilde_ford(0.5, 4, 2) == doctest::Approx(0.2).epsilon(1e-10));

    for (int n = 2; n <= 20; ++n) {
        auto ford = qtilde_ford_row(0.5, n);
        auto beta = qtilde_beta_row(-1.5, n);
        for (int k = 1; k <= n - 1; ++k) {
            CHECK(std::fabs(ford[k] - beta[k]) < 1e-12);
            CHECK(ford[k] == doctest::Approx(ford[n - k]).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(qtilde_ford(1.0, 4, 1), std::domain_error);
}

TEST_CASE("stable rule: exact gamma-identity values at alpha = 3/2, n = 3") {
    // Gamma(4/3) = (1/3)Gamma(1/3), Gamma(7/3) = (4/9)Gamma(1/3) make these exact
    CHECK(q_stable(1.5, 3, IntegerPartition({2, 1})) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(q_stable(1.5, 3, IntegerPartition({1, 1, 1})) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(q_stable(2.0, 3, IntegerPartition({2, 1})), std::domain_error);
    CHECK_THROWS_AS(q_stable(1.0, 3, IntegerPartition({2, 1})), std::domain_error);
}

TEST_CASE("stable rule sums to one over partitions") {
    for (double alpha : {1.1, 1.5, 1.9}) {
        for (int n = 2; n <= 10; ++n) {
            double total = 0.0;
            for (const auto& shape : IntegerPartition::all_of(n, 2))
                total += q_stable(alpha, n, shape);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("finite dislocation: conservative binary atom") {
    RationalDislocation fd = half_half();
    CHECK(q_finite_dislocation_exact(fd, 4, IntegerPartition({3, 1})) == Rational(4, 7));
    CHECK(q_finite_dislocation_exact(fd, 4, IntegerPartition({2, 2})) == Rational(3, 7));
    CHECK(q_finite_dislocation_exact(fd, 4, IntegerPartition({2, 1, 1})) == Rational(0));

    // double route agrees
    FiniteDislocation fdd = fd.to_double();
    CHECK(q_finite_dislocation(fdd, 4, IntegerPartition({3, 1})) ==
          doctest::Approx(4.0 / 7).epsilon(1e-14));

    RationalDislocation thirds;
    thirds.atoms.push_back(
        {Rational(1), {Rational(1, 3), Rational(1, 3), Rational(1, 3)}});
    CHECK(q_finite_dislocation_exact(thirds, 3, IntegerPartition({2, 1})) == Rational(3, 4));
    CHECK(q_finite_dislocation_exact(thirds, 3, IntegerPartition({1, 1, 1})) == Rational(1, 4));
}

TEST_CASE("finite dislocation equals the urn-assignment oracle") {
    std::vector<RationalDislocation> cases;
    cases.push_back(half_half());
    {
        RationalDislocation fd; // dust-carrying atom
        fd.atoms.push_back({Rational(1), {Rational(1, 2), Rational(1, 4)}});
        cases.push_back(fd);
    }
    {
        RationalDislocation fd; // two atoms with unequal weights
        fd.atoms.push_back({Rational(2, 3), {Rational(3, 5), Rational(1, 5), Rational(1, 5)}});
        fd.atoms.push_back({Rational(1, 3), {Rational(1, 2), Rational(1, 3)}});
        cases.push_back(fd);
    }
    {
        RationalDislocation fd; // erosion mixed with an atom
        fd.erosion = Rational(1, 4);
        fd.atoms.push_back({Rational(1), {Rational(2, 3), Rational(1, 3)}});
        cases.push_back(fd);
    }
    {
        RationalDislocation fd; // four positive coordinates
        fd.atoms.push_back(
            {Rational(1), {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}});
        cases.push_back(fd);
    }

    for (const auto& fd : cases) {
        for (int n = 2; n <= 6; ++n) {
            auto oracle = shape_law_oracle(fd, n);
            Rational total(0);
            for (const auto& shape : IntegerPartition::all_of(n, 2)) {
                Rational mine = q_finite_dislocation_exact(fd, n, shape);
                auto it = oracle.find(shape);
                Rational expected = it == oracle.end() ? Rational(0) : it->second;
                CHECK(mine == expected);
                total += mine;
            }
            CHECK(total == Rational(1));
        }
    }
}

TEST_CASE("pure erosion forces the removal split") {
    FiniteDislocation fd;
    fd.erosion = 1.0;
    for (int n = 2; n <= 8; ++n) {
        std::vector<int> removal = {n - 1, 1};
        if (n == 2) removal = {1, 1};
        CHECK(q_finite_dislocation(fd, n, IntegerPartition(removal)) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(normalizer(RuleSpec::finite_dislocation(fd), 5) == doctest::Approx(5.0));
}

TEST_CASE("normalizer values") {
    FiniteDislocation half;
    half.atoms.push_back({1.0, {0.5, 0.5}});
    CHECK(normalizer(RuleSpec::finite_dislocation(half), 4) == doctest::Approx(7.0 / 8));

    FiniteDislocation thirds;
    thirds.atoms.push_back({1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    CHECK(normalizer(RuleSpec::finite_dislocation(thirds), 3) == doctest::Approx(8.0 / 9));

    // Ford(1/2) and beta(-3/2) share the same dislocation normalization
    for (int n : {4, 10, 25}) {
        double zb = normalizer(RuleSpec::beta_split(-1.5), n);
        double zf = normalizer(RuleSpec::ford(0.5), n);
        CHECK(zb == doctest::Approx(zf).epsilon(1e-12));
        CHECK(zb == doctest::Approx(2.0 * std::exp(std::lgamma(n - 0.5) - std::lgamma(n - 1.0)))
                        .epsilon(1e-12));
    }
}

TEST_CASE("symmetrize and desymmetrize") {
    std::vector<double> qt = {0.0, 0.4, 0.2, 0.4};
    QTable q = symmetrize(qt, 4);
    CHECK(q.at(IntegerPartition({3, 1})) == doctest::Approx(0.8));
    CHECK(q.at(IntegerPartition({2, 2})) == doctest::Approx(0.2));
    CHECK(q.sum() == doctest::Approx(1.0));

    auto back = desymmetrize(q);
    for (int k = 1; k <= 3; ++k) CHECK(back[k] == doctest::Approx(qt[k]).epsilon(1e-14));

    // round trip on the built-in symmetric kernels
    for (int n : {5, 8}) {
        auto row = qtilde_ford_row(0.3, n);
        auto rt = desymmetrize(symmetrize(row, n));
        for (int k = 1; k <= n - 1; ++k) CHECK(rt[k] == doctest::Approx(row[k]).epsilon(1e-13));
    }
}

TEST_CASE("consistency residuals vanish for the built-in families") {
    FiniteDislocation half;
    half.atoms.push_back({1.0, {0.5, 0.5}});
    std::vector<RuleSpec> rules = {RuleSpec::beta_split(-1.5), RuleSpec::ford(0.3),
                                   RuleSpec::stable(1.5), RuleSpec::finite_dislocation(half)};
    for (const auto& rule : rules) {
        for (int n = 2; n <= 8; ++n) {
            CHECK(consistency_residual(rule, n) < 1e-10);
        }
    }
    // beta outside the CRT window is still sampling consistent
    CHECK(consistency_residual(RuleSpec::beta_split(0.0), 6) < 1e-12);
    CHECK(consistency_residual(RuleSpec::beta_split(2.5), 6) < 1e-12);
}

TEST_CASE("the q4(2,2)=1 rule breaks the recursion") {
    std::vector<QTable> tables;
    tables.emplace_back(3, std::map<IntegerPartition, double>{{IntegerPartition({2, 1}), 1.0}});
    tables.emplace_back(4, std::map<IntegerPartition, double>{{IntegerPartition({2, 2}), 1.0}});
    tables.emplace_back(5, std::map<IntegerPartition, double>{{IntegerPartition({4, 1}), 1.0}});
    TableSplitRule rule(std::move(tables));
    CHECK(consistency_residual(rule, 4) > 0.1);
}

TEST_CASE("holding rates") {
    // lambda_2 = 1 for every family
    for (const auto& rule :
         {RuleSpec::beta_split(-1.5), RuleSpec::ford(0.4), RuleSpec::stable(1.3)}) {
        auto rates = holding_rates(rule, 6);
        CHECK(rates[0] == doctest::Approx(1.0));
    }

    // pure erosion: lambda_n = n/2
    FiniteDislocation fd;
    fd.erosion = 1.0;
    auto rates = holding_rates(RuleSpec::finite_dislocation(fd), 10);
    for (int n = 2; n <= 10; ++n)
        CHECK(rates[n - 2] == doctest::Approx(n / 2.0).epsilon(1e-12));

    // uniform model: q_3(2,1) = 1 so lambda_3 = 3/2
    auto beta_rates = holding_rates(RuleSpec::beta_split(-1.5), 3);
    CHECK(beta_rates[1] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("dislocation densities") {
    // Ford(1/2) equals Aldous(-3/2) pointwise
    for (double x = 0.52; x < 0.99; x += 0.035) {
        double ford = dislocation_density_ford(0.5, x);
        double beta = dislocation_density_beta(-1.5, x);
        CHECK(ford == doctest::Approx(beta).epsilon(1e-12));
        CHECK(beta == doctest::Approx(std::pow(x * (1 - x), -1.5) / (2.0 * std::sqrt(M_PI)))
                          .epsilon(1e-12));
    }
    CHECK(dislocation_density_ford(0.3, 0.3) == 0.0);
    CHECK(dislocation_density_beta(-1.2, 0.49) == 0.0);
    CHECK_THROWS_AS(dislocation_density_beta(-1.5, 1.5), std::domain_error);
    CHECK_THROWS_AS(dislocation_density_beta(-0.5, 0.7), std::domain_error);
}

TEST_CASE("stable Levy density: integrability and small-x regular variation") {
    double alpha = 1.5;
    // int (1 - e^{-x}) Levy(dx) must be finite (dislocation integrability)
    double mass = integrate_upper(
        [&](double x) { return -std::expm1(-x) * stable_levy_density(alpha, x); }, 1e-12);
    CHECK(std::isfinite(mass));
    CHECK(mass > 0.0);

    // tail(x) ~ x^{-(1-1/alpha)} * alpha/Gamma(1/alpha) as x -> 0
    double ell = alpha / std::tgamma(1.0 / alpha);
    for (double x : {1e-4, 1e-5}) {
        double tail =
            integrate([&](double u) { return stable_levy_density(alpha, u); }, x, 1.0, 1e-13) +
            integrate_upper([&](double u) { return stable_levy_density(alpha, u); }, 1.0);
        double predicted = ell * std::pow(x, -(1.0 - 1.0 / alpha));
        CHECK(tail / predicted == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("recover_dislocation_mass at small scale") {
    // empty window
    CHECK(recover_dislocation_mass(RuleSpec::beta_split(-1.5), 1000, 0.7003, 0.7004) == 0.0);

    // beta(-3/2) and Ford(1/2) produce identical pre-limit masses
    double rb = recover_dislocation_mass(RuleSpec::beta_split(-1.5), 500, 0.6, 0.9);
    double rf = recover_dislocation_mass(RuleSpec::ford(0.5), 500, 0.6, 0.9);
    CHECK(rb == doctest::Approx(rf).epsilon(1e-10));

    CHECK_THROWS_AS(recover_dislocation_mass(RuleSpec::stable(1.5), 100, 0.6, 0.9),
                    std::domain_error);
    CHECK_THROWS_AS(recover_dislocation_mass(RuleSpec::beta_split(0.0), 100, 0.6, 0.9),
                    std::domain_error);
}

TEST_CASE("exact labeled probabilities form a distribution") {
    RuleSpec rule = RuleSpec::stable(1.5);
    RuleSplitRule q(rule);
    double total = 0.0;
    for_each_cladogram(5, false, [&](const Cladogram& t) {
        total += exact_labeled_probability(q, t);
    });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rule spec parsing and validation") {
    RuleSpec b = RuleSpec::parse("beta:-1.5");
    CHECK(b.get_if<BetaSplit>()->beta == doctest::Approx(-1.5));
    CHECK(b.self_similarity_index().value() == doctest::Approx(0.5));
    CHECK(RuleSpec::parse("ford:0.3").self_similarity_index().value() == doctest::Approx(0.3));
    CHECK(RuleSpec::parse("stable:1.5").self_similarity_index().value() ==
          doctest::Approx(1.0 / 3));
    CHECK_FALSE(RuleSpec::ford(0.0).self_similarity_index().has_value());

    RuleSpec json = RuleSpec::from_json_text(
        R"({"model":"paintbox","c":0.0,"atoms":[{"w":1.0,"s":[0.5,0.5]}]})");
    CHECK(json.get_if<FiniteDislocation>() != nullptr);
    CHECK(json.is_binary());
    RuleSpec round = RuleSpec::from_json_text(json.to_json_text());
    CHECK(round.get_if<FiniteDislocation>()->atoms.size() == 1);

    CHECK_THROWS_AS(RuleSpec::parse("beta:-2.5"), std::domain_error);
    CHECK_THROWS_AS(RuleSpec::parse("gauss:1"), std::invalid_argument);
    CHECK_THROWS_AS(
        RuleSpec::from_json_text(R"({"model":"paintbox","atoms":[{"w":1.0,"s":[1.0]}]})"),
        std::domain_error);
}

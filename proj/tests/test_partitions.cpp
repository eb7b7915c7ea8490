#include "doctest.h"

#include <array>
#include <cmath>
#include <map>

#include "fragtree/enumerate.hpp"
#include "fragtree/partition.hpp"
#include "fragtree/rational.hpp"
#include "fragtree/rng.hpp"
#include "fragtree/special.hpp"
#include "fragtree/stats.hpp"

using namespace fragtree;

TEST_CASE("integer partitions") {
    IntegerPartition p({1, 3, 1});
    CHECK(p.parts() == std::vector<int>{3, 1, 1});
    CHECK(p.n() == 5);
    CHECK(p.multiplicity(1) == 2);
    CHECK(p.multiplicity(3) == 1);
    CHECK(p.with_increment(2).parts() == std::vector<int>{3, 2, 1});
    CHECK(p.with_extra_singleton().parts() == std::vector<int>{3, 1, 1, 1});
    CHECK(IntegerPartition::all_of(5).size() == 7);
    CHECK(IntegerPartition::all_of(5, 2).size() == 6);
    CHECK(IntegerPartition::all_of(11, 2).size() == 55);
    CHECK(p.str() == "3-1-1");
}

TEST_CASE("set partition canonical form and restriction") {
    SetPartition pi({{3, 1}, {2}});
    CHECK(pi.blocks() == std::vector<std::vector<Label>>{{1, 3}, {2}});
    CHECK(pi.shape().parts() == std::vector<int>{2, 1});

    SetPartition r = restrict_to(pi, {1, 2});
    CHECK(r.blocks() == std::vector<std::vector<Label>>{{1}, {2}});

    // restriction by the full ground set is the identity
    CHECK(restrict_to(pi, pi.ground_set()) == pi);

    // the trivial partition restricts to the trivial partition
    SetPartition triv = SetPartition::trivial({1, 2, 3, 4});
    CHECK(restrict_to(triv, {2, 4}) == SetPartition::trivial({2, 4}));

    CHECK_THROWS_AS(SetPartition({{1, 2}, {2, 3}}), std::invalid_argument);
}

TEST_CASE("restriction preserves refinement") {
    Rng rng(77);
    std::vector<Label> ground = {1, 2, 3, 4, 5, 6};
    for_each_set_partition(ground, 1, [&](const SetPartition& coarse) {
        // build a random refinement of `coarse` by splitting each block in two
        std::vector<std::vector<Label>> blocks;
        for (const auto& b : coarse.blocks()) {
            if (b.size() >= 2 && rng.bernoulli(0.5)) {
                std::size_t cut = 1 + rng.below(b.size() - 1);
                blocks.emplace_back(b.begin(), b.begin() + cut);
                blocks.emplace_back(b.begin() + cut, b.end());
            } else {
                blocks.push_back(b);
            }
        }
        SetPartition fine(blocks);
        REQUIRE(fine.refines(coarse));
        SetPartition fr = restrict_to(fine, {2, 3, 5});
        SetPartition cr = restrict_to(coarse, {2, 3, 5});
        CHECK(fr.refines(cr));
    });
}

TEST_CASE("paintbox degenerate cases") {
    Rng rng(1);
    std::array<double, 1> all = {1.0};
    std::array<double, 2> none = {0.0, 0.0};
    for (int rep = 0; rep < 50; ++rep) {
        CHECK(paintbox_sample(all, 5, rng) == SetPartition::trivial({1, 2, 3, 4, 5}));
        CHECK(paintbox_sample(none, 4, rng) == SetPartition::singletons({1, 2, 3, 4}));
    }
    std::array<double, 2> growing = {0.2, 0.5};
    CHECK_THROWS_AS(paintbox_sample(growing, 3, rng), std::domain_error);
    std::array<double, 2> too_big = {0.8, 0.4};
    CHECK_THROWS_AS(paintbox_sample(too_big, 3, rng), std::domain_error);
}

namespace {

// Exhaustive paintbox law over urn assignments, exact rationals.
std::map<std::vector<std::vector<Label>>, Rational> paintbox_exact_law(
    const std::vector<Rational>& masses, int n) {
    Rational dust(1);
    for (const auto& m : masses) dust -= m;
    std::vector<Rational> urn = masses;
    urn.insert(urn.begin(), dust); // index 0 = dust
    std::map<std::vector<std::vector<Label>>, Rational> law;
    std::vector<int> assign(n, 0);
    for (;;) {
        Rational p(1);
        for (int i = 0; i < n; ++i) p *= urn[assign[i]];
        if (!(p == Rational(0))) {
            std::map<int, std::vector<Label>> groups;
            std::vector<std::vector<Label>> blocks;
            for (int i = 0; i < n; ++i) {
                if (assign[i] == 0)
                    blocks.push_back({i + 1});
                else
                    groups[assign[i]].push_back(i + 1);
            }
            for (auto& [k, v] : groups) blocks.push_back(v);
            SetPartition pi(blocks);
            law[pi.blocks()] += p;
        }
        int i = 0;
        while (i < n && ++assign[i] > static_cast<int>(masses.size())) assign[i++] = 0;
        if (i == n) break;
    }
    return law;
}

} // namespace

TEST_CASE("paintbox matches the exhaustive law for (1/2,1/2)") {
    std::vector<Rational> masses = {{1, 2}, {1, 2}};
    auto law = paintbox_exact_law(masses, 3);
    // all three in one urn: 2 * (1/2)^3 = 1/4
    SetPartition triv = SetPartition::trivial({1, 2, 3});
    CHECK(law.at(triv.blocks()) == Rational(1, 4));

    // Monte Carlo agreement
    Rng rng(19);
    std::array<double, 2> s = {0.5, 0.5};
    std::map<std::vector<std::vector<Label>>, long long> counts;
    const int reps = 100000;
    for (int i = 0; i < reps; ++i) counts[paintbox_sample(s, 3, rng).blocks()] += 1;
    std::vector<long long> observed;
    std::vector<double> expected;
    for (const auto& [blocks, p] : law) {
        observed.push_back(counts[blocks]);
        expected.push_back(p.to_double());
    }
    Chi2Result chi = chi2_goodness_of_fit(observed, expected);
    CHECK(chi.p_value > 0.001);
}

TEST_CASE("paintbox output is exchangeable") {
    Rng rng(23);
    std::array<double, 3> s = {0.4, 0.3, 0.2};
    const int n = 4;
    const int reps = 100000;
    // compare the law of pi with the law of sigma(pi) for a fixed permutation
    std::map<std::vector<std::vector<Label>>, long long> law_plain, law_permuted;
    std::array<Label, 5> sigma = {0, 3, 1, 4, 2}; // 1->3, 2->1, 3->4, 4->2
    for (int i = 0; i < reps; ++i) {
        SetPartition pi = paintbox_sample(s, n, rng);
        law_plain[pi.blocks()] += 1;
        std::vector<std::vector<Label>> permuted;
        for (const auto& b : pi.blocks()) {
            std::vector<Label> nb;
            for (Label x : b) nb.push_back(sigma[x]);
            permuted.push_back(nb);
        }
        law_permuted[SetPartition(permuted).blocks()] += 1;
    }
    std::vector<long long> observed;
    std::vector<double> expected;
    for (const auto& [blocks, c] : law_plain) {
        observed.push_back(law_permuted[blocks]);
        expected.push_back(static_cast<double>(c) / reps);
    }
    Chi2Result chi = chi2_goodness_of_fit(observed, expected);
    CHECK(chi.p_value > 0.001);
}

TEST_CASE("exchangeable weight bridges labeled and unlabeled rules") {
    // n=3, shape (2,1), q = 1: three compatible partitions, each weight 1/3
    IntegerPartition shape({2, 1});
    SetPartition pi({{1, 2}, {3}});
    CHECK(exchangeable_weight(1.0, shape, pi) == doctest::Approx(1.0 / 3));

    // all-singletons shape has a single compatible partition
    IntegerPartition ones({1, 1, 1, 1});
    SetPartition zero = SetPartition::singletons({1, 2, 3, 4});
    CHECK(exchangeable_weight(0.37, ones, zero) == doctest::Approx(0.37));

    CHECK_THROWS_AS(exchangeable_weight(1.0, shape, zero), std::domain_error);

    // weights over all compatible partitions sum back to q_n(shape)
    for (int n = 2; n <= 8; ++n) {
        for (const auto& sh : IntegerPartition::all_of(n, 2)) {
            double count = compatible_partition_count(sh);
            SetPartition pi0 = [&] {
                std::vector<std::vector<Label>> blocks;
                int next = 1;
                for (int part : sh.parts()) {
                    std::vector<Label> b;
                    for (int i = 0; i < part; ++i) b.push_back(next++);
                    blocks.push_back(b);
                }
                return SetPartition(blocks);
            }();
            double w = exchangeable_weight(0.5, sh, pi0);
            CHECK(w * count == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
}

TEST_CASE("compatible partition counts agree with enumeration") {
    for (int n = 2; n <= 6; ++n) {
        std::map<std::vector<int>, long long> counts;
        std::vector<Label> ground;
        for (int i = 1; i <= n; ++i) ground.push_back(i);
        for_each_set_partition(ground, 2, [&](const SetPartition& pi) {
            counts[pi.shape().parts()] += 1;
        });
        for (const auto& shape : IntegerPartition::all_of(n, 2)) {
            CHECK(compatible_partition_count(shape) ==
                  doctest::Approx(static_cast<double>(counts[shape.parts()])).epsilon(1e-12));
        }
    }
}

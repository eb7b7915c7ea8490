#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fragtree/rational.hpp"

namespace fragtree {

struct BetaSplit {
    double beta; // beta > -2
};

struct FordAlpha {
    double alpha; // alpha in [0,1)
};

struct StableAlpha {
    double alpha; // alpha in (1,2)
};

struct DislocationAtom {
    double weight;                 // > 0
    std::vector<double> fragments; // nonincreasing, nonnegative, sum <= 1
};

struct FiniteDislocation {
    double erosion = 0.0; // c >= 0
    std::vector<DislocationAtom> atoms;
};

// Splitting-rule family with parameters.
class RuleSpec {
public:
    using Variant = std::variant<BetaSplit, FordAlpha, StableAlpha, FiniteDislocation>;

    explicit RuleSpec(Variant v);

    static RuleSpec beta_split(double beta) { return RuleSpec(BetaSplit{beta}); }
    static RuleSpec ford(double alpha) { return RuleSpec(FordAlpha{alpha}); }
    static RuleSpec stable(double alpha) { return RuleSpec(StableAlpha{alpha}); }
    static RuleSpec finite_dislocation(FiniteDislocation fd) { return RuleSpec(Variant(std::move(fd))); }

    const Variant& variant() const { return v_; }

    template <class T>
    const T* get_if() const { return std::get_if<T>(&v_); }

    bool is_binary() const;

    // Self-similarity index gamma where the family has one:
    // -beta-1 for beta in (-2,-1), alpha for Ford with alpha in (0,1),
    // 1 - 1/alpha for stable.
    std::optional<double> self_similarity_index() const;

    std::string name() const; // e.g. "beta:-1.5"

    // "beta:-1.5", "ford:0.3", "stable:1.5", "paintbox:@spec.json",
    // or inline JSON starting with '{'.
    static RuleSpec parse(const std::string& text);
    static RuleSpec from_json_text(const std::string& json_text);
    std::string to_json_text() const;

private:
    Variant v_;
};

// Exact-arithmetic view of a finite dislocation measure; fragment masses and
// weights as fractions.
struct RationalAtom {
    Rational weight;
    std::vector<Rational> fragments;
};

struct RationalDislocation {
    Rational erosion;
    std::vector<RationalAtom> atoms;

    FiniteDislocation to_double() const;
};

} // namespace fragtree

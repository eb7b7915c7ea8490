#include "fragtree/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "fragtree/special.hpp"

namespace fragtree {

IntegerPartition::IntegerPartition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::invalid_argument("IntegerPartition: no parts");
    for (int p : parts_)
        if (p <= 0) throw std::invalid_argument("IntegerPartition: parts must be positive");
    std::sort(parts_.begin(), parts_.end(), std::greater<int>());
    for (int p : parts_) n_ += p;
}

int IntegerPartition::multiplicity(int i) const {
    int m = 0;
    for (int p : parts_) m += (p == i);
    return m;
}

IntegerPartition IntegerPartition::with_increment(int j) const {
    std::vector<int> parts = parts_;
    parts.at(j) += 1;
    return IntegerPartition(std::move(parts));
}

IntegerPartition IntegerPartition::with_extra_singleton() const {
    std::vector<int> parts = parts_;
    parts.push_back(1);
    return IntegerPartition(std::move(parts));
}

namespace {
void enumerate_partitions(int remaining, int max_part, std::vector<int>& acc,
                          std::vector<IntegerPartition>& out) {
    if (remaining == 0) {
        out.emplace_back(acc);
        return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        acc.push_back(p);
        enumerate_partitions(remaining - p, p, acc, out);
        acc.pop_back();
    }
}
} // namespace

std::vector<IntegerPartition> IntegerPartition::all_of(int n, int min_parts) {
    if (n < 1) throw std::invalid_argument("IntegerPartition::all_of: n must be >= 1");
    std::vector<IntegerPartition> out;
    std::vector<int> acc;
    enumerate_partitions(n, n, acc, out);
    if (min_parts > 1)
        std::erase_if(out, [&](const IntegerPartition& p) { return p.part_count() < min_parts; });
    return out;
}

std::string IntegerPartition::str() const {
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(parts_[i]);
    }
    return s;
}

SetPartition::SetPartition(std::vector<std::vector<Label>> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::invalid_argument("SetPartition: no blocks");
    std::set<Label> seen;
    for (auto& b : blocks_) {
        if (b.empty()) throw std::invalid_argument("SetPartition: empty block");
        std::sort(b.begin(), b.end());
        for (Label x : b)
            if (!seen.insert(x).second)
                throw std::invalid_argument("SetPartition: blocks not disjoint");
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const std::vector<Label>& a, const std::vector<Label>& b) {
                  return a.front() < b.front();
              });
}

SetPartition SetPartition::trivial(const std::vector<Label>& ground) {
    return SetPartition({ground});
}

SetPartition SetPartition::singletons(const std::vector<Label>& ground) {
    std::vector<std::vector<Label>> blocks;
    blocks.reserve(ground.size());
    for (Label x : ground) blocks.push_back({x});
    return SetPartition(std::move(blocks));
}

std::vector<Label> SetPartition::ground_set() const {
    std::vector<Label> g;
    for (const auto& b : blocks_) g.insert(g.end(), b.begin(), b.end());
    std::sort(g.begin(), g.end());
    return g;
}

int SetPartition::size() const {
    int s = 0;
    for (const auto& b : blocks_) s += static_cast<int>(b.size());
    return s;
}

IntegerPartition SetPartition::shape() const {
    std::vector<int> parts;
    parts.reserve(blocks_.size());
    for (const auto& b : blocks_) parts.push_back(static_cast<int>(b.size()));
    return IntegerPartition(std::move(parts));
}

bool SetPartition::refines(const SetPartition& coarser) const {
    std::map<Label, int> where;
    for (std::size_t j = 0; j < coarser.blocks_.size(); ++j)
        for (Label x : coarser.blocks_[j]) where[x] = static_cast<int>(j);
    for (const auto& b : blocks_) {
        auto it = where.find(b.front());
        if (it == where.end()) return false;
        for (Label x : b) {
            auto jt = where.find(x);
            if (jt == where.end() || jt->second != it->second) return false;
        }
    }
    return true;
}

SetPartition restrict_to(const SetPartition& pi, const std::vector<Label>& B) {
    std::set<Label> keep(B.begin(), B.end());
    std::vector<std::vector<Label>> blocks;
    for (const auto& b : pi.blocks()) {
        std::vector<Label> nb;
        for (Label x : b)
            if (keep.count(x)) nb.push_back(x);
        if (!nb.empty()) blocks.push_back(std::move(nb));
    }
    if (blocks.empty())
        throw std::domain_error("restrict_to: restriction is empty");
    return SetPartition(std::move(blocks));
}

SetPartition paintbox_sample(std::span<const double> s, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("paintbox_sample: n must be >= 1");
    double total = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (double x : s) {
        if (x < 0.0) throw std::domain_error("paintbox_sample: negative mass");
        if (x > prev + 1e-12) throw std::domain_error("paintbox_sample: masses not nonincreasing");
        prev = x;
        total += x;
    }
    if (total > 1.0 + 1e-12) throw std::domain_error("paintbox_sample: masses sum beyond 1");
    double dust = std::max(0.0, 1.0 - total);

    std::vector<std::vector<Label>> urns(s.size());
    std::vector<std::vector<Label>> blocks;
    for (Label i = 1; i <= n; ++i) {
        double u = rng.next_double();
        if (u < dust) {
            blocks.push_back({i});
            continue;
        }
        u -= dust;
        std::size_t j = 0;
        while (j + 1 < s.size() && u >= s[j]) u -= s[j++];
        if (j < s.size())
            urns[j].push_back(i);
        else
            blocks.push_back({i}); // float leakage past the last urn: treat as dust
    }
    for (auto& u : urns)
        if (!u.empty()) blocks.push_back(std::move(u));
    return SetPartition(std::move(blocks));
}

double compatible_partition_count(const IntegerPartition& shape) {
    double log_count = log_factorial(shape.n());
    for (int p : shape.parts()) log_count -= log_factorial(p);
    for (int i = 1; i <= shape.n(); ++i) log_count -= log_factorial(shape.multiplicity(i));
    return std::exp(log_count);
}

double exchangeable_weight(double q_value, const IntegerPartition& shape,
                           const SetPartition& pi) {
    if (!(pi.shape() == shape))
        throw std::domain_error("exchangeable_weight: partition incompatible with shape");
    double log_w = std::log(q_value <= 0 ? 1.0 : q_value);
    if (q_value <= 0) return 0.0;
    log_w -= log_factorial(shape.n());
    for (int p : shape.parts()) log_w += log_factorial(p);
    for (int i = 1; i <= shape.n(); ++i) log_w += log_factorial(shape.multiplicity(i));
    return std::exp(log_w);
}

} // namespace fragtree

#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cftk/scalar.hpp"

namespace cftk {

// A partition with parts from a declared part-set. Parts are stored doubled
// (part value = twice[i]/2) so that both integer parts and half-odd-integer
// parts live on one integer grid. Parts are weakly decreasing.
struct Partition {
    std::vector<long> twice;

    long twice_total() const {
        long s = 0;
        for (long t : twice) s += t;
        return s;
    }
    Rational total() const { return ratio(twice_total(), 2); }
    std::size_t size() const { return twice.size(); }
    bool empty() const { return twice.empty(); }

    Rational part(std::size_t i) const { return ratio(twice[i], 2); }

    friend bool operator==(const Partition& a, const Partition& b) { return a.twice == b.twice; }
    friend bool operator<(const Partition& a, const Partition& b) { return a.twice < b.twice; }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < twice.size(); ++i) {
            if (i) s += ",";
            s += ratio(twice[i], 2).get_str();
        }
        return s + "]";
    }
};

enum class PartSet {
    PositiveIntegers,   // 1, 2, 3, ...
    HalfOddPositive,    // 1/2, 3/2, 5/2, ...
};

namespace detail {

inline void enumerate_rec(long remaining, long max_part, long step, long lowest, bool strict,
                          std::vector<long>& acc, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(Partition{acc});
        return;
    }
    long first = std::min(max_part, remaining);
    // align to the part grid: parts are lowest, lowest+step, ...
    if (first < lowest) return;
    first -= (first - lowest) % step;
    for (long p = first; p >= lowest; p -= step) {
        acc.push_back(p);
        enumerate_rec(remaining - p, strict ? p - step : p, step, lowest, strict, acc, out);
        acc.pop_back();
    }
}

}  // namespace detail

// Complete, duplicate-free list in reverse-lexicographic order
// ([4] > [3,1] > [2,2] > [2,1,1] > [1,1,1,1]).
inline std::vector<Partition> enumerate_partitions(const Rational& total, PartSet ps, bool strict) {
    if (total < 0) throw std::invalid_argument("negative partition total");
    long step, lowest;
    switch (ps) {
        case PartSet::PositiveIntegers: step = 2; lowest = 2; break;
        case PartSet::HalfOddPositive:  step = 2; lowest = 1; break;
        default: throw std::logic_error("unknown part set");
    }
    if (!is_half_integer(total)) throw std::invalid_argument("total not on the part grid: " + to_string(total));
    long tt = twice_to_long(total);
    // span check: integer parts can only reach even doubled totals
    if (ps == PartSet::PositiveIntegers && tt % 2 != 0)
        throw std::invalid_argument("total " + to_string(total) + " not in the additive span of integer parts");
    std::vector<Partition> out;
    std::vector<long> acc;
    detail::enumerate_rec(tt, tt, step, lowest, strict, acc, out);
    return out;
}

// partition count p(n) via cached enumeration-free recurrence (dynamic programming)
inline long partition_count(long n) {
    if (n < 0) return 0;
    static std::vector<long> cache{1};
    while (static_cast<long>(cache.size()) <= n) {
        long m = static_cast<long>(cache.size());
        // p(m) = sum over largest part; use intermediate table instead
        // classic DP: count partitions of m with parts <= k
        std::vector<long> dp(static_cast<std::size_t>(m) + 1, 0);
        dp[0] = 1;
        for (long part = 1; part <= m; ++part)
            for (long v = part; v <= m; ++v) dp[static_cast<std::size_t>(v)] += dp[static_cast<std::size_t>(v - part)];
        cache.push_back(dp[static_cast<std::size_t>(m)]);
    }
    return cache[static_cast<std::size_t>(n)];
}

}  // namespace cftk

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace trendlink::qmc {

/// A product term over k variables. Bits set in `mask` are eliminated
/// ("don't care"); the remaining bits of `value` give the literal polarity.
/// Variable i is bit i.
struct Implicant {
    std::uint32_t value = 0;
    std::uint32_t mask = 0;

    bool covers(std::uint32_t minterm) const { return (minterm & ~mask) == value; }
    int literal_count(int k) const;
    auto operator<=>(const Implicant&) const = default;
};

inline constexpr int kMaxVariables = 16;

/// All prime implicants of the function that is true exactly on `minterms`.
std::vector<Implicant> prime_implicants(const std::set<std::uint32_t>& minterms, int k);

struct Cover {
    std::vector<Implicant> terms;  // sorted by literal count, then value/mask
    bool exact = true;             // false if the branch-and-bound budget ran out
};

/// Minimum cover of `minterms` by prime implicants: essential primes first,
/// then branch and bound minimizing (term count, literal count). No
/// don't-cares: every configuration outside `minterms` stays false.
/// Throws InputError on an empty set or k outside [1, 16].
Cover minimize(const std::set<std::uint32_t>& minterms, int k);

/// Evaluates a sum of products on one assignment.
bool evaluate(const std::vector<Implicant>& terms, std::uint32_t assignment);

/// "A*~B" style rendering; the empty product renders as "1".
std::string render(const Implicant& term, const std::vector<std::string>& names);

}  // namespace trendlink::qmc

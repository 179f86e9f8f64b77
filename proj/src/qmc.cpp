#include "trendlink/qmc.hpp"

#include "trendlink/core.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_set>

namespace trendlink::qmc {

namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& b) {
    std::size_t n = 0;
    for (auto w : b) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool subset_of(const Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}

std::size_t intersect_count(const Bits& a, const Bits& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        n += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return n;
}

struct Cost {
    std::size_t terms = 0;
    std::size_t literals = 0;
    bool operator<(const Cost& o) const {
        return terms != o.terms ? terms < o.terms : literals < o.literals;
    }
};

// Branch and bound over the cyclic core left after essential extraction.
class CoverSearch {
public:
    CoverSearch(std::vector<Bits> coverage, std::vector<std::size_t> literals, Bits uncovered)
        : coverage_(std::move(coverage)), literals_(std::move(literals)) {
        const std::size_t minterms = uncovered.size() * 64;
        candidates_.resize(minterms);
        for (std::size_t p = 0; p < coverage_.size(); ++p)
            for (std::size_t m = 0; m < minterms; ++m)
                if ((coverage_[p][m / 64] >> (m % 64)) & 1U) candidates_[m].push_back(p);
        // Minterms with few candidate primes first: better branching and bounds.
        for (std::size_t m = 0; m < minterms; ++m)
            if ((uncovered[m / 64] >> (m % 64)) & 1U) order_.push_back(m);
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return candidates_[a].size() < candidates_[b].size();
        });
        greedy(uncovered);
        std::vector<std::size_t> chosen;
        search(uncovered, chosen, Cost{});
    }

    const std::vector<std::size_t>& best() const { return best_; }
    bool exact() const { return budget_ > 0; }

private:
    static constexpr long kBudget = 50'000;

    static bool has(const Bits& b, std::size_t m) { return (b[m / 64] >> (m % 64)) & 1U; }

    void greedy(Bits uncovered) {
        std::vector<std::size_t> chosen;
        Cost cost;
        while (popcount(uncovered) > 0) {
            std::size_t pick = 0;
            std::size_t gain = 0;
            for (std::size_t p = 0; p < coverage_.size(); ++p) {
                const auto g = intersect_count(coverage_[p], uncovered);
                if (g > gain || (g == gain && g > 0 && literals_[p] < literals_[pick])) {
                    gain = g;
                    pick = p;
                }
            }
            chosen.push_back(pick);
            cost.terms += 1;
            cost.literals += literals_[pick];
            for (std::size_t i = 0; i < uncovered.size(); ++i) uncovered[i] &= ~coverage_[pick][i];
        }
        best_ = chosen;
        best_cost_ = cost;
    }

    // Uncovered minterms no two of which share a candidate prime each need
    // their own term.
    std::size_t disjoint_bound(const Bits& uncovered) {
        blocked_.assign(coverage_.size(), false);
        std::size_t n = 0;
        for (auto m : order_) {
            if (!has(uncovered, m)) continue;
            const auto& cands = candidates_[m];
            if (std::any_of(cands.begin(), cands.end(), [&](std::size_t p) { return blocked_[p]; }))
                continue;
            ++n;
            for (auto p : cands) blocked_[p] = true;
        }
        return n;
    }

    void search(const Bits& uncovered, std::vector<std::size_t>& chosen, Cost cost) {
        if (--budget_ <= 0) return;
        const auto remaining = popcount(uncovered);
        if (remaining == 0) {
            if (cost < best_cost_) {
                best_cost_ = cost;
                best_ = chosen;
            }
            return;
        }
        std::size_t widest = 0;
        for (const auto& c : coverage_) widest = std::max(widest, intersect_count(c, uncovered));
        const auto needed = std::max((remaining + widest - 1) / widest, disjoint_bound(uncovered));
        if (!(Cost{cost.terms + needed, cost.literals} < best_cost_)) return;

        // Branch on the uncovered minterm with the fewest candidate primes.
        std::size_t target = 0;
        for (auto m : order_)
            if (has(uncovered, m)) {
                target = m;
                break;
            }
        std::vector<std::pair<std::size_t, std::size_t>> cands;  // (gain, prime)
        for (auto p : candidates_[target]) cands.emplace_back(intersect_count(coverage_[p], uncovered), p);
        std::sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            if (literals_[a.second] != literals_[b.second]) return literals_[a.second] < literals_[b.second];
            return a.second < b.second;
        });
        for (auto [gain, p] : cands) {
            Bits next = uncovered;
            for (std::size_t i = 0; i < next.size(); ++i) next[i] &= ~coverage_[p][i];
            chosen.push_back(p);
            search(next, chosen, Cost{cost.terms + 1, cost.literals + literals_[p]});
            chosen.pop_back();
            if (budget_ <= 0) return;
        }
    }

    std::vector<Bits> coverage_;
    std::vector<std::size_t> literals_;
    std::vector<std::vector<std::size_t>> candidates_;  // primes covering each minterm
    std::vector<std::size_t> order_;
    std::vector<bool> blocked_;
    std::vector<std::size_t> best_;
    Cost best_cost_;
    long budget_ = kBudget;
};

}  // namespace

int Implicant::literal_count(int k) const {
    const std::uint32_t all = k >= 32 ? ~0U : ((1U << k) - 1U);
    return std::popcount(all & ~mask);
}

std::vector<Implicant> prime_implicants(const std::set<std::uint32_t>& minterms, int k) {
    if (k < 1 || k > kMaxVariables)
        throw InputError(fmt::format("condition count must lie in [1, {}], got {}", kMaxVariables, k));
    for (auto m : minterms)
        if (m >> k) throw InputError(fmt::format("minterm {} exceeds {} variables", m, k));

    std::map<std::uint32_t, std::unordered_set<std::uint32_t>> level;  // mask -> values
    for (auto m : minterms) level[0].insert(m);

    std::vector<Implicant> primes;
    while (!level.empty()) {
        std::map<std::uint32_t, std::unordered_set<std::uint32_t>> next;
        for (const auto& [mask, values] : level) {
            std::unordered_set<std::uint32_t> merged;
            for (auto v : values) {
                for (int bit = 0; bit < k; ++bit) {
                    const std::uint32_t b = 1U << bit;
                    if ((mask & b) || (v & b)) continue;
                    if (values.count(v | b)) {
                        next[mask | b].insert(v);
                        merged.insert(v);
                        merged.insert(v | b);
                    }
                }
            }
            for (auto v : values)
                if (!merged.count(v)) primes.push_back({v, mask});
        }
        level = std::move(next);
    }
    std::sort(primes.begin(), primes.end());
    return primes;
}

Cover minimize(const std::set<std::uint32_t>& minterms, int k) {
    if (minterms.empty()) throw InputError("minimize: empty minterm set");
    const auto primes = prime_implicants(minterms, k);

    const std::vector<std::uint32_t> terms(minterms.begin(), minterms.end());
    const std::size_t words = (terms.size() + 63) / 64;
    std::vector<Bits> coverage(primes.size(), Bits(words, 0));
    for (std::size_t p = 0; p < primes.size(); ++p)
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (primes[p].covers(terms[i])) coverage[p][i / 64] |= std::uint64_t{1} << (i % 64);

    Bits uncovered(words, 0);
    for (std::size_t i = 0; i < terms.size(); ++i) uncovered[i / 64] |= std::uint64_t{1} << (i % 64);

    std::vector<bool> selected(primes.size(), false);
    auto take = [&](std::size_t p) {
        selected[p] = true;
        for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~coverage[p][w];
    };

    // Essential primes: sole cover of some minterm.
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::size_t count = 0;
        std::size_t only = 0;
        for (std::size_t p = 0; p < primes.size(); ++p)
            if ((coverage[p][i / 64] >> (i % 64)) & 1U) {
                ++count;
                only = p;
            }
        if (count == 1 && !selected[only]) take(only);
    }

    Cover out;
    if (popcount(uncovered) > 0) {
        // Restrict to primes that still help, then drop dominated ones.
        std::vector<std::size_t> live;
        std::vector<Bits> restricted;
        for (std::size_t p = 0; p < primes.size(); ++p) {
            if (selected[p]) continue;
            Bits c = coverage[p];
            for (std::size_t w = 0; w < words; ++w) c[w] &= uncovered[w];
            if (popcount(c) == 0) continue;
            live.push_back(p);
            restricted.push_back(std::move(c));
        }
        std::vector<bool> dominated(live.size(), false);
        for (std::size_t a = 0; a < live.size(); ++a) {
            for (std::size_t b = 0; b < live.size() && !dominated[a]; ++b) {
                if (a == b || dominated[b]) continue;
                const auto la = primes[live[a]].literal_count(k);
                const auto lb = primes[live[b]].literal_count(k);
                if (!subset_of(restricted[a], restricted[b]) || lb > la) continue;
                const bool same = subset_of(restricted[b], restricted[a]);
                if (!same || lb < la || b < a) dominated[a] = true;
            }
        }
        std::vector<std::size_t> pool;
        std::vector<Bits> pool_cov;
        std::vector<std::size_t> pool_lits;
        for (std::size_t a = 0; a < live.size(); ++a) {
            if (dominated[a]) continue;
            pool.push_back(live[a]);
            pool_cov.push_back(restricted[a]);
            pool_lits.push_back(static_cast<std::size_t>(primes[live[a]].literal_count(k)));
        }
        CoverSearch search(std::move(pool_cov), std::move(pool_lits), uncovered);
        for (auto idx : search.best()) selected[pool[idx]] = true;
        out.exact = search.exact();
    }

    for (std::size_t p = 0; p < primes.size(); ++p)
        if (selected[p]) out.terms.push_back(primes[p]);
    std::sort(out.terms.begin(), out.terms.end(), [k](const Implicant& a, const Implicant& b) {
        const auto la = a.literal_count(k);
        const auto lb = b.literal_count(k);
        if (la != lb) return la < lb;
        return a < b;
    });
    return out;
}

bool evaluate(const std::vector<Implicant>& terms, std::uint32_t assignment) {
    return std::any_of(terms.begin(), terms.end(),
                       [&](const Implicant& t) { return t.covers(assignment); });
}

std::string render(const Implicant& term, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::uint32_t b = 1U << i;
        if (term.mask & b) continue;
        if (!out.empty()) out += '*';
        if (!(term.value & b)) out += '~';
        out += names[i];
    }
    return out.empty() ? "1" : out;
}

}  // namespace trendlink::qmc

#pragma once

// Independent reference implementations used only by the test suite. These are
// deliberately naive (exhaustive enumeration, truth tables, iterative deepening)
// so they share no code or algorithmic shortcuts with the library under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "qf/rational.hpp"

namespace oracle {

// Exact expectation of the 1-based position of the first marked item over all
// permutations of n items of which the first n_marked are marked. Exhaustive:
// O(n!) permutations, intended for n <= 8.
inline qf::Rational first_success_position(int n, int n_marked) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t total = 0, count = 0;
    do {
        for (int i = 0; i < n; ++i) {
            if (perm[i] < n_marked) {
                total += i + 1;
                break;
            }
        }
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return qf::Rational(total, count);
}

// Truth-table semantics for small propositional problems. A literal is (var,
// polarity); a clause is a disjunction. Evaluates every assignment of n_vars
// booleans, so n_vars should stay <= ~16.
struct TruthTable {
    int n_vars;
    std::vector<std::vector<std::pair<int, bool>>> clauses;

    bool satisfies(std::uint32_t world, const std::vector<std::pair<int, bool>>& clause) const {
        for (auto [v, pos] : clause)
            if (((world >> v) & 1u) == (pos ? 1u : 0u)) return true;
        return false;
    }

    std::vector<std::uint32_t> models(const std::vector<std::pair<int, bool>>& assumptions) const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t w = 0; w < (1u << n_vars); ++w) {
            bool ok = true;
            for (auto [v, pos] : assumptions)
                if (((w >> v) & 1u) != (pos ? 1u : 0u)) { ok = false; break; }
            if (!ok) continue;
            for (const auto& c : clauses)
                if (!satisfies(w, c)) { ok = false; break; }
            if (ok) out.push_back(w);
        }
        return out;
    }

    // nullopt: not entailed either way (or no models at all distinguishes below)
    std::optional<bool> entailed_value(const std::vector<std::pair<int, bool>>& assumptions,
                                       int var) const {
        auto ms = models(assumptions);
        if (ms.empty()) return std::nullopt;  // callers check unsat separately
        bool all_true = true, all_false = true;
        for (auto w : ms) {
            if ((w >> var) & 1u) all_false = false;
            else all_true = false;
        }
        if (all_true) return true;
        if (all_false) return false;
        return std::nullopt;
    }

    bool unsat(const std::vector<std::pair<int, bool>>& assumptions) const {
        return models(assumptions).empty();
    }
};

// Average-rank helper for the Spearman fixture cross-check.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
    const int n = static_cast<int>(xs.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        double r = (i + j) / 2.0 + 1.0;
        for (int k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    double ma = 0, mb = 0;
    for (int i = 0; i < n; ++i) { ma += a[i]; mb += b[i]; }
    ma /= n; mb /= n;
    double num = 0, da = 0, db = 0;
    for (int i = 0; i < n; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::sqrt(da * db);
}

// Stand-alone 4-op Blocks World with its own atom layout, action tables, and
// an iterative-deepening planner. The atom layout mirrors the canonical order
// (clear*, handempty, holding*, on pairs, ontable*) so states are comparable
// with the library's bit encoding, but all semantics are re-derived here.
struct BlocksOracle {
    int n;

    struct Act {
        int kind;  // 0 pick-up, 1 put-down, 2 stack, 3 unstack
        int x, y;
        std::uint64_t pre = 0, add = 0, del = 0;
    };
    std::vector<Act> acts;

    int idx_clear(int x) const { return x; }
    int idx_handempty() const { return n; }
    int idx_holding(int x) const { return n + 1 + x; }
    int idx_on(int x, int y) const {
        return 2 * n + 1 + x * (n - 1) + (y > x ? y - 1 : y);
    }
    int idx_ontable(int x) const { return 2 * n + 1 + n * (n - 1) + x; }
    int n_atoms() const { return 3 * n + n * (n - 1) + 1; }

    explicit BlocksOracle(int blocks) : n(blocks) {
        auto bit = [](int i) { return std::uint64_t(1) << i; };
        for (int x = 0; x < n; ++x) {
            Act a{0, x, -1, 0, 0, 0};
            a.pre = bit(idx_clear(x)) | bit(idx_ontable(x)) | bit(idx_handempty());
            a.del = bit(idx_ontable(x)) | bit(idx_clear(x)) | bit(idx_handempty());
            a.add = bit(idx_holding(x));
            acts.push_back(a);
        }
        for (int x = 0; x < n; ++x) {
            Act a{1, x, -1, 0, 0, 0};
            a.pre = bit(idx_holding(x));
            a.del = bit(idx_holding(x));
            a.add = bit(idx_clear(x)) | bit(idx_handempty()) | bit(idx_ontable(x));
            acts.push_back(a);
        }
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                Act a{2, x, y, 0, 0, 0};
                a.pre = bit(idx_holding(x)) | bit(idx_clear(y));
                a.del = bit(idx_holding(x)) | bit(idx_clear(y));
                a.add = bit(idx_clear(x)) | bit(idx_handempty()) | bit(idx_on(x, y));
                acts.push_back(a);
            }
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                Act a{3, x, y, 0, 0, 0};
                a.pre = bit(idx_on(x, y)) | bit(idx_clear(x)) | bit(idx_handempty());
                a.del = bit(idx_clear(x)) | bit(idx_handempty()) | bit(idx_on(x, y));
                a.add = bit(idx_holding(x)) | bit(idx_clear(y));
                acts.push_back(a);
            }
    }

    // Optimal plan as (kind, x, y) triples, lexicographically first among the
    // shortest. Depth-limited DFS with a transposition table, deepened one
    // step at a time. Returns nullopt if no plan within max_depth.
    std::optional<std::vector<std::array<int, 3>>> iddfs(std::uint64_t start,
                                                         std::uint64_t goal,
                                                         int max_depth) const {
        for (int limit = 0; limit <= max_depth; ++limit) {
            std::map<std::uint64_t, int> budget_seen;
            std::vector<std::array<int, 3>> path;
            if (dfs(start, goal, limit, budget_seen, path)) return path;
        }
        return std::nullopt;
    }

private:
    bool dfs(std::uint64_t s, std::uint64_t goal, int budget,
             std::map<std::uint64_t, int>& budget_seen,
             std::vector<std::array<int, 3>>& path) const {
        if ((s & goal) == goal) return true;
        if (budget == 0) return false;
        auto it = budget_seen.find(s);
        if (it != budget_seen.end() && it->second >= budget) return false;
        budget_seen[s] = budget;
        for (const auto& a : acts) {
            if ((s & a.pre) != a.pre) continue;
            path.push_back({a.kind, a.x, a.y});
            if (dfs((s & ~a.del) | a.add, goal, budget - 1, budget_seen, path))
                return true;
            path.pop_back();
        }
        return false;
    }
};

}  // namespace oracle

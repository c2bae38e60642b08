#pragma once

// Four-operator Blocks World: ground atom/action spaces over up to seven
// blocks, physical-validity enumeration, optimal planning, goal regression,
// and construction of underspecified planning tasks whose answer is a single
// atom question.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qf/core.hpp"

namespace qf::planning {

enum class Pred { clear, handempty, holding, on, ontable };

struct Atom {
    Pred pred = Pred::clear;
    int a = -1;
    int b = -1;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Full state: bit k holds the truth of atom k in the canonical atom order.
using State = std::uint64_t;

// Tri-valued assignment: decided atoms are the set bits of `known`, and their
// truth is the matching bit of `value`. Bits of `value` outside `known` stay
// clear so equality compares the assignment, not its history.
struct PartialState {
    std::uint64_t known = 0;
    std::uint64_t value = 0;

    void set(int atom, bool v) {
        const std::uint64_t bit = std::uint64_t(1) << atom;
        known |= bit;
        if (v)
            value |= bit;
        else
            value &= ~bit;
    }
    void erase(int atom) {
        const std::uint64_t bit = std::uint64_t(1) << atom;
        known &= ~bit;
        value &= ~bit;
    }
    bool decided(int atom) const { return (known >> atom) & 1; }
    std::optional<bool> truth(int atom) const {
        if (!decided(atom)) return std::nullopt;
        return ((value >> atom) & 1) != 0;
    }
    int n_decided() const { return std::popcount(known); }
    friend auto operator<=>(const PartialState&, const PartialState&) = default;
};

inline bool consistent(State s, const PartialState& p) {
    return (s & p.known) == p.value;
}

enum class ActionKind { pick_up, put_down, stack, unstack };

struct Action {
    ActionKind kind = ActionKind::pick_up;
    int x = -1;
    int y = -1;
    friend auto operator<=>(const Action&, const Action&) = default;
};

using Plan = std::vector<Action>;

struct ActionEffects {
    std::uint64_t pre = 0;
    std::uint64_t add = 0;
    std::uint64_t del = 0;
};

class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> blocks) : blocks_(std::move(blocks)) {
        if (blocks_.empty()) throw std::invalid_argument("at least one block is required");
        if (blocks_.size() > 7)
            throw std::invalid_argument(
                "block counts above 7 are refused for combinatorial safety");
        std::sort(blocks_.begin(), blocks_.end());
        if (std::adjacent_find(blocks_.begin(), blocks_.end()) != blocks_.end())
            throw std::invalid_argument("duplicate block name");
        for (const std::string& b : blocks_) {
            if (b.empty()) throw std::invalid_argument("empty block name");
            for (char ch : b)
                if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_')
                    throw std::invalid_argument("block name '" + b +
                                                "' has unsupported characters");
        }

        const int n = n_blocks();
        for (int x = 0; x < n; ++x) atoms_.push_back({Pred::clear, x, -1});
        atoms_.push_back({Pred::handempty, -1, -1});
        for (int x = 0; x < n; ++x) atoms_.push_back({Pred::holding, x, -1});
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (y != x) atoms_.push_back({Pred::on, x, y});
        for (int x = 0; x < n; ++x) atoms_.push_back({Pred::ontable, x, -1});

        build_actions();
        enumerate_valid();
    }

    const std::vector<std::string>& blocks() const { return blocks_; }
    int n_blocks() const { return static_cast<int>(blocks_.size()); }
    int n_atoms() const { return static_cast<int>(atoms_.size()); }
    const std::vector<Atom>& atoms() const { return atoms_; }

    std::uint64_t full_mask() const {
        return n_atoms() == 64 ? ~std::uint64_t(0)
                               : (std::uint64_t(1) << n_atoms()) - 1;
    }

    int atom_id(const Atom& at) const {
        const int n = n_blocks();
        auto ok = [&](int v) { return 0 <= v && v < n; };
        switch (at.pred) {
            case Pred::clear:
                if (ok(at.a) && at.b == -1) return at.a;
                break;
            case Pred::handempty:
                if (at.a == -1 && at.b == -1) return n;
                break;
            case Pred::holding:
                if (ok(at.a) && at.b == -1) return n + 1 + at.a;
                break;
            case Pred::on:
                if (ok(at.a) && ok(at.b) && at.a != at.b)
                    return 2 * n + 1 + at.a * (n - 1) + (at.b > at.a ? at.b - 1 : at.b);
                break;
            case Pred::ontable:
                if (ok(at.a) && at.b == -1) return 2 * n + 1 + n * (n - 1) + at.a;
                break;
        }
        throw std::invalid_argument("malformed atom");
    }

    std::string atom_text(int id) const {
        if (id < 0 || id >= n_atoms()) throw std::invalid_argument("atom id out of range");
        const Atom& at = atoms_[id];
        switch (at.pred) {
            case Pred::clear: return "(clear " + blocks_[at.a] + ")";
            case Pred::handempty: return "(handempty)";
            case Pred::holding: return "(holding " + blocks_[at.a] + ")";
            case Pred::on: return "(on " + blocks_[at.a] + " " + blocks_[at.b] + ")";
            case Pred::ontable: return "(ontable " + blocks_[at.a] + ")";
        }
        throw std::invalid_argument("malformed atom");
    }

    std::optional<int> parse_atom(const std::string& text) const {
        if (text.size() < 2 || text.front() != '(' || text.back() != ')')
            return std::nullopt;
        std::vector<std::string> parts;
        std::string cur;
        for (std::size_t i = 1; i + 1 < text.size(); ++i) {
            if (text[i] == ' ') {
                if (!cur.empty()) parts.push_back(std::move(cur)), cur.clear();
            } else {
                cur.push_back(text[i]);
            }
        }
        if (!cur.empty()) parts.push_back(std::move(cur));
        if (parts.empty()) return std::nullopt;

        auto block = [&](const std::string& name) -> int {
            auto it = std::lower_bound(blocks_.begin(), blocks_.end(), name);
            if (it == blocks_.end() || *it != name) return -1;
            return static_cast<int>(it - blocks_.begin());
        };
        Atom at;
        if (parts[0] == "clear") at.pred = Pred::clear;
        else if (parts[0] == "handempty") at.pred = Pred::handempty;
        else if (parts[0] == "holding") at.pred = Pred::holding;
        else if (parts[0] == "on") at.pred = Pred::on;
        else if (parts[0] == "ontable") at.pred = Pred::ontable;
        else return std::nullopt;

        const std::size_t arity = at.pred == Pred::handempty ? 0 : at.pred == Pred::on ? 2 : 1;
        if (parts.size() != arity + 1) return std::nullopt;
        if (arity >= 1 && (at.a = block(parts[1])) < 0) return std::nullopt;
        if (arity == 2 && (at.b = block(parts[2])) < 0) return std::nullopt;
        if (at.pred == Pred::on && at.a == at.b) return std::nullopt;
        return atom_id(at);
    }

    const std::vector<Action>& actions() const { return actions_; }

    int action_index(const Action& a) const {
        const int n = n_blocks();
        auto ok = [&](int v) { return 0 <= v && v < n; };
        switch (a.kind) {
            case ActionKind::pick_up:
                if (ok(a.x) && a.y == -1) return a.x;
                break;
            case ActionKind::put_down:
                if (ok(a.x) && a.y == -1) return n + a.x;
                break;
            case ActionKind::stack:
                if (ok(a.x) && ok(a.y) && a.x != a.y)
                    return 2 * n + a.x * (n - 1) + (a.y > a.x ? a.y - 1 : a.y);
                break;
            case ActionKind::unstack:
                if (ok(a.x) && ok(a.y) && a.x != a.y)
                    return 2 * n + n * (n - 1) + a.x * (n - 1) +
                           (a.y > a.x ? a.y - 1 : a.y);
                break;
        }
        throw std::invalid_argument("malformed action");
    }

    const ActionEffects& effects(const Action& a) const {
        return effects_[action_index(a)];
    }

    std::string action_text(const Action& a) const {
        action_index(a);
        switch (a.kind) {
            case ActionKind::pick_up: return "(pick-up " + blocks_[a.x] + ")";
            case ActionKind::put_down: return "(put-down " + blocks_[a.x] + ")";
            case ActionKind::stack:
                return "(stack " + blocks_[a.x] + " " + blocks_[a.y] + ")";
            case ActionKind::unstack:
                return "(unstack " + blocks_[a.x] + " " + blocks_[a.y] + ")";
        }
        throw std::invalid_argument("malformed action");
    }

    const std::vector<State>& valid_states() const { return valid_; }

    // Index into valid_states(), or -1 when the state breaks the axioms.
    int state_index(State s) const {
        auto it = std::lower_bound(valid_.begin(), valid_.end(), s);
        if (it == valid_.end() || *it != s) return -1;
        return static_cast<int>(it - valid_.begin());
    }

private:
    void build_actions() {
        const int n = n_blocks();
        auto bit = [&](Atom at) { return std::uint64_t(1) << atom_id(at); };
        auto clear = [&](int x) { return bit({Pred::clear, x, -1}); };
        auto holding = [&](int x) { return bit({Pred::holding, x, -1}); };
        auto ontable = [&](int x) { return bit({Pred::ontable, x, -1}); };
        auto on = [&](int x, int y) { return bit({Pred::on, x, y}); };
        const std::uint64_t handempty = bit({Pred::handempty, -1, -1});

        for (int x = 0; x < n; ++x) {
            actions_.push_back({ActionKind::pick_up, x, -1});
            ActionEffects e;
            e.pre = clear(x) | ontable(x) | handempty;
            e.del = ontable(x) | clear(x) | handempty;
            e.add = holding(x);
            effects_.push_back(e);
        }
        for (int x = 0; x < n; ++x) {
            actions_.push_back({ActionKind::put_down, x, -1});
            ActionEffects e;
            e.pre = holding(x);
            e.del = holding(x);
            e.add = clear(x) | handempty | ontable(x);
            effects_.push_back(e);
        }
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (y == x) continue;
                actions_.push_back({ActionKind::stack, x, y});
                ActionEffects e;
                e.pre = holding(x) | clear(y);
                e.del = holding(x) | clear(y);
                e.add = clear(x) | handempty | on(x, y);
                effects_.push_back(e);
            }
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (y == x) continue;
                actions_.push_back({ActionKind::unstack, x, y});
                ActionEffects e;
                e.pre = on(x, y) | clear(x) | handempty;
                e.del = clear(x) | handempty | on(x, y);
                e.add = holding(x) | clear(y);
                effects_.push_back(e);
            }
    }

    // Every physically valid state: an optional held block plus an injective,
    // acyclic support assignment (table or another block) for the rest.
    void enumerate_valid() {
        const int n = n_blocks();
        for (int held = -1; held < n; ++held) {
            std::vector<int> rest;
            for (int x = 0; x < n; ++x)
                if (x != held) rest.push_back(x);
            const int m = static_cast<int>(rest.size());
            std::vector<int> support(m, -1);
            std::vector<char> carries(m, 0);

            auto emit = [&]() {
                for (int i = 0; i < m; ++i) {
                    int cur = i, steps = 0;
                    while (support[cur] >= 0) {
                        cur = support[cur];
                        if (++steps > m) return;
                    }
                }
                State s = 0;
                auto put = [&](Atom at) { s |= std::uint64_t(1) << atom_id(at); };
                if (held < 0)
                    put({Pred::handempty, -1, -1});
                else
                    put({Pred::holding, held, -1});
                for (int i = 0; i < m; ++i) {
                    if (support[i] < 0)
                        put({Pred::ontable, rest[i], -1});
                    else
                        put({Pred::on, rest[i], rest[support[i]]});
                    if (!carries[i]) put({Pred::clear, rest[i], -1});
                }
                valid_.push_back(s);
            };

            auto assign = [&](auto&& self, int i) -> void {
                if (i == m) {
                    emit();
                    return;
                }
                support[i] = -1;
                self(self, i + 1);
                for (int j = 0; j < m; ++j) {
                    if (j == i || carries[j]) continue;
                    carries[j] = 1;
                    support[i] = j;
                    self(self, i + 1);
                    carries[j] = 0;
                }
                support[i] = -1;
            };
            assign(assign, 0);
        }
        std::sort(valid_.begin(), valid_.end());
    }

    std::vector<std::string> blocks_;
    std::vector<Atom> atoms_;
    std::vector<Action> actions_;
    std::vector<ActionEffects> effects_;
    std::vector<State> valid_;
};

inline bool applicable(const StateSpace& sp, State s, const Action& a) {
    const ActionEffects& e = sp.effects(a);
    return (s & e.pre) == e.pre;
}

inline State apply_action(const StateSpace& sp, State s, const Action& a) {
    const ActionEffects& e = sp.effects(a);
    if ((s & e.pre) != e.pre)
        throw std::domain_error("action not applicable: " + sp.action_text(a));
    return (s & ~e.del) | e.add;
}

inline std::uint64_t atom_mask(const StateSpace& sp,
                               const std::vector<std::string>& atom_texts) {
    std::uint64_t mask = 0;
    for (const std::string& text : atom_texts) {
        auto id = sp.parse_atom(text);
        if (!id) throw std::invalid_argument("unknown atom '" + text + "'");
        mask |= std::uint64_t(1) << *id;
    }
    return mask;
}

// Closed-world state: the listed atoms are true, everything else is false.
inline State state_from_atoms(const StateSpace& sp,
                              const std::vector<std::string>& atom_texts) {
    return atom_mask(sp, atom_texts);
}

inline std::vector<State> consistent_states(const StateSpace& sp,
                                            const PartialState& p) {
    std::vector<State> out;
    for (State s : sp.valid_states())
        if (consistent(s, p)) out.push_back(s);
    return out;
}

template <class F>
void for_each_consistent_state(const StateSpace& sp, const PartialState& p, F&& fn) {
    for (State s : sp.valid_states())
        if (consistent(s, p)) fn(s);
}

namespace detail {

inline std::uint64_t goal_mask_of(const StateSpace& sp,
                                  const std::vector<std::string>& goal_atoms) {
    if (goal_atoms.empty())
        throw std::invalid_argument("goal must contain at least one atom");
    return atom_mask(sp, goal_atoms);
}

inline bool implies(const PartialState& stronger, const PartialState& weaker) {
    return (stronger.known & weaker.known) == weaker.known &&
           (stronger.value & weaker.known) == weaker.value;
}

}  // namespace detail

// Shortest-plan distances to a conjunction of atoms, over the whole valid
// state space. plan() reconstructs the unique canonical optimum: at every
// step it takes the first action in canonical order that moves one step
// closer, which yields the lexicographically least shortest plan.
class Planner {
public:
    Planner(const StateSpace& sp, std::uint64_t goal_mask) : sp_(&sp) {
        const auto& states = sp.valid_states();
        const int count = static_cast<int>(states.size());
        dist_.assign(count, -1);

        std::vector<std::vector<int>> preds(count);
        for (int si = 0; si < count; ++si)
            for (const Action& a : sp.actions()) {
                const ActionEffects& e = sp.effects(a);
                if ((states[si] & e.pre) != e.pre) continue;
                int ti = sp.state_index((states[si] & ~e.del) | e.add);
                preds[ti].push_back(si);
            }

        std::vector<int> queue;
        for (int si = 0; si < count; ++si)
            if ((states[si] & goal_mask) == goal_mask) {
                dist_[si] = 0;
                queue.push_back(si);
            }
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int cur = queue[head];
            for (int prev : preds[cur])
                if (dist_[prev] < 0) {
                    dist_[prev] = dist_[cur] + 1;
                    queue.push_back(prev);
                }
        }
    }

    int distance(State s) const {
        int idx = sp_->state_index(s);
        if (idx < 0)
            throw std::invalid_argument("state violates the validity axioms");
        return dist_[idx];
    }

    Plan plan(State s) const {
        int d = distance(s);
        if (d < 0) throw std::runtime_error("goal unreachable from the given state");
        Plan out;
        State cur = s;
        while (d > 0) {
            bool advanced = false;
            for (const Action& a : sp_->actions()) {
                const ActionEffects& e = sp_->effects(a);
                if ((cur & e.pre) != e.pre) continue;
                State nxt = (cur & ~e.del) | e.add;
                if (dist_[sp_->state_index(nxt)] != d - 1) continue;
                out.push_back(a);
                cur = nxt;
                --d;
                advanced = true;
                break;
            }
            if (!advanced)
                throw std::logic_error("distance table admits no descending move");
        }
        return out;
    }

private:
    const StateSpace* sp_;
    std::vector<int> dist_;
};

inline Plan bfs_plan(const StateSpace& sp, State initial,
                     const std::vector<std::string>& goal_atoms) {
    Planner planner(sp, detail::goal_mask_of(sp, goal_atoms));
    return planner.plan(initial);
}

// Weakest precondition of a partial state through one action. Returns nullopt
// when the action cannot produce the partial: it deletes a required-true atom,
// adds a required-false atom, or its own preconditions clash with a kept
// requirement.
inline std::optional<PartialState> regress(const StateSpace& sp,
                                           const PartialState& p, const Action& a) {
    const ActionEffects& e = sp.effects(a);
    const std::uint64_t p_true = p.value;
    const std::uint64_t p_false = p.known & ~p.value;
    if (p_true & e.del) return std::nullopt;
    if (p_false & e.add) return std::nullopt;
    const std::uint64_t r_true = (p_true & ~e.add) | e.pre;
    const std::uint64_t r_false = p_false & ~e.del;
    if (r_true & r_false) return std::nullopt;
    PartialState r;
    r.known = r_true | r_false;
    r.value = r_true;
    return r;
}

struct FrontierEntry {
    PartialState partial;
    Plan plan;
    friend bool operator==(const FrontierEntry&, const FrontierEntry&) = default;
};

struct Frontier {
    std::vector<FrontierEntry> entries;
    bool truncated = false;
};

// Backward search for partial states whose every consistent completion shares
// one optimal plan, recorded alongside. Layer k holds the partials reached by
// k regressions; a candidate is kept only when the plan it claims (the action
// prepended to its parent's plan) is exactly the shared optimum over its
// consistent set. With the cap reached, one dry extra layer decides the
// truncation flag exactly.
inline Frontier well_specified_frontier(const StateSpace& sp,
                                        const std::vector<std::string>& goal_atoms,
                                        int depth_cap) {
    if (depth_cap < 0) throw std::invalid_argument("depth cap must be nonnegative");
    const std::uint64_t goal_mask = detail::goal_mask_of(sp, goal_atoms);
    Planner planner(sp, goal_mask);
    const auto& states = sp.valid_states();

    // Per-state optimal plans, interned into classes on first use.
    std::vector<int> state_class(states.size(), -1);
    std::vector<Plan> class_plans;
    std::map<Plan, int> class_ids;
    auto class_of = [&](std::size_t si) {
        int& c = state_class[si];
        if (c < 0) {
            Plan p = planner.plan(states[si]);
            auto [it, fresh] = class_ids.try_emplace(std::move(p),
                                                     static_cast<int>(class_plans.size()));
            if (fresh) class_plans.push_back(it->first);
            c = it->second;
        }
        return c;
    };

    // Shared plan class over the consistent set, or -1 if empty or mixed.
    std::map<PartialState, int> common_memo;
    auto common_of = [&](const PartialState& r) {
        auto [it, fresh] = common_memo.try_emplace(r, -1);
        if (!fresh) return it->second;
        int shared = -1;
        bool any = false, ok = true;
        for (std::size_t si = 0; si < states.size() && ok; ++si) {
            if (!consistent(states[si], r)) continue;
            int c = class_of(si);
            if (!any) {
                shared = c;
                any = true;
            } else if (c != shared) {
                ok = false;
            }
        }
        it->second = (any && ok) ? shared : -1;
        return it->second;
    };

    Frontier out;
    std::vector<FrontierEntry> layer;
    PartialState seed;
    for (int k = 0; k < sp.n_atoms(); ++k)
        if ((goal_mask >> k) & 1) seed.set(k, true);
    if (common_of(seed) >= 0) {
        out.entries.push_back({seed, {}});
        layer.push_back(out.entries.back());
    }

    auto expand = [&](const std::vector<FrontierEntry>& cur) {
        std::vector<FrontierEntry> next;
        for (const FrontierEntry& e : cur)
            for (const Action& a : sp.actions()) {
                auto r = regress(sp, e.partial, a);
                if (!r) continue;
                Plan claimed;
                claimed.reserve(e.plan.size() + 1);
                claimed.push_back(a);
                claimed.insert(claimed.end(), e.plan.begin(), e.plan.end());
                bool subsumed = false;
                for (const FrontierEntry& kept : next)
                    if (kept.plan == claimed && detail::implies(*r, kept.partial)) {
                        subsumed = true;
                        break;
                    }
                if (subsumed) continue;
                int c = common_of(*r);
                if (c < 0 || class_plans[c] != claimed) continue;
                next.push_back({*r, std::move(claimed)});
            }
        return next;
    };

    int depth = 0;
    bool exhausted = layer.empty();
    while (depth < depth_cap && !exhausted) {
        auto next = expand(layer);
        if (next.empty()) {
            exhausted = true;
            break;
        }
        ++depth;
        out.entries.insert(out.entries.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    if (!exhausted && depth == depth_cap) out.truncated = !expand(layer).empty();
    return out;
}

struct PartialClassification {
    bool realizable = false;
    // Distinct optimal plans over the consistent set, at most three collected,
    // ordered by length then lexicographically.
    std::vector<Plan> plans;
    // Atom ids resolving a two-plan split: undecided atoms true throughout one
    // plan's states and false throughout the other's. Filled only for exactly
    // two plans.
    std::vector<int> differentiating;
};

inline PartialClassification classify_partial(const StateSpace& sp,
                                              const PartialState& partial,
                                              const std::vector<std::string>& goal_atoms) {
    Planner planner(sp, detail::goal_mask_of(sp, goal_atoms));
    struct Group {
        Plan plan;
        std::uint64_t all;
        std::uint64_t any;
    };
    std::vector<Group> groups;
    for (State s : sp.valid_states()) {
        if (!consistent(s, partial)) continue;
        Plan psi = planner.plan(s);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const Group& g) { return g.plan == psi; });
        if (it != groups.end()) {
            it->all &= s;
            it->any |= s;
        } else {
            groups.push_back({std::move(psi), s, s});
            if (groups.size() == 3) break;
        }
    }

    std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
        if (a.plan.size() != b.plan.size()) return a.plan.size() < b.plan.size();
        return a.plan < b.plan;
    });

    PartialClassification out;
    out.realizable = !groups.empty();
    if (groups.size() == 2) {
        const std::uint64_t undecided = sp.full_mask() & ~partial.known;
        const std::uint64_t diff = undecided & ((groups[0].all & ~groups[1].any) |
                                                (groups[1].all & ~groups[0].any));
        for (int k = 0; k < sp.n_atoms(); ++k)
            if ((diff >> k) & 1) out.differentiating.push_back(k);
    }
    for (Group& g : groups) out.plans.push_back(std::move(g.plan));
    return out;
}

struct PlanningGenTask {
    PartialState known;
    bool well_specified = false;
    std::vector<int> correct_atoms;
    int depth_d = 0;
    std::vector<Plan> plans;
    friend bool operator==(const PlanningGenTask&, const PlanningGenTask&) = default;
};

// Task built directly from a partial state: one shared plan makes it
// well-specified, two make it a single-question task answered by the
// differentiating atoms. Unrealizable partials, three-way splits, and
// two-plan splits with no differentiating atom yield nothing.
inline std::optional<PlanningGenTask> task_from_partial(
    const StateSpace& sp, const PartialState& known,
    const std::vector<std::string>& goal_atoms) {
    PartialClassification cls = classify_partial(sp, known, goal_atoms);
    if (!cls.realizable || cls.plans.empty() || cls.plans.size() > 2) return std::nullopt;
    if (cls.plans.size() == 2 && cls.differentiating.empty()) return std::nullopt;
    PlanningGenTask t;
    t.known = known;
    t.well_specified = cls.plans.size() == 1;
    t.correct_atoms = std::move(cls.differentiating);
    t.depth_d = static_cast<int>(cls.plans.back().size());
    t.plans = std::move(cls.plans);
    return t;
}

struct GenResult {
    std::vector<PlanningGenTask> tasks;
    bool truncated = false;
};

// Underspecification pass over the frontier: drop each decided atom in turn.
// A candidate equal to another frontier partial minus one true atom gets that
// salient atom pinned false (single pass against the unmodified candidate,
// the source entry excluded). Candidates repeated across frontier entries are
// processed once, first occurrence winning.
inline GenResult generate_tasks(const StateSpace& sp,
                                const std::vector<std::string>& goal_atoms,
                                int depth_cap) {
    Frontier frontier = well_specified_frontier(sp, goal_atoms, depth_cap);
    GenResult out;
    out.truncated = frontier.truncated;

    std::set<PartialState> candidate_seen;
    std::set<PartialState> emitted;
    for (std::size_t i = 0; i < frontier.entries.size(); ++i) {
        const PartialState& source = frontier.entries[i].partial;
        for (int k = 0; k < sp.n_atoms(); ++k) {
            if (!source.decided(k)) continue;
            PartialState candidate = source;
            candidate.erase(k);
            if (!candidate_seen.insert(candidate).second) continue;

            PartialState task_known = candidate;
            for (std::size_t j = 0; j < frontier.entries.size(); ++j) {
                if (j == i) continue;
                const PartialState& other = frontier.entries[j].partial;
                if ((other.known & candidate.known) != candidate.known) continue;
                if ((other.value & candidate.known) != candidate.value) continue;
                const std::uint64_t extra = other.known & ~candidate.known;
                if (std::popcount(extra) != 1) continue;
                if ((other.value & extra) == 0) continue;
                task_known.set(std::countr_zero(extra), false);
            }

            auto task = task_from_partial(sp, task_known, goal_atoms);
            if (!task) continue;
            if (!emitted.insert(task_known).second) continue;
            out.tasks.push_back(std::move(*task));
        }
    }
    return out;
}

enum class AtomVerdict { disambiguates, redundant, insufficient };

// Does fixing one undecided atom pin down the optimal plan? Each branch of
// the atom is summarized by its distinct plans (capped at two); a branch with
// no consistent states defers to the other branch alone.
inline AtomVerdict verify_atom_sufficiency(const StateSpace& sp,
                                           const PartialState& partial,
                                           const std::vector<std::string>& goal_atoms,
                                           int atom) {
    if (atom < 0 || atom >= sp.n_atoms())
        throw std::invalid_argument("atom id out of range");
    if (partial.decided(atom))
        throw std::invalid_argument("atom is already decided in the partial state");
    Planner planner(sp, detail::goal_mask_of(sp, goal_atoms));

    auto branch = [&](bool truth) {
        PartialState q = partial;
        q.set(atom, truth);
        std::vector<Plan> distinct;
        for (State s : sp.valid_states()) {
            if (!consistent(s, q)) continue;
            Plan psi = planner.plan(s);
            if (std::find(distinct.begin(), distinct.end(), psi) == distinct.end()) {
                distinct.push_back(std::move(psi));
                if (distinct.size() == 2) break;
            }
        }
        return distinct;
    };

    const std::vector<Plan> yes = branch(true);
    const std::vector<Plan> no = branch(false);
    if (yes.empty() && no.empty()) return AtomVerdict::insufficient;
    if (yes.empty() || no.empty()) {
        const auto& only = yes.empty() ? no : yes;
        return only.size() == 1 ? AtomVerdict::redundant : AtomVerdict::insufficient;
    }
    if (yes.size() == 1 && no.size() == 1)
        return yes[0] == no[0] ? AtomVerdict::redundant : AtomVerdict::disambiguates;
    return AtomVerdict::insufficient;
}

struct ParsedProblem {
    std::vector<std::string> blocks;
    std::vector<std::string> init;
    std::vector<std::string> goal;
};

namespace detail {

struct PddlToken {
    std::string text;
    int line = 1;
};

inline std::vector<PddlToken> pddl_tokens(const std::string& src) {
    std::vector<PddlToken> out;
    int line = 1;
    std::size_t i = 0;
    while (i < src.size()) {
        char ch = src[i];
        if (ch == '\n') {
            ++line;
            ++i;
        } else if (ch == ';') {
            while (i < src.size() && src[i] != '\n') ++i;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (ch == '(' || ch == ')') {
            out.push_back({std::string(1, ch), line});
            ++i;
        } else {
            std::size_t j = i;
            while (j < src.size() && src[j] != '(' && src[j] != ')' && src[j] != ';' &&
                   !std::isspace(static_cast<unsigned char>(src[j])))
                ++j;
            std::string sym = src.substr(i, j - i);
            for (char& c : sym) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            out.push_back({std::move(sym), line});
            i = j;
        }
    }
    return out;
}

struct Sexp {
    std::string sym;
    std::vector<Sexp> kids;
    bool is_list = false;
    int line = 1;
};

inline Sexp parse_sexp_at(const std::vector<PddlToken>& toks, std::size_t& i) {
    const PddlToken& t = toks[i];
    if (t.text == ")") throw ParseError(t.line, "unexpected ')'");
    if (t.text != "(") {
        ++i;
        Sexp leaf;
        leaf.sym = t.text;
        leaf.line = t.line;
        return leaf;
    }
    Sexp node;
    node.is_list = true;
    node.line = t.line;
    ++i;
    while (true) {
        if (i >= toks.size()) throw ParseError(toks.back().line, "missing ')'");
        if (toks[i].text == ")") {
            ++i;
            return node;
        }
        node.kids.push_back(parse_sexp_at(toks, i));
    }
}

inline Sexp parse_single_sexp(const std::string& src, const std::string& what) {
    auto toks = pddl_tokens(src);
    if (toks.empty()) throw ParseError(1, "empty " + what);
    std::size_t i = 0;
    Sexp root = parse_sexp_at(toks, i);
    if (i != toks.size())
        throw ParseError(toks[i].line, "trailing content after the " + what);
    if (!root.is_list) throw ParseError(root.line, what + " must be a parenthesized form");
    return root;
}

inline const Sexp& expect_list(const Sexp& s, const std::string& what) {
    if (!s.is_list) throw ParseError(s.line, "expected " + what);
    return s;
}

// Schema atoms carry parameter slots: 0 for the first parameter, 1 for the
// second, -1 for unused argument positions.
using SchemaAtom = std::array<int, 3>;

struct ActionSchema {
    const char* name;
    int arity;
    std::vector<SchemaAtom> pre, add, del;
};

inline const std::vector<ActionSchema>& blocks_schemas() {
    static const std::vector<ActionSchema> schemas = [] {
        const int clear = static_cast<int>(Pred::clear);
        const int handempty = static_cast<int>(Pred::handempty);
        const int holding = static_cast<int>(Pred::holding);
        const int on = static_cast<int>(Pred::on);
        const int ontable = static_cast<int>(Pred::ontable);
        std::vector<ActionSchema> all;
        all.push_back({"pick-up",
                       1,
                       {{clear, 0, -1}, {ontable, 0, -1}, {handempty, -1, -1}},
                       {{holding, 0, -1}},
                       {{ontable, 0, -1}, {clear, 0, -1}, {handempty, -1, -1}}});
        all.push_back({"put-down",
                       1,
                       {{holding, 0, -1}},
                       {{clear, 0, -1}, {handempty, -1, -1}, {ontable, 0, -1}},
                       {{holding, 0, -1}}});
        all.push_back({"stack",
                       2,
                       {{holding, 0, -1}, {clear, 1, -1}},
                       {{clear, 0, -1}, {handempty, -1, -1}, {on, 0, 1}},
                       {{holding, 0, -1}, {clear, 1, -1}}});
        all.push_back({"unstack",
                       2,
                       {{on, 0, 1}, {clear, 0, -1}, {handempty, -1, -1}},
                       {{holding, 0, -1}, {clear, 1, -1}},
                       {{clear, 0, -1}, {handempty, -1, -1}, {on, 0, 1}}});
        return all;
    }();
    return schemas;
}

inline int pred_of(const std::string& name, int line) {
    if (name == "clear") return static_cast<int>(Pred::clear);
    if (name == "handempty") return static_cast<int>(Pred::handempty);
    if (name == "holding") return static_cast<int>(Pred::holding);
    if (name == "on") return static_cast<int>(Pred::on);
    if (name == "ontable") return static_cast<int>(Pred::ontable);
    throw ParseError(line, "unknown predicate '" + name + "'");
}

inline int pred_arity(int pred) {
    if (pred == static_cast<int>(Pred::handempty)) return 0;
    if (pred == static_cast<int>(Pred::on)) return 2;
    return 1;
}

inline SchemaAtom schema_atom(const Sexp& s,
                              const std::map<std::string, int>& params) {
    expect_list(s, "an atom");
    if (s.kids.empty() || s.kids[0].is_list)
        throw ParseError(s.line, "expected a predicate name");
    const int pred = pred_of(s.kids[0].sym, s.kids[0].line);
    const int arity = pred_arity(pred);
    if (static_cast<int>(s.kids.size()) != arity + 1)
        throw ParseError(s.line, "wrong arity for '" + s.kids[0].sym + "'");
    SchemaAtom at = {pred, -1, -1};
    for (int k = 0; k < arity; ++k) {
        const Sexp& arg = s.kids[k + 1];
        if (arg.is_list) throw ParseError(arg.line, "expected a parameter");
        auto it = params.find(arg.sym);
        if (it == params.end())
            throw ParseError(arg.line, "unknown parameter '" + arg.sym + "'");
        at[k + 1] = it->second;
    }
    if (arity == 2 && at[1] == at[2])
        throw ParseError(s.line, "'on' needs two distinct arguments");
    return at;
}

inline std::vector<Sexp> conjuncts_of(const Sexp& s) {
    expect_list(s, "a condition");
    if (!s.kids.empty() && !s.kids[0].is_list && s.kids[0].sym == "and")
        return std::vector<Sexp>(s.kids.begin() + 1, s.kids.end());
    return {s};
}

// Typed parameter/object lists look like "a b - block c - block"; the type
// annotations are optional but must name the block type when present.
inline std::vector<std::string> typed_names(const Sexp& list, const std::string& what) {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < list.kids.size(); ++k) {
        const Sexp& item = list.kids[k];
        if (item.is_list) throw ParseError(item.line, "expected a name in " + what);
        if (item.sym == "-") {
            if (k + 1 >= list.kids.size() || list.kids[k + 1].is_list ||
                list.kids[k + 1].sym != "block")
                throw ParseError(item.line, "only the block type is supported");
            ++k;
            continue;
        }
        names.push_back(item.sym);
    }
    return names;
}

inline std::string parse_blocks_domain(const std::string& domain_text) {
    Sexp root = parse_single_sexp(domain_text, "domain");
    if (root.kids.size() < 2 || root.kids[0].is_list || root.kids[0].sym != "define")
        throw ParseError(root.line, "expected (define (domain ...) ...)");
    const Sexp& head = expect_list(root.kids[1], "(domain ...)");
    if (head.kids.size() != 2 || head.kids[0].is_list || head.kids[0].sym != "domain" ||
        head.kids[1].is_list)
        throw ParseError(head.line, "expected (domain name)");
    const std::string name = head.kids[1].sym;
    if (name.find("blocks") == std::string::npos)
        throw ParseError(head.kids[1].line,
                         "domain '" + name + "' is not a Blocks World domain");

    bool saw_predicates = false;
    std::vector<std::string> seen_actions;
    for (std::size_t si = 2; si < root.kids.size(); ++si) {
        const Sexp& section = expect_list(root.kids[si], "a domain section");
        if (section.kids.empty() || section.kids[0].is_list)
            throw ParseError(section.line, "expected a section keyword");
        const std::string& kw = section.kids[0].sym;

        if (kw == ":requirements") {
            for (std::size_t k = 1; k < section.kids.size(); ++k) {
                const Sexp& req = section.kids[k];
                if (req.is_list || (req.sym != ":strips" && req.sym != ":typing"))
                    throw ParseError(req.line, "unknown requirement");
            }
        } else if (kw == ":types") {
            for (std::size_t k = 1; k < section.kids.size(); ++k)
                if (section.kids[k].is_list || section.kids[k].sym != "block")
                    throw ParseError(section.kids[k].line, "only the block type is supported");
        } else if (kw == ":predicates") {
            saw_predicates = true;
            std::map<std::string, int> seen;
            for (std::size_t k = 1; k < section.kids.size(); ++k) {
                const Sexp& decl = expect_list(section.kids[k], "a predicate declaration");
                if (decl.kids.empty() || decl.kids[0].is_list)
                    throw ParseError(decl.line, "expected a predicate name");
                const int pred = pred_of(decl.kids[0].sym, decl.kids[0].line);
                const auto args = typed_names(
                    {"", std::vector<Sexp>(decl.kids.begin() + 1, decl.kids.end()), true,
                     decl.line},
                    "a predicate declaration");
                if (static_cast<int>(args.size()) != pred_arity(pred))
                    throw ParseError(decl.line, "wrong arity for '" + decl.kids[0].sym + "'");
                if (!seen.emplace(decl.kids[0].sym, 1).second)
                    throw ParseError(decl.line, "duplicate predicate '" + decl.kids[0].sym + "'");
            }
            if (seen.size() != 5)
                throw ParseError(section.line, "expected exactly the five Blocks World predicates");
        } else if (kw == ":action") {
            if (section.kids.size() < 2 || section.kids[1].is_list)
                throw ParseError(section.line, "expected an action name");
            const std::string aname = section.kids[1].sym;
            const ActionSchema* schema = nullptr;
            for (const ActionSchema& s : blocks_schemas())
                if (aname == s.name) schema = &s;
            if (!schema) throw ParseError(section.kids[1].line, "unknown action '" + aname + "'");
            if (std::find(seen_actions.begin(), seen_actions.end(), aname) !=
                seen_actions.end())
                throw ParseError(section.kids[1].line, "duplicate action '" + aname + "'");
            seen_actions.push_back(aname);

            std::map<std::string, int> params;
            std::vector<SchemaAtom> pre, add, del;
            bool saw_params = false, saw_pre = false, saw_effect = false;
            for (std::size_t k = 2; k + 1 < section.kids.size(); k += 2) {
                const Sexp& key = section.kids[k];
                const Sexp& val = section.kids[k + 1];
                if (key.is_list) throw ParseError(key.line, "expected an action keyword");
                if (key.sym == ":parameters") {
                    saw_params = true;
                    auto names = typed_names(expect_list(val, "a parameter list"),
                                             "a parameter list");
                    for (const std::string& p : names) {
                        if (p.empty() || p[0] != '?')
                            throw ParseError(val.line, "parameters must start with '?'");
                        if (!params.emplace(p, static_cast<int>(params.size())).second)
                            throw ParseError(val.line, "duplicate parameter '" + p + "'");
                    }
                    if (static_cast<int>(params.size()) != schema->arity)
                        throw ParseError(val.line, "wrong parameter count for '" + aname + "'");
                } else if (key.sym == ":precondition") {
                    saw_pre = true;
                    for (const Sexp& c : conjuncts_of(val)) {
                        if (!c.kids.empty() && !c.kids[0].is_list && c.kids[0].sym == "not")
                            throw ParseError(c.line, "negated preconditions are not supported");
                        pre.push_back(schema_atom(c, params));
                    }
                } else if (key.sym == ":effect") {
                    saw_effect = true;
                    for (const Sexp& c : conjuncts_of(val)) {
                        if (!c.kids.empty() && !c.kids[0].is_list && c.kids[0].sym == "not") {
                            if (c.kids.size() != 2)
                                throw ParseError(c.line, "malformed negated effect");
                            del.push_back(schema_atom(c.kids[1], params));
                        } else {
                            add.push_back(schema_atom(c, params));
                        }
                    }
                } else {
                    throw ParseError(key.line, "unknown action keyword '" + key.sym + "'");
                }
            }
            if (!saw_params || !saw_pre || !saw_effect)
                throw ParseError(section.line, "action '" + aname + "' is incomplete");

            auto same = [](std::vector<SchemaAtom> a, std::vector<SchemaAtom> b) {
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                return a == b;
            };
            if (!same(pre, schema->pre) || !same(add, schema->add) || !same(del, schema->del))
                throw ParseError(section.line,
                                 "action '" + aname + "' does not match the Blocks World schema");
        } else {
            throw ParseError(section.line, "unknown domain section '" + kw + "'");
        }
    }
    if (!saw_predicates) throw ParseError(root.line, "missing :predicates section");
    if (seen_actions.size() != 4)
        throw ParseError(root.line, "expected exactly the four Blocks World actions");
    return name;
}

struct GroundAtom {
    int pred = 0;
    int a = -1;
    int b = -1;
    friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

inline GroundAtom ground_atom(const Sexp& s, const std::map<std::string, int>& objects) {
    expect_list(s, "an atom");
    if (s.kids.empty() || s.kids[0].is_list)
        throw ParseError(s.line, "expected a predicate name");
    const int pred = pred_of(s.kids[0].sym, s.kids[0].line);
    const int arity = pred_arity(pred);
    if (static_cast<int>(s.kids.size()) != arity + 1)
        throw ParseError(s.line, "wrong arity for '" + s.kids[0].sym + "'");
    GroundAtom at{pred, -1, -1};
    for (int k = 0; k < arity; ++k) {
        const Sexp& arg = s.kids[k + 1];
        if (arg.is_list) throw ParseError(arg.line, "expected an object name");
        auto it = objects.find(arg.sym);
        if (it == objects.end())
            throw ParseError(arg.line, "unknown object '" + arg.sym + "'");
        (k == 0 ? at.a : at.b) = it->second;
    }
    if (pred == static_cast<int>(Pred::on) && at.a == at.b)
        throw ParseError(s.line, "a block cannot rest on itself");
    return at;
}

}  // namespace detail

// Reads the four-operator Blocks World domain plus one problem over it.
// Anything outside that fragment, from foreign requirements to reshaped
// action schemas, is rejected with the offending line.
inline ParsedProblem parse_pddl(const std::string& domain_text,
                                const std::string& problem_text) {
    const std::string domain_name = detail::parse_blocks_domain(domain_text);

    detail::Sexp root = detail::parse_single_sexp(problem_text, "problem");
    if (root.kids.size() < 2 || root.kids[0].is_list || root.kids[0].sym != "define")
        throw ParseError(root.line, "expected (define (problem ...) ...)");
    const detail::Sexp& head = detail::expect_list(root.kids[1], "(problem ...)");
    if (head.kids.size() != 2 || head.kids[0].is_list || head.kids[0].sym != "problem" ||
        head.kids[1].is_list)
        throw ParseError(head.line, "expected (problem name)");

    std::vector<std::string> blocks;
    std::optional<detail::Sexp> init_section, goal_section;
    for (std::size_t si = 2; si < root.kids.size(); ++si) {
        const detail::Sexp& section = detail::expect_list(root.kids[si], "a problem section");
        if (section.kids.empty() || section.kids[0].is_list)
            throw ParseError(section.line, "expected a section keyword");
        const std::string& kw = section.kids[0].sym;
        if (kw == ":domain") {
            if (section.kids.size() != 2 || section.kids[1].is_list ||
                section.kids[1].sym != domain_name)
                throw ParseError(section.line, "problem does not reference the parsed domain");
        } else if (kw == ":objects") {
            if (!blocks.empty()) throw ParseError(section.line, "duplicate :objects section");
            blocks = detail::typed_names(
                {"", std::vector<detail::Sexp>(section.kids.begin() + 1, section.kids.end()),
                 true, section.line},
                "the object list");
            if (blocks.empty()) throw ParseError(section.line, "problem declares no objects");
        } else if (kw == ":init") {
            if (init_section) throw ParseError(section.line, "duplicate :init section");
            init_section = section;
        } else if (kw == ":goal") {
            if (goal_section) throw ParseError(section.line, "duplicate :goal section");
            if (section.kids.size() != 2)
                throw ParseError(section.line, "expected exactly one goal form");
            goal_section = section.kids[1];
        } else {
            throw ParseError(section.line, "unknown problem section '" + kw + "'");
        }
    }
    if (blocks.empty()) throw ParseError(root.line, "problem declares no objects");

    std::sort(blocks.begin(), blocks.end());
    if (std::adjacent_find(blocks.begin(), blocks.end()) != blocks.end())
        throw ParseError(root.line, "duplicate object name");
    std::map<std::string, int> object_ids;
    for (std::size_t k = 0; k < blocks.size(); ++k)
        object_ids[blocks[k]] = static_cast<int>(k);

    auto render = [&](const detail::GroundAtom& at) {
        switch (static_cast<Pred>(at.pred)) {
            case Pred::clear: return "(clear " + blocks[at.a] + ")";
            case Pred::handempty: return std::string("(handempty)");
            case Pred::holding: return "(holding " + blocks[at.a] + ")";
            case Pred::on: return "(on " + blocks[at.a] + " " + blocks[at.b] + ")";
            case Pred::ontable: return "(ontable " + blocks[at.a] + ")";
        }
        throw std::logic_error("unreachable");
    };
    auto collect = [&](const std::vector<detail::Sexp>& forms) {
        std::vector<detail::GroundAtom> atoms;
        for (const detail::Sexp& f : forms) {
            if (f.is_list && !f.kids.empty() && !f.kids[0].is_list && f.kids[0].sym == "not")
                throw ParseError(f.line, "negated atoms are not supported here");
            atoms.push_back(detail::ground_atom(f, object_ids));
        }
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
        std::vector<std::string> texts;
        for (const auto& at : atoms) texts.push_back(render(at));
        return texts;
    };

    ParsedProblem out;
    out.blocks = blocks;
    if (init_section)
        out.init = collect(std::vector<detail::Sexp>(init_section->kids.begin() + 1,
                                                     init_section->kids.end()));
    if (!goal_section) throw ParseError(root.line, "problem declares no goal");
    std::vector<detail::Sexp> goal_forms = detail::conjuncts_of(*goal_section);
    if (goal_forms.empty())
        throw ParseError(goal_section->line, "goal must contain at least one atom");
    out.goal = collect(goal_forms);
    return out;
}

}  // namespace qf::planning

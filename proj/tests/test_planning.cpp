#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fixtures_planning.hpp"
#include "oracles.hpp"
#include "qf/core.hpp"
#include "qf/planning.hpp"

namespace qp = qf::planning;

using qp::Action;
using qp::ActionKind;
using qp::Atom;
using qp::PartialState;
using qp::Plan;
using qp::Pred;
using qp::State;
using qp::StateSpace;

namespace {

StateSpace space2() { return StateSpace({"a", "b"}); }
StateSpace space3() { return StateSpace({"a", "b", "c"}); }
StateSpace space5() { return StateSpace({"a", "b", "c", "d", "e"}); }

int id(const StateSpace& sp, const std::string& text) {
    auto got = sp.parse_atom(text);
    REQUIRE(got.has_value());
    return *got;
}

State full_state(const StateSpace& sp, const std::vector<std::string>& atoms) {
    return qp::state_from_atoms(sp, atoms);
}

PartialState partial_of(const StateSpace& sp,
                        const std::vector<std::pair<std::string, bool>>& items) {
    PartialState p;
    for (const auto& [text, truth] : items) p.set(id(sp, text), truth);
    return p;
}

std::vector<std::string> plan_texts(const StateSpace& sp, const Plan& plan) {
    std::vector<std::string> out;
    for (const Action& a : plan) out.push_back(sp.action_text(a));
    return out;
}

std::vector<std::array<int, 3>> plan_triples(const Plan& plan) {
    std::vector<std::array<int, 3>> out;
    for (const Action& a : plan) {
        int kind = 0;
        switch (a.kind) {
            case ActionKind::pick_up: kind = 0; break;
            case ActionKind::put_down: kind = 1; break;
            case ActionKind::stack: kind = 2; break;
            case ActionKind::unstack: kind = 3; break;
        }
        out.push_back({kind, a.x, a.y});
    }
    return out;
}

// Independent statement of the physical-validity axioms, checked bit by bit.
bool axioms_hold(const StateSpace& sp, State s) {
    const int n = sp.n_blocks();
    auto on = [&](int x, int y) {
        return (s >> sp.atom_id(Atom{Pred::on, x, y})) & 1;
    };
    auto has = [&](Atom a) { return (s >> sp.atom_id(a)) & 1; };

    std::vector<int> held;
    for (int x = 0; x < n; ++x)
        if (has(Atom{Pred::holding, x})) held.push_back(x);
    if (held.size() > 1) return false;
    if (has(Atom{Pred::handempty}) != held.empty()) return false;

    for (int x = 0; x < n; ++x) {
        int supports = has(Atom{Pred::ontable, x}) ? 1 : 0;
        int above = 0;
        for (int y = 0; y < n; ++y) {
            if (y == x) continue;
            if (on(x, y)) ++supports;
            if (on(y, x)) ++above;
        }
        const bool is_held = !held.empty() && held[0] == x;
        if (is_held) {
            if (supports != 0 || above != 0) return false;
            if (has(Atom{Pred::clear, x})) return false;
        } else {
            if (supports != 1 || above > 1) return false;
            if (has(Atom{Pred::clear, x}) != (above == 0)) return false;
        }
    }

    // Chains of on() must reach the table without revisiting a block.
    for (int x = 0; x < n; ++x) {
        int cur = x, steps = 0;
        while (true) {
            int next = -1;
            for (int y = 0; y < n; ++y)
                if (y != cur && on(cur, y)) next = y;
            if (next < 0) break;
            cur = next;
            if (++steps > n) return false;
        }
    }
    return true;
}

oracle::BlocksOracle oracle_for(const StateSpace& sp) {
    return oracle::BlocksOracle(sp.n_blocks());
}

PartialState random_partial(const StateSpace& sp, std::mt19937_64& rng) {
    PartialState p;
    for (int k = 0; k < sp.n_atoms(); ++k) {
        switch (rng() % 3) {
            case 0: p.set(k, true); break;
            case 1: p.set(k, false); break;
            default: break;
        }
    }
    return p;
}

}  // namespace

TEST_CASE("five-block atom enumeration matches the canonical option order") {
    StateSpace sp = space5();
    REQUIRE(sp.n_blocks() == 5);
    REQUIRE(sp.n_atoms() == 36);
    REQUIRE(sp.atoms().size() == 36);
    for (int k = 0; k < 36; ++k) {
        REQUIRE(sp.atom_text(k) == kFiveBlockAtomTexts[k]);
        REQUIRE(sp.atom_id(sp.atoms()[k]) == k);
        auto parsed = sp.parse_atom(kFiveBlockAtomTexts[k]);
        REQUIRE(parsed.has_value());
        REQUIRE(*parsed == k);
    }
    REQUIRE(sp.atoms()[14] == Atom{Pred::on, 0, 4});
    REQUIRE(sp.atoms()[5] == Atom{Pred::handempty, -1, -1});
    REQUIRE(sp.atoms()[35] == Atom{Pred::ontable, 4, -1});

    REQUIRE_FALSE(sp.parse_atom("(on a a)").has_value());
    REQUIRE_FALSE(sp.parse_atom("(on a f)").has_value());
    REQUIRE_FALSE(sp.parse_atom("(clear)").has_value());
    REQUIRE_FALSE(sp.parse_atom("on a b").has_value());
    REQUIRE_FALSE(sp.parse_atom("(holding a b)").has_value());
    REQUIRE_THROWS_AS(sp.atom_id(Atom{Pred::on, 0, 0}), std::invalid_argument);

    // Construction sorts block names; the atom order is tied to sorted order.
    StateSpace shuffled({"e", "c", "a", "d", "b"});
    REQUIRE(shuffled.blocks() == std::vector<std::string>{"a", "b", "c", "d", "e"});
    REQUIRE(shuffled.atom_text(14) == "(on a e)");
}

TEST_CASE("state space validates block lists and scales to seven blocks") {
    REQUIRE_THROWS_AS(StateSpace({}), std::invalid_argument);
    REQUIRE_THROWS_AS(StateSpace({"a", "b", "c", "d", "e", "f", "g", "h"}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(StateSpace({"a", "a"}), std::invalid_argument);
    REQUIRE_THROWS_AS(StateSpace({"a", "b c"}), std::invalid_argument);

    StateSpace sp7({"a", "b", "c", "d", "e", "f", "g"});
    REQUIRE(sp7.n_atoms() == 64);
    REQUIRE(sp7.valid_states().size() == 65990);
}

TEST_CASE("valid-state enumeration counts and axioms") {
    const std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
    const std::vector<std::size_t> expect = {2, 5, 22, 125, 866};
    for (int n = 1; n <= 5; ++n) {
        StateSpace sp(std::vector<std::string>(pool.begin(), pool.begin() + n));
        const auto& states = sp.valid_states();
        REQUIRE(states.size() == expect[n - 1]);
        REQUIRE(std::is_sorted(states.begin(), states.end()));
        REQUIRE(std::adjacent_find(states.begin(), states.end()) == states.end());
        if (n <= 4)
            for (State s : states) REQUIRE(axioms_hold(sp, s));
    }
}

TEST_CASE("enumeration equals the reachable closure under apply_action") {
    for (int n = 3; n <= 4; ++n) {
        std::vector<std::string> names = {"a", "b", "c", "d"};
        StateSpace sp(std::vector<std::string>(names.begin(), names.begin() + n));
        std::vector<std::string> table_atoms = {"(handempty)"};
        for (const std::string& b : sp.blocks()) {
            table_atoms.push_back("(ontable " + b + ")");
            table_atoms.push_back("(clear " + b + ")");
        }
        State start = full_state(sp, table_atoms);

        std::set<State> seen = {start};
        std::vector<State> queue = {start};
        while (!queue.empty()) {
            State s = queue.back();
            queue.pop_back();
            for (const Action& a : sp.actions()) {
                if (!qp::applicable(sp, s, a)) continue;
                State t = qp::apply_action(sp, s, a);
                REQUIRE(axioms_hold(sp, t));
                if (seen.insert(t).second) queue.push_back(t);
            }
        }
        std::vector<State> reached(seen.begin(), seen.end());
        REQUIRE(reached == sp.valid_states());
    }
}

TEST_CASE("apply_action pinned transitions and failure modes") {
    StateSpace sp = space2();
    State held_a = full_state(sp, {"(holding a)", "(clear b)", "(ontable b)"});
    Action stack_ab{ActionKind::stack, 0, 1};
    REQUIRE(qp::applicable(sp, held_a, stack_ab));
    State after = qp::apply_action(sp, held_a, stack_ab);
    REQUIRE(after ==
            full_state(sp, {"(on a b)", "(clear a)", "(handempty)", "(ontable b)"}));

    Action put_b{ActionKind::put_down, 1};
    REQUIRE_FALSE(qp::applicable(sp, held_a, put_b));
    REQUIRE_THROWS_AS(qp::apply_action(sp, held_a, put_b), std::domain_error);

    REQUIRE_THROWS_AS(qp::applicable(sp, held_a, Action{ActionKind::stack, 0, 0}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(qp::applicable(sp, held_a, Action{ActionKind::pick_up, 7}),
                      std::invalid_argument);
}

TEST_CASE("action enumeration is canonical") {
    StateSpace sp = space2();
    std::vector<std::string> texts;
    for (const Action& a : sp.actions()) texts.push_back(sp.action_text(a));
    REQUIRE(texts == std::vector<std::string>{
                         "(pick-up a)", "(pick-up b)", "(put-down a)", "(put-down b)",
                         "(stack a b)", "(stack b a)", "(unstack a b)", "(unstack b a)"});
    REQUIRE(std::is_sorted(sp.actions().begin(), sp.actions().end()));
}

TEST_CASE("bfs_plan pinned plans, unreachable goals, invalid states") {
    StateSpace sp = space2();
    State both_table =
        full_state(sp, {"(clear a)", "(clear b)", "(handempty)", "(ontable a)",
                        "(ontable b)"});
    State b_on_a = full_state(sp, {"(clear b)", "(handempty)", "(on b a)", "(ontable a)"});

    REQUIRE(qp::bfs_plan(sp, b_on_a, {"(on b a)"}).empty());
    REQUIRE(plan_texts(sp, qp::bfs_plan(sp, both_table, {"(on a b)"})) ==
            std::vector<std::string>{"(pick-up a)", "(stack a b)"});

    REQUIRE_THROWS_AS(qp::bfs_plan(sp, both_table, {"(on a b)", "(on b a)"}),
                      std::runtime_error);
    State bogus = full_state(sp, {"(holding a)", "(handempty)"});
    REQUIRE_THROWS_AS(qp::bfs_plan(sp, bogus, {"(on a b)"}), std::invalid_argument);
    REQUIRE_THROWS_AS(qp::bfs_plan(sp, both_table, {}), std::invalid_argument);
}

TEST_CASE("bfs_plan equals the iterative-deepening oracle exactly") {
    StateSpace sp = space3();
    oracle::BlocksOracle orc = oracle_for(sp);
    REQUIRE(orc.n_atoms() == sp.n_atoms());
    REQUIRE(orc.idx_on(1, 0) == id(sp, "(on b a)"));
    REQUIRE(orc.idx_ontable(2) == id(sp, "(ontable c)"));

    const std::vector<std::vector<std::string>> goals = {
        {"(on a b)"},
        {"(on a b)", "(on b c)"},
        {"(handempty)", "(ontable a)"},
    };
    for (const auto& goal : goals) {
        std::uint64_t goal_mask = qp::atom_mask(sp, goal);
        for (State s : sp.valid_states()) {
            Plan got = qp::bfs_plan(sp, s, goal);
            auto want = orc.iddfs(s, goal_mask, 12);
            REQUIRE(want.has_value());
            REQUIRE(plan_triples(got) == *want);
        }
    }
}

TEST_CASE("consistent_states and streaming enumeration") {
    StateSpace sp = space2();
    REQUIRE(qp::consistent_states(sp, PartialState{}).size() == 5);

    State b_on_a = full_state(sp, {"(clear b)", "(handempty)", "(on b a)", "(ontable a)"});
    PartialState full;
    for (int k = 0; k < sp.n_atoms(); ++k) full.set(k, (b_on_a >> k) & 1);
    REQUIRE(qp::consistent_states(sp, full) == std::vector<State>{b_on_a});

    PartialState clash = partial_of(sp, {{"(holding a)", true}, {"(handempty)", true}});
    REQUIRE(qp::consistent_states(sp, clash).empty());

    StateSpace sp3 = space3();
    std::mt19937_64 rng(20240817);
    for (int round = 0; round < 50; ++round) {
        PartialState p = random_partial(sp3, rng);
        std::vector<State> streamed;
        qp::for_each_consistent_state(sp3, p,
                                      [&](State s) { streamed.push_back(s); });
        REQUIRE(streamed == qp::consistent_states(sp3, p));
    }
}

TEST_CASE("regress pinned results") {
    StateSpace sp = space2();
    Action stack_ab{ActionKind::stack, 0, 1};

    auto r = qp::regress(sp, partial_of(sp, {{"(on a b)", true}}), stack_ab);
    REQUIRE(r.has_value());
    REQUIRE(*r == partial_of(sp, {{"(holding a)", true}, {"(clear b)", true}}));

    REQUIRE_FALSE(
        qp::regress(sp, partial_of(sp, {{"(holding a)", true}}), stack_ab).has_value());
    REQUIRE_FALSE(
        qp::regress(sp, partial_of(sp, {{"(on a b)", false}}), stack_ab).has_value());

    // A decided-false atom the action deletes is guaranteed and drops out.
    auto r2 = qp::regress(
        sp, partial_of(sp, {{"(on a b)", true}, {"(holding a)", false}}), stack_ab);
    REQUIRE(r2.has_value());
    REQUIRE(*r2 == partial_of(sp, {{"(holding a)", true}, {"(clear b)", true}}));
}

TEST_CASE("regression is exactly the weakest precondition on valid states") {
    StateSpace sp = space3();
    std::mt19937_64 rng(77);
    const auto& actions = sp.actions();
    for (int round = 0; round < 200; ++round) {
        PartialState p = random_partial(sp, rng);
        const Action& a = actions[rng() % actions.size()];
        auto r = qp::regress(sp, p, a);
        for (State s : sp.valid_states()) {
            bool forward = qp::applicable(sp, s, a) &&
                           qp::consistent(qp::apply_action(sp, s, a), p);
            bool backward = r.has_value() && qp::consistent(s, *r);
            REQUIRE(forward == backward);
        }
    }
}

TEST_CASE("two-block frontier for goal (on b a) is exact") {
    StateSpace sp = space2();
    const std::vector<std::string> goal = {"(on b a)"};

    qp::Frontier fr = qp::well_specified_frontier(sp, goal, 14);
    REQUIRE_FALSE(fr.truncated);
    REQUIRE(fr.entries.size() == 5);

    std::vector<std::size_t> sizes;
    for (const auto& e : fr.entries) sizes.push_back(e.plan.size());
    REQUIRE(std::is_sorted(sizes.begin(), sizes.end()));

    std::map<PartialState, std::vector<std::string>> got;
    for (const auto& e : fr.entries) got[e.partial] = plan_texts(sp, e.plan);

    std::map<PartialState, std::vector<std::string>> want;
    want[partial_of(sp, {{"(on b a)", true}})] = {};
    want[partial_of(sp, {{"(clear a)", true}, {"(holding b)", true}})] = {"(stack b a)"};
    want[partial_of(sp, {{"(clear a)", true},
                         {"(clear b)", true},
                         {"(handempty)", true},
                         {"(ontable b)", true}})] = {"(pick-up b)", "(stack b a)"};
    want[partial_of(sp, {{"(clear b)", true},
                         {"(holding a)", true},
                         {"(ontable b)", true}})] = {"(put-down a)", "(pick-up b)",
                                                     "(stack b a)"};
    want[partial_of(sp, {{"(clear a)", true},
                         {"(handempty)", true},
                         {"(on a b)", true},
                         {"(ontable b)", true}})] = {"(unstack a b)", "(put-down a)",
                                                     "(pick-up b)", "(stack b a)"};
    REQUIRE(got == want);

    // The depth-1 entry fixes the fully specified pre-goal state.
    PartialState d1 = partial_of(sp, {{"(clear a)", true}, {"(holding b)", true}});
    State pre_goal = full_state(sp, {"(clear a)", "(holding b)", "(ontable a)"});
    REQUIRE(qp::consistent_states(sp, d1) == std::vector<State>{pre_goal});

    // Defining property replayed with the planner for every entry.
    for (const auto& e : fr.entries) {
        auto states = qp::consistent_states(sp, e.partial);
        REQUIRE_FALSE(states.empty());
        for (State s : states) REQUIRE(qp::bfs_plan(sp, s, goal) == e.plan);
    }

    qp::Frontier again = qp::well_specified_frontier(sp, goal, 14);
    REQUIRE(again.entries == fr.entries);
    REQUIRE(again.truncated == fr.truncated);
}

TEST_CASE("frontier depth caps and exact truncation reporting") {
    StateSpace sp = space2();
    const std::vector<std::string> goal = {"(on b a)"};
    const std::vector<std::tuple<int, std::size_t, bool>> table = {
        {0, 1, true}, {1, 2, true}, {3, 4, true}, {4, 5, false}, {14, 5, false}};
    for (const auto& [cap, count, truncated] : table) {
        qp::Frontier fr = qp::well_specified_frontier(sp, goal, cap);
        REQUIRE(fr.entries.size() == count);
        REQUIRE(fr.truncated == truncated);
    }
    REQUIRE(qp::well_specified_frontier(sp, goal, 0).entries[0].plan.empty());

    qp::Frontier none = qp::well_specified_frontier(sp, {"(on a b)", "(on b a)"}, 5);
    REQUIRE(none.entries.empty());
    REQUIRE_FALSE(none.truncated);
}

TEST_CASE("frontier defining property on three blocks") {
    StateSpace sp = space3();
    oracle::BlocksOracle orc = oracle_for(sp);
    for (const std::vector<std::string>& goal :
         {std::vector<std::string>{"(on a b)"},
          std::vector<std::string>{"(on a b)", "(on b c)"}}) {
        qp::Frontier fr = qp::well_specified_frontier(sp, goal, 14);
        REQUIRE_FALSE(fr.truncated);
        REQUIRE_FALSE(fr.entries.empty());

        std::set<PartialState> distinct;
        std::uint64_t goal_mask = qp::atom_mask(sp, goal);
        for (const auto& e : fr.entries) {
            REQUIRE(distinct.insert(e.partial).second);
            auto states = qp::consistent_states(sp, e.partial);
            REQUIRE_FALSE(states.empty());
            for (State s : states) {
                REQUIRE(qp::bfs_plan(sp, s, goal) == e.plan);
                auto want = orc.iddfs(s, goal_mask, 12);
                REQUIRE(want.has_value());
                REQUIRE(want->size() == e.plan.size());
            }
        }
    }
}

TEST_CASE("two-block task generation is exact") {
    StateSpace sp = space2();
    qp::GenResult gen = qp::generate_tasks(sp, {"(on b a)"}, 14);
    REQUIRE_FALSE(gen.truncated);
    REQUIRE(gen.tasks.size() == 11);

    std::set<PartialState> partials;
    for (const auto& t : gen.tasks) REQUIRE(partials.insert(t.known).second);

    std::vector<const qp::PlanningGenTask*> open;
    for (const auto& t : gen.tasks)
        if (!t.well_specified) open.push_back(&t);
    REQUIRE(open.size() == 1);

    const qp::PlanningGenTask& pick = *open[0];
    REQUIRE(pick.known ==
            partial_of(sp, {{"(clear b)", true}, {"(ontable b)", true}}));
    REQUIRE(pick.correct_atoms ==
            std::vector<int>{id(sp, "(clear a)"), id(sp, "(handempty)"),
                             id(sp, "(holding a)"), id(sp, "(ontable a)")});
    REQUIRE(pick.depth_d == 3);
    REQUIRE(pick.plans.size() == 2);
    REQUIRE(plan_texts(sp, pick.plans[0]) ==
            std::vector<std::string>{"(pick-up b)", "(stack b a)"});
    REQUIRE(plan_texts(sp, pick.plans[1]) ==
            std::vector<std::string>{"(put-down a)", "(pick-up b)", "(stack b a)"});

    // Removing (clear b) from the depth-2 entry matches the deeper entry that
    // additionally fixes (on a b) true, so that salient atom is set false.
    PartialState falsified = partial_of(sp, {{"(clear a)", true},
                                             {"(handempty)", true},
                                             {"(ontable b)", true},
                                             {"(on a b)", false}});
    REQUIRE(partials.count(falsified) == 1);

    // The same candidate reached from the depth-4 entry is deduplicated, so
    // the variant that would falsify (clear b) instead must not appear.
    PartialState alternative = partial_of(sp, {{"(clear a)", true},
                                               {"(handempty)", true},
                                               {"(ontable b)", true},
                                               {"(clear b)", false}});
    REQUIRE(partials.count(alternative) == 0);

    for (const auto& t : gen.tasks) {
        std::size_t max_len = 0;
        for (const auto& plan : t.plans) max_len = std::max(max_len, plan.size());
        REQUIRE(t.depth_d == static_cast<int>(max_len));
        REQUIRE(t.well_specified == (t.plans.size() == 1));
        REQUIRE(t.well_specified == t.correct_atoms.empty());
    }

    qp::GenResult again = qp::generate_tasks(sp, {"(on b a)"}, 14);
    REQUIRE(again.tasks == gen.tasks);
}

TEST_CASE("generation and verification close over each other on three blocks") {
    StateSpace sp = space3();
    const std::vector<std::string> goal = {"(on a b)"};
    qp::GenResult gen = qp::generate_tasks(sp, goal, 14);
    REQUIRE_FALSE(gen.truncated);

    int n_open = 0, n_well = 0;
    for (const auto& t : gen.tasks) {
        auto states = qp::consistent_states(sp, t.known);
        REQUIRE_FALSE(states.empty());

        std::set<Plan> seen_plans;
        for (State s : states) seen_plans.insert(qp::bfs_plan(sp, s, goal));
        REQUIRE(seen_plans.size() == t.plans.size());
        REQUIRE(std::set<Plan>(t.plans.begin(), t.plans.end()) == seen_plans);

        if (t.well_specified) {
            ++n_well;
            REQUIRE(t.plans.size() == 1);
        } else {
            ++n_open;
            REQUIRE(t.plans.size() == 2);
            REQUIRE_FALSE(t.correct_atoms.empty());
        }

        for (int k = 0; k < sp.n_atoms(); ++k) {
            if (t.known.decided(k)) continue;
            bool correct = std::binary_search(t.correct_atoms.begin(),
                                              t.correct_atoms.end(), k);
            auto verdict = qp::verify_atom_sufficiency(sp, t.known, goal, k);
            if (correct)
                REQUIRE(verdict == qp::AtomVerdict::disambiguates);
            else
                REQUIRE(verdict != qp::AtomVerdict::disambiguates);
        }
        REQUIRE(t.depth_d <= 14);
    }
    REQUIRE(n_open >= 1);
    REQUIRE(n_well >= 1);
}

TEST_CASE("verify_atom_sufficiency fixtures") {
    StateSpace sp = space2();
    const std::vector<std::string> goal = {"(on b a)"};

    PartialState open_task =
        partial_of(sp, {{"(clear b)", true}, {"(ontable b)", true}});
    REQUIRE(qp::verify_atom_sufficiency(sp, open_task, goal, id(sp, "(holding a)")) ==
            qp::AtomVerdict::disambiguates);
    REQUIRE(qp::verify_atom_sufficiency(sp, open_task, goal, id(sp, "(on b a)")) !=
            qp::AtomVerdict::disambiguates);
    REQUIRE_THROWS_AS(
        qp::verify_atom_sufficiency(sp, open_task, goal, id(sp, "(clear b)")),
        std::invalid_argument);

    // An axiom-entailed atom has one empty branch; the populated branch has a
    // single plan, so the question is redundant.
    PartialState pre_goal =
        partial_of(sp, {{"(clear a)", true}, {"(holding b)", true}});
    REQUIRE(qp::verify_atom_sufficiency(sp, pre_goal, goal, id(sp, "(handempty)")) ==
            qp::AtomVerdict::redundant);

    // On a two-plan task an axiom-refuted atom leaves the populated branch
    // holding both plans, which answers nothing.
    REQUIRE(qp::verify_atom_sufficiency(sp, open_task, goal, id(sp, "(on a b)")) ==
            qp::AtomVerdict::insufficient);
}

TEST_CASE("five-block worked instance classifies into two plans") {
    StateSpace sp = space5();
    std::vector<std::pair<std::string, bool>> known;
    for (const char* text : kE2KnownFacts) known.push_back({text, true});
    PartialState partial = partial_of(sp, known);
    std::vector<std::string> goal(std::begin(kE2GoalAtoms), std::end(kE2GoalAtoms));

    State d_on_table = full_state(
        sp, {"(clear a)", "(clear c)", "(handempty)", "(on a e)", "(on b d)",
             "(on e b)", "(ontable c)", "(ontable d)"});
    State d_on_c = full_state(sp, {"(clear a)", "(handempty)", "(on a e)", "(on b d)",
                                   "(on d c)", "(on e b)", "(ontable c)"});
    REQUIRE(axioms_hold(sp, d_on_table));
    REQUIRE(axioms_hold(sp, d_on_c));
    REQUIRE(qp::consistent_states(sp, partial) ==
            std::vector<State>{std::min(d_on_table, d_on_c),
                               std::max(d_on_table, d_on_c)});

    qp::PartialClassification cls = qp::classify_partial(sp, partial, goal);
    REQUIRE(cls.realizable);
    REQUIRE(cls.plans.size() == 2);
    REQUIRE(cls.plans[0].size() == 8);
    REQUIRE(cls.plans[1].size() == 10);

    std::vector<int> want_diff = {id(sp, "(clear c)"), id(sp, "(on d c)"),
                                  id(sp, "(ontable d)")};
    std::sort(want_diff.begin(), want_diff.end());
    REQUIRE(cls.differentiating == want_diff);

    REQUIRE(plan_texts(sp, qp::bfs_plan(sp, d_on_table, goal)) ==
            std::vector<std::string>{"(unstack a e)", "(put-down a)", "(unstack e b)",
                                     "(put-down e)", "(unstack b d)", "(stack b a)",
                                     "(pick-up c)", "(stack c b)"});

    oracle::BlocksOracle orc = oracle_for(sp);
    std::uint64_t goal_mask = qp::atom_mask(sp, goal);
    auto fast = orc.iddfs(d_on_table, goal_mask, 12);
    auto slow = orc.iddfs(d_on_c, goal_mask, 12);
    REQUIRE(fast.has_value());
    REQUIRE(slow.has_value());
    REQUIRE(fast->size() == 8);
    REQUIRE(slow->size() == 10);

    auto task = qp::task_from_partial(sp, partial, goal);
    REQUIRE(task.has_value());
    REQUIRE_FALSE(task->well_specified);
    REQUIRE(task->correct_atoms == want_diff);
    REQUIRE(task->depth_d == 10);

    for (int k = 0; k < sp.n_atoms(); ++k) {
        if (partial.decided(k)) continue;
        bool correct =
            std::binary_search(want_diff.begin(), want_diff.end(), k);
        auto verdict = qp::verify_atom_sufficiency(sp, partial, goal, k);
        if (correct)
            REQUIRE(verdict == qp::AtomVerdict::disambiguates);
        else
            REQUIRE(verdict != qp::AtomVerdict::disambiguates);
    }
}

TEST_CASE("classify_partial discards three-way splits and empty sets") {
    StateSpace sp = space2();
    qp::PartialClassification everything =
        qp::classify_partial(sp, PartialState{}, {"(on b a)"});
    REQUIRE(everything.realizable);
    REQUIRE(everything.plans.size() > 2);
    REQUIRE(everything.differentiating.empty());
    REQUIRE_FALSE(qp::task_from_partial(sp, PartialState{}, {"(on b a)"}).has_value());

    PartialState clash = partial_of(sp, {{"(holding a)", true}, {"(holding b)", true}});
    qp::PartialClassification none = qp::classify_partial(sp, clash, {"(on b a)"});
    REQUIRE_FALSE(none.realizable);
    REQUIRE_FALSE(qp::task_from_partial(sp, clash, {"(on b a)"}).has_value());
}

TEST_CASE("parse_pddl reads the four-op domain and a problem") {
    std::string problem =
        "(define (problem restack)\n"
        "  (:domain blocks)\n"
        "  (:objects e d c b a - block)\n"
        "  (:init (clear a) (handempty) (on a e) (on b d) (on e b)\n"
        "         (ontable c) (ontable d) (clear c))\n"
        "  (:goal (and (on b a) (on c b) (ontable a))))\n";
    qp::ParsedProblem parsed = qp::parse_pddl(kDomainPddl, problem);
    REQUIRE(parsed.blocks == std::vector<std::string>{"a", "b", "c", "d", "e"});
    REQUIRE(parsed.init ==
            std::vector<std::string>{"(clear a)", "(clear c)", "(handempty)",
                                     "(on a e)", "(on b d)", "(on e b)",
                                     "(ontable c)", "(ontable d)"});
    REQUIRE(parsed.goal ==
            std::vector<std::string>{"(on b a)", "(on c b)", "(ontable a)"});

    StateSpace sp(parsed.blocks);
    REQUIRE(sp.n_atoms() == 36);

    // Single-atom goals need no (and ...) wrapper, and case folds.
    std::string tiny =
        "(define (problem tiny) (:domain BLOCKS) (:objects A B)\n"
        "  (:init (ontable a) (ontable b) (clear a) (clear b) (handempty))\n"
        "  (:goal (on a b)))";
    REQUIRE(qp::parse_pddl(kDomainPddl, tiny).goal ==
            std::vector<std::string>{"(on a b)"});
}

TEST_CASE("parse_pddl rejects malformed input") {
    const std::string ok_problem =
        "(define (problem p) (:domain blocks) (:objects a b)\n"
        "  (:init (ontable a) (ontable b) (clear a) (clear b) (handempty))\n"
        "  (:goal (on a b)))";

    auto line_of = [](const auto& fn) {
        try {
            fn();
        } catch (const qf::ParseError& e) {
            return e.line();
        }
        return -1;
    };

    std::string empty_goal =
        "(define (problem p) (:domain blocks) (:objects a b)\n"
        "  (:init (ontable a))\n"
        "  (:goal (and)))";
    REQUIRE(line_of([&] { qp::parse_pddl(kDomainPddl, empty_goal); }) == 3);

    std::string renamed = kDomainPddl;
    auto at = renamed.find("domain BLOCKS");
    renamed.replace(at, std::string("domain BLOCKS").size(), "domain LOGISTICS");
    REQUIRE_THROWS_AS(qp::parse_pddl(renamed, ok_problem), qf::ParseError);

    std::string adl = kDomainPddl;
    at = adl.find(":strips");
    adl.replace(at, 7, ":adl");
    REQUIRE_THROWS_AS(qp::parse_pddl(adl, ok_problem), qf::ParseError);

    std::string extra_pred = kDomainPddl;
    at = extra_pred.find("(handempty)");
    extra_pred.insert(at, "(red ?x - block) ");
    REQUIRE_THROWS_AS(qp::parse_pddl(extra_pred, ok_problem), qf::ParseError);

    std::string weak_pick = kDomainPddl;
    at = weak_pick.find("(clear ?x) (ontable ?x) (handempty)");
    weak_pick.replace(at, std::string("(clear ?x) (ontable ?x) (handempty)").size(),
                      "(clear ?x) (ontable ?x)");
    REQUIRE_THROWS_AS(qp::parse_pddl(weak_pick, ok_problem), qf::ParseError);

    for (const char* bad : {
             "(define (problem p) (:domain logistics) (:objects a b)\n"
             "  (:init (ontable a)) (:goal (on a b)))",
             "(define (problem p) (:domain blocks) (:objects a a)\n"
             "  (:init (ontable a)) (:goal (on a b)))",
             "(define (problem p) (:domain blocks) (:objects a b)\n"
             "  (:init (on a a)) (:goal (on a b)))",
             "(define (problem p) (:domain blocks) (:objects a b)\n"
             "  (:init (ontable q)) (:goal (on a b)))",
             "(define (problem p) (:domain blocks) (:objects a b)\n"
             "  (:init (red a)) (:goal (on a b)))",
             "(define (problem p) (:domain blocks) (:objects)\n"
             "  (:init) (:goal (on a b)))",
             "(define (problem p) (:domain blocks) (:objects a b)\n"
             "  (:init (ontable a)) (:goal (on a b))",
         })
        REQUIRE_THROWS_AS(qp::parse_pddl(kDomainPddl, bad), qf::ParseError);
}

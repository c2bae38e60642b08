#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qf/core.hpp"

namespace qf::logic {

struct Literal {
    int var = 0;
    bool pos = true;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Canonically ordered (var ascending, negative before positive), distinct vars.
using Conjunction = std::vector<Literal>;
using Clause = std::vector<Literal>;

struct Vocabulary {
    std::vector<std::string> names;  // sorted lexicographically; index = var id
    std::map<std::string, int> index;

    int id(const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end()) throw std::invalid_argument("unknown attribute: " + name);
        return it->second;
    }
    bool has(const std::string& name) const { return index.count(name) > 0; }
};

struct Rule {
    std::vector<Literal> premises;  // canonically ordered
    Literal conclusion;
};

struct RuleSet {
    Vocabulary vocab;
    std::vector<Rule> rules;
};

struct RuleSpec {
    std::vector<std::pair<std::string, bool>> premises;
    std::pair<std::string, bool> conclusion;
};

inline RuleSet make_rule_set(const std::vector<RuleSpec>& specs) {
    RuleSet rs;
    std::set<std::string> names;
    for (const auto& s : specs) {
        for (const auto& p : s.premises) names.insert(p.first);
        names.insert(s.conclusion.first);
    }
    rs.vocab.names.assign(names.begin(), names.end());
    for (std::size_t i = 0; i < rs.vocab.names.size(); ++i)
        rs.vocab.index[rs.vocab.names[i]] = static_cast<int>(i);

    for (const auto& s : specs) {
        Rule r;
        if (s.premises.empty()) throw std::invalid_argument("rule with no premises");
        std::set<int> seen;
        for (const auto& p : s.premises) {
            int v = rs.vocab.id(p.first);
            if (!seen.insert(v).second)
                throw std::invalid_argument("duplicate premise attribute: " + p.first);
            r.premises.push_back({v, p.second});
        }
        r.conclusion = {rs.vocab.id(s.conclusion.first), s.conclusion.second};
        if (seen.count(r.conclusion.var))
            throw std::invalid_argument("rule concludes one of its own premises: " +
                                        s.conclusion.first);
        std::sort(r.premises.begin(), r.premises.end());
        rs.rules.push_back(std::move(r));
    }
    return rs;
}

namespace detail {

inline bool valid_attribute_token(const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Grammar: "If Alice is A [and B ...], then Alice is [not] C." with plain
// positive premises. Blank lines are skipped; errors carry 1-based line numbers.
inline RuleSet parse_rules(const std::string& text) {
    std::vector<RuleSpec> specs;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        line = detail::trim(line);
        if (line.empty()) continue;

        static const std::string kPrefix = "If Alice is ";
        static const std::string kThen = ", then Alice is ";
        if (line.rfind(kPrefix, 0) != 0)
            throw ParseError(line_no, "rule must start with \"If Alice is\"");
        std::size_t then_at = line.find(kThen);
        if (then_at == std::string::npos)
            throw ParseError(line_no, "rule must contain \", then Alice is\"");
        if (line.back() != '.') throw ParseError(line_no, "rule must end with a period");

        std::string premise_part = line.substr(kPrefix.size(), then_at - kPrefix.size());
        std::string concl_part =
            line.substr(then_at + kThen.size(),
                        line.size() - (then_at + kThen.size()) - 1);

        RuleSpec spec;
        std::set<std::string> seen;
        std::size_t p = 0;
        while (true) {
            std::size_t amp = premise_part.find(" and ", p);
            std::string tok = premise_part.substr(p, amp == std::string::npos ? amp : amp - p);
            if (tok.rfind("not ", 0) == 0 || tok == "not")
                throw ParseError(line_no, "premises may not be negated");
            if (!detail::valid_attribute_token(tok))
                throw ParseError(line_no, "bad premise attribute: \"" + tok + "\"");
            if (!seen.insert(tok).second)
                throw ParseError(line_no, "duplicate premise attribute: " + tok);
            spec.premises.push_back({tok, true});
            if (amp == std::string::npos) break;
            p = amp + 5;
        }

        bool concl_pos = true;
        if (concl_part.rfind("not ", 0) == 0) {
            concl_pos = false;
            concl_part = concl_part.substr(4);
        }
        if (!detail::valid_attribute_token(concl_part))
            throw ParseError(line_no, "bad conclusion attribute: \"" + concl_part + "\"");
        if (seen.count(concl_part))
            throw ParseError(line_no, "rule concludes one of its own premises");
        spec.conclusion = {concl_part, concl_pos};
        specs.push_back(std::move(spec));
    }
    return make_rule_set(specs);
}

inline std::string rule_sentence(const Vocabulary& vocab, const Rule& r) {
    std::string s = "If Alice is ";
    for (std::size_t i = 0; i < r.premises.size(); ++i) {
        if (i) s += " and ";
        if (!r.premises[i].pos) s += "not ";
        s += vocab.names[r.premises[i].var];
    }
    s += ", then Alice is ";
    if (!r.conclusion.pos) s += "not ";
    s += vocab.names[r.conclusion.var];
    s += ".";
    return s;
}

inline std::string fact_sentence(const Vocabulary& vocab, Literal l) {
    return std::string("Alice is ") + (l.pos ? "" : "not ") + vocab.names[l.var] + ".";
}

inline Clause to_clause(const Rule& r) {
    Clause c;
    for (auto p : r.premises) c.push_back({p.var, !p.pos});
    c.push_back(r.conclusion);
    std::sort(c.begin(), c.end());
    return c;
}

struct ClauseSet {
    int n_vars = 0;
    std::vector<Clause> clauses;
};

inline ClauseSet to_clauses(const RuleSet& rs) {
    ClauseSet cs;
    cs.n_vars = static_cast<int>(rs.vocab.names.size());
    for (const auto& r : rs.rules) cs.clauses.push_back(to_clause(r));
    return cs;
}

struct InferResult {
    bool contradiction = false;
    std::vector<Literal> literals;  // canonical order, includes the assumptions
    std::vector<std::int8_t> vals;  // -1 unknown, 0 false, 1 true

    std::optional<bool> value(int var) const {
        if (var < 0 || var >= static_cast<int>(vals.size()) || vals[var] < 0)
            return std::nullopt;
        return vals[var] == 1;
    }
};

// Unit propagation to fixpoint over the clause translations.
inline InferResult infer(const ClauseSet& cs, const std::vector<Literal>& assumptions) {
    InferResult res;
    res.vals.assign(cs.n_vars, -1);

    std::vector<std::vector<int>> occ_pos(cs.n_vars), occ_neg(cs.n_vars);
    for (int ci = 0; ci < static_cast<int>(cs.clauses.size()); ++ci)
        for (auto l : cs.clauses[ci]) (l.pos ? occ_pos : occ_neg)[l.var].push_back(ci);

    std::vector<int> nonfalse(cs.clauses.size());
    std::vector<char> satisfied(cs.clauses.size(), 0);
    for (std::size_t ci = 0; ci < cs.clauses.size(); ++ci)
        nonfalse[ci] = static_cast<int>(cs.clauses[ci].size());

    std::vector<Literal> queue = assumptions;
    std::size_t head = 0;
    while (head < queue.size()) {
        Literal l = queue[head++];
        if (res.vals[l.var] >= 0) {
            if (res.vals[l.var] != (l.pos ? 1 : 0)) {
                res.contradiction = true;
                break;
            }
            continue;
        }
        res.vals[l.var] = l.pos ? 1 : 0;
        res.literals.push_back(l);

        for (int ci : (l.pos ? occ_pos : occ_neg)[l.var]) satisfied[ci] = 1;
        for (int ci : (l.pos ? occ_neg : occ_pos)[l.var]) {
            if (--nonfalse[ci] > 1 || satisfied[ci]) continue;
            if (nonfalse[ci] == 0) {
                res.contradiction = true;
                break;
            }
            for (auto u : cs.clauses[ci])  // single non-false literal left
                if (res.vals[u.var] < 0) {
                    queue.push_back(u);
                    break;
                }
        }
        if (res.contradiction) break;
    }
    std::sort(res.literals.begin(), res.literals.end());
    return res;
}

inline InferResult infer(const RuleSet& rs, const std::vector<Literal>& assumptions) {
    return infer(to_clauses(rs), assumptions);
}

// Keeps only conjunctions not containing another member as a subset.
inline std::vector<Conjunction> subsumption_reduce(std::vector<Conjunction> conjs) {
    std::sort(conjs.begin(), conjs.end(),
              [](const Conjunction& a, const Conjunction& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    std::vector<Conjunction> kept;
    for (const auto& c : conjs) {
        bool subsumed = false;
        for (const auto& k : kept)
            if (std::includes(c.begin(), c.end(), k.begin(), k.end())) {
                subsumed = true;
                break;
            }
        if (!subsumed) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

struct DnfEntry {
    Conjunction literals;
    int depth = 0;
};

struct Dnf {
    std::vector<DnfEntry> entries;  // mutually non-subsuming, canonically ordered
    bool depth_cap_hit = false;
    bool width_cap_hit = false;
    bool frontier_cap_hit = false;
};

namespace detail {

inline std::uint64_t conj_signature(const Conjunction& c) {
    std::uint64_t m = 0;
    for (auto l : c) m |= 1ull << ((static_cast<unsigned>(l.var) * 2 + (l.pos ? 1 : 0)) % 64);
    return m;
}

// Layered regression search shared by backward_dnf and solve_backward. Each
// step replaces any combination of a frontier conjunction's literals with the
// premises of clauses concluding them (a literal may also stay).
class BackwardSearch {
public:
    BackwardSearch(const ClauseSet& cs, Literal target, int width_cap,
                   std::size_t frontier_cap)
        : cs_(cs), target_(target), width_cap_(width_cap), frontier_cap_(frontier_cap),
          occ_pos_(cs.n_vars), occ_neg_(cs.n_vars) {
        for (int ci = 0; ci < static_cast<int>(cs_.clauses.size()); ++ci)
            for (auto l : cs_.clauses[ci]) (l.pos ? occ_pos_ : occ_neg_)[l.var].push_back(ci);
        Conjunction c = {target};
        if (consistent_closure(c)) {  // the target itself may be unrealizable
            kept_.push_back({c, 0});
            sigs_.push_back(conj_signature(c));
            frontier_.push_back(c);
        }
    }

    // Expands one depth layer; returns the conjunctions newly kept at that depth.
    // Returns false when the frontier is exhausted or a cap fired.
    bool step() {
        if (frontier_.empty() || frontier_cap_hit) return false;
        ++depth_;
        std::vector<Conjunction> next;
        for (const auto& c : frontier_) {
            expand(c, [&](Conjunction&& cand) {
                if (keep(std::move(cand))) next.push_back(kept_.back().literals);
                return kept_.size() <= frontier_cap_;
            });
            if (kept_.size() > frontier_cap_) {
                frontier_cap_hit = true;
                break;
            }
        }
        frontier_ = std::move(next);
        return !frontier_.empty() && !frontier_cap_hit;
    }

    // True if expanding one more layer would keep at least one new conjunction.
    bool more_available() {
        for (const auto& c : frontier_) {
            bool found = false;
            expand(c, [&](Conjunction&& cand) {
                if (!subsumed(cand)) {
                    bool ok = true;
                    for (std::size_t i = 1; i < cand.size(); ++i)
                        if (cand[i - 1].var == cand[i].var) ok = false;
                    if (ok && consistent_closure(cand)) {
                        found = true;
                        return false;
                    }
                }
                return true;
            });
            if (found) return true;
        }
        return false;
    }

    int depth() const { return depth_; }
    const std::vector<DnfEntry>& kept() const { return kept_; }
    bool width_cap_hit = false;
    bool frontier_cap_hit = false;

private:
    template <typename Fn>
    void expand(const Conjunction& c, Fn&& emit) {
        // options[i]: stay (empty marker) plus one premise set per concluding clause
        std::vector<std::vector<const Clause*>> options(c.size());
        bool any = false;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const auto& occ = (c[i].pos ? occ_pos_ : occ_neg_)[c[i].var];
            for (int ci : occ) options[i].push_back(&cs_.clauses[ci]);
            any = any || !options[i].empty();
        }
        if (!any) return;
        std::vector<int> choice(c.size(), -1);  // -1 = stay, else clause option index
        bool keep_going = true;
        enumerate(c, options, choice, 0, false, emit, keep_going);
    }

    template <typename Fn>
    void enumerate(const Conjunction& c, const std::vector<std::vector<const Clause*>>& options,
                   std::vector<int>& choice, std::size_t i, bool expanded_any, Fn&& emit,
                   bool& keep_going) {
        if (!keep_going) return;
        if (i == c.size()) {
            if (!expanded_any) return;
            Conjunction out;
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (choice[k] < 0) {
                    out.push_back(c[k]);
                } else {
                    for (auto t : *options[k][choice[k]])
                        if (t != c[k]) out.push_back({t.var, !t.pos});
                }
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            for (std::size_t k = 1; k < out.size(); ++k)
                if (out[k - 1].var == out[k].var) return;  // internally inconsistent
            for (auto l : out)
                if (l.var == target_.var && l.pos != target_.pos) return;
            if (static_cast<int>(out.size()) > width_cap_) {
                width_cap_hit = true;
                return;
            }
            keep_going = emit(std::move(out));
            return;
        }
        choice[i] = -1;
        enumerate(c, options, choice, i + 1, expanded_any, emit, keep_going);
        for (int o = 0; keep_going && o < static_cast<int>(options[i].size()); ++o) {
            choice[i] = o;
            enumerate(c, options, choice, i + 1, true, emit, keep_going);
        }
        choice[i] = -1;
    }

    bool subsumed(const Conjunction& c) const {
        std::uint64_t sig = conj_signature(c);
        for (std::size_t i = 0; i < kept_.size(); ++i) {
            if ((sigs_[i] & ~sig) != 0) continue;
            const auto& k = kept_[i].literals;
            if (k.size() <= c.size() && std::includes(c.begin(), c.end(), k.begin(), k.end()))
                return true;
        }
        return false;
    }

    bool consistent_closure(const Conjunction& c) const {
        auto r = infer(cs_, c);
        return !r.contradiction;
    }

    bool keep(Conjunction&& c) {
        if (subsumed(c)) return false;
        if (!consistent_closure(c)) return false;
        std::uint64_t sig = conj_signature(c);
        // drop previously kept conjunctions that the new one subsumes
        for (std::size_t i = kept_.size(); i-- > 0;) {
            if ((sig & ~sigs_[i]) != 0) continue;
            const auto& k = kept_[i].literals;
            if (c.size() <= k.size() && std::includes(k.begin(), k.end(), c.begin(), c.end())) {
                kept_.erase(kept_.begin() + i);
                sigs_.erase(sigs_.begin() + i);
            }
        }
        kept_.push_back({std::move(c), depth_});
        sigs_.push_back(sig);
        return true;
    }

    const ClauseSet& cs_;
    Literal target_;
    int width_cap_;
    std::size_t frontier_cap_;
    std::vector<std::vector<int>> occ_pos_, occ_neg_;
    std::vector<DnfEntry> kept_;
    std::vector<std::uint64_t> sigs_;
    std::vector<Conjunction> frontier_;
    int depth_ = 0;
};

}  // namespace detail

inline Dnf backward_dnf(const RuleSet& rs, Literal target, int depth_cap, int width_cap,
                        std::size_t frontier_cap = 200000) {
    auto cs = to_clauses(rs);
    detail::BackwardSearch search(cs, target, width_cap, frontier_cap);
    while (search.depth() < depth_cap) {
        if (!search.step()) break;
    }
    Dnf out;
    out.width_cap_hit = search.width_cap_hit;
    out.frontier_cap_hit = search.frontier_cap_hit;
    if (search.depth() == depth_cap && !search.frontier_cap_hit)
        out.depth_cap_hit = search.more_available();
    out.entries = search.kept();
    std::sort(out.entries.begin(), out.entries.end(), [](const DnfEntry& a, const DnfEntry& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.literals < b.literals;
    });
    return out;
}

enum class Verdict { sufficient_opposite, sufficient_same, insufficient, already_known };

struct SufficiencyCheck {
    Verdict verdict;
    std::string note;
};

inline SufficiencyCheck check_one_sufficient(const ClauseSet& cs,
                                             const std::vector<Literal>& assignment,
                                             int target, int candidate) {
    auto base = infer(cs, assignment);
    if (base.contradiction)
        return {Verdict::already_known, "assignment closure is contradictory"};
    if (base.value(target).has_value()) return {Verdict::already_known, ""};
    if (base.value(candidate).has_value())
        return {Verdict::insufficient, "candidate already decided by the assignment"};

    auto with = [&](bool pol) {
        auto a = assignment;
        a.push_back({candidate, pol});
        return infer(cs, a);
    };
    auto rt = with(true);
    auto rf = with(false);
    if (rt.contradiction || rf.contradiction)
        return {Verdict::insufficient, "contradiction in a candidate branch"};
    auto vt = rt.value(target), vf = rf.value(target);
    if (vt && vf) return {*vt != *vf ? Verdict::sufficient_opposite : Verdict::sufficient_same, ""};
    return {Verdict::insufficient, ""};
}

inline SufficiencyCheck check_one_sufficient(const RuleSet& rs,
                                             const std::vector<Literal>& assignment,
                                             int target, int candidate) {
    return check_one_sufficient(to_clauses(rs), assignment, target, candidate);
}

struct LogicProblem {
    RuleSet rules;
    std::vector<Literal> assignment;
    int target = 0;
    std::set<int> invalid_vars;
};

struct GeneratedLogicTask {
    LogicProblem problem;
    std::vector<int> sufficient_vars;  // every variable passing the sufficiency check
    std::vector<int> correct_vars;     // sufficient minus invalid
    std::vector<int> removed_vars;     // the differing variables the pair was built from
    int construction_depth = 0;
};

struct GenCaps {
    int depth_cap = 12;
    int width_cap = 16;
    std::size_t frontier_cap = 200000;
};

inline std::vector<GeneratedLogicTask> generate_tasks(const RuleSet& rs, int target,
                                                      const GenCaps& caps) {
    auto cs = to_clauses(rs);
    auto dpos = backward_dnf(rs, {target, true}, caps.depth_cap, caps.width_cap,
                             caps.frontier_cap);
    auto dneg = backward_dnf(rs, {target, false}, caps.depth_cap, caps.width_cap,
                             caps.frontier_cap);

    struct Candidate {
        int depth;
        std::set<int> removed;
    };
    std::map<Conjunction, Candidate> candidates;

    for (const auto& ei : dpos.entries) {
        for (const auto& ej : dneg.entries) {
            // find the shared variables; qualify iff exactly one flips polarity
            int x_d = -1;
            bool ok = true;
            std::size_t a = 0, b = 0;
            while (a < ei.literals.size() && b < ej.literals.size()) {
                if (ei.literals[a].var < ej.literals[b].var) ++a;
                else if (ei.literals[a].var > ej.literals[b].var) ++b;
                else {
                    if (ei.literals[a].pos != ej.literals[b].pos) {
                        if (x_d >= 0) { ok = false; break; }
                        x_d = ei.literals[a].var;
                    }
                    ++a; ++b;
                }
            }
            if (!ok || x_d < 0 || x_d == target) continue;

            Conjunction merged;
            for (auto l : ei.literals)
                if (l.var != x_d) merged.push_back(l);
            for (auto l : ej.literals)
                if (l.var != x_d) merged.push_back(l);
            std::sort(merged.begin(), merged.end());
            merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
            bool has_target = false;
            for (auto l : merged) has_target = has_target || l.var == target;
            if (has_target) continue;

            auto closure = infer(cs, merged);
            if (closure.contradiction || closure.value(target).has_value()) continue;

            int depth = std::max(ei.depth, ej.depth);
            auto it = candidates.find(merged);
            if (it == candidates.end()) {
                candidates[merged] = {depth, {x_d}};
            } else {
                it->second.depth = std::min(it->second.depth, depth);
                it->second.removed.insert(x_d);
            }
        }
    }

    struct Prepared {
        Conjunction assignment;
        InferResult closure;
        int depth;
        std::set<int> removed;
        std::vector<int> sufficient;
    };
    std::vector<Prepared> prepared;
    for (const auto& [conj, cand] : candidates) {
        Prepared p;
        p.assignment = conj;
        p.closure = infer(cs, conj);
        p.depth = cand.depth;
        p.removed = cand.removed;
        for (int v = 0; v < cs.n_vars; ++v) {
            if (v == target || p.closure.value(v).has_value()) continue;
            if (check_one_sufficient(cs, conj, target, v).verdict ==
                Verdict::sufficient_opposite)
                p.sufficient.push_back(v);
        }
        if (!p.sufficient.empty()) prepared.push_back(std::move(p));
    }

    std::vector<GeneratedLogicTask> out;
    for (const auto& p : prepared) {
        std::set<int> invalid;
        for (const auto& q : prepared) {
            if (&q == &p || q.depth >= p.depth) continue;
            bool implied = true;
            for (auto l : q.assignment)
                if (p.closure.value(l.var) != std::optional<bool>(l.pos)) {
                    implied = false;
                    break;
                }
            if (implied) invalid.insert(q.sufficient.begin(), q.sufficient.end());
        }
        // only variables that still answer the question can be marked invalid
        std::erase_if(invalid, [&](int v) {
            return std::find(p.sufficient.begin(), p.sufficient.end(), v) ==
                   p.sufficient.end();
        });

        std::vector<int> correct;
        for (int v : p.sufficient)
            if (!invalid.count(v)) correct.push_back(v);
        if (correct.empty()) continue;

        GeneratedLogicTask t;
        t.problem = {rs, p.assignment, target, invalid};
        t.sufficient_vars = p.sufficient;
        t.correct_vars = correct;
        t.removed_vars.assign(p.removed.begin(), p.removed.end());
        t.construction_depth = p.depth;
        out.push_back(std::move(t));
    }
    return out;
}

namespace detail {

inline std::size_t rand_below(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rand_below(rng, i)]);
}

}  // namespace detail

struct BruteForceOutcome {
    enum class Status { found, no_question_needed, not_one_sufficient };
    Status status = Status::not_one_sufficient;
    int var = -1;
    int guesses = 0;
};

// Random-order probing solver: tries undecided variables until one flips the
// target both ways. Invalid variables consume guesses but are never returned.
inline BruteForceOutcome solve_brute_force(const LogicProblem& p, std::uint64_t seed) {
    auto cs = to_clauses(p.rules);
    auto closure = infer(cs, p.assignment);
    if (closure.contradiction) return {BruteForceOutcome::Status::not_one_sufficient, -1, 0};
    if (closure.value(p.target).has_value())
        return {BruteForceOutcome::Status::no_question_needed, -1, 0};

    std::vector<int> pool;
    for (int v = 0; v < cs.n_vars; ++v)
        if (v != p.target && !closure.value(v).has_value()) pool.push_back(v);
    std::mt19937_64 rng(seed);
    detail::shuffle_vec(pool, rng);

    int guesses = 0;
    for (int v : pool) {
        ++guesses;
        if (p.invalid_vars.count(v)) continue;
        if (check_one_sufficient(cs, p.assignment, p.target, v).verdict ==
            Verdict::sufficient_opposite)
            return {BruteForceOutcome::Status::found, v, guesses};
    }
    return {BruteForceOutcome::Status::not_one_sufficient, -1, guesses};
}

struct BackwardOutcome {
    enum class Status { found, no_question_needed, unresolved };
    Status status = Status::unresolved;
    int var = -1;
    int depth = 0;
    std::size_t frontier_size = 0;
};

// Deepens both goal regressions one layer at a time and scans each layer for a
// conjunction with every literal decided by the assignment closure except one.
inline BackwardOutcome solve_backward(const LogicProblem& p, int depth_cap = 12,
                                      int width_cap = 16, std::size_t frontier_cap = 200000) {
    auto cs = to_clauses(p.rules);
    auto closure = infer(cs, p.assignment);
    if (closure.contradiction) return {BackwardOutcome::Status::unresolved, -1, 0, 0};
    if (closure.value(p.target).has_value())
        return {BackwardOutcome::Status::no_question_needed, -1, 0, 0};

    detail::BackwardSearch pos(cs, {p.target, true}, width_cap, frontier_cap);
    detail::BackwardSearch neg(cs, {p.target, false}, width_cap, frontier_cap);

    auto scan_depth = [&](const detail::BackwardSearch& search, int depth) -> int {
        std::vector<Conjunction> layer;
        for (const auto& e : search.kept())
            if (e.depth == depth) layer.push_back(e.literals);
        std::sort(layer.begin(), layer.end());
        for (const auto& c : layer) {
            int residual = -1;
            bool dead = false;
            for (auto l : c) {
                auto v = closure.value(l.var);
                if (!v.has_value()) {
                    if (residual >= 0) { residual = -2; break; }
                    residual = l.var;
                } else if (*v != l.pos) {
                    dead = true;
                    break;
                }
            }
            if (dead || residual < 0) continue;
            if (residual == p.target || p.invalid_vars.count(residual)) continue;
            if (check_one_sufficient(cs, p.assignment, p.target, residual).verdict ==
                Verdict::sufficient_opposite)
                return residual;
        }
        return -1;
    };

    for (int depth = 0; depth <= depth_cap; ++depth) {
        if (depth > 0) {
            if (pos.depth() < depth) pos.step();
            if (neg.depth() < depth) neg.step();
            if (pos.depth() < depth && neg.depth() < depth) break;  // both exhausted
        }
        int v = scan_depth(pos, depth);
        if (v < 0) v = scan_depth(neg, depth);
        if (v >= 0)
            return {BackwardOutcome::Status::found, v, depth,
                    pos.kept().size() + neg.kept().size()};
    }
    return {BackwardOutcome::Status::unresolved, -1, depth_cap,
            pos.kept().size() + neg.kept().size()};
}

struct RandomRuleParams {
    int n_vars = 12;
    int n_rules = 20;
    std::vector<int> premise_widths = {1, 2, 3};
    std::vector<double> width_weights = {0.35, 0.45, 0.20};
    double negated_conclusion_rate = 0.2;
};

namespace detail {

inline const std::vector<std::string>& adjective_pool() {
    static const std::vector<std::string> pool = {
        "aggressive", "amused",    "bold",     "brave",    "bright",   "calm",
        "careful",    "cautious",  "cheerful", "clever",   "curious",  "dull",
        "eager",      "elated",    "fearless", "fierce",   "friendly", "funny",
        "gentle",     "graceful",  "grumpy",   "happy",    "helpful",  "honest",
        "hopeful",    "humble",    "hungry",   "jolly",    "kind",     "lively",
        "lonely",     "loud",      "loving",   "loyal",    "lucky",    "merry",
        "messy",      "modern",    "nervous",  "noisy",    "patient",  "peaceful",
        "playful",    "polite",    "powerful", "precious", "proud",    "quiet",
        "rational",   "sensible",  "serious",  "shiny",    "silly",    "sincere",
        "sleepy",     "stubborn",  "thoughtful", "tidy",   "timid",    "tired",
        "weary",      "wise",      "witty",    "zealous"};
    return pool;
}

inline double rand_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Seeded rule-corpus generator with a configurable premise-width distribution.
// Premises are positive (grammar-compatible); conclusions may be negated.
inline RuleSet random_rule_set(const RandomRuleParams& params, std::uint64_t seed) {
    if (params.n_vars < 2) throw std::invalid_argument("need at least two attributes");
    if (params.n_vars > static_cast<int>(detail::adjective_pool().size()))
        throw std::invalid_argument("attribute pool exhausted");
    if (params.premise_widths.size() != params.width_weights.size() ||
        params.premise_widths.empty())
        throw std::invalid_argument("premise width distribution malformed");

    std::mt19937_64 rng(seed);
    std::vector<std::string> names(detail::adjective_pool().begin(),
                                   detail::adjective_pool().begin() + params.n_vars);
    double weight_total = 0;
    for (double w : params.width_weights) weight_total += w;

    std::set<std::string> seen;
    std::vector<RuleSpec> specs;
    int attempts = 0;
    while (static_cast<int>(specs.size()) < params.n_rules &&
           attempts++ < params.n_rules * 50) {
        double pick = detail::rand_unit(rng) * weight_total;
        int width = params.premise_widths.back();
        for (std::size_t i = 0; i < params.width_weights.size(); ++i) {
            if (pick < params.width_weights[i]) { width = params.premise_widths[i]; break; }
            pick -= params.width_weights[i];
        }
        width = std::min(width, params.n_vars - 1);

        std::vector<int> pool(params.n_vars);
        std::iota(pool.begin(), pool.end(), 0);
        detail::shuffle_vec(pool, rng);

        RuleSpec spec;
        for (int i = 0; i < width; ++i) spec.premises.push_back({names[pool[i]], true});
        std::sort(spec.premises.begin(), spec.premises.end());
        spec.conclusion = {names[pool[width]],
                           detail::rand_unit(rng) >= params.negated_conclusion_rate};

        std::string key;
        for (const auto& p : spec.premises) key += p.first + "&";
        key += ">" + spec.conclusion.first + (spec.conclusion.second ? "+" : "-");
        if (seen.insert(key).second) specs.push_back(std::move(spec));
    }
    return make_rule_set(specs);
}

}  // namespace qf::logic

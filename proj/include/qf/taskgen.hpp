#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qf/core.hpp"
#include "qf/gsm.hpp"
#include "qf/logic.hpp"
#include "qf/planning.hpp"

namespace qf::taskgen {

enum class PromptMode { zs, zs_cot, four_shot };

inline std::string to_string(PromptMode m) {
    switch (m) {
        case PromptMode::zs: return "zs";
        case PromptMode::zs_cot: return "zs_cot";
        case PromptMode::four_shot: return "four_shot";
    }
    throw std::invalid_argument("bad prompt mode");
}

inline PromptMode mode_from_string(const std::string& s) {
    if (s == "zs") return PromptMode::zs;
    if (s == "zs_cot") return PromptMode::zs_cot;
    if (s == "four_shot") return PromptMode::four_shot;
    throw std::invalid_argument("unknown prompt mode: " + s);
}

// The per-domain quantities every task reduces to before computing the shared
// difficulty metrics. Negative values mean "not filled in".
struct DomainStats {
    int n_vars = -1;
    int n_constraints = -1;
    int depth_d = -1;
    int n_correct = 0;
};

inline DifficultyMetrics compute_metrics(Domain domain, int n_choices, const DomainStats& s) {
    if (s.n_vars < 0) throw std::invalid_argument("domain stats missing n_vars");
    if (s.n_constraints < 0) throw std::invalid_argument("domain stats missing n_constraints");
    if (s.depth_d < 0) throw std::invalid_argument("domain stats missing depth_d");
    if (s.n_correct < 1) throw std::invalid_argument("a task needs at least one correct choice");
    // Logic answers are free-form questions about attributes, so the guesser
    // ranges over the attributes alone and the sentinel drops out of the
    // effective choice count. The numbered domains guess over every option.
    const int n_eff = domain == Domain::logic ? n_choices - 1 : n_choices;
    DifficultyMetrics m;
    m.depth_d = s.depth_d;
    m.n_vars = s.n_vars;
    m.n_constraints = s.n_constraints;
    m.e_bf = expected_guesses(n_eff, s.n_correct);
    return m;
}

inline const std::string& blocks_domain_pddl() {
    static const std::string text = R"PDDL(;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;
;;; 4 Op-blocks world
;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;;

(define (domain BLOCKS)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block)
               (ontable ?x - block)
               (clear ?x - block)
               (handempty)
               (holding ?x - block)
               )

  (:action pick-up
             :parameters (?x - block)
             :precondition (and (clear ?x) (ontable ?x) (handempty))
             :effect
             (and (not (ontable ?x))
                   (not (clear ?x))
                   (not (handempty))
                   (holding ?x)))

  (:action put-down
             :parameters (?x - block)
             :precondition (holding ?x)
             :effect
             (and (not (holding ?x))
                   (clear ?x)
                   (handempty)
                   (ontable ?x)))
  (:action stack
             :parameters (?x - block ?y - block)
             :precondition (and (holding ?x) (clear ?y))
             :effect
             (and (not (holding ?x))
                   (not (clear ?y))
                   (clear ?x)
                   (handempty)
                   (on ?x ?y)))
  (:action unstack
             :parameters (?x - block ?y - block)
             :precondition (and (on ?x ?y) (clear ?x) (handempty))
             :effect
             (and (holding ?x)
                   (clear ?y)
                   (not (clear ?x))
                   (not (handempty))
                   (not (on ?x ?y))))))PDDL";
    return text;
}

// Full system blocks per domain and prompt mode, keyed "{domain}_{mode}".
// Braced placeholders are filled from the task context when rendering.
struct TemplateSet {
    std::map<std::string, std::string> system;
};

namespace detail {

inline TemplateSet built_in_templates() {
    const std::string logic_body = R"(Suppose you know the following rules about Alice:

{rules_nl}

You trying to discern whether a statement about Alice is true given some facts. You must decide whether you have enough information to determine whether the final statement is true. You may respond with one of the following-
If you do not have enough information yet, you may ask a question about an attribute of Alice, in the form of "Question: Is Alice [attribute]?". Ask the best question that, regardless of how it is answered, provides the most information about the final statement.
Once you have enough all information necessary to determine the truth value of the statement, you can terminate with "End questioning".
)";
    const std::string logic_zs =
        "Generate one of \"Question: Is Alice [attribute]?\" or \"End questioning\" and nothing "
        "else.";
    const std::string logic_cot =
        "Please reason step-by-step, then generate one of \"Question: Is Alice [attribute]?\" or "
        "\"End questioning\" and nothing else.";

    const std::string planning_body = R"(You will be given a planning problem in the domain defined by the following PDDL:

{domain_pddl}


The current objects are present in the problem:

{objects}

You will be given a set of conditions true in your initial state and a set of goal conditions, and will need to construct a plan from your current state to the goal state.
Some details of your initial state may be missing. You must decide whether you have enough information to disambiguate a plan to the final state. If not, you must decide what information is necessary to construct a fully unambiguous plan from your initial state to the goal state.
You will be presented with a set of multiple-choice options for questions you may ask, and you must answer with one of the options.
)";
    const std::string planning_zs = "Please generate the number of the option and nothing else.";
    const std::string planning_cot =
        "Please reason step-by-step, then generate \"Answer:\" followed by the number of the "
        "option and nothing else.";

    const std::string gsme_body = R"(You are trying to solve a math problem. You must decide whether you have enough information to solve the math problem. Please respond with one of the following-
If you do not have enough information to solve the math problem, you may ask a question back to the user from a set of predefined "Possible questions". Otherwise, choose "No questions needed."
)";
    const std::string gsme_zs = "Generate the number of your choice in the form \"Choice: number\"";
    const std::string gsme_cot =
        "Please reason step-by-step, then generate the number of your choice in the form "
        "\"Choice: number\" and nothing else.";

    TemplateSet ts;
    ts.system["logic_zs"] = logic_body + logic_zs;
    ts.system["logic_zs_cot"] = logic_body + logic_cot;
    ts.system["logic_four_shot"] = logic_body + logic_zs;
    ts.system["planning_zs"] = planning_body + planning_zs;
    ts.system["planning_zs_cot"] = planning_body + planning_cot;
    ts.system["planning_four_shot"] = planning_body + planning_zs;
    ts.system["gsme_zs"] = gsme_body + gsme_zs;
    ts.system["gsme_zs_cot"] = gsme_body + gsme_cot;
    ts.system["gsme_four_shot"] = gsme_body + gsme_zs;
    return ts;
}

}  // namespace detail

inline const TemplateSet& default_templates() {
    static const TemplateSet ts = detail::built_in_templates();
    return ts;
}

// Reads "{domain}_{mode}.txt" overrides from a directory; anything not
// overridden keeps its built-in text. Trailing newlines are trimmed so that
// on-disk templates render identically to the built-ins.
inline TemplateSet load_templates(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw std::invalid_argument("template directory not found: " + dir);
    TemplateSet ts = default_templates();
    for (auto& [key, text] : ts.system) {
        const fs::path p = fs::path(dir) / (key + ".txt");
        if (!fs::exists(p)) continue;
        std::ifstream in(p, std::ios::binary);
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        while (!content.empty() && (content.back() == '\n' || content.back() == '\r'))
            content.pop_back();
        text = std::move(content);
    }
    return ts;
}

namespace detail {

inline void finish(const Task& t) {
    auto violations = validate_task(t);
    if (!violations.empty())
        throw std::runtime_error("assembled task fails validation: " + violations.front());
}

}  // namespace detail

inline Task assemble(const logic::GeneratedLogicTask& gen, std::uint64_t seed, int ordinal) {
    const auto& rs = gen.problem.rules;
    const auto& vocab = rs.vocab;
    const int sentinel = static_cast<int>(vocab.names.size());

    Task t;
    t.task_id = make_task_id(Domain::logic, seed, ordinal);
    t.domain = Domain::logic;
    t.choices = vocab.names;
    t.choices.push_back("End questioning");

    auto closure = logic::infer(rs, gen.problem.assignment);
    if (closure.contradiction)
        throw std::invalid_argument("known facts contradict the rules");
    t.well_specified = closure.value(gen.problem.target).has_value();
    if (t.well_specified) {
        t.correct_indices = {sentinel};
    } else {
        t.correct_indices = gen.correct_vars;
        std::sort(t.correct_indices.begin(), t.correct_indices.end());
    }
    t.invalid_indices.assign(gen.problem.invalid_vars.begin(), gen.problem.invalid_vars.end());

    ojson rules = ojson::array();
    for (const auto& r : rs.rules) rules.push_back(logic::rule_sentence(vocab, r));
    ojson facts = ojson::array();
    for (const auto& lit : gen.problem.assignment)
        facts.push_back(logic::fact_sentence(vocab, lit));
    ojson forbidden = ojson::array();
    for (int v : gen.problem.invalid_vars) forbidden.push_back(vocab.names[v]);
    t.context["rules"] = std::move(rules);
    t.context["known_facts"] = std::move(facts);
    t.context["forbidden"] = std::move(forbidden);
    t.context["target"] = vocab.names[gen.problem.target];
    t.context["answer_format"] = "free_form";

    DomainStats s{static_cast<int>(vocab.names.size()), static_cast<int>(rs.rules.size()),
                  gen.construction_depth, static_cast<int>(t.correct_indices.size())};
    t.metrics = compute_metrics(Domain::logic, static_cast<int>(t.choices.size()), s);
    detail::finish(t);
    return t;
}

inline Task assemble(const planning::StateSpace& sp, const std::vector<std::string>& goal_atoms,
                     const planning::PlanningGenTask& gen, std::uint64_t seed, int ordinal) {
    const int n = sp.n_atoms();

    Task t;
    t.task_id = make_task_id(Domain::planning, seed, ordinal);
    t.domain = Domain::planning;
    for (int a = 0; a < n; ++a) t.choices.push_back("Is " + sp.atom_text(a) + " true?");
    t.choices.push_back("No questions needed.");

    t.well_specified = gen.well_specified;
    if (gen.well_specified) {
        t.correct_indices = {n};
    } else {
        t.correct_indices = gen.correct_atoms;
        std::sort(t.correct_indices.begin(), t.correct_indices.end());
    }

    std::vector<int> goal_ids;
    for (const auto& g : goal_atoms) {
        auto id = sp.parse_atom(g);
        if (!id) throw std::invalid_argument("unknown goal atom: " + g);
        goal_ids.push_back(*id);
    }
    std::sort(goal_ids.begin(), goal_ids.end());
    goal_ids.erase(std::unique(goal_ids.begin(), goal_ids.end()), goal_ids.end());

    ojson objects = ojson::array();
    for (const auto& b : sp.blocks()) objects.push_back(b);
    ojson known = ojson::array();
    for (int a = 0; a < n; ++a) {
        auto truth = gen.known.truth(a);
        if (!truth) continue;
        ojson rec;
        rec["atom"] = sp.atom_text(a);
        rec["truth"] = *truth;
        known.push_back(std::move(rec));
    }
    ojson goals = ojson::array();
    for (int g : goal_ids) goals.push_back(sp.atom_text(g));
    t.context["domain_pddl"] = blocks_domain_pddl();
    t.context["objects"] = std::move(objects);
    t.context["known_atoms"] = std::move(known);
    t.context["goal_atoms"] = std::move(goals);
    t.context["answer_format"] = "numbered";

    DomainStats s{n, sp.n_blocks(), gen.depth_d, static_cast<int>(t.correct_indices.size())};
    t.metrics = compute_metrics(Domain::planning, static_cast<int>(t.choices.size()), s);
    detail::finish(t);
    return t;
}

inline Task assemble(const gsm::GsmeTask& gen, std::uint64_t seed, int ordinal) {
    const int sentinel = static_cast<int>(gen.choice_symbols.size());

    Task t;
    t.task_id = make_task_id(Domain::gsme, seed, ordinal);
    t.domain = Domain::gsme;
    for (const auto& sym : gen.choice_symbols)
        t.choices.push_back("What is the value of " + sym + "?");
    t.choices.push_back("No questions needed.");

    t.well_specified = gen.well_specified;
    if (gen.well_specified) {
        t.correct_indices = {sentinel};
    } else {
        for (int i = 0; i < sentinel; ++i) {
            const auto& sym = gen.choice_symbols[i];
            if (std::find(gen.correct_symbols.begin(), gen.correct_symbols.end(), sym) !=
                gen.correct_symbols.end())
                t.correct_indices.push_back(i);
        }
    }

    // Assignment order follows the choice list, which itself follows variable
    // declaration order, so the rendered problem reads like the source text.
    ojson assignments = ojson::object();
    for (const auto& sym : gen.choice_symbols) {
        auto it = gen.assignments.find(sym);
        if (it != gen.assignments.end()) assignments[sym] = it->second.str();
    }
    ojson equations = ojson::array();
    for (const auto& e : gen.equation_texts) equations.push_back(e);
    t.context["assignments"] = std::move(assignments);
    t.context["equations"] = std::move(equations);
    t.context["goal"] = gen.goal;
    t.context["goal_question"] = gen.goal_question;
    t.context["answer_format"] = "numbered";

    DomainStats s{gen.n_vars, gen.n_constraints, gen.depth_d,
                  static_cast<int>(t.correct_indices.size())};
    t.metrics = compute_metrics(Domain::gsme, static_cast<int>(t.choices.size()), s);
    detail::finish(t);
    return t;
}

inline DifficultyMetrics recompute_metrics(const Task& t) {
    DomainStats s{t.metrics.n_vars, t.metrics.n_constraints, t.metrics.depth_d,
                  static_cast<int>(t.correct_indices.size())};
    return compute_metrics(t.domain, static_cast<int>(t.choices.size()), s);
}

namespace detail {

inline std::string substitute(std::string text,
                              const std::map<std::string, std::string>& vars) {
    for (const auto& [name, value] : vars) {
        const std::string needle = "{" + name + "}";
        std::size_t at = 0;
        while ((at = text.find(needle, at)) != std::string::npos) {
            text.replace(at, needle.size(), value);
            at += value.size();
        }
    }
    return text;
}

inline void check_resolved(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        std::size_t j = i + 1;
        while (j < text.size() &&
               (std::islower(static_cast<unsigned char>(text[j])) || text[j] == '_'))
            ++j;
        if (j > i + 1 && j < text.size() && text[j] == '}')
            throw std::runtime_error("unresolved template placeholder " +
                                     text.substr(i, j - i + 1));
    }
}

inline std::string system_text(const Task& t, PromptMode mode, const TemplateSet& ts) {
    const std::string key = qf::to_string(t.domain) + "_" + taskgen::to_string(mode);
    auto it = ts.system.find(key);
    if (it == ts.system.end()) throw std::invalid_argument("no system template for " + key);

    std::map<std::string, std::string> vars;
    if (t.domain == Domain::logic) {
        std::string rules_nl;
        const auto& rules = t.context.at("rules");
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (i) rules_nl += '\n';
            rules_nl += rules[i].get<std::string>();
        }
        vars["rules_nl"] = std::move(rules_nl);
    } else if (t.domain == Domain::planning) {
        vars["domain_pddl"] = t.context.at("domain_pddl").get<std::string>();
        std::string objects = "[";
        const auto& objs = t.context.at("objects");
        for (std::size_t i = 0; i < objs.size(); ++i) {
            if (i) objects += ", ";
            objects += "'" + objs[i].get<std::string>() + "'";
        }
        objects += "]";
        vars["objects"] = std::move(objects);
    }

    std::string text = substitute(it->second, vars);
    check_resolved(text);
    return text;
}

inline std::string numbered_choices(const Task& t) {
    std::string out;
    for (std::size_t i = 0; i < t.choices.size(); ++i) {
        if (i) out += '\n';
        out += std::to_string(i) + ". " + t.choices[i];
    }
    return out;
}

inline std::string user_text(const Task& t) {
    switch (t.domain) {
        case Domain::logic: {
            std::string out;
            for (const auto& f : t.context.at("known_facts"))
                out += f.get<std::string>() + "\n";
            out += "\n";
            for (const auto& a : t.context.at("forbidden"))
                out += "You may not ask if Alice is " + a.get<std::string>() + ".\n";
            out += "Is Alice " + t.context.at("target").get<std::string>() + "?";
            return out;
        }
        case Domain::planning: {
            std::string out = "Known facts about current state:\n";
            for (const auto& rec : t.context.at("known_atoms")) {
                const std::string atom = rec.at("atom").get<std::string>();
                out += rec.at("truth").get<bool>() ? atom : "(not " + atom + ")";
                out += "\n";
            }
            out += "\nGoal state:\n";
            for (const auto& g : t.context.at("goal_atoms"))
                out += g.get<std::string>() + "\n";
            out += "\nPossible questions:\n" + numbered_choices(t);
            return out;
        }
        case Domain::gsme: {
            std::vector<std::string> lines;
            for (const auto& [sym, value] : t.context.at("assignments").items())
                lines.push_back(sym + " = " + value.get<std::string>());
            for (const auto& e : t.context.at("equations"))
                lines.push_back(e.get<std::string>());
            std::string question = t.context.at("goal_question").get<std::string>();
            if (question.empty())
                question = "What is the value of " + t.context.at("goal").get<std::string>() + "?";
            lines.push_back(std::move(question));

            std::string out = "Math problem: ";
            for (std::size_t i = 0; i < lines.size(); ++i) {
                if (i) out += '\n';
                out += lines[i];
            }
            out += "\n\nPossible questions:\n" + numbered_choices(t);
            return out;
        }
    }
    throw std::invalid_argument("bad domain");
}

inline std::string exemplar_answer(const Task& t) {
    const int k = *std::min_element(t.correct_indices.begin(), t.correct_indices.end());
    switch (t.domain) {
        case Domain::logic:
            if (k + 1 == static_cast<int>(t.choices.size())) return "End questioning";
            return "Question: Is Alice " + t.choices[k] + "?";
        case Domain::planning: return std::to_string(k);
        case Domain::gsme: return "Choice: " + std::to_string(k);
    }
    throw std::invalid_argument("bad domain");
}

}  // namespace detail

inline std::string render_prompt(const Task& task, PromptMode mode,
                                 const std::vector<Task>& pool = {},
                                 const TemplateSet& templates = default_templates()) {
    std::string out = "[SYSTEM]\n" + detail::system_text(task, mode, templates) + "\n\n";
    if (mode == PromptMode::four_shot) {
        std::vector<const Task*> exemplars;
        for (const Task& p : pool)
            if (p.domain == task.domain && p.task_id != task.task_id) exemplars.push_back(&p);
        std::sort(exemplars.begin(), exemplars.end(),
                  [](const Task* a, const Task* b) { return a->task_id < b->task_id; });
        if (exemplars.size() < 4)
            throw std::invalid_argument("four-shot rendering needs at least four exemplar tasks");
        for (std::size_t i = 0; i < 4; ++i) {
            out += "[USER]\n" + detail::user_text(*exemplars[i]) + "\n\n[ASSISTANT]\n" +
                   detail::exemplar_answer(*exemplars[i]) + "\n\n";
        }
    }
    out += "[USER]\n" + detail::user_text(task);
    return out;
}

inline void write_dataset(const std::vector<Task>& tasks, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& t : tasks) out << task_to_json(t).dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<Task> read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<Task> tasks;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError(lineno, "malformed json record");
        tasks.push_back(task_from_json(j, lineno));
    }
    return tasks;
}

}  // namespace qf::taskgen

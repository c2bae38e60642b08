#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <climits>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "qf/core.hpp"
#include "qf/evalkit.hpp"
#include "qf/gsm.hpp"
#include "qf/logic.hpp"
#include "qf/planning.hpp"
#include "qf/taskgen.hpp"

namespace qf::cli {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// Memoized planning re-derivations, persisted under QF_CACHE_DIR when set.
struct PlannerVerdict {
    bool found = false;
    bool well_specified = false;
    int depth = 0;
    std::vector<int> correct;
};

struct PlannerCache {
    std::string file;
    std::map<std::string, PlannerVerdict> entries;
    bool dirty = false;
    std::mutex mu;

    void init_from_env() {
        const char* dir = std::getenv("QF_CACHE_DIR");
        if (!dir || !*dir) return;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        file = (std::filesystem::path(dir) / "planning_rederive.jsonl").string();
        load();
    }

    void load() {
        std::ifstream in(file, std::ios::binary);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ojson j = ojson::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("key")) continue;
            try {
                PlannerVerdict v;
                v.found = j.at("found").get<bool>();
                v.well_specified = j.at("ws").get<bool>();
                v.depth = j.at("depth").get<int>();
                v.correct = j.at("correct").get<std::vector<int>>();
                entries[j.at("key").get<std::string>()] = std::move(v);
            } catch (const nlohmann::json::exception&) {
            }
        }
    }

    void save() {
        if (file.empty() || !dirty) return;
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        for (const auto& [key, v] : entries) {
            ojson j;
            j["key"] = key;
            j["found"] = v.found;
            j["ws"] = v.well_specified;
            j["depth"] = v.depth;
            j["correct"] = v.correct;
            out << j.dump() << '\n';
        }
    }
};

inline PlannerVerdict classify_planning(PlannerCache& cache, const planning::StateSpace& sp,
                                        const planning::PartialState& known,
                                        const std::vector<std::string>& goals) {
    std::string key;
    for (const auto& b : sp.blocks()) key += b + ",";
    key += ";" + qf::detail::hex64(known.known) + ":" + qf::detail::hex64(known.value) + ";";
    for (const auto& g : goals) key += g + ",";

    if (!cache.file.empty()) {
        std::lock_guard<std::mutex> lock(cache.mu);
        auto it = cache.entries.find(key);
        if (it != cache.entries.end()) return it->second;
    }

    PlannerVerdict v;
    auto gen = planning::task_from_partial(sp, known, goals);
    if (gen) {
        v.found = true;
        v.well_specified = gen->well_specified;
        v.depth = gen->depth_d;
        v.correct = gen->correct_atoms;
    }
    if (!cache.file.empty()) {
        std::lock_guard<std::mutex> lock(cache.mu);
        cache.entries[key] = v;
        cache.dirty = true;
    }
    return v;
}

inline std::vector<std::string> json_strings(const ojson& arr) {
    std::vector<std::string> out;
    for (const auto& v : arr) out.push_back(v.get<std::string>());
    return out;
}

// Re-derives a logic task's verdicts from its own context and compares them
// with the stored answer key. Returns an empty string when everything agrees.
inline std::string check_logic_task(const Task& t) {
    std::string rules_text;
    for (const auto& r : t.context.at("rules")) rules_text += r.get<std::string>() + "\n";
    auto rs = logic::parse_rules(rules_text);
    auto cs = logic::to_clauses(rs);
    if (static_cast<int>(rs.vocab.names.size()) != t.metrics.n_vars)
        return "n_vars disagrees with the rule vocabulary";
    if (static_cast<int>(rs.rules.size()) != t.metrics.n_constraints)
        return "n_constraints disagrees with the rule count";

    std::vector<logic::Literal> assignment;
    for (const auto& f : t.context.at("known_facts")) {
        std::string s = f.get<std::string>();
        const std::string prefix = "Alice is ";
        if (s.rfind(prefix, 0) != 0 || s.back() != '.')
            return "unreadable known fact: " + s;
        s = s.substr(prefix.size(), s.size() - prefix.size() - 1);
        bool pos = true;
        if (s.rfind("not ", 0) == 0) {
            pos = false;
            s = s.substr(4);
        }
        assignment.push_back({rs.vocab.id(s), pos});
    }
    const int target = rs.vocab.id(t.context.at("target").get<std::string>());
    std::set<int> forbidden;
    for (const auto& name : t.context.at("forbidden"))
        forbidden.insert(rs.vocab.id(name.get<std::string>()));

    std::vector<int> expected_invalid(forbidden.begin(), forbidden.end());
    if (expected_invalid != t.invalid_indices)
        return "forbidden list disagrees with invalid indices";

    auto closure = logic::infer(cs, assignment);
    if (closure.contradiction) return "known facts are contradictory";
    const bool ws = closure.value(target).has_value();
    if (ws != t.well_specified) return "well_specified flag disagrees with propagation";

    std::vector<int> expected_correct;
    if (ws) {
        expected_correct = {sentinel_index(t)};
    } else {
        for (int v = 0; v < cs.n_vars; ++v) {
            if (v == target || closure.value(v).has_value() || forbidden.count(v)) continue;
            if (logic::check_one_sufficient(cs, assignment, target, v).verdict ==
                logic::Verdict::sufficient_opposite)
                expected_correct.push_back(v);
        }
    }
    if (expected_correct != t.correct_indices)
        return "correct choices disagree with the sufficiency re-derivation";
    return "";
}

inline std::string check_planning_task(const Task& t, PlannerCache& cache) {
    planning::StateSpace sp(json_strings(t.context.at("objects")));
    if (sp.n_atoms() != t.metrics.n_vars) return "n_vars disagrees with the atom count";
    if (static_cast<int>(sp.blocks().size()) != t.metrics.n_constraints)
        return "n_constraints disagrees with the block count";

    planning::PartialState known;
    for (const auto& rec : t.context.at("known_atoms")) {
        auto id = sp.parse_atom(rec.at("atom").get<std::string>());
        if (!id) return "unreadable known atom: " + rec.at("atom").get<std::string>();
        known.set(*id, rec.at("truth").get<bool>());
    }
    auto goals = json_strings(t.context.at("goal_atoms"));

    auto verdict = classify_planning(cache, sp, known, goals);
    if (!verdict.found) return "partial state no longer yields a task";
    if (verdict.well_specified != t.well_specified)
        return "well_specified flag disagrees with the plan classification";
    if (verdict.depth != t.metrics.depth_d) return "depth_d disagrees with the re-derived plan";

    std::vector<int> expected_correct;
    if (verdict.well_specified) {
        expected_correct = {sp.n_atoms()};
    } else {
        expected_correct = verdict.correct;
        std::sort(expected_correct.begin(), expected_correct.end());
    }
    if (expected_correct != t.correct_indices)
        return "correct choices disagree with the differentiating atoms";
    return "";
}

inline std::string check_gsme_task(const Task& t) {
    const std::string goal = t.context.at("goal").get<std::string>();
    std::vector<std::string> symbols;
    const std::string prefix = "What is the value of ";
    for (const auto& c : t.choices) {
        if (is_sentinel_choice(c)) continue;
        if (c.rfind(prefix, 0) != 0 || c.back() != '?') return "unreadable choice: " + c;
        symbols.push_back(c.substr(prefix.size(), c.size() - prefix.size() - 1));
    }

    std::string src = "Variables:\n";
    for (const auto& s : symbols) src += s + "\n";
    src += goal + "\n\nEquations:\n";
    for (const auto& e : t.context.at("equations")) src += e.get<std::string>() + "\n";
    src += "\nGoal: " + goal + "\n";
    auto csp = gsm::parse_mathcsp(src);
    if (static_cast<int>(csp.vars.size()) != t.metrics.n_vars)
        return "n_vars disagrees with the variable count";
    if (static_cast<int>(csp.equations.size()) != t.metrics.n_constraints)
        return "n_constraints disagrees with the equation count";

    std::set<std::string> known;
    for (const auto& item : t.context.at("assignments").items()) known.insert(item.key());

    const bool ws = gsm::derivable_closure(csp, known).count(goal) > 0;
    if (ws != t.well_specified) return "well_specified flag disagrees with propagation";

    std::vector<int> expected_correct;
    std::vector<std::string> correct_symbols;
    if (ws) {
        expected_correct = {sentinel_index(t)};
    } else {
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            auto probe = known;
            probe.insert(symbols[i]);
            if (gsm::derivable_closure(csp, probe).count(goal)) {
                expected_correct.push_back(static_cast<int>(i));
                correct_symbols.push_back(symbols[i]);
            }
        }
    }
    if (expected_correct != t.correct_indices)
        return "correct choices disagree with the closure re-derivation";

    int expected_depth = 0;
    if (ws) {
        auto reached = known;
        while (!reached.count(goal)) {
            std::set<std::string> added;
            for (const auto& eq : csp.equations) {
                if (reached.count(eq.lhs)) continue;
                bool ready = true;
                for (const auto& s : eq.rhs_symbols)
                    if (!reached.count(s)) {
                        ready = false;
                        break;
                    }
                if (ready) added.insert(eq.lhs);
            }
            reached.insert(added.begin(), added.end());
            ++expected_depth;
        }
    } else {
        auto levels = gsm::detail::backward_levels(csp);
        expected_depth = INT_MAX;
        for (const auto& sym : correct_symbols) {
            auto it = levels.find(sym);
            if (it != levels.end()) expected_depth = std::min(expected_depth, it->second);
        }
    }
    if (expected_depth != t.metrics.depth_d)
        return "depth_d disagrees with the re-derived propagation depth";
    return "";
}

inline std::string check_task_integrity(const Task& t, PlannerCache& cache) {
    auto structural = validate_task(t);
    if (!structural.empty()) return "structural: " + structural.front();
    if (taskgen::recompute_metrics(t) != t.metrics)
        return "stored metrics disagree with recomputation";
    try {
        switch (t.domain) {
            case Domain::logic: return check_logic_task(t);
            case Domain::planning: return check_planning_task(t, cache);
            case Domain::gsme: return check_gsme_task(t);
        }
    } catch (const std::exception& e) {
        return std::string("context replay failed: ") + e.what();
    }
    return "unknown domain";
}

struct IntStats {
    int min = 0;
    int max = 0;
    double mean = 0.0;
};

template <typename Get>
IntStats int_stats(const std::vector<Task>& tasks, Get get) {
    IntStats s{INT_MAX, INT_MIN, 0.0};
    for (const Task& t : tasks) {
        const int v = get(t);
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        s.mean += v;
    }
    s.mean /= static_cast<double>(tasks.size());
    return s;
}

inline void print_stats(std::ostream& out, const std::vector<Task>& tasks) {
    auto line = [&](const char* name, const IntStats& s) {
        out << name << ": min " << s.min << " max " << s.max << " mean " << fixed4(s.mean)
            << "\n";
    };
    line("depth_d", int_stats(tasks, [](const Task& t) { return t.metrics.depth_d; }));
    line("n_vars", int_stats(tasks, [](const Task& t) { return t.metrics.n_vars; }));
    line("n_constraints",
         int_stats(tasks, [](const Task& t) { return t.metrics.n_constraints; }));

    Rational lo = tasks.front().metrics.e_bf, hi = lo;
    double mean = 0.0;
    for (const Task& t : tasks) {
        if (t.metrics.e_bf < lo) lo = t.metrics.e_bf;
        if (hi < t.metrics.e_bf) hi = t.metrics.e_bf;
        mean += t.metrics.e_bf.to_double();
    }
    mean /= static_cast<double>(tasks.size());
    out << "e_bf: min " << lo.str() << " max " << hi.str() << " mean " << fixed4(mean)
        << "\n";
}

}  // namespace detail

struct GenerateOptions {
    std::string domain;
    std::uint64_t seed = 0;
    int depth_cap = 12;
    int width_cap = 16;
    int blocks = 4;
    int vars = 12;
    int rules = 20;
    std::vector<std::string> goals;
    std::string seeds_path;
    std::string out_path;
};

inline int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    if (!opt.seeds_path.empty() && !fs::exists(opt.seeds_path)) {
        err << "error: seeds path does not exist: " << opt.seeds_path << "\n";
        return 2;
    }

    std::vector<Task> tasks;
    int skipped = 0;
    bool truncated = false;

    if (opt.domain == "logic") {
        logic::RuleSet rs;
        if (!opt.seeds_path.empty()) {
            rs = logic::parse_rules(detail::read_file(opt.seeds_path));
        } else {
            logic::RandomRuleParams params;
            params.n_vars = opt.vars;
            params.n_rules = opt.rules;
            rs = logic::random_rule_set(params, opt.seed);
        }
        logic::GenCaps caps;
        caps.depth_cap = opt.depth_cap;
        caps.width_cap = opt.width_cap;
        int ordinal = 0;
        for (int target = 0; target < static_cast<int>(rs.vocab.names.size()); ++target)
            for (const auto& gen : logic::generate_tasks(rs, target, caps))
                tasks.push_back(taskgen::assemble(gen, opt.seed, ordinal++));
    } else if (opt.domain == "planning") {
        if (opt.goals.empty()) {
            err << "error: planning generation needs at least one --goal atom\n";
            return 2;
        }
        std::vector<std::string> names;
        for (int i = 0; i < opt.blocks; ++i) names.push_back(std::string(1, 'a' + i));
        planning::StateSpace sp(names);
        auto res = planning::generate_tasks(sp, opt.goals, opt.depth_cap);
        truncated = res.truncated;
        int ordinal = 0;
        for (const auto& gen : res.tasks)
            tasks.push_back(taskgen::assemble(sp, opt.goals, gen, opt.seed, ordinal++));
    } else {
        if (opt.seeds_path.empty()) {
            err << "error: gsme generation needs --seeds with annotated problems\n";
            return 2;
        }
        std::vector<std::string> files;
        if (fs::is_directory(opt.seeds_path)) {
            for (const auto& entry : fs::directory_iterator(opt.seeds_path))
                if (entry.is_regular_file()) files.push_back(entry.path().string());
            std::sort(files.begin(), files.end());
        } else {
            files.push_back(opt.seeds_path);
        }
        int ordinal = 0;
        for (const auto& file : files) {
            auto csp = gsm::parse_mathcsp(detail::read_file(file));
            for (const auto& sym : csp.assigned_symbols()) {
                if (sym == csp.goal) continue;
                if (std::find(csp.distractors.begin(), csp.distractors.end(), sym) !=
                    csp.distractors.end())
                    continue;
                auto gen = gsm::make_underspecified(csp, sym);
                if (!gen) {
                    ++skipped;
                    continue;
                }
                tasks.push_back(taskgen::assemble(*gen, opt.seed, ordinal++));
            }
        }
    }

    taskgen::write_dataset(tasks, opt.out_path);
    out << "generated " << tasks.size() << " tasks (" << opt.domain << ")\n";
    if (!tasks.empty()) detail::print_stats(out, tasks);
    out << "skipped: " << skipped << "\n";
    if (truncated) out << "cap-exceeded: frontier truncated\n";
    return 0;
}

inline int cmd_verify(const std::string& in_path, int jobs, std::ostream& out,
                      std::ostream& err) {
    if (!std::filesystem::exists(in_path)) {
        err << "error: dataset does not exist: " << in_path << "\n";
        return 2;
    }
    auto tasks = taskgen::read_dataset(in_path);
    detail::PlannerCache cache;
    cache.init_from_env();

    std::vector<std::string> reasons(tasks.size());
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            reasons[i] = detail::check_task_integrity(tasks[i], cache);
    };
    if (jobs <= 1 || tasks.size() < 2) {
        worker(0, tasks.size());
    } else {
        const std::size_t n = tasks.size();
        const std::size_t chunk = (n + jobs - 1) / jobs;
        std::vector<std::thread> pool;
        for (std::size_t begin = 0; begin < n; begin += chunk)
            pool.emplace_back(worker, begin, std::min(n, begin + chunk));
        for (auto& th : pool) th.join();
    }

    int violations = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (reasons[i].empty()) continue;
        out << "violation " << tasks[i].task_id << ": " << reasons[i] << "\n";
        ++violations;
    }
    out << "verified " << tasks.size() << " tasks, " << violations << " violations\n";
    cache.save();
    return violations ? 1 : 0;
}

inline int cmd_render(const std::string& in_path, const std::string& mode_text,
                      const std::string& templates_dir, const std::string& out_path,
                      std::ostream& out, std::ostream& err) {
    if (!std::filesystem::exists(in_path)) {
        err << "error: dataset does not exist: " << in_path << "\n";
        return 2;
    }
    auto dataset = taskgen::read_dataset(in_path);
    const auto mode = taskgen::mode_from_string(mode_text);
    const auto templates = templates_dir.empty() ? taskgen::default_templates()
                                                 : taskgen::load_templates(templates_dir);

    std::ofstream sink(out_path, std::ios::binary);
    if (!sink) {
        err << "error: cannot open for writing: " << out_path << "\n";
        return 2;
    }
    for (const Task& t : dataset) {
        ojson j;
        j["task_id"] = t.task_id;
        j["mode"] = mode_text;
        j["prompt"] = taskgen::render_prompt(t, mode, dataset, templates);
        sink << j.dump() << '\n';
    }
    out << "rendered " << dataset.size() << " prompts (" << mode_text << ")\n";
    return 0;
}

namespace detail {

// Accepts "bfs:<depth>=1.." and "random:<seed>"; anything else is a usage error.
inline std::optional<std::vector<evalkit::Transcript>> synthesize_baseline(
    const std::string& spec, const std::vector<Task>& dataset) {
    auto digits = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (spec.rfind("bfs:", 0) == 0) {
        const std::string arg = spec.substr(4);
        if (!digits(arg)) return std::nullopt;
        const long depth = std::stol(arg);
        if (depth < 1) return std::nullopt;
        return evalkit::bfs_baseline(dataset, static_cast<int>(depth));
    }
    if (spec.rfind("random:", 0) == 0) {
        const std::string arg = spec.substr(7);
        if (!digits(arg)) return std::nullopt;
        return evalkit::random_baseline(dataset, std::stoull(arg));
    }
    return std::nullopt;
}

}  // namespace detail

inline int cmd_score(const std::string& in_path, const std::string& transcripts_path,
                     const std::string& baseline_spec, const std::string& out_path,
                     std::ostream& out, std::ostream& err) {
    if (transcripts_path.empty() == baseline_spec.empty()) {
        err << "error: score needs exactly one of --transcripts or --baseline\n";
        return 2;
    }
    if (!std::filesystem::exists(in_path)) {
        err << "error: dataset does not exist: " << in_path << "\n";
        return 2;
    }
    if (!transcripts_path.empty() && !std::filesystem::exists(transcripts_path)) {
        err << "error: transcripts do not exist: " << transcripts_path << "\n";
        return 2;
    }
    auto dataset = taskgen::read_dataset(in_path);

    std::vector<evalkit::Transcript> transcripts;
    if (!baseline_spec.empty()) {
        auto synthesized = detail::synthesize_baseline(baseline_spec, dataset);
        if (!synthesized) {
            err << "error: bad --baseline spec, expected bfs:<depth> or random:<seed>\n";
            return 2;
        }
        transcripts = std::move(*synthesized);
    } else {
        transcripts = evalkit::read_transcripts(transcripts_path);
    }

    auto report = evalkit::score(dataset, transcripts);
    auto f1 = evalkit::notsure_f1(dataset, transcripts);

    ojson j;
    j["score"] = evalkit::report_to_json(report);
    ojson jf;
    jf["tp"] = f1.tp;
    jf["fp"] = f1.fp;
    jf["fn"] = f1.fn;
    jf["tn"] = f1.tn;
    jf["precision"] = f1.precision;
    jf["recall"] = f1.recall;
    jf["f1"] = f1.f1;
    jf["degenerate"] = f1.degenerate;
    j["not_sure_f1"] = std::move(jf);
    j["correlations"] =
        evalkit::correlation_to_json(evalkit::correlation_table(dataset, transcripts));

    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
    } else {
        std::ofstream sink(out_path, std::ios::binary);
        if (!sink) {
            err << "error: cannot open for writing: " << out_path << "\n";
            return 2;
        }
        sink << text;
    }

    if (!report.unknown_tasks.empty()) {
        err << "error: " << report.unknown_tasks.size()
            << " transcripts name unknown tasks\n";
        return 1;
    }
    if (report.n_scored == 0) {
        err << "error: no transcripts were scored\n";
        return 1;
    }
    return 0;
}

inline int run(int argc, char** argv) {
    CLI::App app{"builds, checks, renders, and scores underspecified constraint tasks"};
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "build a task dataset");
    g->add_option("--domain", gen.domain, "task domain")
        ->required()
        ->check(CLI::IsMember({"logic", "planning", "gsme"}));
    g->add_option("--seed", gen.seed, "rng seed for corpora and task ids");
    g->add_option("--depth-cap", gen.depth_cap, "search depth cap")->check(CLI::Range(1, 100));
    g->add_option("--width-cap", gen.width_cap, "conjunction width cap")
        ->check(CLI::Range(1, 64));
    g->add_option("--blocks", gen.blocks, "block count for planning")
        ->check(CLI::Range(1, 7));
    g->add_option("--vars", gen.vars, "attribute count for the built-in rule corpus")
        ->check(CLI::Range(2, 64));
    g->add_option("--rules", gen.rules, "rule count for the built-in rule corpus")
        ->check(CLI::Range(1, 100000));
    g->add_option("--goal", gen.goals, "goal atom for planning, repeatable");
    g->add_option("--seeds", gen.seeds_path, "rule corpus file or annotated problem path");
    g->add_option("--out", gen.out_path, "dataset output path")->required();

    std::string verify_in;
    int jobs = 1;
    auto* v = app.add_subcommand("verify", "replay the domain verifiers over a dataset");
    v->add_option("--in", verify_in, "dataset path")->required();
    v->add_option("--jobs", jobs, "parallel verification threads")->check(CLI::Range(1, 64));

    std::string render_in, render_mode = "zs", render_templates, render_out;
    auto* r = app.add_subcommand("render", "write prompts for a dataset");
    r->add_option("--in", render_in, "dataset path")->required();
    r->add_option("--mode", render_mode, "prompt mode")
        ->check(CLI::IsMember({"zs", "zs_cot", "four_shot"}));
    r->add_option("--templates", render_templates, "template override directory");
    r->add_option("--out", render_out, "prompt output path")->required();

    std::string score_in, score_transcripts, score_baseline, score_out;
    auto* s = app.add_subcommand("score", "score transcripts against a dataset");
    s->add_option("--in", score_in, "dataset path")->required();
    auto* t_opt = s->add_option("--transcripts", score_transcripts, "transcripts path");
    auto* b_opt =
        s->add_option("--baseline", score_baseline, "bfs:<depth> or random:<seed>");
    t_opt->excludes(b_opt);
    s->add_option("--out", score_out, "report output path, stdout when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (g->parsed()) return cmd_generate(gen, std::cout, std::cerr);
        if (v->parsed()) return cmd_verify(verify_in, jobs, std::cout, std::cerr);
        if (r->parsed())
            return cmd_render(render_in, render_mode, render_templates, render_out,
                              std::cout, std::cerr);
        return cmd_score(score_in, score_transcripts, score_baseline, score_out, std::cout,
                         std::cerr);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace qf::cli

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qf/core.hpp"
#include "qf/gsm.hpp"
#include "qf/logic.hpp"
#include "qf/planning.hpp"

namespace qf::evalkit {

struct Transcript {
    std::string task_id;
    std::string mode;
    std::string response;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

inline ojson transcript_to_json(const Transcript& t) {
    ojson j;
    j["task_id"] = t.task_id;
    j["mode"] = t.mode;
    j["response"] = t.response;
    return j;
}

inline Transcript transcript_from_json(const ojson& j, int line = 0) {
    auto need = [&](const char* field) -> const ojson& {
        auto it = j.find(field);
        if (it == j.end()) throw ParseError(line, std::string("missing field: ") + field);
        return *it;
    };
    Transcript t;
    try {
        t.task_id = need("task_id").get<std::string>();
        t.mode = need("mode").get<std::string>();
        t.response = need("response").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(line, std::string("bad field type: ") + e.what());
    }
    return t;
}

inline void write_transcripts(const std::vector<Transcript>& ts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& t : ts) out << transcript_to_json(t).dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<Transcript> read_transcripts(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<Transcript> ts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ojson j = ojson::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError(lineno, "malformed json record");
        ts.push_back(transcript_from_json(j, lineno));
    }
    return ts;
}

struct ParsedAnswer {
    enum class Kind {
        choice,
        attribute_question,
        end_questioning,
        numeric_answer,
        plan,
        not_sure,
        unparseable
    };

    Kind kind = Kind::unparseable;
    int choice = -1;
    std::string attribute;
    Rational value{0};
    std::vector<std::string> actions;

    friend bool operator==(const ParsedAnswer&, const ParsedAnswer&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline std::string strip_trailing_punct(std::string s) {
    while (!s.empty() && (s.back() == '.' || s.back() == '?' || s.back() == '!' ||
                          s.back() == ','))
        s.pop_back();
    return s;
}

// Lowercases, trims punctuation, drops leading articles, and collapses
// whitespace so free-form attribute mentions compare against choice strings.
inline std::string normalize_attribute(const std::string& raw) {
    std::string s = lower(trim(strip_trailing_punct(trim(raw))));
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) tokens.push_back(cur), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    std::size_t start = 0;
    while (start < tokens.size() &&
           (tokens[start] == "a" || tokens[start] == "an" || tokens[start] == "the"))
        ++start;
    std::string out;
    for (std::size_t i = start; i < tokens.size(); ++i) {
        if (!out.empty()) out += ' ';
        out += tokens[i];
    }
    return out;
}

inline std::optional<long long> parse_int_token(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    long long v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        v = v * 10 + (s[i] - '0');
    }
    return s[0] == '-' ? -v : v;
}

inline std::optional<Rational> parse_rational_token(const std::string& s) {
    if (auto i = parse_int_token(s)) return Rational(*i);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        auto num = parse_int_token(s.substr(0, slash));
        auto den = parse_int_token(s.substr(slash + 1));
        if (num && den && *den != 0) return Rational(*num, *den);
        return std::nullopt;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string head = s.substr(0, dot), frac = s.substr(dot + 1);
        if (frac.empty()) return std::nullopt;
        bool neg = !head.empty() && head[0] == '-';
        auto whole = parse_int_token(head.empty() || head == "-" ? "0" : head);
        auto digits = parse_int_token(frac);
        if (!whole || !digits || *digits < 0) return std::nullopt;
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        std::int64_t mag = (neg ? -*whole : *whole) * scale + *digits;
        return Rational(neg ? -mag : mag, scale);
    }
    return std::nullopt;
}

inline std::optional<std::string> token_after(const std::string& lowered,
                                              const std::string& key) {
    auto at = lowered.rfind(key);
    if (at == std::string::npos) return std::nullopt;
    std::string rest = trim(lowered.substr(at + key.size()));
    std::size_t end = 0;
    while (end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[end]))) ++end;
    std::string token = strip_trailing_punct(rest.substr(0, end));
    if (token.empty()) return std::nullopt;
    return token;
}

inline bool is_action_line(const std::string& line) {
    std::string s = trim(line);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
    std::string inner = s.substr(1, s.size() - 2);
    std::vector<std::string> parts;
    std::string cur;
    for (char c : inner) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) parts.push_back(cur), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    if (parts.empty()) return false;
    const std::string& op = parts[0];
    if (op == "pick-up" || op == "put-down") return parts.size() == 2;
    if (op == "stack" || op == "unstack") return parts.size() == 3;
    return false;
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    lines.push_back(cur);
    return lines;
}

}  // namespace detail

// Scans the response line by line and keeps the last recognizable directive,
// since transcripts put reasoning before the final answer.
inline ParsedAnswer parse_response(const Task& task, const std::string& text) {
    const bool free_form = task.domain == Domain::logic;
    auto lines = detail::split_lines(text);

    ParsedAnswer last;
    int last_line = -1;

    for (int li = 0; li < static_cast<int>(lines.size()); ++li) {
        const std::string raw = detail::trim(lines[li]);
        if (raw.empty()) continue;
        const std::string low = detail::lower(raw);
        ParsedAnswer found;

        if (free_form) {
            if (low.find("end questioning") != std::string::npos) {
                found.kind = ParsedAnswer::Kind::end_questioning;
            } else if (auto at = low.find("is alice "); at != std::string::npos) {
                std::string rest = low.substr(at + 9);
                if (auto q = rest.find('?'); q != std::string::npos) rest = rest.substr(0, q);
                std::string attr = detail::normalize_attribute(rest);
                if (!attr.empty()) {
                    found.kind = ParsedAnswer::Kind::attribute_question;
                    found.attribute = attr;
                }
            } else if (low.find("not sure") != std::string::npos) {
                found.kind = ParsedAnswer::Kind::not_sure;
            }
        } else {
            if (auto token = detail::token_after(low, "choice:")) {
                if (auto n = detail::parse_int_token(*token)) {
                    found.kind = ParsedAnswer::Kind::choice;
                    found.choice = static_cast<int>(*n);
                }
            }
            if (found.kind == ParsedAnswer::Kind::unparseable) {
                if (auto token = detail::token_after(low, "answer:")) {
                    if (task.domain == Domain::planning) {
                        if (auto n = detail::parse_int_token(*token)) {
                            found.kind = ParsedAnswer::Kind::choice;
                            found.choice = static_cast<int>(*n);
                        }
                    } else if (auto v = detail::parse_rational_token(*token)) {
                        found.kind = ParsedAnswer::Kind::numeric_answer;
                        found.value = *v;
                    }
                }
            }
            if (found.kind == ParsedAnswer::Kind::unparseable) {
                if (auto n = detail::parse_int_token(detail::strip_trailing_punct(low))) {
                    found.kind = ParsedAnswer::Kind::choice;
                    found.choice = static_cast<int>(*n);
                }
            }
            if (found.kind == ParsedAnswer::Kind::unparseable &&
                task.domain == Domain::planning && detail::is_action_line(raw)) {
                found.kind = ParsedAnswer::Kind::plan;
            }
            if (found.kind == ParsedAnswer::Kind::unparseable &&
                low.find("not sure") != std::string::npos) {
                found.kind = ParsedAnswer::Kind::not_sure;
            }
        }

        if (found.kind != ParsedAnswer::Kind::unparseable) {
            last = found;
            last_line = li;
        }
    }

    if (last.kind == ParsedAnswer::Kind::plan) {
        int first = last_line;
        while (first > 0 && detail::is_action_line(lines[first - 1])) --first;
        for (int li = first; li <= last_line; ++li)
            last.actions.push_back(detail::trim(lines[li]));
    }
    return last;
}

inline bool answer_correct(const Task& t, const ParsedAnswer& a) {
    auto has = [](const std::vector<int>& v, int k) {
        return std::find(v.begin(), v.end(), k) != v.end();
    };
    switch (a.kind) {
        case ParsedAnswer::Kind::choice:
            return has(t.correct_indices, a.choice) && !has(t.invalid_indices, a.choice);
        case ParsedAnswer::Kind::attribute_question: {
            for (int i = 0; i < static_cast<int>(t.choices.size()); ++i) {
                if (is_sentinel_choice(t.choices[i])) continue;
                if (detail::normalize_attribute(t.choices[i]) == a.attribute)
                    return has(t.correct_indices, i) && !has(t.invalid_indices, i);
            }
            return false;
        }
        case ParsedAnswer::Kind::end_questioning: {
            int s = sentinel_index(t);
            return s >= 0 && has(t.correct_indices, s);
        }
        default:
            return false;
    }
}

struct BucketStat {
    int n = 0;
    int correct = 0;
    double accuracy() const { return n ? static_cast<double>(correct) / n : 0.0; }
};

struct ScoreReport {
    int n_scored = 0;
    int n_correct = 0;
    std::vector<std::string> unknown_tasks;
    std::map<int, BucketStat> by_depth;
    std::map<int, BucketStat> by_n_vars;
    std::map<int, BucketStat> by_n_constraints;
    std::map<Rational, BucketStat> by_e_bf;

    double accuracy() const { return n_scored ? static_cast<double>(n_correct) / n_scored : 0.0; }
};

inline ScoreReport score(const std::vector<Task>& dataset,
                         const std::vector<Transcript>& transcripts) {
    std::map<std::string, const Task*> index;
    for (const Task& t : dataset) index[t.task_id] = &t;

    ScoreReport r;
    auto bump = [](BucketStat& b, bool ok) {
        ++b.n;
        b.correct += ok ? 1 : 0;
    };
    for (const Transcript& tr : transcripts) {
        auto it = index.find(tr.task_id);
        if (it == index.end()) {
            r.unknown_tasks.push_back(tr.task_id);
            continue;
        }
        const Task& task = *it->second;
        const bool ok = answer_correct(task, parse_response(task, tr.response));
        ++r.n_scored;
        r.n_correct += ok ? 1 : 0;
        bump(r.by_depth[task.metrics.depth_d], ok);
        bump(r.by_n_vars[task.metrics.n_vars], ok);
        bump(r.by_n_constraints[task.metrics.n_constraints], ok);
        bump(r.by_e_bf[task.metrics.e_bf], ok);
    }
    std::sort(r.unknown_tasks.begin(), r.unknown_tasks.end());
    return r;
}

inline ojson report_to_json(const ScoreReport& r) {
    ojson j;
    j["n_scored"] = r.n_scored;
    j["n_correct"] = r.n_correct;
    j["accuracy"] = r.accuracy();
    j["unknown_tasks"] = r.unknown_tasks;
    auto table = [](const auto& buckets, auto key_text) {
        ojson out = ojson::object();
        for (const auto& [key, stat] : buckets) {
            ojson cell;
            cell["n"] = stat.n;
            cell["correct"] = stat.correct;
            cell["accuracy"] = stat.accuracy();
            out[key_text(key)] = std::move(cell);
        }
        return out;
    };
    j["by_depth_d"] = table(r.by_depth, [](int k) { return std::to_string(k); });
    j["by_n_vars"] = table(r.by_n_vars, [](int k) { return std::to_string(k); });
    j["by_n_constraints"] = table(r.by_n_constraints, [](int k) { return std::to_string(k); });
    j["by_e_bf"] = table(r.by_e_bf, [](const Rational& k) { return k.str(); });
    return j;
}

struct F1Report {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    int tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate = false;
};

inline F1Report notsure_f1(const std::vector<Task>& dataset,
                           const std::vector<Transcript>& transcripts) {
    std::map<std::string, const Task*> index;
    for (const Task& t : dataset) index[t.task_id] = &t;

    F1Report r;
    for (const Transcript& tr : transcripts) {
        auto it = index.find(tr.task_id);
        if (it == index.end()) continue;
        const Task& task = *it->second;
        const bool pred = parse_response(task, tr.response).kind == ParsedAnswer::Kind::not_sure;
        const bool actual = !task.well_specified;
        if (pred && actual) ++r.tp;
        else if (pred) ++r.fp;
        else if (actual) ++r.fn;
        else ++r.tn;
    }
    r.precision = r.tp + r.fp ? static_cast<double>(r.tp) / (r.tp + r.fp) : 0.0;
    r.recall = r.tp + r.fn ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
    r.f1 = r.precision + r.recall > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    r.degenerate = (r.tp + r.fp == 0) && (r.tp + r.fn == 0);
    return r;
}

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

inline double beta_cont_frac(double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 3e-16, tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

inline double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cont_frac(a, b, x) / a;
    return 1.0 - bt * beta_cont_frac(b, a, 1.0 - x) / b;
}

struct RankSums {
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
};

inline RankSums rank_sums(const std::vector<double>& rx, const std::vector<double>& ry) {
    const std::size_t n = rx.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    RankSums s;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mx, dy = ry[i] - my;
        s.sxy += dx * dy;
        s.sxx += dx * dx;
        s.syy += dy * dy;
    }
    return s;
}

}  // namespace detail

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;
    bool undefined = false;
};

inline SpearmanResult spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("input lengths differ");
    if (xs.size() < 2) throw std::invalid_argument("need at least two pairs");
    auto rx = detail::average_ranks(xs);
    auto ry = detail::average_ranks(ys);
    auto s = detail::rank_sums(rx, ry);
    if (s.sxx == 0.0 || s.syy == 0.0) return {0.0, 1.0, true};

    double rho = s.sxy / std::sqrt(s.sxx * s.syy);
    rho = std::min(1.0, std::max(-1.0, rho));

    const double n = static_cast<double>(xs.size());
    const double df = n - 2.0;
    double p = 0.0;
    const double one_minus = 1.0 - rho * rho;
    if (one_minus > 0.0) {
        const double t2 = rho * rho * df / one_minus;
        p = detail::reg_inc_beta(df / 2.0, 0.5, df / (df + t2));
    }
    return {rho, p, false};
}

// Two-sided permutation p-value; exhaustive through eight points, sampled
// beyond that. The rank variances are permutation-invariant, so arrangements
// compare by |sum of centered rank products| alone.
inline double spearman_permutation_p(const std::vector<double>& xs,
                                     const std::vector<double>& ys, int samples = 100000,
                                     std::uint64_t seed = 0) {
    if (xs.size() != ys.size()) throw std::invalid_argument("input lengths differ");
    if (xs.size() < 2) throw std::invalid_argument("need at least two pairs");
    auto rx = detail::average_ranks(xs);
    auto ry = detail::average_ranks(ys);
    auto base = detail::rank_sums(rx, ry);
    if (base.sxx == 0.0 || base.syy == 0.0) return 1.0;

    const std::size_t n = rx.size();
    double mx = 0.0;
    for (double r : rx) mx += r;
    mx /= static_cast<double>(n);
    std::vector<double> dx(n);
    for (std::size_t i = 0; i < n; ++i) dx[i] = rx[i] - mx;
    double my = 0.0;
    for (double r : ry) my += r;
    my /= static_cast<double>(n);

    auto cross = [&](const std::vector<double>& perm) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += dx[i] * (perm[i] - my);
        return std::fabs(s);
    };
    const double threshold = std::fabs(base.sxy) - 1e-9;

    if (n <= 8) {
        std::vector<double> perm = ry;
        std::sort(perm.begin(), perm.end());
        long long hits = 0, total = 0;
        do {
            ++total;
            if (cross(perm) >= threshold) ++hits;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return static_cast<double>(hits) / static_cast<double>(total);
    }

    if (samples < 1) throw std::invalid_argument("need a positive sample count");
    std::mt19937_64 rng(seed);
    std::vector<double> perm = ry;
    long long hits = 0;
    for (int s = 0; s < samples; ++s) {
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = rng() % (i + 1);
            std::swap(perm[i], perm[j]);
        }
        if (cross(perm) >= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

struct AxisCorrelation {
    std::string axis;
    SpearmanResult result;
};

inline std::vector<AxisCorrelation> correlation_table(
    const std::vector<Task>& dataset, const std::vector<Transcript>& transcripts) {
    std::map<std::string, const Task*> index;
    for (const Task& t : dataset) index[t.task_id] = &t;

    std::vector<double> depth, n_vars, n_constraints, e_bf, correct;
    for (const Transcript& tr : transcripts) {
        auto it = index.find(tr.task_id);
        if (it == index.end()) continue;
        const Task& task = *it->second;
        depth.push_back(task.metrics.depth_d);
        n_vars.push_back(task.metrics.n_vars);
        n_constraints.push_back(task.metrics.n_constraints);
        e_bf.push_back(task.metrics.e_bf.to_double());
        correct.push_back(answer_correct(task, parse_response(task, tr.response)) ? 1.0 : 0.0);
    }

    auto row = [&](const std::string& name, const std::vector<double>& axis) {
        if (axis.size() < 2) return AxisCorrelation{name, {0.0, 1.0, true}};
        return AxisCorrelation{name, spearman(axis, correct)};
    };
    return {row("depth_d", depth), row("n_vars", n_vars),
            row("n_constraints", n_constraints), row("e_bf", e_bf)};
}

inline ojson correlation_to_json(const std::vector<AxisCorrelation>& table) {
    ojson j = ojson::array();
    for (const auto& r : table) {
        ojson row;
        row["axis"] = r.axis;
        row["rho"] = r.result.rho;
        row["p_value"] = r.result.p_value;
        row["undefined"] = r.result.undefined;
        j.push_back(std::move(row));
    }
    return j;
}

namespace detail {

struct BoundedVals {
    std::vector<std::int8_t> vals;
    bool contradiction = false;
};

// Round-limited unit propagation: each round derives every literal forced by
// the values fixed before the round began, so a k-step derivation chain needs
// exactly k rounds. The fixpoint matches full propagation.
inline BoundedVals bounded_infer(const logic::ClauseSet& cs,
                                 const std::vector<logic::Literal>& assumptions, int rounds) {
    BoundedVals r;
    r.vals.assign(cs.n_vars, -1);
    for (auto l : assumptions) {
        const std::int8_t want = l.pos ? 1 : 0;
        if (r.vals[l.var] >= 0 && r.vals[l.var] != want) {
            r.contradiction = true;
            return r;
        }
        r.vals[l.var] = want;
    }
    for (int round = 0; round < rounds; ++round) {
        std::vector<logic::Literal> forced;
        for (const auto& clause : cs.clauses) {
            bool satisfied = false;
            int open = 0;
            logic::Literal unit{};
            for (auto l : clause) {
                if (r.vals[l.var] < 0) {
                    ++open;
                    unit = l;
                } else if (r.vals[l.var] == (l.pos ? 1 : 0)) {
                    satisfied = true;
                    break;
                }
            }
            if (satisfied) continue;
            if (open == 0) {
                r.contradiction = true;
                return r;
            }
            if (open == 1) forced.push_back(unit);
        }
        bool changed = false;
        for (auto l : forced) {
            const std::int8_t want = l.pos ? 1 : 0;
            if (r.vals[l.var] >= 0) {
                if (r.vals[l.var] != want) {
                    r.contradiction = true;
                    return r;
                }
                continue;
            }
            r.vals[l.var] = want;
            changed = true;
        }
        if (!changed) break;
    }
    return r;
}

inline std::string solve_logic_bounded(const Task& t, int depth) {
    std::string rules_text;
    for (const auto& r : t.context.at("rules")) rules_text += r.get<std::string>() + "\n";
    auto rs = logic::parse_rules(rules_text);
    auto cs = logic::to_clauses(rs);

    std::vector<logic::Literal> assignment;
    for (const auto& f : t.context.at("known_facts")) {
        std::string s = f.get<std::string>();  // "Alice is [not] attr."
        const std::string prefix = "Alice is ";
        if (s.rfind(prefix, 0) != 0) return "";
        s = strip_trailing_punct(s.substr(prefix.size()));
        bool pos = true;
        if (s.rfind("not ", 0) == 0) {
            pos = false;
            s = s.substr(4);
        }
        assignment.push_back({rs.vocab.id(s), pos});
    }
    const int target = rs.vocab.id(t.context.at("target").get<std::string>());
    std::set<int> forbidden;
    for (const auto& a : t.context.at("forbidden"))
        forbidden.insert(rs.vocab.id(a.get<std::string>()));

    auto base = bounded_infer(cs, assignment, depth);
    if (base.contradiction) return "";
    if (base.vals[target] >= 0) return "End questioning";

    for (int v = 0; v < cs.n_vars; ++v) {
        if (v == target || base.vals[v] >= 0 || forbidden.count(v)) continue;
        auto branch = [&](bool pol) {
            auto a = assignment;
            a.push_back({v, pol});
            return bounded_infer(cs, a, depth);
        };
        auto bt = branch(true);
        auto bf = branch(false);
        if (bt.contradiction || bf.contradiction) continue;
        if (bt.vals[target] < 0 || bf.vals[target] < 0) continue;
        if (bt.vals[target] == bf.vals[target]) continue;
        // Screen late contradictions at full depth so every emitted question
        // names a variable the task's own sufficiency check accepts.
        auto full = [&](bool pol) {
            auto a = assignment;
            a.push_back({v, pol});
            return logic::infer(cs, a).contradiction;
        };
        if (full(true) || full(false)) continue;
        return "Question: Is Alice " + rs.vocab.names[v] + "?";
    }
    return "";
}

inline std::set<std::string> bounded_gsme_closure(const gsm::MathCsp& csp,
                                                  std::set<std::string> known, int rounds) {
    for (int round = 0; round < rounds; ++round) {
        std::vector<std::string> add;
        for (const auto& eq : csp.equations) {
            if (known.count(eq.lhs)) continue;
            bool ready = true;
            for (const auto& s : eq.rhs_symbols)
                if (!known.count(s)) {
                    ready = false;
                    break;
                }
            if (ready) add.push_back(eq.lhs);
        }
        if (add.empty()) break;
        known.insert(add.begin(), add.end());
    }
    return known;
}

inline std::string solve_gsme_bounded(const Task& t, int depth) {
    const std::string goal = t.context.at("goal").get<std::string>();
    std::vector<std::string> symbols;
    const std::string prefix = "What is the value of ";
    for (const auto& c : t.choices) {
        if (is_sentinel_choice(c)) continue;
        if (c.rfind(prefix, 0) != 0 || c.back() != '?') return "";
        symbols.push_back(c.substr(prefix.size(), c.size() - prefix.size() - 1));
    }

    std::string src = "Variables:\n";
    for (const auto& s : symbols) src += s + "\n";
    src += goal + "\n\nEquations:\n";
    for (const auto& e : t.context.at("equations")) src += e.get<std::string>() + "\n";
    src += "\nGoal: " + goal + "\n";
    auto csp = gsm::parse_mathcsp(src);

    std::set<std::string> known;
    for (const auto& item : t.context.at("assignments").items()) known.insert(item.key());

    if (bounded_gsme_closure(csp, known, depth).count(goal))
        return std::to_string(t.choices.size() - 1);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        auto with = known;
        with.insert(symbols[i]);
        if (bounded_gsme_closure(csp, with, depth).count(goal)) return std::to_string(i);
    }
    return "";
}

inline std::string solve_planning_bounded(const Task& t, int depth) {
    std::vector<std::string> blocks;
    for (const auto& b : t.context.at("objects")) blocks.push_back(b.get<std::string>());
    planning::StateSpace sp(blocks);

    planning::PartialState known;
    for (const auto& rec : t.context.at("known_atoms")) {
        auto id = sp.parse_atom(rec.at("atom").get<std::string>());
        if (!id) return "";
        known.set(*id, rec.at("truth").get<bool>());
    }
    std::vector<std::string> goals;
    for (const auto& g : t.context.at("goal_atoms")) goals.push_back(g.get<std::string>());

    auto gen = planning::task_from_partial(sp, known, goals);
    if (!gen || gen->depth_d > depth) return "";
    if (gen->well_specified) return std::to_string(sp.n_atoms());
    const int atom = *std::min_element(gen->correct_atoms.begin(), gen->correct_atoms.end());
    return std::to_string(atom);
}

}  // namespace detail

// Depth-capped replay of the domain solvers over each task's own context.
// Anything unresolved within the cap stays an empty (unparseable) response.
inline std::vector<Transcript> bfs_baseline(const std::vector<Task>& dataset, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    std::vector<Transcript> out;
    const std::string mode = "baseline:bfs:" + std::to_string(depth);
    for (const Task& t : dataset) {
        std::string response;
        try {
            switch (t.domain) {
                case Domain::logic: response = detail::solve_logic_bounded(t, depth); break;
                case Domain::gsme: response = detail::solve_gsme_bounded(t, depth); break;
                case Domain::planning:
                    response = detail::solve_planning_bounded(t, depth);
                    break;
            }
        } catch (const std::exception&) {
            response.clear();
        }
        out.push_back({t.task_id, mode, response});
    }
    return out;
}

inline std::vector<Transcript> random_baseline(const std::vector<Task>& dataset,
                                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Transcript> out;
    const std::string mode = "baseline:random:" + std::to_string(seed);
    for (const Task& t : dataset) {
        const int k = static_cast<int>(rng() % t.choices.size());
        std::string response;
        if (t.domain == Domain::logic)
            response = is_sentinel_choice(t.choices[k])
                           ? "End questioning"
                           : "Question: Is Alice " + t.choices[k] + "?";
        else
            response = std::to_string(k);
        out.push_back({t.task_id, mode, response});
    }
    return out;
}

}  // namespace qf::evalkit

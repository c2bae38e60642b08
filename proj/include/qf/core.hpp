#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qf/rational.hpp"

namespace qf {

using ojson = nlohmann::ordered_json;

// Error with a 1-based source line, used by every text-format parser in the toolkit.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class Domain { logic, planning, gsme };

inline std::string to_string(Domain d) {
    switch (d) {
        case Domain::logic: return "logic";
        case Domain::planning: return "planning";
        case Domain::gsme: return "gsme";
    }
    throw std::logic_error("bad domain value");
}

inline Domain domain_from_string(const std::string& s) {
    if (s == "logic") return Domain::logic;
    if (s == "planning") return Domain::planning;
    if (s == "gsme") return Domain::gsme;
    throw std::invalid_argument("unknown domain: " + s);
}

struct DifficultyMetrics {
    int depth_d = 0;
    int n_vars = 0;
    int n_constraints = 0;
    Rational e_bf{1};

    friend bool operator==(const DifficultyMetrics&, const DifficultyMetrics&) = default;
};

struct Task {
    std::string task_id;
    Domain domain = Domain::logic;
    ojson context;
    std::vector<std::string> choices;
    std::vector<int> correct_indices;  // sorted ascending
    std::vector<int> invalid_indices;  // sorted ascending
    bool well_specified = false;
    DifficultyMetrics metrics;
};

// The two "no question" sentinel spellings used across the three domains.
inline bool is_sentinel_choice(const std::string& s) {
    return s == "No questions needed." || s == "End questioning";
}

inline int sentinel_index(const Task& t) {
    for (std::size_t i = 0; i < t.choices.size(); ++i)
        if (is_sentinel_choice(t.choices[i])) return static_cast<int>(i);
    return -1;
}

// Expected number of uniform guesses without replacement until the first of
// n_correct marked choices is hit among n_choices listed ones.
inline Rational expected_guesses(int n_choices, int n_correct) {
    if (n_correct < 1) throw std::invalid_argument("expected_guesses: n_correct must be >= 1");
    if (n_correct > n_choices)
        throw std::invalid_argument("expected_guesses: n_correct exceeds n_choices");
    return Rational(n_choices + 1, n_correct + 1);
}

inline std::vector<std::string> validate_task(const Task& t) {
    std::vector<std::string> v;
    const int n = static_cast<int>(t.choices.size());

    if (t.correct_indices.empty()) v.push_back("no correct choice");

    auto in_range = [&](const std::vector<int>& xs, const char* name) {
        for (int i : xs)
            if (i < 0 || i >= n)
                v.push_back(std::string(name) + " index " + std::to_string(i) + " out of range");
    };
    in_range(t.correct_indices, "correct");
    in_range(t.invalid_indices, "invalid");

    auto has_dupes = [](std::vector<int> xs) {
        std::sort(xs.begin(), xs.end());
        return std::adjacent_find(xs.begin(), xs.end()) != xs.end();
    };
    if (has_dupes(t.correct_indices)) v.push_back("duplicate correct index");
    if (has_dupes(t.invalid_indices)) v.push_back("duplicate invalid index");

    std::set<int> correct(t.correct_indices.begin(), t.correct_indices.end());
    for (int i : t.invalid_indices)
        if (correct.count(i)) v.push_back("correct/invalid overlap");

    int sentinels = 0;
    for (const auto& c : t.choices) sentinels += is_sentinel_choice(c) ? 1 : 0;
    if (sentinels != 1)
        v.push_back("expected exactly one no-question sentinel, found " + std::to_string(sentinels));

    if (sentinels == 1) {
        const bool correct_is_sentinel_only =
            correct.size() == 1 && *correct.begin() == sentinel_index(t);
        if (t.well_specified && !correct_is_sentinel_only)
            v.push_back("well_specified task whose correct set is not exactly the sentinel");
        if (!t.well_specified && correct_is_sentinel_only)
            v.push_back("underspecified task whose correct set is exactly the sentinel");
    }

    if (t.metrics.n_vars < 1) v.push_back("n_vars must be positive");
    if (t.metrics.n_constraints < 0) v.push_back("n_constraints must be non-negative");
    if (t.metrics.depth_d < 0) v.push_back("depth_d must be non-negative");
    if (!t.well_specified && t.metrics.depth_d < 1)
        v.push_back("underspecified task with depth_d < 1");
    if (t.metrics.e_bf < Rational(1)) v.push_back("e_bf below 1");
    if (n > 0 && t.metrics.e_bf > Rational(n)) v.push_back("e_bf exceeds choice count");

    if (t.task_id.empty()) v.push_back("empty task_id");
    return v;
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::string hex64(std::uint64_t x) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) { out[i] = digits[x & 0xF]; x >>= 4; }
    return out;
}
}  // namespace detail

inline std::string make_task_id(Domain d, std::uint64_t seed, int ordinal) {
    return to_string(d) + "-" + detail::hex64(detail::splitmix64(seed)) + "-" +
           std::to_string(ordinal);
}

inline ojson task_to_json(const Task& t) {
    ojson j;
    j["task_id"] = t.task_id;
    j["domain"] = to_string(t.domain);
    j["context"] = t.context;
    j["choices"] = t.choices;
    j["correct_indices"] = t.correct_indices;
    j["invalid_indices"] = t.invalid_indices;
    j["well_specified"] = t.well_specified;
    ojson m;
    m["depth_d"] = t.metrics.depth_d;
    m["n_vars"] = t.metrics.n_vars;
    m["n_constraints"] = t.metrics.n_constraints;
    m["e_bf_num"] = t.metrics.e_bf.num;
    m["e_bf_den"] = t.metrics.e_bf.den;
    j["metrics"] = m;
    return j;
}

inline Task task_from_json(const ojson& j, int line = 0) {
    auto need = [&](const char* field) -> const ojson& {
        auto it = j.find(field);
        if (it == j.end()) throw ParseError(line, std::string("missing field: ") + field);
        return *it;
    };
    Task t;
    try {
        t.task_id = need("task_id").get<std::string>();
        t.domain = domain_from_string(need("domain").get<std::string>());
        t.context = need("context");
        t.choices = need("choices").get<std::vector<std::string>>();
        t.correct_indices = need("correct_indices").get<std::vector<int>>();
        t.invalid_indices = need("invalid_indices").get<std::vector<int>>();
        t.well_specified = need("well_specified").get<bool>();
        const ojson& m = need("metrics");
        auto mneed = [&](const char* field) -> const ojson& {
            auto it = m.find(field);
            if (it == m.end())
                throw ParseError(line, std::string("missing metrics field: ") + field);
            return *it;
        };
        t.metrics.depth_d = mneed("depth_d").get<int>();
        t.metrics.n_vars = mneed("n_vars").get<int>();
        t.metrics.n_constraints = mneed("n_constraints").get<int>();
        t.metrics.e_bf = Rational(mneed("e_bf_num").get<std::int64_t>(),
                                  mneed("e_bf_den").get<std::int64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(line, std::string("bad field type: ") + e.what());
    }
    return t;
}

}  // namespace qf

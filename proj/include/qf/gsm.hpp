#pragma once

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qf/core.hpp"
#include "qf/rational.hpp"

namespace qf::gsm {

// Arithmetic expression node. An equation stores its right-hand side as a
// flat vector of these, linked by operand indices, so equations stay
// copyable and comparable by value.
struct Expr {
    enum class Kind { constant, symbol, add, sub, mul, divide, negate };
    Kind kind = Kind::constant;
    Rational value;
    std::string symbol;
    int a = -1;
    int b = -1;

    friend bool operator==(const Expr&, const Expr&) = default;
};

struct Equation {
    std::string lhs;
    std::vector<Expr> nodes;
    int root = -1;
    std::string rhs_text;
    std::string description;
    std::vector<std::string> rhs_symbols;  // sorted, unique

    friend bool operator==(const Equation&, const Equation&) = default;
};

struct MathVar {
    std::string symbol;
    std::string description;
    std::optional<Rational> value;

    friend bool operator==(const MathVar&, const MathVar&) = default;
};

// A grade-school math problem in annotated form: declared variables (some
// carrying assignments), directed equations defining derived variables, and
// one goal variable. Distractors are the assigned variables whose values can
// never influence the goal; they are identified at parse time from the
// equation structure.
struct MathCsp {
    std::vector<MathVar> vars;  // declaration order
    std::vector<Equation> equations;
    std::string goal;
    std::string goal_question;
    std::vector<std::string> distractors;  // declaration order

    friend bool operator==(const MathCsp&, const MathCsp&) = default;

    const MathVar* find(const std::string& symbol) const {
        for (const MathVar& v : vars)
            if (v.symbol == symbol) return &v;
        return nullptr;
    }

    std::vector<std::string> assigned_symbols() const {
        std::vector<std::string> out;
        for (const MathVar& v : vars)
            if (v.value) out.push_back(v.symbol);
        return out;
    }
};

// Raised when propagation derives a value that contradicts one already held.
class InconsistencyError : public std::runtime_error {
public:
    explicit InconsistencyError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_identifier(const std::string& s) {
    if (s.empty() || !is_ident_start(s[0])) return false;
    for (char c : s)
        if (!is_ident_char(c)) return false;
    return true;
}

// Parses an unsigned integer or decimal literal starting at pos, returning
// the exact rational and advancing pos past it.
inline bool lex_number(const std::string& s, std::size_t& pos, Rational& out) {
    std::size_t i = pos;
    std::int64_t whole = 0;
    bool any = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        whole = whole * 10 + (s[i] - '0');
        any = true;
        ++i;
    }
    if (!any) return false;
    std::int64_t num = whole, den = 1;
    if (i < s.size() && s[i] == '.') {
        std::size_t j = i + 1;
        std::int64_t frac = 0, scale = 1;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
            frac = frac * 10 + (s[j] - '0');
            scale *= 10;
            ++j;
        }
        if (j == i + 1) return false;
        num = whole * scale + frac;
        den = scale;
        i = j;
    }
    out = Rational(num, den);
    pos = i;
    return true;
}

// Parses a value literal for a variable assignment: an optionally signed
// integer or decimal, with nothing left over.
inline bool parse_value_literal(const std::string& text, Rational& out) {
    std::string s = trim(text);
    if (s.empty()) return false;
    bool negative = false;
    std::size_t pos = 0;
    if (s[0] == '-' || s[0] == '+') {
        negative = s[0] == '-';
        pos = 1;
    }
    Rational v;
    if (!lex_number(s, pos, v)) return false;
    if (pos != s.size()) return false;
    out = negative ? Rational(0) - v : v;
    return true;
}

struct ExprToken {
    enum class Type { number, symbol, plus, minus, star, slash, lparen, rparen, end };
    Type type = Type::end;
    Rational value;
    std::string text;
};

// Recursive-descent parser for equation right-hand sides. Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | NUMBER | SYMBOL | '(' expr ')'
struct ExprParser {
    const std::vector<ExprToken>& tokens;
    std::size_t pos = 0;
    int line;
    std::vector<Expr>* nodes;
    std::set<std::string>* symbols;

    [[noreturn]] void fail() const { throw ParseError(line, "malformed expression"); }

    const ExprToken& peek() const { return tokens[pos]; }

    int emit(Expr e) {
        nodes->push_back(std::move(e));
        return static_cast<int>(nodes->size()) - 1;
    }

    int parse_expr() {
        int left = parse_term();
        while (peek().type == ExprToken::Type::plus || peek().type == ExprToken::Type::minus) {
            bool add = peek().type == ExprToken::Type::plus;
            ++pos;
            int right = parse_term();
            Expr e;
            e.kind = add ? Expr::Kind::add : Expr::Kind::sub;
            e.a = left;
            e.b = right;
            left = emit(std::move(e));
        }
        return left;
    }

    int parse_term() {
        int left = parse_factor();
        while (peek().type == ExprToken::Type::star || peek().type == ExprToken::Type::slash) {
            bool mul = peek().type == ExprToken::Type::star;
            ++pos;
            int right = parse_factor();
            Expr e;
            e.kind = mul ? Expr::Kind::mul : Expr::Kind::divide;
            e.a = left;
            e.b = right;
            left = emit(std::move(e));
        }
        return left;
    }

    int parse_factor() {
        const ExprToken& t = peek();
        switch (t.type) {
            case ExprToken::Type::minus: {
                ++pos;
                int inner = parse_factor();
                Expr e;
                e.kind = Expr::Kind::negate;
                e.a = inner;
                return emit(std::move(e));
            }
            case ExprToken::Type::number: {
                Expr e;
                e.kind = Expr::Kind::constant;
                e.value = t.value;
                ++pos;
                return emit(std::move(e));
            }
            case ExprToken::Type::symbol: {
                Expr e;
                e.kind = Expr::Kind::symbol;
                e.symbol = t.text;
                symbols->insert(t.text);
                ++pos;
                return emit(std::move(e));
            }
            case ExprToken::Type::lparen: {
                ++pos;
                int inner = parse_expr();
                if (peek().type != ExprToken::Type::rparen) fail();
                ++pos;
                return inner;
            }
            default:
                fail();
        }
    }
};

inline std::vector<ExprToken> lex_expression(const std::string& s, int line) {
    std::vector<ExprToken> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        ExprToken t;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            t.type = ExprToken::Type::number;
            if (!lex_number(s, i, t.value)) throw ParseError(line, "malformed expression");
        } else if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && is_ident_char(s[j])) ++j;
            t.type = ExprToken::Type::symbol;
            t.text = s.substr(i, j - i);
            i = j;
        } else {
            switch (c) {
                case '+': t.type = ExprToken::Type::plus; break;
                case '-': t.type = ExprToken::Type::minus; break;
                case '*': t.type = ExprToken::Type::star; break;
                case '/': t.type = ExprToken::Type::slash; break;
                case '(': t.type = ExprToken::Type::lparen; break;
                case ')': t.type = ExprToken::Type::rparen; break;
                default: throw ParseError(line, "malformed expression");
            }
            ++i;
        }
        out.push_back(std::move(t));
    }
    out.push_back(ExprToken{});
    return out;
}

// Splits a raw annotation line into the part before any bracketed
// description and the description itself. A description must run to the end
// of the line.
inline void split_description(const std::string& raw, int line, std::string& head,
                              std::string& description) {
    std::size_t open = raw.find('[');
    if (open == std::string::npos) {
        head = trim(raw);
        description = "";
        return;
    }
    std::string tail = trim(raw.substr(open));
    if (tail.size() < 2 || tail.back() != ']')
        throw ParseError(line, "malformed description, expected closing ']'");
    head = trim(raw.substr(0, open));
    description = tail.substr(1, tail.size() - 2);
}

}  // namespace detail

// Parses the three-block annotation format:
//
//   Variables:
//   A = 10 [Number of eggs in the first basket]
//   B [Number of eggs in the second basket]
//
//   Equations:
//   B = 2 * A [There are twice as many eggs in the second basket.]
//
//   Goal: B. How many eggs are in the second basket?
//
// Assignments and descriptions are optional per line; the goal's trailing
// question is optional. Throws ParseError with a 1-based line number on any
// structural problem.
inline MathCsp parse_mathcsp(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t nl = text.find('\n', start);
            if (nl == std::string::npos) {
                lines.push_back(text.substr(start));
                break;
            }
            lines.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
        if (!lines.empty() && lines.back().empty()) lines.pop_back();
    }

    MathCsp csp;
    std::set<std::string> declared;
    std::set<std::string> equation_lhs;
    enum class Section { header, variables, equations, done };
    Section section = Section::header;
    bool saw_goal = false;

    for (std::size_t idx = 0; idx < lines.size(); ++idx) {
        const int line = static_cast<int>(idx) + 1;
        const std::string trimmed = detail::trim(lines[idx]);
        if (trimmed.empty()) continue;

        if (section == Section::header) {
            if (trimmed != "Variables:")
                throw ParseError(line, "expected 'Variables:' header");
            section = Section::variables;
            continue;
        }
        if (section == Section::done)
            throw ParseError(line, "content after the Goal line");

        if (trimmed == "Equations:") {
            if (section != Section::variables)
                throw ParseError(line, "unexpected 'Equations:' header");
            section = Section::equations;
            continue;
        }
        if (trimmed.rfind("Goal:", 0) == 0) {
            std::string rest = detail::trim(trimmed.substr(5));
            if (rest.empty()) throw ParseError(line, "empty goal symbol");
            std::size_t dot = rest.find('.');
            std::string symbol = detail::trim(dot == std::string::npos ? rest : rest.substr(0, dot));
            if (!detail::is_identifier(symbol) || !declared.count(symbol))
                throw ParseError(line, "unknown symbol '" + symbol + "' in goal");
            csp.goal = symbol;
            if (dot != std::string::npos) csp.goal_question = detail::trim(rest.substr(dot + 1));
            saw_goal = true;
            section = Section::done;
            continue;
        }

        std::string head, description;
        detail::split_description(lines[idx], line, head, description);

        if (section == Section::variables) {
            std::size_t eq = head.find('=');
            std::string symbol = detail::trim(eq == std::string::npos ? head : head.substr(0, eq));
            if (!detail::is_identifier(symbol))
                throw ParseError(line, "malformed variable name '" + symbol + "'");
            if (declared.count(symbol))
                throw ParseError(line, "duplicate variable '" + symbol + "'");
            MathVar var;
            var.symbol = symbol;
            var.description = description;
            if (eq != std::string::npos) {
                Rational v;
                if (!detail::parse_value_literal(head.substr(eq + 1), v))
                    throw ParseError(line, "malformed value for variable '" + symbol + "'");
                var.value = v;
            }
            declared.insert(symbol);
            csp.vars.push_back(std::move(var));
            continue;
        }

        // Equations section.
        std::size_t eq = head.find('=');
        if (eq == std::string::npos) throw ParseError(line, "malformed equation, expected '='");
        std::string lhs = detail::trim(head.substr(0, eq));
        if (!detail::is_identifier(lhs))
            throw ParseError(line, "malformed equation left-hand side '" + lhs + "'");
        if (!declared.count(lhs))
            throw ParseError(line, "unknown symbol '" + lhs + "'");
        if (equation_lhs.count(lhs))
            throw ParseError(line, "duplicate equation for '" + lhs + "'");

        Equation eqn;
        eqn.lhs = lhs;
        eqn.description = description;
        eqn.rhs_text = detail::trim(head.substr(eq + 1));
        if (eqn.rhs_text.empty()) throw ParseError(line, "malformed expression");

        std::set<std::string> symbols;
        auto tokens = detail::lex_expression(eqn.rhs_text, line);
        detail::ExprParser parser{tokens, 0, line, &eqn.nodes, &symbols};
        eqn.root = parser.parse_expr();
        if (parser.peek().type != detail::ExprToken::Type::end) parser.fail();

        for (const std::string& sym : symbols) {
            if (!declared.count(sym))
                throw ParseError(line, "unknown symbol '" + sym + "'");
            if (sym == lhs)
                throw ParseError(line, "equation uses its own left-hand side '" + lhs + "'");
        }
        eqn.rhs_symbols.assign(symbols.begin(), symbols.end());
        equation_lhs.insert(lhs);
        csp.equations.push_back(std::move(eqn));
    }

    if (section == Section::header) throw ParseError(1, "expected 'Variables:' header");
    if (!saw_goal) throw ParseError(static_cast<int>(lines.size()) + 1, "missing Goal line");

    // Distractors: assigned variables outside the goal's dependency cone,
    // the backward closure of the goal over equation right-hand sides.
    std::set<std::string> cone;
    std::vector<std::string> stack{csp.goal};
    while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (!cone.insert(cur).second) continue;
        for (const Equation& e : csp.equations)
            if (e.lhs == cur)
                for (const std::string& dep : e.rhs_symbols) stack.push_back(dep);
    }
    for (const MathVar& v : csp.vars)
        if (v.value && !cone.count(v.symbol)) csp.distractors.push_back(v.symbol);

    return csp;
}

struct PropagationResult {
    std::map<std::string, Rational> values;
    std::vector<int> stuck_equations;  // equation indices, ascending

    friend bool operator==(const PropagationResult&, const PropagationResult&) = default;
};

namespace detail {

// Evaluates an equation's right-hand side against known values. Assumes all
// referenced symbols are present; returns nullopt only on division by zero.
inline std::optional<Rational> eval_node(const Equation& eq, int idx,
                                         const std::map<std::string, Rational>& values) {
    const Expr& e = eq.nodes[idx];
    switch (e.kind) {
        case Expr::Kind::constant: return e.value;
        case Expr::Kind::symbol: {
            auto it = values.find(e.symbol);
            if (it == values.end()) return std::nullopt;
            return it->second;
        }
        case Expr::Kind::negate: {
            auto v = eval_node(eq, e.a, values);
            if (!v) return std::nullopt;
            return Rational(0) - *v;
        }
        default: {
            auto l = eval_node(eq, e.a, values);
            auto r = eval_node(eq, e.b, values);
            if (!l || !r) return std::nullopt;
            switch (e.kind) {
                case Expr::Kind::add: return *l + *r;
                case Expr::Kind::sub: return *l - *r;
                case Expr::Kind::mul: return *l * *r;
                case Expr::Kind::divide:
                    if (r->num == 0) return std::nullopt;
                    return *l / *r;
                default: throw std::logic_error("bad expression node");
            }
        }
    }
}

}  // namespace detail

// Directed value propagation from an explicit starting assignment. Each
// equation fires once all its right-hand symbols are valued; a division by
// zero marks the equation stuck and propagation continues around it. A
// derived value that contradicts one already held raises InconsistencyError;
// agreement is accepted silently.
inline PropagationResult propagate_with(const MathCsp& csp,
                                        const std::map<std::string, Rational>& start) {
    PropagationResult out;
    out.values = start;
    std::set<int> stuck;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < csp.equations.size(); ++i) {
            const Equation& eq = csp.equations[i];
            bool ready = true;
            for (const std::string& sym : eq.rhs_symbols)
                if (!out.values.count(sym)) {
                    ready = false;
                    break;
                }
            if (!ready) continue;
            auto v = detail::eval_node(eq, eq.root, out.values);
            if (!v) {
                stuck.insert(static_cast<int>(i));
                continue;
            }
            auto it = out.values.find(eq.lhs);
            if (it != out.values.end()) {
                if (it->second != *v)
                    throw InconsistencyError("inconsistent value for '" + eq.lhs + "': " +
                                             it->second.str() + " vs " + v->str());
                continue;
            }
            out.values.emplace(eq.lhs, *v);
            changed = true;
        }
    }
    out.stuck_equations.assign(stuck.begin(), stuck.end());
    return out;
}

inline PropagationResult propagate(const MathCsp& csp) {
    std::map<std::string, Rational> start;
    for (const MathVar& v : csp.vars)
        if (v.value) start.emplace(v.symbol, *v.value);
    return propagate_with(csp, start);
}

// Structural derivability: the set of symbols whose values follow from the
// given known set, closing each equation whose right-hand symbols are all
// known. Value-independent, so it certifies derivability regardless of the
// particular numbers involved.
inline std::set<std::string> derivable_closure(const MathCsp& csp,
                                               std::set<std::string> known) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Equation& eq : csp.equations) {
            if (known.count(eq.lhs)) continue;
            bool ready = true;
            for (const std::string& sym : eq.rhs_symbols)
                if (!known.count(sym)) {
                    ready = false;
                    break;
                }
            if (ready) {
                known.insert(eq.lhs);
                changed = true;
            }
        }
    }
    return known;
}

// A solvable or deliberately underspecified arithmetic task. For the
// underspecified form exactly one assignment has been withheld and asking
// for any symbol in correct_symbols recovers the goal; for the
// well-specified form the kept assignments already determine the goal.
struct GsmeTask {
    std::map<std::string, Rational> assignments;
    std::vector<std::string> equation_texts;
    std::string goal;
    std::string goal_question;
    std::vector<std::string> choice_symbols;  // every non-goal variable, declaration order
    std::vector<std::string> correct_symbols;
    std::optional<std::string> withheld;
    bool well_specified = false;
    int depth_d = 0;
    int n_vars = 0;
    int n_constraints = 0;

    friend bool operator==(const GsmeTask&, const GsmeTask&) = default;
};

namespace detail {

// Breadth-first levels backward from the goal along equation operand edges.
// The goal sits at level zero; a symbol's level is the length of the
// shortest derivation chain that reaches it from the goal.
inline std::map<std::string, int> backward_levels(const MathCsp& csp) {
    std::map<std::string, std::vector<std::string>> deps;
    for (const Equation& eq : csp.equations) deps[eq.lhs] = eq.rhs_symbols;
    std::map<std::string, int> level{{csp.goal, 0}};
    std::vector<std::string> frontier{csp.goal};
    int depth = 0;
    while (!frontier.empty()) {
        ++depth;
        std::vector<std::string> next;
        for (const std::string& sym : frontier) {
            auto it = deps.find(sym);
            if (it == deps.end()) continue;
            for (const std::string& dep : it->second)
                if (level.emplace(dep, depth).second) next.push_back(dep);
        }
        frontier = std::move(next);
    }
    return level;
}

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

inline void fill_common_fields(const MathCsp& csp, GsmeTask& task) {
    for (const Equation& eq : csp.equations)
        task.equation_texts.push_back(eq.lhs + " = " + eq.rhs_text);
    task.goal = csp.goal;
    task.goal_question = csp.goal_question;
    for (const MathVar& v : csp.vars)
        if (v.symbol != csp.goal) task.choice_symbols.push_back(v.symbol);
    task.n_vars = static_cast<int>(csp.vars.size());
    task.n_constraints = static_cast<int>(csp.equations.size());
}

}  // namespace detail

// Builds the underspecified task obtained by withholding one non-distractor
// assignment. Returns nullopt, with an explanation in *reason when given,
// if the withheld value is not actually necessary (the goal still follows
// without it) or not sufficient (the goal stays out of reach even with it).
// Throws std::invalid_argument when the symbol is not a withholdable
// assignment at all: unknown, unassigned, the goal itself, or a distractor.
inline std::optional<GsmeTask> make_underspecified(const MathCsp& csp,
                                                   const std::string& withheld,
                                                   std::string* reason = nullptr) {
    const MathVar* var = csp.find(withheld);
    if (!var || !var->value)
        throw std::invalid_argument("withheld symbol must be an assigned variable: " + withheld);
    if (withheld == csp.goal)
        throw std::invalid_argument("cannot withhold the goal variable: " + withheld);
    if (detail::contains(csp.distractors, withheld))
        throw std::invalid_argument("cannot withhold a distractor assignment: " + withheld);

    std::map<std::string, Rational> kept;
    for (const MathVar& v : csp.vars)
        if (v.value && v.symbol != withheld && !detail::contains(csp.distractors, v.symbol))
            kept.emplace(v.symbol, *v.value);

    std::set<std::string> known;
    for (const auto& [sym, value] : kept) known.insert(sym);

    if (derivable_closure(csp, known).count(csp.goal)) {
        if (reason) *reason = "necessity violated: goal derivable without '" + withheld + "'";
        return std::nullopt;
    }

    std::set<std::string> with = known;
    with.insert(withheld);
    bool sufficient = derivable_closure(csp, with).count(csp.goal) > 0;
    if (sufficient) {
        auto probe = kept;
        probe.emplace(withheld, *var->value);
        sufficient = propagate_with(csp, probe).values.count(csp.goal) > 0;
    }
    if (!sufficient) {
        if (reason) *reason = "sufficiency violated: goal not derivable even with '" + withheld + "'";
        return std::nullopt;
    }

    GsmeTask task;
    task.assignments = std::move(kept);
    detail::fill_common_fields(csp, task);
    for (const std::string& choice : task.choice_symbols) {
        std::set<std::string> probe = known;
        probe.insert(choice);
        if (derivable_closure(csp, probe).count(csp.goal)) task.correct_symbols.push_back(choice);
    }
    task.withheld = withheld;
    task.well_specified = false;

    auto levels = detail::backward_levels(csp);
    int best = INT_MAX;
    for (const std::string& sym : task.correct_symbols) {
        auto it = levels.find(sym);
        if (it != levels.end()) best = std::min(best, it->second);
    }
    task.depth_d = best;
    return task;
}

// Builds the fully specified variant: all non-distractor assignments kept.
// Returns nullopt when those assignments do not determine the goal. The
// depth counts propagation rounds until the goal is valued, where each round
// fires every equation whose inputs are already known.
inline std::optional<GsmeTask> make_well_specified(const MathCsp& csp) {
    std::map<std::string, Rational> kept;
    for (const MathVar& v : csp.vars)
        if (v.value && !detail::contains(csp.distractors, v.symbol))
            kept.emplace(v.symbol, *v.value);

    std::set<std::string> known;
    for (const auto& [sym, value] : kept) known.insert(sym);
    if (!derivable_closure(csp, known).count(csp.goal)) return std::nullopt;
    if (!propagate_with(csp, kept).values.count(csp.goal)) return std::nullopt;

    GsmeTask task;
    task.assignments = std::move(kept);
    detail::fill_common_fields(csp, task);
    task.well_specified = true;

    int rounds = 0;
    while (!known.count(csp.goal)) {
        std::set<std::string> added;
        for (const Equation& eq : csp.equations) {
            if (known.count(eq.lhs)) continue;
            bool ready = true;
            for (const std::string& sym : eq.rhs_symbols)
                if (!known.count(sym)) {
                    ready = false;
                    break;
                }
            if (ready) added.insert(eq.lhs);
        }
        known.insert(added.begin(), added.end());
        ++rounds;
    }
    task.depth_d = rounds;
    return task;
}

// Re-derives the verdict for every choice symbol of a task: true when asking
// for that symbol's value would make the goal derivable from the task's kept
// assignments.
inline std::map<std::string, bool> check_task(const MathCsp& csp, const GsmeTask& task) {
    std::set<std::string> base;
    for (const auto& [sym, value] : task.assignments) base.insert(sym);
    std::map<std::string, bool> out;
    for (const std::string& choice : task.choice_symbols) {
        std::set<std::string> probe = base;
        probe.insert(choice);
        out[choice] = derivable_closure(csp, probe).count(csp.goal) > 0;
    }
    return out;
}

}  // namespace qf::gsm

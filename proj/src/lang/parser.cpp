#include "spbdi/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace spbdi {

parse_error::parse_error(int line, int column, std::string message, std::vector<std::string> expected)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

enum class tok { ident, var, number, string, internal, punct, end, eof };

struct token {
    tok kind = tok::eof;
    std::string text;
    std::int64_t value = 0;
    bool quoted = false;
    int line = 1;
    int column = 1;
};

std::string describe(const token& t) {
    switch (t.kind) {
        case tok::eof:
            return "end of input";
        case tok::end:
            return "'.'";
        case tok::string:
            return "string";
        case tok::number:
            return "number";
        default:
            return "'" + t.text + "'";
    }
}

class lexer {
public:
    explicit lexer(std::string_view src) : src_(src) {}

    std::vector<token> run() {
        std::vector<token> out;
        for (;;) {
            skip_space();
            token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                t.kind = tok::eof;
                out.push_back(t);
                return out;
            }
            const char c = src_[pos_];
            if (std::islower(static_cast<unsigned char>(c))) {
                t.kind = tok::ident;
                t.text = take_word();
            } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = tok::var;
                t.text = take_word();
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                t.kind = tok::number;
                std::string digits;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    digits.push_back(advance());
                }
                if (digits.size() > 18) {
                    throw parse_error(t.line, t.column, "integer literal too large");
                }
                t.value = std::stoll(digits);
                t.text = digits;
            } else if (c == '"' || c == '\'') {
                t.kind = c == '"' ? tok::string : tok::ident;
                t.quoted = true;
                t.text = take_quoted(c, t);
            } else if (c == '.') {
                if (pos_ + 1 < src_.size() && std::islower(static_cast<unsigned char>(src_[pos_ + 1]))) {
                    advance();
                    t.kind = tok::internal;
                    t.text = "." + take_word();
                } else {
                    advance();
                    t.kind = tok::end;
                    t.text = ".";
                }
            } else {
                t.kind = tok::punct;
                t.text = take_punct(t);
            }
            out.push_back(std::move(t));
        }
    }

private:
    char advance() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                const int l = line_, k = col_;
                advance();
                advance();
                while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) {
                    advance();
                }
                if (pos_ + 1 >= src_.size()) {
                    throw parse_error(l, k, "unterminated block comment");
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    std::string take_word() {
        std::string w;
        while (pos_ < src_.size()) {
            const auto c = static_cast<unsigned char>(src_[pos_]);
            if (!std::isalnum(c) && c != '_') {
                break;
            }
            w.push_back(advance());
        }
        return w;
    }

    std::string take_quoted(char q, const token& t) {
        advance();
        std::string s;
        for (;;) {
            if (pos_ >= src_.size() || src_[pos_] == '\n') {
                throw parse_error(t.line, t.column, "unterminated quoted text");
            }
            char c = advance();
            if (c == q) {
                return s;
            }
            if (c == '\\') {
                if (pos_ >= src_.size()) {
                    throw parse_error(t.line, t.column, "unterminated quoted text");
                }
                c = advance();
                if (c != q && c != '\\') {
                    throw parse_error(line_, col_ - 1, "unsupported escape sequence");
                }
            }
            s.push_back(c);
        }
    }

    std::string take_punct(const token& t) {
        static const char* multi[] = {"\\==", ":-", "<-", "<=", "=<", ">=", "==", "!!"};
        for (const char* m : multi) {
            const std::string_view mv(m);
            if (src_.substr(pos_, mv.size()) == mv) {
                for (std::size_t i = 0; i < mv.size(); ++i) {
                    advance();
                }
                return mv == "=<" ? std::string("<=") : std::string(mv);
            }
        }
        static const std::string_view singles = "()[]{},;:!?+-&|<>=@";
        const char c = src_[pos_];
        if (singles.find(c) == std::string_view::npos) {
            throw parse_error(t.line, t.column, std::string("unexpected character '") + c + "'");
        }
        advance();
        return std::string(1, c);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class parser {
public:
    explicit parser(std::string_view src) : toks_(lexer(src).run()) {}

    term formula() { return disjunction(); }

    void expect_eof() {
        if (peek().kind != tok::eof) {
            fail({"end of input"});
        }
    }

    agent_program program() {
        agent_program prog;
        std::optional<ebdg_block> open_block;
        std::vector<std::pair<std::size_t, token>> explicit_labels;  // plan index, label token
        while (peek().kind != tok::eof) {
            const token start = peek();
            if (is_punct("{")) {
                directive(prog, open_block);
            } else if (is_punct("@") || is_punct("+") || is_punct("-")) {
                std::optional<token> label_tok;
                plan p = plan_clause(label_tok);
                if (label_tok) {
                    explicit_labels.emplace_back(prog.plans.size(), *label_tok);
                }
                if (open_block) {
                    if (p.trig.type != trigger_type::achieve || p.trig.op != trigger_op::add) {
                        throw parse_error(start.line, start.column,
                                          "ebdg blocks may only contain achievement-goal plans");
                    }
                    open_block->labels.push_back(std::to_string(prog.plans.size()));
                }
                prog.plans.push_back(std::move(p));
            } else if (is_punct("!")) {
                next();
                prog.goals.push_back(literal());
                expect_end();
            } else {
                belief_or_rule(prog, start);
            }
        }
        if (open_block) {
            throw parse_error(peek().line, peek().column, "unterminated {begin ...} block", {"{end}"});
        }
        assign_labels(prog, explicit_labels);
        return prog;
    }

    plan_pattern pattern() {
        if (peek().kind == tok::eof) {
            throw parse_error(peek().line, peek().column, "empty plan pattern", {"segment"});
        }
        plan_pattern p = pattern_seq();
        expect_eof();
        std::set<std::string> seen;
        for (const auto* leaf : p.leaves()) {
            if (!seen.insert(leaf->label).second) {
                throw parse_error(1, 1, "duplicate segment label '" + leaf->label + "'");
            }
        }
        return p;
    }

private:
    const token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    bool is_punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).kind == tok::punct && peek(k).text == p;
    }
    bool is_keyword(std::string_view w) const {
        return peek().kind == tok::ident && !peek().quoted && peek().text == w;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const token& t = peek();
        std::string msg = "unexpected " + describe(t) + ", expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            msg += (i ? " or " : "") + expected[i];
        }
        throw parse_error(t.line, t.column, msg, std::move(expected));
    }

    void expect_punct(std::string_view p) {
        if (!is_punct(p)) {
            fail({"'" + std::string(p) + "'"});
        }
        next();
    }

    void expect_end() {
        if (peek().kind != tok::end) {
            fail({"'.'"});
        }
        next();
    }

    // ---- formulas ----------------------------------------------------------

    term disjunction() {
        term lhs = conjunction();
        while (is_punct("|")) {
            next();
            lhs = term::make("|", {std::move(lhs), conjunction()});
        }
        return lhs;
    }

    term conjunction() {
        term lhs = unary();
        while (is_punct("&")) {
            next();
            lhs = term::make("&", {std::move(lhs), unary()});
        }
        return lhs;
    }

    term unary() {
        if (is_keyword("not")) {
            next();
            return term::make("not", {unary()});
        }
        return relational();
    }

    term relational() {
        term lhs = additive();
        static const std::string_view relops[] = {"<", "<=", ">", ">=", "==", "\\==", "="};
        for (auto op : relops) {
            if (is_punct(op)) {
                next();
                return term::make(std::string(op), {std::move(lhs), additive()});
            }
        }
        return lhs;
    }

    term additive() {
        term lhs = primary();
        while (is_punct("+") || is_punct("-")) {
            const std::string op = next().text;
            lhs = term::make(op, {std::move(lhs), primary()});
        }
        return lhs;
    }

    std::vector<term> formula_list(std::string_view close) {
        std::vector<term> items;
        if (is_punct(close)) {
            next();
            return items;
        }
        items.push_back(formula());
        while (is_punct(",")) {
            next();
            items.push_back(formula());
        }
        expect_punct(close);
        return items;
    }

    term primary() {
        const token& t = peek();
        switch (t.kind) {
            case tok::var: {
                next();
                if (t.text == "_") {
                    return term::var("_G" + std::to_string(++anon_));
                }
                return term::var(t.text);
            }
            case tok::number:
                next();
                return term::number(t.value);
            case tok::string:
                next();
                return term::str(t.text);
            case tok::ident:
            case tok::internal: {
                if (t.kind == tok::ident && !t.quoted && t.text == "not") {
                    fail({"term"});
                }
                term s = term::atom(next().text);
                if (is_punct("(")) {
                    next();
                    s.args = formula_list(")");
                    if (s.args.empty()) {
                        throw parse_error(t.line, t.column, "empty argument list", {"term"});
                    }
                }
                if (is_punct("[")) {
                    next();
                    s.annots = formula_list("]");
                }
                return s;
            }
            case tok::punct:
                if (t.text == "-" && peek(1).kind == tok::number) {
                    next();
                    return term::number(-next().value);
                }
                if (t.text == "[") {
                    next();
                    return term::list(formula_list("]"));
                }
                if (t.text == "(") {
                    next();
                    std::vector<term> items = formula_list(")");
                    if (items.empty()) {
                        throw parse_error(t.line, t.column, "empty parentheses", {"term"});
                    }
                    return items.size() == 1 ? std::move(items.front()) : term::tuple(std::move(items));
                }
                break;
            default:
                break;
        }
        fail({"term"});
    }

    term literal() {
        const token& t = peek();
        term lit = primary();
        if (!lit.is_symbol() && !lit.is_var()) {
            throw parse_error(t.line, t.column, "expected a literal", {"atom", "compound term"});
        }
        return lit;
    }

    // ---- clauses -----------------------------------------------------------

    void directive(agent_program& prog, std::optional<ebdg_block>& open_block) {
        const token start = next();  // '{'
        if (is_keyword("begin")) {
            next();
            term d = primary();
            expect_punct("}");
            if (!d.is_compound("ebdg", 1)) {
                throw parse_error(start.line, start.column, "unknown directive '" + print_term(d) + "'",
                                  {"ebdg(Goal)"});
            }
            if (open_block) {
                throw parse_error(start.line, start.column, "nested {begin ...} blocks are not supported");
            }
            open_block = ebdg_block{d.args[0], {}};
        } else if (is_keyword("end")) {
            next();
            expect_punct("}");
            if (!open_block) {
                throw parse_error(start.line, start.column, "{end} without matching {begin ...}");
            }
            prog.ebdg_blocks.push_back(std::move(*open_block));
            open_block.reset();
        } else {
            fail({"'begin'", "'end'"});
        }
    }

    plan plan_clause(std::optional<token>& label_tok) {
        plan p;
        if (is_punct("@")) {
            next();
            label_tok = peek();
            if (peek().kind != tok::ident) {
                fail({"plan label"});
            }
            term label = primary();
            if (!label.args.empty()) {
                throw parse_error(label_tok->line, label_tok->column, "plan label must be an atom");
            }
            p.label = label.name;
            p.atomic = std::any_of(label.annots.begin(), label.annots.end(),
                                   [](const term& a) { return a.is_atom("atomic"); });
        }
        if (is_punct("+")) {
            p.trig.op = trigger_op::add;
        } else if (is_punct("-")) {
            p.trig.op = trigger_op::del;
        } else {
            fail({"'+'", "'-'"});
        }
        next();
        if (is_punct("!")) {
            next();
            p.trig.type = trigger_type::achieve;
        } else {
            p.trig.type = trigger_type::belief;
        }
        p.trig.literal = literal();
        if (is_punct(":")) {
            next();
            p.context = formula();
        }
        if (is_punct("<-")) {
            next();
            p.body.push_back(step());
            while (is_punct(";")) {
                next();
                p.body.push_back(step());
            }
        }
        expect_end();
        return p;
    }

    body_step step() {
        body_step s;
        if (is_punct("!!")) {
            next();
            s.kind = step_kind::achieve_new;
            s.payload = literal();
        } else if (is_punct("!")) {
            next();
            s.kind = step_kind::achieve;
            s.payload = literal();
        } else if (is_punct("?")) {
            next();
            s.kind = step_kind::test;
            s.payload = formula();
        } else if (is_punct("+")) {
            next();
            s.kind = step_kind::add_belief;
            s.payload = literal();
        } else if (is_punct("-")) {
            next();
            s.kind = step_kind::del_belief;
            s.payload = literal();
        } else {
            const token& t = peek();
            s.payload = literal();
            if (s.payload.is_var()) {
                throw parse_error(t.line, t.column, "action must be an atom or compound term");
            }
            s.kind = s.payload.is_internal() ? step_kind::internal_action : step_kind::action;
        }
        return s;
    }

    void belief_or_rule(agent_program& prog, const token& start) {
        term head = literal();
        if (head.is_var()) {
            throw parse_error(start.line, start.column, "belief must not be a variable");
        }
        if (is_punct(":-")) {
            next();
            term body = formula();
            expect_end();
            prog.rules.push_back(rule{std::move(head), std::move(body)});
            return;
        }
        expect_end();
        declaration(prog, head, start);
        prog.beliefs.push_back(std::move(head));
    }

    static bool is_atom_list(const term& t) {
        return t.is_list() && std::all_of(t.args.begin(), t.args.end(), [](const term& a) { return a.is_atom(); });
    }

    void declaration(agent_program& prog, const term& fact, const token& at) {
        auto bad = [&](const std::string& what) { throw parse_error(at.line, at.column, what); };
        if (fact.is_compound("sp", 2)) {
            if (!fact.args[0].is_atom() || !fact.args[1].is_list()) {
                bad("sp/2 expects sp(Name, [Requirement, ...])");
            }
            if (fact.args[1].args.empty()) {
                bad("practice '" + fact.args[0].name + "' has no requirements");
            }
            prog.practices.push_back(practice_decl{fact.args[0].name, fact.args[1].args});
        } else if (fact.is_compound("lm", 5)) {
            const auto& a = fact.args;
            if (!a[0].is_atom() || !a[1].is_atom() || !is_atom_list(a[2]) || !a[3].is_list()) {
                bad("lm/5 expects lm(Practice, Id, [Prior, ...], [(Actor, Action), ...], Purpose)");
            }
            landmark_decl lm;
            lm.practice = a[0].name;
            lm.id = a[1].name;
            for (const auto& p : a[2].args) {
                lm.priors.push_back(p.name);
            }
            for (const auto& act : a[3].args) {
                if (!act.is_compound(",", 2) || !act.args[0].is_atom() || !act.args[1].is_symbol()) {
                    bad("landmark actions must be (Actor, Action) pairs");
                }
                lm.actions.push_back(landmark_action{act.args[0].name, act.args[1]});
            }
            lm.purpose = a[4];
            prog.landmarks.push_back(std::move(lm));
        } else if (fact.is_compound("pattern", 2)) {
            if (!fact.args[0].is_atom() || !fact.args[1].is_string()) {
                bad("pattern/2 expects pattern(Practice, \"plan pattern\")");
            }
            prog.patterns.emplace_back(fact.args[0].name, fact.args[1].name);
        }
    }

    void assign_labels(agent_program& prog, const std::vector<std::pair<std::size_t, token>>& explicit_labels) {
        std::set<std::string> used;
        for (const auto& [idx, t] : explicit_labels) {
            if (!used.insert(prog.plans[idx].label).second) {
                throw parse_error(t.line, t.column, "duplicate plan label '" + prog.plans[idx].label + "'");
            }
        }
        std::size_t counter = 0;
        for (auto& p : prog.plans) {
            if (!p.label.empty()) {
                continue;
            }
            std::string candidate;
            do {
                candidate = "p" + std::to_string(++counter);
            } while (used.count(candidate));
            used.insert(candidate);
            p.label = candidate;
        }
        // Block members were recorded by plan index; resolve to labels now.
        for (auto& b : prog.ebdg_blocks) {
            for (auto& l : b.labels) {
                l = prog.plans[std::stoul(l)].label;
            }
        }
    }

    // ---- plan patterns -----------------------------------------------------

    plan_pattern pattern_seq() {
        plan_pattern lhs = pattern_choice();
        if (is_punct(";")) {
            next();
            return plan_pattern::combine(pattern_op::seq, std::move(lhs), pattern_seq());
        }
        return lhs;
    }

    plan_pattern pattern_choice() {
        plan_pattern lhs = pattern_par();
        if (is_punct("+")) {
            next();
            return plan_pattern::combine(pattern_op::choice, std::move(lhs), pattern_choice());
        }
        return lhs;
    }

    plan_pattern pattern_par() {
        plan_pattern lhs = pattern_primary();
        if (is_punct("&")) {
            next();
            return plan_pattern::combine(pattern_op::par, std::move(lhs), pattern_par());
        }
        return lhs;
    }

    plan_pattern pattern_primary() {
        if (is_punct("(")) {
            next();
            plan_pattern inner = pattern_seq();
            expect_punct(")");
            return inner;
        }
        if (peek().kind != tok::ident) {
            fail({"segment label", "'('"});
        }
        std::string label = next().text;
        expect_punct(":");
        const token& t = peek();
        if (t.kind != tok::ident && t.kind != tok::internal) {
            fail({"purpose"});
        }
        term purpose = primary();
        return plan_pattern::segment(std::move(label), std::move(purpose));
    }

    std::vector<token> toks_;
    std::size_t pos_ = 0;
    int anon_ = 0;
};

}  // namespace

term parse_term(std::string_view text) {
    parser p(text);
    term t = p.formula();
    p.expect_eof();
    return t;
}

agent_program parse_program(std::string_view text) {
    parser p(text);
    return p.program();
}

plan_pattern parse_plan_pattern(std::string_view text) {
    parser p(text);
    return p.pattern();
}

}  // namespace spbdi

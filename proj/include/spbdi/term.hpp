#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spbdi {

enum class term_kind : std::uint8_t { symbol, variable, number, string, list };

/// First-order term with optional annotations.
///
/// A `symbol` with no arguments is an atom; with arguments it is a compound
/// term. Logical formulas (`a & b`, `not p`, `T < 1200`) are compound terms
/// whose functor is the operator. Tuples `(a,b)` use the functor ",".
struct term {
    term_kind kind = term_kind::symbol;
    std::string name;
    std::int64_t value = 0;
    std::vector<term> args;
    std::vector<term> annots;

    static term atom(std::string name);
    static term make(std::string functor, std::vector<term> args);
    static term var(std::string name);
    static term number(std::int64_t v);
    static term str(std::string s);
    static term list(std::vector<term> items);
    static term tuple(std::vector<term> items);

    bool is_var() const { return kind == term_kind::variable; }
    bool is_number() const { return kind == term_kind::number; }
    bool is_string() const { return kind == term_kind::string; }
    bool is_list() const { return kind == term_kind::list; }
    bool is_symbol() const { return kind == term_kind::symbol; }
    bool is_atom() const { return kind == term_kind::symbol && args.empty(); }
    bool is_atom(std::string_view n) const { return is_atom() && name == n; }
    bool is_compound(std::string_view f, std::size_t arity) const {
        return kind == term_kind::symbol && name == f && args.size() == arity;
    }
    bool is_internal() const { return kind == term_kind::symbol && !name.empty() && name.front() == '.'; }
    std::size_t arity() const { return kind == term_kind::symbol ? args.size() : 0; }

    bool is_ground() const;
    term stripped() const;
    term with_annots(std::vector<term> a) const;

    bool operator==(const term&) const = default;
};

/// Canonical surface form; `parse_term(print_term(t)) == t`.
std::string print_term(const term& t);

/// Appends the variable names occurring in `t` (args and annotations).
void collect_vars(const term& t, std::vector<std::string>& out);

bool is_operator_functor(std::string_view f, std::size_t arity);

}  // namespace spbdi

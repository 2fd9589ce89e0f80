#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spbdi/program.hpp"
#include "spbdi/term.hpp"

namespace spbdi {

using substitution = std::map<std::string, term>;

/// Fully resolves `t` under `s`.
term substitute(const substitution& s, const term& t);

/// Most general unifier of the annotation-stripped terms, extended with
/// subset matching of annotations: every annotation of `query` must unify
/// with a distinct annotation of `data`. Occurs check is on.
std::optional<substitution> unify(const term& query, const term& data, substitution s = {});
bool unify_into(const term& query, const term& data, substitution& s);

enum class belief_change { add, del };

struct belief_event {
    belief_change kind = belief_change::add;
    term literal;

    bool operator==(const belief_event&) const = default;
};

std::string print_belief_event(const belief_event& e);

class belief_base {
public:
    /// Adds a literal, merging annotations into an existing copy of the same
    /// literal. Returns the event, or nothing when the base did not change.
    std::optional<belief_event> add(const term& literal);

    /// Removes the first fact matching `pattern`. A pattern carrying
    /// annotations removes only those annotations; the fact goes away when
    /// none remain.
    std::optional<std::pair<belief_event, substitution>> remove(const term& pattern,
                                                                const substitution& s = {});
    std::vector<belief_event> remove_all(const term& pattern);

    void add_rule(rule r) { rules_.push_back(std::move(r)); }

    const std::vector<term>& facts() const { return facts_; }
    const std::vector<rule>& rules() const { return rules_; }

    /// True when some fact is identical to `literal` modulo annotations.
    bool contains(const term& literal) const;

    std::string fresh_suffix() const { return std::to_string(++rename_counter_); }

private:
    std::vector<term> facts_;
    std::vector<rule> rules_;
    mutable std::uint64_t rename_counter_ = 0;
};

constexpr int k_default_query_depth = 64;

struct query_stats {
    bool depth_exhausted = false;
};

/// SLD resolution: facts before rules, source order, leftmost selection,
/// negation as failure for `not`. Answers are produced lazily; the callback
/// returns false to stop the enumeration.
void for_each_answer(const belief_base& bb, const term& goal, const substitution& s, int depth,
                     const std::function<bool(const substitution&)>& on_answer, query_stats* stats = nullptr);

std::vector<substitution> query(const belief_base& bb, const term& goal, const substitution& s = {},
                                int depth = k_default_query_depth,
                                std::size_t limit = std::numeric_limits<std::size_t>::max());

std::optional<substitution> query_first(const belief_base& bb, const term& goal, const substitution& s = {},
                                        int depth = k_default_query_depth);

/// Renames every variable of `t` by appending `_` and `suffix`.
term rename_vars(const term& t, const std::string& suffix);

/// Evaluates integer arithmetic (`+`, `-`) over a resolved term.
std::optional<std::int64_t> eval_int(const term& t);

}  // namespace spbdi

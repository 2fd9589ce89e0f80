#include "spbdi/logic.hpp"

namespace spbdi {

namespace {

using answer_fn = std::function<bool(const substitution&)>;

class resolver {
public:
    resolver(const belief_base& bb, query_stats* stats) : bb_(bb), stats_(stats) {}

    // Returns false once the consumer asked to stop.
    bool solve(const term& goal, const substitution& s, int depth, const answer_fn& k) {
        const term g = substitute(s, goal);
        if (g.is_var()) {
            return true;
        }
        if (g.is_symbol() && g.annots.empty()) {
            if (g.is_atom("true")) {
                return k(s);
            }
            if (g.is_atom("false")) {
                return true;
            }
            if (g.is_compound("&", 2)) {
                return solve(g.args[0], s, depth,
                             [&](const substitution& s1) { return solve(g.args[1], s1, depth, k); });
            }
            if (g.is_compound("|", 2)) {
                return solve(g.args[0], s, depth, k) && solve(g.args[1], s, depth, k);
            }
            if (g.is_compound("not", 1)) {
                bool found = false;
                solve(g.args[0], s, depth, [&](const substitution&) {
                    found = true;
                    return false;
                });
                return found ? true : k(s);
            }
            if (g.args.size() == 2 && is_operator_functor(g.name, 2) && g.name != "+" && g.name != "-") {
                return relational(g, s, k);
            }
        }
        return literal(g, s, depth, k);
    }

private:
    bool relational(const term& g, const substitution& s, const answer_fn& k) {
        const term& l = g.args[0];
        const term& r = g.args[1];
        if (g.name == "=") {
            auto u = unify(l, r, s);
            return u ? k(*u) : true;
        }
        if (g.name == "==" || g.name == "\\==") {
            const auto li = eval_int(l);
            const auto ri = eval_int(r);
            const bool eq = (li && ri) ? *li == *ri : l == r;
            return eq == (g.name == "==") ? k(s) : true;
        }
        const auto li = eval_int(l);
        const auto ri = eval_int(r);
        if (!li || !ri) {
            return true;
        }
        bool ok = false;
        if (g.name == "<") ok = *li < *ri;
        else if (g.name == "<=") ok = *li <= *ri;
        else if (g.name == ">") ok = *li > *ri;
        else if (g.name == ">=") ok = *li >= *ri;
        return ok ? k(s) : true;
    }

    bool literal(const term& g, const substitution& s, int depth, const answer_fn& k) {
        // Facts may be added while an answer is consumed; iterate by index over a snapshot size.
        const auto& facts = bb_.facts();
        const std::size_t n = facts.size();
        for (std::size_t i = 0; i < n && i < facts.size(); ++i) {
            substitution s1 = s;
            if (unify_into(g, facts[i], s1) && !k(s1)) {
                return false;
            }
        }
        const auto& rules = bb_.rules();
        for (std::size_t i = 0; i < rules.size(); ++i) {
            const rule& r = rules[i];
            if (r.head.name != g.name || r.head.arity() != g.arity() || r.head.kind != g.kind) {
                continue;
            }
            if (depth <= 0) {
                if (stats_) {
                    stats_->depth_exhausted = true;
                }
                continue;
            }
            const std::string suffix = "R" + bb_.fresh_suffix();
            const term head = rename_vars(r.head, suffix);
            substitution s1 = s;
            if (!unify_into(g.stripped(), head, s1)) {
                continue;
            }
            if (!solve(rename_vars(r.body, suffix), s1, depth - 1, k)) {
                return false;
            }
        }
        return true;
    }

    const belief_base& bb_;
    query_stats* stats_;
};

}  // namespace

void for_each_answer(const belief_base& bb, const term& goal, const substitution& s, int depth,
                     const std::function<bool(const substitution&)>& on_answer, query_stats* stats) {
    resolver r(bb, stats);
    r.solve(goal, s, depth, on_answer);
}

std::vector<substitution> query(const belief_base& bb, const term& goal, const substitution& s, int depth,
                                std::size_t limit) {
    std::vector<substitution> out;
    if (limit == 0) {
        return out;
    }
    for_each_answer(bb, goal, s, depth, [&](const substitution& a) {
        out.push_back(a);
        return out.size() < limit;
    });
    return out;
}

std::optional<substitution> query_first(const belief_base& bb, const term& goal, const substitution& s,
                                        int depth) {
    auto answers = query(bb, goal, s, depth, 1);
    if (answers.empty()) {
        return std::nullopt;
    }
    return std::move(answers.front());
}

}  // namespace spbdi

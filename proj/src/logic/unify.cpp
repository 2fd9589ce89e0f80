#include <algorithm>

#include "spbdi/logic.hpp"

namespace spbdi {

namespace {

const term& walk(const substitution& s, const term& t) {
    const term* cur = &t;
    while (cur->is_var()) {
        auto it = s.find(cur->name);
        if (it == s.end()) {
            break;
        }
        cur = &it->second;
    }
    return *cur;
}

bool occurs(const substitution& s, const std::string& var, const term& t) {
    const term& w = walk(s, t);
    if (w.is_var()) {
        return w.name == var;
    }
    for (const auto& a : w.args) {
        if (occurs(s, var, a)) {
            return true;
        }
    }
    for (const auto& a : w.annots) {
        if (occurs(s, var, a)) {
            return true;
        }
    }
    return false;
}

// Bindings are only ever inserted during unification; `trail` records them so
// a failed branch can be undone without invalidating references held by
// enclosing frames.
using trail_t = std::vector<std::string>;

bool unify_rec(const term& q, const term& d, substitution& s, trail_t& trail);

bool bind(const std::string& var, const term& value, substitution& s, trail_t& trail) {
    if (occurs(s, var, value)) {
        return false;
    }
    term copy = value;
    s.emplace(var, std::move(copy));
    trail.push_back(var);
    return true;
}

void undo(substitution& s, trail_t& trail, std::size_t mark) {
    while (trail.size() > mark) {
        s.erase(trail.back());
        trail.pop_back();
    }
}

// Injective match of each query annotation onto some data annotation.
bool match_annots(const std::vector<term>& qa, const std::vector<term>& da, std::size_t i,
                  std::vector<bool>& used, substitution& s, trail_t& trail) {
    if (i == qa.size()) {
        return true;
    }
    for (std::size_t j = 0; j < da.size(); ++j) {
        if (used[j]) {
            continue;
        }
        const std::size_t mark = trail.size();
        if (unify_rec(qa[i], da[j], s, trail)) {
            used[j] = true;
            if (match_annots(qa, da, i + 1, used, s, trail)) {
                return true;
            }
            used[j] = false;
        }
        undo(s, trail, mark);
    }
    return false;
}

bool unify_rec(const term& q0, const term& d0, substitution& s, trail_t& trail) {
    const term& q = walk(s, q0);
    const term& d = walk(s, d0);
    if (q.is_var()) {
        if (d.is_var() && d.name == q.name) {
            return true;
        }
        return bind(q.name, d, s, trail);
    }
    if (d.is_var()) {
        return bind(d.name, q, s, trail);
    }
    if (q.kind != d.kind) {
        return false;
    }
    switch (q.kind) {
        case term_kind::number:
            return q.value == d.value;
        case term_kind::string:
            return q.name == d.name;
        case term_kind::symbol:
            if (q.name != d.name) {
                return false;
            }
            break;
        case term_kind::list:
        case term_kind::variable:
            break;
    }
    if (q.args.size() != d.args.size()) {
        return false;
    }
    for (std::size_t i = 0; i < q.args.size(); ++i) {
        if (!unify_rec(q.args[i], d.args[i], s, trail)) {
            return false;
        }
    }
    if (q.annots.empty()) {
        return true;
    }
    std::vector<bool> used(d.annots.size(), false);
    return match_annots(q.annots, d.annots, 0, used, s, trail);
}

}  // namespace

term substitute(const substitution& s, const term& t) {
    const term& w = walk(s, t);
    if (w.is_var()) {
        return w;
    }
    if (w.args.empty() && w.annots.empty()) {
        return w;
    }
    term out;
    out.kind = w.kind;
    out.name = w.name;
    out.value = w.value;
    out.args.reserve(w.args.size());
    for (const auto& a : w.args) {
        out.args.push_back(substitute(s, a));
    }
    out.annots.reserve(w.annots.size());
    for (const auto& a : w.annots) {
        out.annots.push_back(substitute(s, a));
    }
    return out;
}

bool unify_into(const term& query, const term& data, substitution& s) {
    trail_t trail;
    if (!unify_rec(query, data, s, trail)) {
        undo(s, trail, 0);
        return false;
    }
    return true;
}

std::optional<substitution> unify(const term& query, const term& data, substitution s) {
    if (!unify_into(query, data, s)) {
        return std::nullopt;
    }
    return s;
}

term rename_vars(const term& t, const std::string& suffix) {
    if (t.is_var()) {
        return term::var(t.name + "_" + suffix);
    }
    term out = t;
    for (auto& a : out.args) {
        a = rename_vars(a, suffix);
    }
    for (auto& a : out.annots) {
        a = rename_vars(a, suffix);
    }
    return out;
}

std::optional<std::int64_t> eval_int(const term& t) {
    if (t.is_number()) {
        return t.value;
    }
    if (t.is_symbol() && t.args.size() == 2 && t.annots.empty() && (t.name == "+" || t.name == "-")) {
        const auto l = eval_int(t.args[0]);
        const auto r = eval_int(t.args[1]);
        if (!l || !r) {
            return std::nullopt;
        }
        return t.name == "+" ? *l + *r : *l - *r;
    }
    return std::nullopt;
}

}  // namespace spbdi

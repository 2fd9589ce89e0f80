#include <algorithm>

#include "spbdi/logic.hpp"

namespace spbdi {

std::string print_belief_event(const belief_event& e) {
    return (e.kind == belief_change::add ? "+" : "-") + print_term(e.literal);
}

bool belief_base::contains(const term& literal) const {
    const term key = literal.stripped();
    return std::any_of(facts_.begin(), facts_.end(), [&](const term& f) { return f.stripped() == key; });
}

std::optional<belief_event> belief_base::add(const term& literal) {
    const term key = literal.stripped();
    auto it = std::find_if(facts_.begin(), facts_.end(), [&](const term& f) { return f.stripped() == key; });
    if (it == facts_.end()) {
        facts_.push_back(literal);
        return belief_event{belief_change::add, literal};
    }
    bool changed = false;
    for (const auto& a : literal.annots) {
        if (std::find(it->annots.begin(), it->annots.end(), a) == it->annots.end()) {
            it->annots.push_back(a);
            changed = true;
        }
    }
    if (!changed) {
        return std::nullopt;
    }
    return belief_event{belief_change::add, literal};
}

std::optional<std::pair<belief_event, substitution>> belief_base::remove(const term& pattern,
                                                                         const substitution& s) {
    for (auto it = facts_.begin(); it != facts_.end(); ++it) {
        auto u = unify(pattern, *it, s);
        if (!u) {
            continue;
        }
        if (pattern.annots.empty()) {
            belief_event ev{belief_change::del, *it};
            facts_.erase(it);
            return std::make_pair(std::move(ev), std::move(*u));
        }
        std::vector<term> removed;
        for (const auto& pa : pattern.annots) {
            const term resolved = substitute(*u, pa);
            auto ai = std::find_if(it->annots.begin(), it->annots.end(),
                                   [&](const term& a) { return unify(resolved, a).has_value(); });
            if (ai != it->annots.end()) {
                removed.push_back(*ai);
                it->annots.erase(ai);
            }
        }
        belief_event ev{belief_change::del, it->stripped().with_annots(removed)};
        if (it->annots.empty()) {
            facts_.erase(it);
        }
        return std::make_pair(std::move(ev), std::move(*u));
    }
    return std::nullopt;
}

std::vector<belief_event> belief_base::remove_all(const term& pattern) {
    std::vector<belief_event> events;
    while (auto r = remove(pattern)) {
        events.push_back(std::move(r->first));
    }
    return events;
}

}  // namespace spbdi

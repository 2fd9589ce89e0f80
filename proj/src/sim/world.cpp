#include <algorithm>

#include "spbdi/world.hpp"

namespace spbdi {

namespace {

using span = std::pair<std::int64_t, std::int64_t>;

std::vector<span> merged(const std::vector<interval>& xs, std::int64_t now) {
    std::vector<span> v;
    for (const auto& x : xs) {
        const std::int64_t e = x.end.value_or(now);
        if (e > x.start) {
            v.emplace_back(x.start, e);
        }
    }
    std::sort(v.begin(), v.end());
    std::vector<span> out;
    for (const auto& s : v) {
        if (!out.empty() && s.first <= out.back().second) {
            out.back().second = std::max(out.back().second, s.second);
        } else {
            out.push_back(s);
        }
    }
    return out;
}

std::vector<span> intersect(const std::vector<span>& a, const std::vector<span>& b) {
    std::vector<span> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const std::int64_t lo = std::max(a[i].first, b[j].first);
        const std::int64_t hi = std::min(a[i].second, b[j].second);
        if (lo < hi) {
            out.emplace_back(lo, hi);
        }
        if (a[i].second < b[j].second) {
            ++i;
        } else {
            ++j;
        }
    }
    return out;
}

bool has_annot(const term& t, const char* name) {
    return std::any_of(t.annots.begin(), t.annots.end(), [&](const term& a) { return a.is_atom(name); });
}

const std::vector<interval> k_no_history;

}  // namespace

std::int64_t interval_overlap(const std::vector<std::vector<interval>>& per_participant, std::int64_t now) {
    if (per_participant.empty()) {
        return 0;
    }
    std::vector<span> acc = merged(per_participant.front(), now);
    for (std::size_t k = 1; k < per_participant.size(); ++k) {
        acc = intersect(acc, merged(per_participant[k], now));
    }
    std::int64_t total = 0;
    for (const auto& s : acc) {
        total += s.second - s.first;
    }
    return total;
}

care_world::care_world(care_world_config config) : config_(std::move(config)), tick_(config_.start_tick) {
    for (const auto& f : config_.facts) {
        set_fact(f);
    }
    replace_functor(term::make("time", {term::number(tick_)}));
}

bool care_world::holds(const term& fact) const { return std::find(facts_.begin(), facts_.end(), fact) != facts_.end(); }

void care_world::set_fact(const term& f) {
    if (!holds(f)) {
        facts_.push_back(f);
    }
}

void care_world::drop_fact(const term& f) { facts_.erase(std::remove(facts_.begin(), facts_.end(), f), facts_.end()); }

void care_world::replace_functor(const term& f) {
    auto it = std::find_if(facts_.begin(), facts_.end(),
                           [&](const term& x) { return x.name == f.name && x.arity() == f.arity(); });
    if (it != facts_.end()) {
        *it = f;
    } else {
        facts_.push_back(f);
    }
}

void care_world::set_tick(std::int64_t t) {
    while (tick_ < t) {
        ++tick_;
        fire_due();
    }
    replace_functor(term::make("time", {term::number(tick_)}));
}

void care_world::fire_due() {
    while (!delayed_.empty() && delayed_.begin()->first <= tick_) {
        const term effect = delayed_.begin()->second;
        delayed_.erase(delayed_.begin());
        if (effect.is_compound("wake", 1) && !holds(term::atom("awake"))) {
            set_fact(term::atom("awake"));
            replace_functor(term::make("mood", {effect.args[0]}));
        }
    }
}

const std::vector<interval>& care_world::history(const std::string& actor, const std::string& action) const {
    auto it = history_.find({actor, action});
    return it == history_.end() ? k_no_history : it->second;
}

std::int64_t care_world::joint_overlap(const std::string& action, const std::vector<std::string>& participants) const {
    std::vector<std::vector<interval>> per;
    for (const auto& p : participants) {
        per.push_back(history(p, action));
    }
    return interval_overlap(per, tick_);
}

void care_world::record_execution(const std::string& actor, const std::string& action) {
    const auto key = std::make_pair(actor, action);
    auto& h = history_[key];
    auto& last = last_execution_[key];
    if (!h.empty() && !h.back().end && last == tick_) {
        return;
    }
    if (!h.empty() && !h.back().end && last + 1 < tick_) {
        // A skipped tick ends the run; the next execution opens a new one.
        h.back().end = last + 1;
        closed_executions_[key] += run_length_[key];
        run_length_[key] = 0;
    }
    if (h.empty() || h.back().end) {
        h.push_back(interval{tick_, std::nullopt});
        run_length_[key] = 1;
    } else {
        ++run_length_[key];
    }
    last = tick_;
}

std::vector<std::string> care_world::participants_of(const term& action) {
    for (const auto& a : action.annots) {
        if (a.is_compound("participants", 1) && a.args[0].is_list()) {
            std::vector<std::string> out;
            for (const auto& p : a.args[0].args) {
                out.push_back(p.is_atom() ? p.name : print_term(p));
            }
            return out;
        }
    }
    return {};
}

void care_world::notify(const std::vector<std::string>& participants, const std::string& actor, const term& percept) {
    for (const auto& p : participants) {
        if (p == actor) {
            continue;
        }
        auto& box = private_[p];
        if (std::find(box.begin(), box.end(), percept) == box.end()) {
            box.push_back(percept);
        }
    }
}

void care_world::set_stimulation(const std::string& action, const std::vector<std::string>& participants) {
    const std::int64_t score = joint_overlap(action, participants);
    stimulation_ = score;
    replace_functor(term::make("stimulation", {term::number(score)}));
    if (score >= config_.s_min) {
        set_fact(term::atom("stimulated"));
    }
}

action_outcome care_world::execute(const std::string& actor, const term& action) {
    const std::string& n = action.name;
    const bool durative = has_annot(action, "durative");
    if (action.is_atom("tick")) {
        set_tick(tick_ + 1);
        return {true};
    }
    if (action.is_atom("talk")) {
        return {true};
    }
    if (action.is_atom("shake")) {
        if (!holds(term::atom("awake"))) {
            set_fact(term::atom("awake"));
            replace_functor(term::make("mood", {term::atom("bad")}));
        }
        return {true};
    }
    if (action.is_atom("open_curtains")) {
        set_fact(term::make("curtains", {term::atom("open")}));
        delayed_.emplace(tick_ + config_.curtain_delay, term::make("wake", {term::atom("good")}));
        return {true};
    }
    if (action.is_atom("make_pod_coffee")) {
        record_execution(actor, n);
        if (!durative) {
            // A one-off call is a brewing run of length one.
            history_[{actor, n}].back().end = tick_ + 1;
        }
        if (run_length_[{actor, n}] >= config_.pod_brew) {
            set_fact(term::atom("coffee_made"));
            set_fact(term::make("coffee", {term::atom("pod")}));
        }
        if (!durative) {
            closed_executions_[{actor, n}] += run_length_[{actor, n}];
            run_length_[{actor, n}] = 0;
        }
        return {true};
    }
    if (action.is_atom("make_instant_coffee")) {
        set_fact(term::atom("coffee_made"));
        set_fact(term::make("coffee", {term::atom("instant")}));
        return {true};
    }
    if (action.is_atom("serve_coffee")) {
        if (!holds(term::atom("coffee_made"))) {
            return {false};
        }
        set_fact(term::make("served", {term::atom("coffee")}));
        return {true};
    }
    if (action.is_atom("play_mozart")) {
        if (config_.mozart_stimulates) {
            set_fact(term::atom("stimulated"));
        }
        return {true};
    }
    if (action.is_atom("take_pills")) {
        set_fact(term::atom("pills_taken"));
        return {true};
    }
    if (action.is_atom("read_newspaper")) {
        if (!durative) {
            return {false};
        }
        const bool first = history(actor, n).empty() || history(actor, n).back().end.has_value();
        record_execution(actor, n);
        if (first) {
            notify(participants_of(action), actor,
                   term::make("joint_started", {term::atom(n), term::atom(actor)}));
        }
        return {true};
    }
    if (action.is_compound("stop", 1) && action.args[0].is_symbol()) {
        const std::string target = action.args[0].name;
        auto it = history_.find({actor, target});
        if (it == history_.end() || it->second.empty() || it->second.back().end) {
            return {false};
        }
        // The run covers one tick per execution up to the last one.
        it->second.back().end = last_execution_[{actor, target}] + 1;
        closed_executions_[{actor, target}] += run_length_[{actor, target}];
        run_length_[{actor, target}] = 0;
        const auto parts = participants_of(action);
        if (!parts.empty()) {
            notify(parts, actor, term::make("joint_stopped", {term::atom(target), term::atom(actor)}));
            const bool all_closed = std::all_of(parts.begin(), parts.end(), [&](const std::string& p) {
                const auto& h = history(p, target);
                return h.empty() || h.back().end.has_value();
            });
            if (all_closed) {
                set_stimulation(target, parts);
            }
        }
        return {true};
    }
    return {false};
}

std::vector<term> care_world::percepts(const std::string& agent) const {
    std::vector<term> out = facts_;
    auto it = private_.find(agent);
    if (it != private_.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

bool care_world::intervals_consistent() const {
    for (const auto& [key, h] : history_) {
        for (std::size_t k = 0; k < h.size(); ++k) {
            if (h[k].end && *h[k].end < h[k].start) {
                return false;
            }
            if (!h[k].end && k + 1 != h.size()) {
                return false;
            }
            if (k > 0 && (!h[k - 1].end || *h[k - 1].end > h[k].start)) {
                return false;
            }
        }
        // Closed intervals cover exactly one tick per execution.
        std::int64_t covered = 0;
        for (const auto& x : h) {
            covered += x.end ? *x.end - x.start : 0;
        }
        auto c = closed_executions_.find(key);
        if (covered != (c == closed_executions_.end() ? 0 : c->second)) {
            return false;
        }
    }
    return true;
}

}  // namespace spbdi

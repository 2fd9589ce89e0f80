#include <algorithm>

#include "spbdi/agent.hpp"
#include "spbdi/practice.hpp"

namespace spbdi {

namespace {

term with_source(const term& literal, const char* source) {
    for (const auto& a : literal.annots) {
        if (a.is_compound("source", 1)) {
            return literal;
        }
    }
    term out = literal;
    out.annots.push_back(term::make("source", {term::atom(source)}));
    return out;
}

}  // namespace

std::string print_event(const event& e) {
    switch (e.kind) {
        case event_kind::goal_add: return "+!" + print_term(e.content);
        case event_kind::goal_del: return "-!" + print_term(e.content);
        case event_kind::belief_add: return "+" + print_term(e.content);
        case event_kind::belief_del: return "-" + print_term(e.content);
    }
    return {};
}

std::string to_string(intention_status s) {
    switch (s) {
        case intention_status::active: return "active";
        case intention_status::suspended: return "suspended";
        case intention_status::done_success: return "done_success";
        case intention_status::done_failure: return "done_failure";
    }
    return {};
}

const term* frame_goal(const frame& f) {
    if (const auto* b = std::get_if<body_frame>(&f)) {
        return b->goal ? &*b->goal : nullptr;
    }
    if (const auto* t = std::get_if<try_frame>(&f)) {
        return &t->goal;
    }
    return nullptr;
}

agent::agent(std::string name, const agent_program& program, agent_options options)
    : name_(std::move(name)), options_(options) {
    for (const auto& b : program.beliefs) {
        beliefs_.add(b);
    }
    for (const auto& r : program.rules) {
        beliefs_.add_rule(r);
    }
    plans_ = program.plans;
    for (const auto& block : program.ebdg_blocks) {
        std::vector<plan> members;
        std::size_t first = plans_.size();
        for (const auto& label : block.labels) {
            auto it = std::find_if(plans_.begin(), plans_.end(), [&](const plan& p) { return p.label == label; });
            if (it == plans_.end()) {
                throw runtime_error("ebdg block refers to unknown plan " + label);
            }
            first = std::min(first, static_cast<std::size_t>(it - plans_.begin()));
            members.push_back(*it);
        }
        if (members.empty()) {
            continue;
        }
        auto transformed = apply_ebdg_transform(block.goal, members);
        plans_.erase(std::remove_if(plans_.begin(), plans_.end(),
                                    [&](const plan& p) {
                                        return std::find(block.labels.begin(), block.labels.end(), p.label) !=
                                               block.labels.end();
                                    }),
                     plans_.end());
        first = std::min(first, plans_.size());
        plans_.insert(plans_.begin() + static_cast<std::ptrdiff_t>(first), transformed.begin(), transformed.end());
    }
    practice_decls_ = program.practices;
    landmark_decls_ = program.landmarks;
    pattern_decls_ = program.patterns;
    load_action_decls();
    register_builtins();
    if (options_.practices_enabled && !practice_decls_.empty()) {
        attach_practice_engine(*this);
    }
    for (const auto& g : program.goals) {
        post_goal(g);
    }
}

void agent::load_action_decls() {
    for (const auto& f : beliefs_.facts()) {
        if ((f.is_compound("durative", 2) || f.is_compound("durative", 3)) && f.args[0].is_atom() &&
            f.args[1].is_atom()) {
            auto& d = action_decls_[f.args[0].name];
            d.durative = true;
            d.continuation = f.args[1].name;
            if (f.args.size() == 3) {
                d.cleanup = f.args[2];
            }
        } else if (f.is_compound("joint", 2) && f.args[0].is_atom()) {
            auto& d = action_decls_[f.args[0].name];
            d.joint = true;
            d.participants = f.args[1];
        }
    }
    for (const auto& [functor, d] : action_decls_) {
        if (d.joint && !d.durative) {
            throw runtime_error("joint action " + functor + " is not declared durative");
        }
        const auto& rules = beliefs_.rules();
        const bool resolvable =
            std::any_of(rules.begin(), rules.end(), [&](const rule& r) { return r.head.is_atom(d.continuation); }) ||
            beliefs_.contains(term::atom(d.continuation));
        if (!resolvable) {
            throw runtime_error("continuation " + d.continuation + " of " + functor + " has no rule");
        }
    }
}

const action_decl* agent::action_info(const std::string& functor) const {
    auto it = action_decls_.find(functor);
    return it == action_decls_.end() ? nullptr : &it->second;
}

void agent::register_internal_action(const std::string& name, internal_action_fn fn) {
    internal_actions_[name] = std::move(fn);
}

const intention* agent::find_intention(int id) const {
    for (const auto& i : intentions_) {
        if (i.id == id) {
            return &i;
        }
    }
    return nullptr;
}

intention* agent::get(int id) {
    for (auto& i : intentions_) {
        if (i.id == id) {
            return &i;
        }
    }
    return nullptr;
}

const plan* agent::find_plan(const std::string& label) const {
    for (const auto& p : plans_) {
        if (p.label == label) {
            return &p;
        }
    }
    return nullptr;
}

void agent::set_clock(std::int64_t step, std::int64_t now, trace_log* trace) {
    step_ = step;
    now_ = now;
    trace_ = trace;
}

void agent::trace(const std::string& kind, json payload) {
    if (trace_) {
        trace_->emit(step_, name_, kind, std::move(payload));
    }
}

void agent::post_goal(const term& goal, bool skip_guards) {
    events_.push_back(event{event_kind::goal_add, goal, std::nullopt, skip_guards});
}

void agent::schedule_goal(std::int64_t due, const term& goal) { timers_.emplace(due, goal); }

void agent::queue_belief_event(const belief_event& ev) {
    events_.push_back(
        event{ev.kind == belief_change::add ? event_kind::belief_add : event_kind::belief_del, ev.literal, {}, false});
}

void agent::add_belief(const term& literal) {
    if (auto ev = beliefs_.add(with_source(literal, "self"))) {
        trace("event", json{{"event", print_belief_event(*ev)}});
        queue_belief_event(*ev);
    }
}

void agent::remove_beliefs(const term& pattern) {
    for (const auto& ev : beliefs_.remove_all(pattern)) {
        trace("event", json{{"event", print_belief_event(ev)}});
        queue_belief_event(ev);
    }
}

void agent::perceive(const std::vector<term>& percepts) {
    const term src = term::make("source", {term::atom("percept")});
    for (const auto& old : last_percepts_) {
        if (std::find(percepts.begin(), percepts.end(), old) == percepts.end()) {
            if (auto r = beliefs_.remove(old.with_annots({src}))) {
                queue_belief_event(r->first);
            }
        }
    }
    for (const auto& p : percepts) {
        if (std::find(last_percepts_.begin(), last_percepts_.end(), p) == last_percepts_.end()) {
            term lit = p;
            lit.annots.push_back(src);
            if (auto ev = beliefs_.add(lit)) {
                queue_belief_event(*ev);
            }
        }
    }
    last_percepts_ = percepts;
}

body_frame agent::instantiate(const plan& p, const substitution& s, std::string suffix) const {
    body_frame f;
    f.label = p.label;
    f.atomic = p.atomic;
    f.guard = p.guard;
    f.subst = s;
    f.steps.reserve(p.body.size());
    for (const auto& st : p.body) {
        f.steps.push_back(body_step{st.kind, rename_vars(st.payload, suffix)});
    }
    return f;
}

std::optional<body_frame> agent::select_plan(trigger_op op, trigger_type type, const term& content,
                                             bool skip_guards, std::string* label_out) {
    for (const auto& p : plans_) {
        if (p.trig.op != op || p.trig.type != type || (skip_guards && p.guard)) {
            continue;
        }
        const std::string suffix = beliefs_.fresh_suffix();
        auto s = unify(rename_vars(p.trig.literal, suffix), content);
        if (!s) {
            continue;
        }
        auto ans = query_first(beliefs_, rename_vars(p.context, suffix), *s, options_.query_depth);
        if (!ans) {
            continue;
        }
        if (label_out) {
            *label_out = p.label;
        }
        return instantiate(p, *ans, suffix);
    }
    return std::nullopt;
}

std::vector<plan> agent::relevant_plans(trigger_op op, trigger_type type, const term& literal) const {
    std::vector<plan> out;
    for (const auto& p : plans_) {
        if (p.trig.op != op || p.trig.type != type) {
            continue;
        }
        if (unify(rename_vars(p.trig.literal, beliefs_.fresh_suffix()), literal)) {
            out.push_back(p);
        }
    }
    return out;
}

int agent::new_intention(body_frame f) {
    intention i;
    i.id = next_intention_id_++;
    intentions_.push_back(std::move(i));
    intention& ref = intentions_.back();
    json payload{{"op", "created"}, {"intention", ref.id}, {"plan", f.label}};
    if (f.goal) {
        payload["goal"] = print_term(*f.goal);
    }
    if (f.solve) {
        payload["tag"] = "solve";
    }
    trace("intention", std::move(payload));
    push_frame(ref, std::move(f));
    return ref.id;
}

void agent::push_frame(intention& i, body_frame f) {
    const bool guard = f.guard;
    const std::optional<term> goal = f.goal;
    i.stack.emplace_back(std::move(f));
    if (guard && goal) {
        suspend_intention(i.id, term::make("guard", {goal->stripped()}));
        practice_.suspensions.push_back(suspension_record{goal->stripped(), i.id});
    }
}

bool agent::handle_event(const event& ev) {
    if (ev.kind == event_kind::goal_del) {
        return false;
    }
    const bool goal = ev.kind == event_kind::goal_add;
    const trigger_op op = ev.kind == event_kind::belief_del ? trigger_op::del : trigger_op::add;
    const trigger_type type = goal ? trigger_type::achieve : trigger_type::belief;
    if (!goal && relevant_plans(op, type, ev.content).empty()) {
        return false;
    }
    std::string label;
    auto f = select_plan(op, type, ev.content, ev.skip_guards, &label);
    json payload{{"event", print_event(ev)}};
    payload["plan"] = f ? json(label) : json(nullptr);
    trace("event", std::move(payload));
    if (!f) {
        if (goal) {
            trace("event", json{{"event", "-!" + print_term(ev.content)}, {"reason", "no applicable plan"}});
        }
        return true;
    }
    if (goal) {
        f->goal = ev.content;
    }
    new_intention(std::move(*f));
    return true;
}

void agent::initialize() {
    while (!events_.empty()) {
        event ev = std::move(events_.front());
        events_.pop_front();
        handle_event(ev);
    }
}

bool agent::holds_atomic_lock(const intention& i) const {
    if (i.status != intention_status::active) {
        return false;
    }
    return std::any_of(i.stack.begin(), i.stack.end(), [](const frame& f) {
        const auto* b = std::get_if<body_frame>(&f);
        return b && b->atomic && b->started;
    });
}

bool agent::is_background(const intention& i) const {
    return !i.stack.empty() && std::holds_alternative<durative_frame>(i.stack.back());
}

bool agent::is_ready(const intention& i) const {
    if (i.status != intention_status::active) {
        return false;
    }
    if (i.stack.empty()) {
        return true;
    }
    const frame& top = i.stack.back();
    if (const auto* b = std::get_if<body_frame>(&top)) {
        if (b->waiting) {
            if (now_ >= b->waiting->until) {
                return true;
            }
            return b->waiting->condition &&
                   query_first(beliefs_, *b->waiting->condition, b->subst, options_.query_depth).has_value();
        }
        if (b->awaiting_action) {
            return b->action_result.has_value();
        }
        return true;
    }
    if (const auto* d = std::get_if<durative_frame>(&top)) {
        return !d->awaiting || d->result.has_value();
    }
    return true;
}

void agent::step() {
    while (!timers_.empty() && timers_.begin()->first <= now_) {
        term g = timers_.begin()->second;
        timers_.erase(timers_.begin());
        handle_event(event{event_kind::goal_add, g, std::nullopt, false});
    }
    while (!events_.empty()) {
        event ev = std::move(events_.front());
        events_.pop_front();
        if (handle_event(ev)) {
            break;
        }
    }

    intention* locked = nullptr;
    for (auto& i : intentions_) {
        if (holds_atomic_lock(i)) {
            locked = &i;
            break;
        }
    }
    if (locked) {
        if (is_ready(*locked)) {
            locked->last_selected = ++selections_;
            run_intention(*locked, false);
        }
        return;
    }

    // Durative loops iterate once per step regardless of selection.
    for (std::size_t k = 0; k < intentions_.size(); ++k) {
        intention& i = intentions_[k];
        if (is_background(i) && is_ready(i)) {
            run_intention(i, true);
        }
    }

    // Least recently selected first; new intentions have never been selected.
    intention* pick = nullptr;
    for (auto& i : intentions_) {
        if (i.done() || is_background(i) || !is_ready(i)) {
            continue;
        }
        if (!pick || i.last_selected < pick->last_selected) {
            pick = &i;
        }
    }
    if (pick) {
        pick->last_selected = ++selections_;
        run_intention(*pick, false);
    }
}

std::vector<action_request> agent::take_actions() {
    std::vector<action_request> out;
    out.swap(outbox_);
    return out;
}

void agent::deliver_outcome(int intention_id, bool ok) {
    intention* i = get(intention_id);
    if (!i || i->done() || i->stack.empty()) {
        return;
    }
    frame& top = i->stack.back();
    if (auto* b = std::get_if<body_frame>(&top)) {
        if (b->awaiting_action && !b->action_result) {
            b->action_result = ok;
        }
    } else if (auto* d = std::get_if<durative_frame>(&top)) {
        if (d->awaiting && !d->result) {
            d->result = ok;
        }
    }
}

void agent::emit_action(intention& i, const term& action) {
    outbox_.push_back(action_request{i.id, action});
    ++i.steps_taken;
    trace("action", json{{"op", "emit"}, {"action", print_term(action)}, {"intention", i.id}, {"tick", now_}});
}

std::vector<int> agent::intentions_for(const term& goal) const {
    std::vector<int> out;
    const term key = goal.stripped();
    for (const auto& i : intentions_) {
        if (i.done()) {
            continue;
        }
        for (const auto& f : i.stack) {
            const term* g = frame_goal(f);
            if (g && unify(key, g->stripped())) {
                out.push_back(i.id);
                break;
            }
        }
    }
    return out;
}

bool agent::suspend_intention(int id, const term& reason) {
    intention* i = get(id);
    if (!i || i->status != intention_status::active) {
        return false;
    }
    i->status = intention_status::suspended;
    i->suspend_reason = reason;
    trace("intention", json{{"op", "suspended"}, {"intention", id}, {"reason", print_term(reason)}});
    return true;
}

bool agent::resume_intention(int id) {
    intention* i = get(id);
    if (!i || i->status != intention_status::suspended) {
        return false;
    }
    i->status = intention_status::active;
    i->suspend_reason = term{};
    trace("intention", json{{"op", "resumed"}, {"intention", id}});
    if (!i->stack.empty()) {
        if (auto* g = std::get_if<body_frame>(&i->stack.back()); g && g->guard) {
            const term goal = g->goal ? *g->goal : term::atom("true");
            i->stack.pop_back();
            ++i->epoch;
            if (i->stack.empty()) {
                std::string label;
                auto f = select_plan(trigger_op::add, trigger_type::achieve, goal, true, &label);
                trace("event", json{{"event", "+!" + print_term(goal)}, {"plan", f ? json(label) : json(nullptr)}});
                if (!f) {
                    finish_intention(*i, false, "no applicable plan");
                    return true;
                }
                f->goal = goal;
                push_frame(*i, std::move(*f));
            }
        }
    }
    return true;
}

bool agent::succeed_intention(int id, const term& goal) {
    intention* i = get(id);
    if (!i || i->done()) {
        return false;
    }
    const term key = goal.stripped();
    for (std::size_t k = 0; k < i->stack.size(); ++k) {
        const term* g = frame_goal(i->stack[k]);
        if (!g) {
            continue;
        }
        auto u = unify(key, g->stripped());
        if (!u) {
            continue;
        }
        term result = substitute(*u, g->stripped());
        if (const auto* b = std::get_if<body_frame>(&i->stack[k])) {
            result = substitute(b->subst, result);
        }
        while (i->stack.size() > k) {
            if (const auto* t = std::get_if<try_frame>(&i->stack.back())) {
                clear_solve_tried(t->position);
            }
            if (std::holds_alternative<durative_frame>(i->stack.back())) {
                release_durative(*i);
            }
            i->stack.pop_back();
        }
        ++i->epoch;
        i->status = intention_status::active;
        trace("intention", json{{"op", "succeeded"}, {"intention", id}, {"goal", print_term(key)}});
        on_child_done(*i, result);
        return true;
    }
    return false;
}

std::vector<int> agent::suspend_intentions(const term& goal, const term& reason) {
    std::vector<int> out;
    for (int id : intentions_for(goal)) {
        if (suspend_intention(id, reason)) {
            out.push_back(id);
        }
    }
    return out;
}

std::vector<int> agent::resume_intentions(const term& goal) {
    std::vector<int> out;
    for (int id : intentions_for(goal)) {
        if (resume_intention(id)) {
            out.push_back(id);
        }
    }
    return out;
}

std::vector<int> agent::succeed_intentions(const term& goal) {
    std::vector<int> out;
    for (int id : intentions_for(goal)) {
        if (succeed_intention(id, goal)) {
            out.push_back(id);
        }
    }
    return out;
}

std::string agent::install_guard_plan(const term& goal) {
    const term key = goal.stripped();
    for (const auto& p : plans_) {
        if (p.guard && p.trig.literal == key) {
            throw runtime_error("guard plan already installed for " + print_term(key));
        }
    }
    std::string label;
    do {
        label = "guard_" + std::to_string(++guard_counter_);
    } while (find_plan(label));
    plan p;
    p.label = label;
    p.trig = trigger{trigger_op::add, trigger_type::achieve, key};
    p.guard = true;
    add_plan_front(std::move(p));
    return label;
}

void agent::remove_guard_plan(const std::string& label) {
    auto it = std::find_if(plans_.begin(), plans_.end(), [&](const plan& p) { return p.guard && p.label == label; });
    if (it == plans_.end()) {
        throw runtime_error("unknown guard plan " + label);
    }
    plans_.erase(it);
}

void agent::add_plan_front(plan p) {
    if (find_plan(p.label)) {
        throw runtime_error("duplicate plan label " + p.label);
    }
    plans_.insert(plans_.begin(), std::move(p));
}

}  // namespace spbdi

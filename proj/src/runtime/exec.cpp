#include "spbdi/agent.hpp"

namespace spbdi {

namespace {

constexpr int k_structural_budget = 256;

std::vector<term> extend(const std::vector<term>& base, std::initializer_list<term> more) {
    std::vector<term> out = base;
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

}  // namespace

void agent::run_intention(intention& i, bool background) {
    for (int budget = k_structural_budget; budget > 0; --budget) {
        if (i.status != intention_status::active) {
            return;
        }
        if (i.stack.empty()) {
            finish_intention(i, true, "");
            return;
        }
        if (background && !is_background(i)) {
            return;
        }
        exec r = exec::proceed;
        frame& top = i.stack.back();
        if (std::holds_alternative<body_frame>(top)) {
            r = exec_body(i);
        } else if (std::holds_alternative<try_frame>(top)) {
            r = exec_try(i);
        } else {
            r = exec_durative(i);
        }
        if (r == exec::yield) {
            settle(i);
            return;
        }
    }
    trace("intention", json{{"op", "structural_budget_exhausted"}, {"intention", i.id}});
}

// Completing finished frames costs nothing, so an atomic plan releases its
// lock in the same step as its last primitive.
void agent::settle(intention& i) {
    while (i.status == intention_status::active && !i.stack.empty()) {
        const auto* b = std::get_if<body_frame>(&i.stack.back());
        if (!b || b->waiting || b->awaiting_action || b->index < b->steps.size()) {
            return;
        }
        complete_top(i);
    }
    if (i.status == intention_status::active && i.stack.empty()) {
        finish_intention(i, true, "");
    }
}

agent::exec agent::exec_body(intention& i) {
    auto& f = std::get<body_frame>(i.stack.back());
    if (f.waiting) {
        if (f.waiting->condition) {
            if (auto ans = query_first(beliefs_, *f.waiting->condition, f.subst, options_.query_depth)) {
                f.subst = std::move(*ans);
                f.waiting.reset();
                ++f.index;
                return exec::proceed;
            }
        }
        if (now_ >= f.waiting->until) {
            const bool timed_out = f.waiting->condition.has_value();
            f.waiting.reset();
            if (timed_out) {
                fail_top(i, "wait timeout");
            } else {
                ++f.index;
            }
            return exec::proceed;
        }
        return exec::yield;
    }
    if (f.awaiting_action) {
        if (!f.action_result) {
            return exec::yield;
        }
        const bool ok = *f.action_result;
        f.awaiting_action = false;
        f.action_result.reset();
        if (ok) {
            ++f.index;
        } else {
            fail_top(i, "action failed");
        }
        return exec::proceed;
    }
    if (f.index >= f.steps.size()) {
        complete_top(i);
        return exec::proceed;
    }
    const body_step st = f.steps[f.index];
    const term payload = substitute(f.subst, st.payload);
    switch (st.kind) {
        case step_kind::action: {
            if (const auto* d = action_info(payload.name); d && d->durative) {
                return push_durative(i, payload, *d);
            }
            f.started = true;
            f.awaiting_action = true;
            emit_action(i, payload);
            return exec::yield;
        }
        case step_kind::internal_action:
            return exec_internal(i, payload);
        case step_kind::test: {
            f.started = true;
            ++i.steps_taken;
            trace("event", json{{"event", "?" + print_term(payload)}, {"intention", i.id}});
            if (auto ans = query_first(beliefs_, payload, f.subst, options_.query_depth)) {
                f.subst = std::move(*ans);
                ++f.index;
            } else {
                fail_top(i, "test goal failed: " + print_term(payload));
            }
            return exec::yield;
        }
        case step_kind::add_belief:
            f.started = true;
            ++i.steps_taken;
            ++f.index;
            add_belief(payload);
            return exec::yield;
        case step_kind::del_belief: {
            f.started = true;
            ++i.steps_taken;
            ++f.index;
            // Removing an absent belief is a successful no-op.
            if (auto r = beliefs_.remove(payload, f.subst)) {
                f.subst = std::move(r->second);
                trace("event", json{{"event", print_belief_event(r->first)}});
                queue_belief_event(r->first);
            }
            return exec::yield;
        }
        case step_kind::achieve:
            return exec_achieve(i, payload);
        case step_kind::achieve_new:
            f.started = true;
            ++i.steps_taken;
            ++f.index;
            trace("event", json{{"event", "+!!" + print_term(payload)}, {"intention", i.id}});
            post_goal(payload);
            return exec::yield;
    }
    return exec::yield;
}

agent::exec agent::exec_achieve(intention& i, const term& goal) {
    auto& f = std::get<body_frame>(i.stack.back());
    trace("event", json{{"event", "+!" + print_term(goal)}, {"intention", i.id}});
    if (goal.is_compound("solve", 1) && goal.args[0].is_list()) {
        body_frame c;
        c.solve = true;
        c.goal = goal;
        for (const auto& t : goal.args[0].args) {
            c.steps.push_back(step_from_term(t));
        }
        if (f.solve) {
            c.position = extend(f.position, {term::number(static_cast<std::int64_t>(f.index)), term::atom("solve")});
        }
        trace("intention", json{{"op", "solve"}, {"tag", "solve"}, {"intention", i.id}, {"goal", print_term(goal)}});
        push_frame(i, std::move(c));
        return exec::proceed;
    }
    if (f.solve) {
        if (f.guide) {
            const auto& path = *f.guide->path;
            const std::size_t k = f.guide->entry;
            if (k + 1 < path.size() && f.index == path[k].step_index) {
                return exec_guided_subgoal(i, goal);
            }
        }
        try_frame t;
        t.goal = goal;
        t.position = extend(f.position, {term::number(static_cast<std::int64_t>(f.index))});
        i.stack.emplace_back(std::move(t));
        return exec::proceed;
    }
    std::string label;
    auto c = select_plan(trigger_op::add, trigger_type::achieve, goal, false, &label);
    if (!c) {
        fail_top(i, "no applicable plan for +!" + print_term(goal));
        return exec::proceed;
    }
    c->goal = goal;
    push_frame(i, std::move(*c));
    return exec::proceed;
}

agent::exec agent::exec_internal(intention& i, const term& call) {
    auto& f = std::get<body_frame>(i.stack.back());
    f.started = true;
    ++i.steps_taken;
    auto it = internal_actions_.find(call.name);
    if (it == internal_actions_.end()) {
        fail_top(i, "unknown internal action " + call.name);
        return exec::yield;
    }
    const std::uint64_t epoch = i.epoch;
    const std::size_t depth = i.stack.size();
    ia_context ctx{*this, i.id, f.subst, std::nullopt};
    const ia_result r = it->second(ctx, call);
    if (epoch != i.epoch || depth != i.stack.size() || i.done()) {
        // The action rearranged this intention's stack; `f` may be gone.
        return exec::yield;
    }
    switch (r) {
        case ia_result::ok:
            ++f.index;
            break;
        case ia_result::fail:
            fail_top(i, "internal action " + call.name + " failed");
            break;
        case ia_result::block:
            f.waiting = ctx.wait;
            break;
    }
    return exec::yield;
}

void agent::fail_top(intention& i, const std::string& reason) {
    ++i.epoch;
    while (true) {
        if (i.stack.empty()) {
            finish_intention(i, false, reason);
            return;
        }
        frame& top = i.stack.back();
        if (auto* d = std::get_if<durative_frame>(&top)) {
            // A cleanup goal failed; the durative frame finishes as failed.
            d->failed = true;
            d->phase = durative_phase::finish;
            return;
        }
        if (auto* t = std::get_if<try_frame>(&top)) {
            clear_solve_tried(t->position);
            i.stack.pop_back();
            continue;
        }
        body_frame f = std::move(std::get<body_frame>(top));
        i.stack.pop_back();
        if (!f.goal || f.handler || f.guard) {
            continue;
        }
        trace("event", json{{"event", "-!" + print_term(*f.goal)}, {"intention", i.id}, {"reason", reason}});
        if (!i.stack.empty() && std::holds_alternative<try_frame>(i.stack.back())) {
            return;
        }
        if (f.solve) {
            continue;
        }
        std::string label;
        auto h = select_plan(trigger_op::del, trigger_type::achieve, *f.goal, true, &label);
        if (h) {
            h->handler = true;
            h->goal = *f.goal;
            trace("intention", json{{"op", "handler"}, {"intention", i.id}, {"plan", label}});
            i.stack.emplace_back(std::move(*h));
            return;
        }
    }
}

void agent::complete_top(intention& i) {
    body_frame f = std::move(std::get<body_frame>(i.stack.back()));
    i.stack.pop_back();
    ++i.epoch;
    std::optional<term> result;
    if (f.goal && !f.handler) {
        result = substitute(f.subst, *f.goal);
    }
    on_child_done(i, std::move(result));
}

void agent::on_child_done(intention& i, std::optional<term> result) {
    while (true) {
        if (i.stack.empty()) {
            finish_intention(i, true, "");
            return;
        }
        frame& top = i.stack.back();
        if (auto* p = std::get_if<body_frame>(&top)) {
            if (result && p->index < p->steps.size()) {
                const term called = substitute(p->subst, p->steps[p->index].payload);
                unify_into(called, *result, p->subst);
            }
            ++p->index;
            return;
        }
        if (auto* t = std::get_if<try_frame>(&top)) {
            clear_solve_tried(t->position);
            i.stack.pop_back();
            continue;
        }
        std::get<durative_frame>(top).phase = durative_phase::finish;
        return;
    }
}

void agent::finish_intention(intention& i, bool success, const std::string& reason) {
    if (i.done()) {
        return;
    }
    i.status = success ? intention_status::done_success : intention_status::done_failure;
    i.stack.clear();
    release_durative(i);
    json payload{{"op", success ? "completed" : "failed"}, {"intention", i.id}};
    if (!success && !reason.empty()) {
        payload["reason"] = reason;
    }
    trace("intention", std::move(payload));
    if (!success && i.fallback_goal) {
        trace("intention", json{{"op", "fallback"}, {"intention", i.id}, {"goal", print_term(*i.fallback_goal)}});
        post_goal(*i.fallback_goal, true);
    }
}

void agent::release_durative(intention& i) {
    if (durative_owner_ && *durative_owner_ == i.id) {
        durative_owner_.reset();
    }
}

void agent::clear_solve_tried(const std::vector<term>& position) {
    remove_beliefs(term::make("solve_tried", {term::list(position), term::var("_")}));
}

}  // namespace spbdi

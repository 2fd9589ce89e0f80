#include "spbdi/solve.hpp"

namespace spbdi {

std::vector<plan> relevant_plans_decomposed(const agent& a, const term& goal) {
    return a.relevant_plans(trigger_op::add, trigger_type::achieve, goal);
}

std::string print_path(const goal_plan_path& path) {
    std::string out = "[";
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (k) {
            out += ",";
        }
        out += "(" + print_term(path[k].goal) + "," + path[k].label + "," + std::to_string(path[k].step_index) + ")";
    }
    return out + "]";
}

namespace {

json print_position(const std::vector<term>& pos) { return print_term(term::list(pos)); }

}  // namespace

agent::exec agent::exec_try(intention& i) {
    auto& t = std::get<try_frame>(i.stack.back());
    if (!t.expanded) {
        t.expanded = true;
        t.candidates = relevant_plans(trigger_op::add, trigger_type::achieve, t.goal);
        json labels = json::array();
        for (const auto& p : t.candidates) {
            labels.push_back(p.label);
        }
        trace("intention", json{{"op", "try_plans"},
                                {"tag", "solve"},
                                {"intention", i.id},
                                {"goal", print_term(t.goal)},
                                {"position", print_position(t.position)},
                                {"candidates", labels}});
        if (t.candidates.empty()) {
            fail_top(i, "no relevant plan");
            return exec::proceed;
        }
    }
    while (t.next < t.candidates.size()) {
        const plan p = t.candidates[t.next++];
        const std::string suffix = beliefs_.fresh_suffix();
        auto s = unify(rename_vars(p.trig.literal, suffix), t.goal);
        if (!s) {
            continue;
        }
        auto ans = query_first(beliefs_, rename_vars(p.context, suffix), *s, options_.query_depth);
        if (!ans) {
            continue;
        }
        const std::vector<term> position = t.position;
        const term goal = t.goal;
        add_belief(term::make("solve_tried", {term::list(position), term::atom(p.label)}));
        body_frame c = instantiate(p, *ans, suffix);
        c.solve = true;
        c.goal = goal;
        c.position = position;
        c.position.push_back(term::atom(p.label));
        push_frame(i, std::move(c));
        return exec::proceed;
    }
    fail_top(i, "all relevant plans failed");
    return exec::proceed;
}

agent::exec agent::exec_guided_subgoal(intention& i, const term& goal) {
    auto& f = std::get<body_frame>(i.stack.back());
    const auto path = f.guide->path;
    const std::size_t k = f.guide->entry + 1;
    const path_entry& next = (*path)[k];
    const plan* p = find_plan(next.label);
    std::optional<substitution> s;
    std::string suffix;
    if (p && p->trig.op == trigger_op::add && p->trig.type == trigger_type::achieve) {
        suffix = beliefs_.fresh_suffix();
        s = unify(rename_vars(p->trig.literal, suffix), goal);
    }
    if (!s) {
        trace("intention", json{{"op", "guided_invalid"}, {"tag", "solve"}, {"intention", i.id}, {"plan", next.label}});
        fail_top(i, "guided path invalidated at " + next.label);
        return exec::proceed;
    }
    body_frame c = instantiate(*p, *s, suffix);
    c.solve = true;
    c.goal = goal;
    c.position = f.position;
    c.position.push_back(term::number(static_cast<std::int64_t>(f.index)));
    c.position.push_back(term::atom(p->label));
    c.guide = guidance{path, k};
    trace("intention", json{{"op", "guided_step"}, {"tag", "solve"}, {"intention", i.id}, {"plan", p->label}});
    push_frame(i, std::move(c));
    return exec::proceed;
}

agent::exec agent::push_durative(intention& i, const term& action, const action_decl& decl) {
    if (durative_owner_ && *durative_owner_ != i.id) {
        trace("intention", json{{"op", "durative_rejected"},
                                {"tag", "solve"},
                                {"intention", i.id},
                                {"action", print_term(action)}});
        fail_top(i, "another durative action is running");
        return exec::proceed;
    }
    std::get<body_frame>(i.stack.back()).started = true;
    durative_owner_ = i.id;
    const term functor = term::atom(action.name);
    remove_beliefs(term::make("durative_start", {functor, term::var("_")}));
    add_belief(term::make("durative_start", {functor, term::number(now_)}));

    durative_frame d;
    d.action = action.stripped();
    d.annots = action.annots;
    if (std::find(d.annots.begin(), d.annots.end(), term::atom("durative")) == d.annots.end()) {
        d.annots.push_back(term::atom("durative"));
    }
    if (decl.joint) {
        const bool has = std::any_of(d.annots.begin(), d.annots.end(),
                                     [](const term& a) { return a.is_compound("participants", 1); });
        if (!has) {
            d.annots.push_back(term::make("participants", {decl.participants}));
        }
    }
    d.continuation = decl.continuation;
    d.cleanup = decl.cleanup;
    trace("intention", json{{"op", "durative_start"},
                            {"tag", "solve"},
                            {"intention", i.id},
                            {"action", print_term(d.action.with_annots(d.annots))}});
    i.stack.emplace_back(std::move(d));
    return exec::proceed;
}

agent::exec agent::exec_durative(intention& i) {
    auto& d = std::get<durative_frame>(i.stack.back());
    if (d.awaiting) {
        if (!d.result) {
            return exec::yield;
        }
        const bool ok = *d.result;
        d.awaiting = false;
        d.result.reset();
        if (d.phase == durative_phase::loop && !ok) {
            d.failed = true;
            d.phase = durative_phase::stop_pending;
        } else if (d.phase == durative_phase::stopping) {
            if (!ok) {
                d.failed = true;
            }
            d.phase = durative_phase::cleanup;
        }
    }
    switch (d.phase) {
        case durative_phase::loop:
            if (query_first(beliefs_, term::atom(d.continuation), {}, options_.query_depth)) {
                ++d.executions;
                d.awaiting = true;
                emit_action(i, d.action.with_annots(d.annots));
                return exec::yield;
            }
            d.phase = durative_phase::stop_pending;
            [[fallthrough]];
        case durative_phase::stop_pending:
            d.phase = durative_phase::stopping;
            d.awaiting = true;
            emit_action(i, term::make("stop", {d.action}).with_annots(d.annots));
            return exec::yield;
        case durative_phase::stopping:
            return exec::yield;
        case durative_phase::cleanup:
            d.phase = durative_phase::finish;
            if (d.cleanup) {
                const term goal = *d.cleanup;
                std::string label;
                if (auto c = select_plan(trigger_op::add, trigger_type::achieve, goal, false, &label)) {
                    c->goal = goal;
                    trace("event", json{{"event", "+!" + print_term(goal)}, {"intention", i.id}, {"plan", label}});
                    push_frame(i, std::move(*c));
                    return exec::proceed;
                }
            }
            [[fallthrough]];
        case durative_phase::finish: {
            const bool failed = d.failed;
            const std::size_t executions = d.executions;
            const term action = d.action;
            i.stack.pop_back();
            ++i.epoch;
            release_durative(i);
            trace("intention", json{{"op", "durative_stop"},
                                    {"tag", "solve"},
                                    {"intention", i.id},
                                    {"action", print_term(action)},
                                    {"executions", executions},
                                    {"failed", failed}});
            if (failed) {
                fail_top(i, "durative action " + print_term(action) + " failed");
            } else {
                on_child_done(i, std::nullopt);
            }
            return exec::proceed;
        }
    }
    return exec::yield;
}

int agent::spawn_solve(const std::vector<body_step>& steps, std::optional<term> fallback) {
    body_frame c;
    c.solve = true;
    c.steps = steps;
    const int id = new_intention(std::move(c));
    get(id)->fallback_goal = std::move(fallback);
    return id;
}

std::optional<int> agent::spawn_guided(const term& goal, const goal_plan_path& path, std::optional<term> fallback) {
    if (path.empty()) {
        return std::nullopt;
    }
    for (const auto& e : path) {
        const plan* p = find_plan(e.label);
        if (!p || e.step_index >= p->body.size()) {
            trace("intention", json{{"op", "guided_invalid"}, {"tag", "solve"}, {"plan", e.label}});
            return std::nullopt;
        }
    }
    const plan& p0 = *find_plan(path.front().label);
    const std::string suffix = beliefs_.fresh_suffix();
    auto s = unify(rename_vars(p0.trig.literal, suffix), goal);
    if (!s || p0.trig.type != trigger_type::achieve || p0.trig.op != trigger_op::add) {
        return std::nullopt;
    }
    auto ans = query_first(beliefs_, rename_vars(p0.context, suffix), *s, options_.query_depth);
    if (!ans) {
        return std::nullopt;
    }
    body_frame c = instantiate(p0, *ans, suffix);
    c.solve = true;
    c.goal = goal;
    c.position = {term::number(0), term::atom(p0.label)};
    c.guide = guidance{std::make_shared<const goal_plan_path>(path), 0};
    const int id = new_intention(std::move(c));
    get(id)->fallback_goal = std::move(fallback);
    trace("intention", json{{"op", "guided"}, {"tag", "solve"}, {"intention", id}, {"path", print_path(path)}});
    return id;
}

}  // namespace spbdi

#include <algorithm>

#include "spbdi/practice.hpp"
#include "spbdi/solve.hpp"

namespace spbdi {

namespace {

const term k_meta_goal = term::atom("meta_deliberate");

term fact(const char* functor, std::vector<term> args) { return term::make(functor, std::move(args)); }

const landmark_decl* find_decl(const agent& a, const std::string& practice, const std::string& id) {
    for (const auto& lm : a.landmark_decls()) {
        if (lm.practice == practice && lm.id == id) {
            return &lm;
        }
    }
    return nullptr;
}

void set_status(agent& a, const std::string& id, landmark_status s) {
    auto& st = a.practice();
    st.status[id] = s;
    a.trace("landmark", json{{"practice", *st.selected}, {"landmark", id}, {"status", to_string(s)}, {"tick", a.now()}});
}

bool group_done(const practice_state& st, const landmark_node& n) {
    if (!n.group) {
        return false;
    }
    for (const auto& m : st.graph.groups[*n.group]) {
        auto it = st.status.find(m);
        if (it != st.status.end() && it->second == landmark_status::completed) {
            return true;
        }
    }
    return false;
}

bool landmark_done(const practice_state& st, const std::string& id) {
    auto it = st.status.find(id);
    if (it != st.status.end() && it->second == landmark_status::completed) {
        return true;
    }
    const landmark_node* n = st.graph.find(id);
    return n && group_done(st, *n);
}

void remove_guard_for(agent& a, const term& purpose) {
    auto& guards = a.practice().guards;
    for (auto it = guards.begin(); it != guards.end(); ++it) {
        if (it->purpose == purpose.stripped()) {
            a.remove_guard_plan(it->label);
            a.trace("practice", json{{"op", "guard_removed"}, {"purpose", print_term(it->purpose)}, {"plan", it->label}});
            guards.erase(it);
            return;
        }
    }
}

json status_dump(const practice_state& st) {
    json lms = json::object();
    for (const auto& n : st.graph.nodes) {
        auto it = st.status.find(n.id);
        lms[n.id] = to_string(it == st.status.end() ? landmark_status::inactive : it->second);
    }
    return lms;
}

}  // namespace

bool priors_satisfied(const practice_state& st, const std::string& id) {
    const landmark_node* n = st.graph.find(id);
    if (!n) {
        return false;
    }
    return std::all_of(n->priors.begin(), n->priors.end(), [&](const std::string& p) { return landmark_done(st, p); });
}

void attach_practice_engine(agent& a) {
    a.register_internal_action(".metadeliberate", [](ia_context& ctx, const term&) {
        metadeliberate(ctx.self);
        return ia_result::ok;
    });
    plan p;
    p.label = "meta_deliberate";
    p.atomic = true;
    p.trig = trigger{trigger_op::add, trigger_type::achieve, k_meta_goal};
    p.body.push_back(body_step{step_kind::internal_action, term::atom(".metadeliberate")});
    a.add_plan_front(std::move(p));
    a.post_goal(k_meta_goal);
}

void metadeliberate(agent& a) {
    auto& st = a.practice();
    ++st.passes;
    const auto relevant = relevant_practices(a.beliefs(), a.practice_decls(), a.options().query_depth);
    const auto chosen = select_practice(relevant);
    if (st.selected && chosen != st.selected) {
        deactivate_practice(a);
    }
    if (chosen && !st.selected) {
        st.selected = chosen;
        a.add_belief(fact("selected_practice", {term::atom(*chosen)}));
        a.trace("practice", json{{"op", "selected"}, {"practice", *chosen}, {"tick", a.now()}});
        on_practice_selected(a, *chosen);
    }
    if (st.selected && !st.completed) {
        std::vector<std::string> monitored;
        for (const auto& n : st.graph.nodes) {
            if (st.status[n.id] == landmark_status::monitored) {
                monitored.push_back(n.id);
            }
        }
        for (const auto& id : monitored) {
            if (st.status[id] != landmark_status::monitored) {
                continue;
            }
            const landmark_node* n = st.graph.find(id);
            if (query_first(a.beliefs(), n->purpose, {}, a.options().query_depth)) {
                on_landmark_completed(a, id);
            }
        }
    }
    json pass{{"op", "pass"}, {"tick", a.now()}};
    pass["selected"] = st.selected ? json(*st.selected) : json(nullptr);
    pass["landmarks"] = status_dump(st);
    pass["suspensions"] = st.suspensions.size();
    pass["guards"] = st.guards.size();
    a.trace("practice", std::move(pass));
    a.schedule_goal(a.now() + std::max<std::int64_t>(1, a.options().meta_period), k_meta_goal);
}

void on_practice_selected(agent& a, const std::string& practice) {
    auto& st = a.practice();
    st.graph = build_landmark_graph(practice, a.landmark_decls(), a.pattern_decls());
    st.status.clear();
    st.completed = false;
    st.completed_tick.reset();
    for (const auto& n : st.graph.nodes) {
        st.status[n.id] = landmark_status::inactive;
    }
    for (const auto& n : st.graph.nodes) {
        const term purpose = n.purpose.stripped();
        for (int id : a.intentions_for(purpose)) {
            if (a.suspend_intention(id, fact("landmark", {term::atom(practice), term::atom(n.id)}))) {
                st.suspensions.push_back(suspension_record{purpose, id});
            }
        }
        const bool guarded = std::any_of(st.guards.begin(), st.guards.end(),
                                         [&](const guard_record& g) { return g.purpose == purpose; });
        if (!guarded) {
            const std::string label = a.install_guard_plan(purpose);
            st.guards.push_back(guard_record{purpose, label});
            a.trace("practice", json{{"op", "guard_installed"}, {"purpose", print_term(purpose)}, {"plan", label}});
        }
    }
    for (const auto& n : st.graph.nodes) {
        if (n.priors.empty()) {
            activate_landmark(a, n.id);
        }
    }
}

namespace {

// Plans on a guided path that re-pursue a completed landmark's purpose are
// run unchanged; each occurrence is traced.
void note_prior_subgoals(agent& a, const std::string& practice, const std::string& id, const goal_plan_path& path) {
    const auto& st = a.practice();
    for (const auto& e : path) {
        const auto& plans = a.plans();
        const auto p = std::find_if(plans.begin(), plans.end(), [&](const plan& x) { return x.label == e.label; });
        if (p == plans.end()) {
            continue;
        }
        for (const auto& step : p->body) {
            if (step.kind != step_kind::achieve) {
                continue;
            }
            for (const auto& n : st.graph.nodes) {
                if (st.status.at(n.id) == landmark_status::completed &&
                    unify(n.purpose.stripped(), step.payload.stripped())) {
                    a.trace("landmark", json{{"practice", practice},
                                             {"landmark", id},
                                             {"prior_purpose_subgoal", print_term(step.payload)},
                                             {"prior", n.id},
                                             {"plan", e.label}});
                }
            }
        }
    }
}

}  // namespace

void activate_landmark(agent& a, const std::string& id) {
    auto& st = a.practice();
    const std::string practice = *st.selected;
    const landmark_node* n = st.graph.find(id);
    set_status(a, id, landmark_status::monitored);
    a.add_belief(fact("monitoring", {term::atom(practice), term::atom(id)}));

    const landmark_decl* decl = find_decl(a, practice, id);
    if (!decl || decl->actions.empty()) {
        return;
    }
    if (decl->actions.size() > 1) {
        a.trace("landmark", json{{"practice", practice}, {"landmark", id}, {"warning", "only the first action is used"}});
    }
    const landmark_action& act = decl->actions.front();
    if (act.actor != a.name()) {
        return;
    }
    const term purpose = n->purpose.stripped();
    json info{{"practice", practice}, {"landmark", id}, {"action", print_term(act.action)}};

    if (auto path = find_guided_path(a.plans(), a.beliefs(), purpose, act.action, a.options().search_depth,
                                     a.options().query_depth)) {
        info["dispatch"] = "guided";
        info["path"] = print_path(*path);
        a.trace("landmark", info);
        note_prior_subgoals(a, practice, id, *path);
        if (!a.spawn_guided(purpose, *path, purpose)) {
            a.trace("landmark", json{{"practice", practice}, {"landmark", id}, {"dispatch", "fallback_goal"}});
            a.post_goal(purpose, true);
        }
        return;
    }
    const action_decl* d = a.action_info(act.action.name);
    const bool special = act.action.is_internal() || (d && (d->durative || d->joint));
    const body_step step{act.action.is_internal() ? step_kind::internal_action : step_kind::action, act.action};
    info["dispatch"] = special ? "metainterpreter" : "direct";
    a.trace("landmark", info);
    a.spawn_solve({step}, purpose);
}

void on_landmark_completed(agent& a, const std::string& id) {
    auto& st = a.practice();
    const std::string practice = *st.selected;
    const landmark_node* n = st.graph.find(id);
    const term purpose = n->purpose.stripped();

    set_status(a, id, landmark_status::completed);
    st.completion_ticks[id] = a.now();
    a.remove_beliefs(fact("monitoring", {term::atom(practice), term::atom(id)}));
    a.add_belief(fact("landmark_completed", {term::atom(practice), term::atom(id)}));

    if (n->group) {
        for (const auto& m : st.graph.groups[*n->group]) {
            if (m != id && st.status[m] == landmark_status::monitored) {
                set_status(a, m, landmark_status::abandoned);
                a.remove_beliefs(fact("monitoring", {term::atom(practice), term::atom(m)}));
            }
        }
    }

    for (auto it = st.suspensions.begin(); it != st.suspensions.end();) {
        if (unify(it->purpose, purpose)) {
            const int iid = it->intention;
            it = st.suspensions.erase(it);
            if (a.succeed_intention(iid, purpose)) {
                a.trace("practice", json{{"op", "suspension_succeeded"}, {"intention", iid}, {"landmark", id}});
            }
        } else {
            ++it;
        }
    }
    remove_guard_for(a, purpose);

    for (const auto& m : st.graph.nodes) {
        if (st.status[m.id] == landmark_status::inactive && !m.priors.empty() && priors_satisfied(st, m.id)) {
            activate_landmark(a, m.id);
        }
    }
    const bool all = std::all_of(st.graph.nodes.begin(), st.graph.nodes.end(),
                                 [&](const landmark_node& m) { return landmark_done(st, m.id); });
    if (all && !st.completed) {
        st.completed = true;
        st.completed_tick = a.now();
        a.add_belief(fact("practice_completed", {term::atom(practice)}));
        a.trace("practice", json{{"op", "completed"}, {"practice", practice}, {"tick", a.now()}});
    }
}

void deactivate_practice(agent& a) {
    auto& st = a.practice();
    if (!st.selected) {
        return;
    }
    const std::string practice = *st.selected;
    for (const auto& n : st.graph.nodes) {
        if (st.status[n.id] == landmark_status::monitored) {
            set_status(a, n.id, landmark_status::abandoned);
            a.remove_beliefs(fact("monitoring", {term::atom(practice), term::atom(n.id)}));
        }
    }
    for (const auto& g : st.guards) {
        a.remove_guard_plan(g.label);
        a.trace("practice", json{{"op", "guard_removed"}, {"purpose", print_term(g.purpose)}, {"plan", g.label}});
    }
    st.guards.clear();
    const auto records = std::move(st.suspensions);
    st.suspensions.clear();
    for (const auto& r : records) {
        if (a.resume_intention(r.intention)) {
            a.trace("practice", json{{"op", "suspension_resumed"}, {"intention", r.intention}});
        }
    }
    a.remove_beliefs(fact("selected_practice", {term::atom(practice)}));
    a.trace("practice", json{{"op", "deselected"}, {"practice", practice}, {"tick", a.now()}});
    st.selected.reset();
    st.status.clear();
    st.completed = false;
}

}  // namespace spbdi

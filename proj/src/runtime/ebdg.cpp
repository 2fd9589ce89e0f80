#include "spbdi/agent.hpp"

namespace spbdi {

namespace {

term tried(const std::string& label) { return term::make("tried", {term::atom(label)}); }

std::vector<body_step> clear_all(const std::vector<plan>& plans) {
    std::vector<body_step> out;
    for (const auto& p : plans) {
        out.push_back(body_step{step_kind::del_belief, tried(p.label)});
    }
    return out;
}

}  // namespace

// Exclusive backtracking declarative goal: each plan is tried at most once,
// in order, until the goal holds.
std::vector<plan> apply_ebdg_transform(const term& goal, const std::vector<plan>& plans) {
    const std::string base = goal.is_symbol() ? goal.name : "goal";
    std::vector<plan> out;

    plan entry;
    entry.label = base + "_entry";
    entry.trig = trigger{trigger_op::add, trigger_type::achieve, goal};
    entry.context = goal;
    entry.body = clear_all(plans);
    out.push_back(std::move(entry));

    for (const auto& p : plans) {
        plan q = p;
        const term guard = term::make("not", {tried(p.label)});
        q.context = p.context.is_atom("true") ? guard : term::make("&", {guard, p.context});
        q.body.clear();
        q.body.push_back(body_step{step_kind::add_belief, tried(p.label)});
        q.body.insert(q.body.end(), p.body.begin(), p.body.end());
        q.body.push_back(body_step{step_kind::test, p.trig.literal});
        const auto cleanup = clear_all(plans);
        q.body.insert(q.body.end(), cleanup.begin(), cleanup.end());
        out.push_back(std::move(q));
    }

    plan fallback;
    fallback.label = base + "_fallback";
    fallback.trig = trigger{trigger_op::add, trigger_type::achieve, goal};
    fallback.body = clear_all(plans);
    fallback.body.push_back(body_step{step_kind::internal_action, term::atom(".fail")});
    out.push_back(std::move(fallback));

    plan retry;
    retry.label = base + "_retry";
    retry.trig = trigger{trigger_op::del, trigger_type::achieve, goal};
    term any = tried(plans.front().label);
    for (std::size_t k = 1; k < plans.size(); ++k) {
        any = term::make("|", {any, tried(plans[k].label)});
    }
    retry.context = any;
    retry.body.push_back(body_step{step_kind::achieve, goal});
    out.push_back(std::move(retry));
    return out;
}

}  // namespace spbdi

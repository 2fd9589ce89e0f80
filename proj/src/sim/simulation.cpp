#include <algorithm>
#include <sstream>

#include "spbdi/practice.hpp"
#include "spbdi/simulation.hpp"

namespace spbdi {

namespace {

std::int64_t int_param(const scenario& sc, const char* key, std::int64_t fallback) {
    auto it = sc.params.find(key);
    if (it == sc.params.end()) {
        return fallback;
    }
    if (!it->second.is_number()) {
        throw scenario_error(std::string("parameter ") + key + " must be an integer");
    }
    return it->second.value;
}

care_world_config world_config(const scenario& sc) {
    care_world_config c;
    c.start_tick = int_param(sc, "start_time", c.start_tick);
    c.curtain_delay = int_param(sc, "curtain_delay", c.curtain_delay);
    c.pod_brew = int_param(sc, "pod_brew", c.pod_brew);
    c.s_min = int_param(sc, "s_min", c.s_min);
    if (auto it = sc.params.find("mozart_stimulates"); it != sc.params.end()) {
        c.mozart_stimulates = it->second.is_atom("true");
    }
    c.facts = sc.facts;
    return c;
}

}  // namespace

simulation::simulation(const scenario& sc, sim_options options) : world_(world_config(sc)) {
    agent_options ao;
    ao.practices_enabled = options.practices_enabled;
    ao.meta_period = options.meta_period;
    ao.search_depth = options.search_depth;
    for (const auto& spec : sc.agents) {
        auto it = sc.programs.find(spec.name);
        if (it == sc.programs.end()) {
            throw scenario_error("no program loaded for agent " + spec.name);
        }
        agents_.emplace_back(spec.name, it->second, ao);
    }
    for (auto& a : agents_) {
        a.perceive(world_.percepts(a.name()));
    }
}

agent& simulation::get(const std::string& name) {
    for (auto& a : agents_) {
        if (a.name() == name) {
            return a;
        }
    }
    throw scenario_error("unknown agent " + name);
}

void simulation::step() {
    ++step_;
    std::map<std::pair<std::size_t, int>, std::int64_t> suspended_before;
    for (std::size_t k = 0; k < agents_.size(); ++k) {
        for (const auto& i : agents_[k].intentions()) {
            if (i.status == intention_status::suspended) {
                suspended_before[{k, i.id}] = i.steps_taken;
            }
        }
    }
    for (auto& a : agents_) {
        a.set_clock(step_, world_.tick(), &trace_);
        if (step_ == 1) {
            a.initialize();
        }
        a.step();
    }
    for (auto& a : agents_) {
        for (const auto& req : a.take_actions()) {
            const std::int64_t at = world_.tick();
            const action_outcome out = world_.execute(a.name(), req.action);
            trace_.emit(step_, a.name(), "action",
                        json{{"op", "outcome"},
                             {"action", print_term(req.action)},
                             {"intention", req.intention},
                             {"success", out.success},
                             {"tick", at}});
            a.deliver_outcome(req.intention, out.success);
        }
    }
    for (auto& a : agents_) {
        a.perceive(world_.percepts(a.name()));
    }
    check_invariants(suspended_before);
}

void simulation::run(std::int64_t steps) {
    for (std::int64_t k = 0; k < steps; ++k) {
        step();
    }
}

void simulation::check_invariants(const std::map<std::pair<std::size_t, int>, std::int64_t>& suspended_before) {
    for (std::size_t k = 0; k < agents_.size(); ++k) {
        const agent& a = agents_[k];
        for (const auto& i : a.intentions()) {
            auto it = suspended_before.find({k, i.id});
            if (it != suspended_before.end() && i.status == intention_status::suspended &&
                i.steps_taken != it->second) {
                violations_.push_back("step " + std::to_string(step_) + ": suspended intention " +
                                      std::to_string(i.id) + " of " + a.name() + " executed a step");
            }
        }
        const auto& st = a.practice();
        for (const auto& [id, s] : st.status) {
            if (s == landmark_status::monitored && !priors_satisfied(st, id)) {
                violations_.push_back("step " + std::to_string(step_) + ": landmark " + id +
                                      " monitored before its priors completed");
            }
        }
        int locked = 0;
        for (const auto& i : a.intentions()) {
            locked += a.holds_atomic_lock(i) ? 1 : 0;
        }
        if (locked > 1) {
            violations_.push_back("step " + std::to_string(step_) + ": more than one atomic intention locked");
        }
    }
    if (!world_.intervals_consistent()) {
        violations_.push_back("step " + std::to_string(step_) + ": inconsistent durative interval history");
    }
}

run_summary simulation::summarize() const {
    run_summary s;
    s.steps = step_;
    s.final_tick = world_.tick();
    s.mood = "none";
    for (const auto& f : world_.facts()) {
        if (f.is_compound("mood", 1)) {
            s.mood = print_term(f.args[0]);
        }
    }
    s.stimulation = world_.stimulation();
    s.stimulated = world_.holds(term::atom("stimulated"));
    for (const auto& a : agents_) {
        const auto& st = a.practice();
        if (a.practice_decls().empty()) {
            continue;
        }
        for (const auto& [id, t] : st.completion_ticks) {
            s.landmark_ticks[id] = t;
        }
        if (st.completed_tick) {
            s.practice_completed = true;
            s.practice_completed_tick = st.completed_tick;
        }
    }
    for (const auto& r : trace_.records()) {
        if (r.kind != "action" || r.payload.value("op", "") != "emit") {
            continue;
        }
        const std::string action = r.payload.value("action", "");
        const std::string functor = action.substr(0, action.find_first_of("([")) ;
        if (functor == "tick") {
            continue;
        }
        const std::string key = r.agent + ":" + functor;
        if (std::find(s.actions_attempted.begin(), s.actions_attempted.end(), key) == s.actions_attempted.end()) {
            s.actions_attempted.push_back(key);
        }
    }
    return s;
}

std::string format_summary(const run_summary& s) {
    std::ostringstream out;
    out << "steps: " << s.steps << "\n";
    out << "final tick: " << s.final_tick << "\n";
    out << "mood: " << s.mood << "\n";
    out << "stimulation: " << (s.stimulation ? std::to_string(*s.stimulation) : "none") << "\n";
    out << "stimulated: " << (s.stimulated ? "yes" : "no") << "\n";
    out << "practice completed: " << (s.practice_completed ? "yes" : "no");
    if (s.practice_completed_tick) {
        out << " (tick " << *s.practice_completed_tick << ")";
    }
    out << "\n";
    out << "landmarks:";
    if (s.landmark_ticks.empty()) {
        out << " none";
    }
    for (const auto& [id, t] : s.landmark_ticks) {
        out << " " << id << "@" << t;
    }
    out << "\nactions:";
    for (const auto& a : s.actions_attempted) {
        out << " " << a;
    }
    out << "\n";
    return out.str();
}

}  // namespace spbdi

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "spbdi/logic.hpp"
#include "spbdi/practice_state.hpp"
#include "spbdi/program.hpp"
#include "spbdi/trace.hpp"

namespace spbdi {

class runtime_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class event_kind { goal_add, goal_del, belief_add, belief_del };

struct event {
    event_kind kind = event_kind::goal_add;
    term content;
    std::optional<int> intention;
    // Posted by the practice engine as a fallback; guard plans are skipped.
    bool skip_guards = false;
};

std::string print_event(const event& e);

/// One entry of a goal-plan path: at `goal`, use plan `label`, and continue at
/// body step `step_index` of that plan.
struct path_entry {
    term goal;
    std::string label;
    std::size_t step_index = 0;

    bool operator==(const path_entry&) const = default;
};
using goal_plan_path = std::vector<path_entry>;

struct wait_state {
    std::int64_t until = 0;
    std::optional<term> condition;
};

struct guidance {
    std::shared_ptr<const goal_plan_path> path;
    std::size_t entry = 0;
};

struct body_frame {
    std::string label;
    std::vector<body_step> steps;
    substitution subst;
    std::size_t index = 0;
    std::optional<term> goal;
    bool atomic = false;
    bool started = false;
    bool solve = false;
    bool handler = false;
    bool guard = false;
    // Solve-position prefix of this body; step i sits at position + [i].
    std::vector<term> position;
    std::optional<guidance> guide;
    std::optional<wait_state> waiting;
    bool awaiting_action = false;
    std::optional<bool> action_result;
};

struct try_frame {
    term goal;
    std::vector<term> position;
    std::vector<plan> candidates;
    bool expanded = false;
    std::size_t next = 0;
};

enum class durative_phase { loop, stop_pending, stopping, cleanup, finish };

struct durative_frame {
    term action;
    std::vector<term> annots;
    std::string continuation;
    std::optional<term> cleanup;
    durative_phase phase = durative_phase::loop;
    bool awaiting = false;
    std::optional<bool> result;
    bool failed = false;
    std::size_t executions = 0;
};

using frame = std::variant<body_frame, try_frame, durative_frame>;

enum class intention_status { active, suspended, done_success, done_failure };

std::string to_string(intention_status s);

struct intention {
    int id = 0;
    std::vector<frame> stack;
    intention_status status = intention_status::active;
    term suspend_reason;
    // Posted as an ordinary goal if this intention fails.
    std::optional<term> fallback_goal;
    std::int64_t steps_taken = 0;
    std::uint64_t last_selected = 0;
    // Bumped whenever a frame is popped off this intention.
    std::uint64_t epoch = 0;

    bool done() const {
        return status == intention_status::done_success || status == intention_status::done_failure;
    }
};

/// Goal of a frame (body or try frame), if it works for one.
const term* frame_goal(const frame& f);

struct action_decl {
    bool durative = false;
    bool joint = false;
    std::string continuation;
    std::optional<term> cleanup;
    term participants = term::list({});
};

struct action_request {
    int intention = 0;
    term action;
};

struct agent_options {
    int query_depth = k_default_query_depth;
    bool practices_enabled = true;
    std::int64_t meta_period = 2;
    int search_depth = 3;
};

class agent;

enum class ia_result { ok, fail, block };

struct ia_context {
    agent& self;
    int intention;
    substitution& subst;
    std::optional<wait_state> wait;
};

using internal_action_fn = std::function<ia_result(ia_context&, const term& call)>;

class agent {
public:
    agent(std::string name, const agent_program& program, agent_options options = {});

    const std::string& name() const { return name_; }
    const agent_options& options() const { return options_; }

    belief_base& beliefs() { return beliefs_; }
    const belief_base& beliefs() const { return beliefs_; }
    const std::vector<plan>& plans() const { return plans_; }
    const std::deque<intention>& intentions() const { return intentions_; }
    const intention* find_intention(int id) const;
    const std::deque<event>& events() const { return events_; }
    const std::vector<practice_decl>& practice_decls() const { return practice_decls_; }
    const std::vector<landmark_decl>& landmark_decls() const { return landmark_decls_; }
    const std::vector<std::pair<std::string, std::string>>& pattern_decls() const { return pattern_decls_; }
    practice_state& practice() { return practice_; }
    const practice_state& practice() const { return practice_; }

    /// Binds the clock and trace sink used by the following calls.
    void set_clock(std::int64_t step, std::int64_t now, trace_log* trace);
    std::int64_t now() const { return now_; }
    std::int64_t current_step() const { return step_; }

    /// Adopts queued initial goals as intentions without executing steps.
    void initialize();

    /// One reasoning step: at most one relevant event, background durative
    /// iterations, then one step of the selected intention.
    void step();

    std::vector<action_request> take_actions();
    void deliver_outcome(int intention_id, bool ok);

    /// Replaces the percept set; the belief base gets the difference.
    void perceive(const std::vector<term>& percepts);

    void post_goal(const term& goal, bool skip_guards = false);
    void schedule_goal(std::int64_t due, const term& goal);

    // Intention controls. Goals are matched against the lowest frame with
    // annotations stripped. Return the affected intention ids.
    std::vector<int> suspend_intentions(const term& goal, const term& reason);
    std::vector<int> resume_intentions(const term& goal);
    std::vector<int> succeed_intentions(const term& goal);
    bool suspend_intention(int id, const term& reason);
    bool resume_intention(int id);
    bool succeed_intention(int id, const term& goal);
    std::vector<int> intentions_for(const term& goal) const;

    std::string install_guard_plan(const term& goal);
    void remove_guard_plan(const std::string& label);

    void add_plan_front(plan p);

    std::vector<plan> relevant_plans(trigger_op op, trigger_type type, const term& literal) const;

    int spawn_solve(const std::vector<body_step>& steps, std::optional<term> fallback = std::nullopt);
    std::optional<int> spawn_guided(const term& goal, const goal_plan_path& path,
                                    std::optional<term> fallback = std::nullopt);

    void register_internal_action(const std::string& name, internal_action_fn fn);

    const action_decl* action_info(const std::string& functor) const;

    /// Adds a belief with source(self) and queues its event.
    void add_belief(const term& literal);
    void remove_beliefs(const term& pattern);

    void trace(const std::string& kind, json payload);

    /// True when intention `id` holds the atomic lock.
    bool holds_atomic_lock(const intention& i) const;

private:
    friend struct runtime_access;

    std::optional<body_frame> select_plan(trigger_op op, trigger_type type, const term& content,
                                          bool skip_guards, std::string* label_out = nullptr);
    body_frame instantiate(const plan& p, const substitution& s, std::string suffix) const;
    bool handle_event(const event& ev);
    int new_intention(body_frame f);
    intention* get(int id);
    bool is_ready(const intention& i) const;
    bool is_background(const intention& i) const;
    void run_intention(intention& i, bool background);

    enum class exec { proceed, yield };
    exec exec_body(intention& i);
    exec exec_try(intention& i);
    exec exec_durative(intention& i);
    exec exec_achieve(intention& i, const term& goal);
    exec exec_internal(intention& i, const term& call);
    exec push_durative(intention& i, const term& action, const action_decl& decl);
    exec exec_guided_subgoal(intention& i, const term& goal);
    void settle(intention& i);
    const plan* find_plan(const std::string& label) const;
    void register_builtins();
    void load_action_decls();

    void push_frame(intention& i, body_frame f);
    void fail_top(intention& i, const std::string& reason);
    void complete_top(intention& i);
    void on_child_done(intention& i, std::optional<term> result_goal);
    void finish_intention(intention& i, bool success, const std::string& reason);
    void release_durative(intention& i);
    void clear_solve_tried(const std::vector<term>& position);
    void emit_action(intention& i, const term& action);
    void queue_belief_event(const belief_event& ev);

    std::string name_;
    agent_options options_;
    belief_base beliefs_;
    std::vector<plan> plans_;
    std::vector<practice_decl> practice_decls_;
    std::vector<landmark_decl> landmark_decls_;
    std::vector<std::pair<std::string, std::string>> pattern_decls_;
    std::map<std::string, action_decl> action_decls_;
    std::map<std::string, internal_action_fn> internal_actions_;
    std::deque<event> events_;
    std::multimap<std::int64_t, term> timers_;
    // deque: references stay valid while intentions are spawned mid-step.
    std::deque<intention> intentions_;
    std::vector<action_request> outbox_;
    std::vector<term> last_percepts_;
    practice_state practice_;
    std::optional<int> durative_owner_;
    int next_intention_id_ = 1;
    std::uint64_t selections_ = 0;
    int guard_counter_ = 0;
    std::int64_t step_ = 0;
    std::int64_t now_ = 0;
    trace_log* trace_ = nullptr;
};

/// ebdg plan transformation for one goal; `plans` must hold the labelled plans
/// of the block, in library order.
std::vector<plan> apply_ebdg_transform(const term& goal, const std::vector<plan>& plans);

}  // namespace spbdi

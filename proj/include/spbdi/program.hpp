#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spbdi/term.hpp"

namespace spbdi {

enum class step_kind { action, internal_action, achieve, achieve_new, test, add_belief, del_belief };

struct body_step {
    step_kind kind = step_kind::action;
    term payload;

    bool operator==(const body_step&) const = default;
};

enum class trigger_op { add, del };
enum class trigger_type { achieve, belief };

struct trigger {
    trigger_op op = trigger_op::add;
    trigger_type type = trigger_type::achieve;
    term literal;

    bool operator==(const trigger&) const = default;
};

struct plan {
    std::string label;
    bool atomic = false;
    trigger trig;
    term context = term::atom("true");
    std::vector<body_step> body;
    // Temporary landmark guard: adopting it suspends the intention at once.
    bool guard = false;

    bool operator==(const plan&) const = default;
};

struct rule {
    term head;
    term body;

    bool operator==(const rule&) const = default;
};

struct practice_decl {
    std::string name;
    std::vector<term> requirements;
};

struct landmark_action {
    std::string actor;
    term action;
};

struct landmark_decl {
    std::string practice;
    std::string id;
    std::vector<std::string> priors;
    std::vector<landmark_action> actions;
    term purpose;
};

/// `{begin ebdg(G)} ... {end}` block: labels of the plans it encloses.
struct ebdg_block {
    term goal;
    std::vector<std::string> labels;
};

struct agent_program {
    std::vector<term> beliefs;
    std::vector<rule> rules;
    std::vector<plan> plans;
    std::vector<term> goals;
    std::vector<practice_decl> practices;
    std::vector<landmark_decl> landmarks;
    std::vector<std::pair<std::string, std::string>> patterns;
    std::vector<ebdg_block> ebdg_blocks;
};

std::string print_step(const body_step& s);
std::string print_trigger(const trigger& t);
std::string print_plan(const plan& p);

/// Steps encoded as terms, as passed to `solve`: `achieve(G)`, `achieve_new(G)`,
/// `test(Q)`, `add(B)`, `del(B)`, `plan_body(Prefix, T)`; anything else is an action.
body_step step_from_term(const term& t);
term step_to_term(const body_step& s);

}  // namespace spbdi

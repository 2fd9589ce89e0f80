#pragma once

#include <optional>
#include <vector>

#include "spbdi/agent.hpp"

namespace spbdi {

/// Plans whose trigger unifies with `+!goal`, in library order, with their
/// bodies as step lists.
std::vector<plan> relevant_plans_decomposed(const agent& a, const term& goal);

/// Starts an intention running `steps` through the metainterpreter.
inline int solve(agent& a, const std::vector<body_step>& steps) { return a.spawn_solve(steps); }

/// Starts an intention for `goal` that follows `path` down the goal-plan tree.
/// Returns nothing when the path names a plan missing from the library or the
/// first plan does not apply.
inline std::optional<int> solve_guided(agent& a, const term& goal, const goal_plan_path& path) {
    return a.spawn_guided(goal, path);
}

std::string print_path(const goal_plan_path& path);

}  // namespace spbdi

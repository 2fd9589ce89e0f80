#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spbdi/agent.hpp"
#include "spbdi/plan_pattern.hpp"
#include "spbdi/practice_state.hpp"

namespace spbdi {

/// Landmark partial order of a plan pattern. Sequence wires the sinks of the
/// left side to the sources of the right side; choice operands (segments only)
/// form a completion group. Throws runtime_error on duplicate labels.
landmark_graph compile_plan_pattern(const plan_pattern& pp);

/// Graph of practice `name` from its lm/5 declarations, checked against its
/// pattern/2 declaration when there is one.
landmark_graph build_landmark_graph(const std::string& name, const std::vector<landmark_decl>& landmarks,
                                    const std::vector<std::pair<std::string, std::string>>& patterns);

std::vector<std::string> relevant_practices(const belief_base& bb, const std::vector<practice_decl>& decls,
                                            int depth = k_default_query_depth);

std::optional<std::string> select_practice(const std::vector<std::string>& candidates);

/// First goal-plan path (plan order, then body order) from `purpose` to a
/// plan body containing `action`, with at most `depth` entries. Contexts are
/// checked for the top-level plans only.
std::optional<goal_plan_path> find_guided_path(const std::vector<plan>& plans, const belief_base& bb,
                                               const term& purpose, const term& action, int depth,
                                               int query_depth = k_default_query_depth);

/// Installs the metadeliberate plan and internal action and posts the first
/// `!meta_deliberate` goal.
void attach_practice_engine(agent& a);

void metadeliberate(agent& a);
void on_practice_selected(agent& a, const std::string& practice);
void activate_landmark(agent& a, const std::string& id);
void on_landmark_completed(agent& a, const std::string& id);
void deactivate_practice(agent& a);

/// True when every prior of `id` is completed or has a completed group sibling.
bool priors_satisfied(const practice_state& st, const std::string& id);

}  // namespace spbdi

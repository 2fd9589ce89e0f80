#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spbdi/term.hpp"

namespace spbdi {

enum class landmark_status { inactive, monitored, completed, abandoned };

std::string to_string(landmark_status s);

struct landmark_node {
    std::string id;
    std::vector<std::string> priors;
    term purpose;
    // Index into landmark_graph::groups for members of a choice.
    std::optional<std::size_t> group;
};

struct landmark_graph {
    std::vector<landmark_node> nodes;
    std::vector<std::vector<std::string>> groups;

    const landmark_node* find(const std::string& id) const;
    std::map<std::string, std::vector<std::string>> priors_map() const;
};

struct suspension_record {
    term purpose;
    int intention = 0;
};

struct guard_record {
    term purpose;
    std::string label;
};

/// Per-agent bookkeeping of the meta-deliberation layer.
struct practice_state {
    std::optional<std::string> selected;
    landmark_graph graph;
    std::map<std::string, landmark_status> status;
    std::vector<suspension_record> suspensions;
    std::vector<guard_record> guards;
    bool completed = false;
    std::map<std::string, std::int64_t> completion_ticks;
    std::optional<std::int64_t> completed_tick;
    std::int64_t passes = 0;
};

}  // namespace spbdi

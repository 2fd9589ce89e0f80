#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spbdi/agent.hpp"
#include "spbdi/trace.hpp"
#include "spbdi/world.hpp"

namespace spbdi {

class scenario_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct agent_spec {
    std::string name;
    std::string program_file;
    std::vector<std::string> practice_files;
};

/// Parsed `.scn` manifest: agent/3, param/2, fact/1 and belief/2 facts.
struct scenario {
    std::vector<agent_spec> agents;
    std::map<std::string, term> params;
    std::vector<term> facts;
    std::vector<std::pair<std::string, term>> beliefs;
    std::filesystem::path base_dir;
    // Program text per agent, keyed by agent name, once loaded.
    std::map<std::string, agent_program> programs;
};

/// Parses a manifest and the programs it names. Throws parse_error on syntax
/// errors and scenario_error on missing files or malformed entries.
scenario load_scenario(const std::filesystem::path& manifest);
scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir);

struct sim_options {
    bool practices_enabled = true;
    std::int64_t meta_period = 2;
    int search_depth = 3;
};

struct run_summary {
    std::string mood;
    std::optional<std::int64_t> stimulation;
    bool stimulated = false;
    bool practice_completed = false;
    std::optional<std::int64_t> practice_completed_tick;
    std::map<std::string, std::int64_t> landmark_ticks;
    std::vector<std::string> actions_attempted;
    std::int64_t steps = 0;
    std::int64_t final_tick = 0;
};

class simulation {
public:
    simulation(const scenario& sc, sim_options options = {});

    void step();
    void run(std::int64_t steps);

    std::int64_t steps_done() const { return step_; }
    const trace_log& trace() const { return trace_; }
    care_world& world() { return world_; }
    const care_world& world() const { return world_; }
    std::vector<agent>& agents() { return agents_; }
    const std::vector<agent>& agents() const { return agents_; }
    agent& get(const std::string& name);

    /// Runtime invariant violations observed so far.
    const std::vector<std::string>& violations() const { return violations_; }

    run_summary summarize() const;

private:
    void check_invariants(const std::map<std::pair<std::size_t, int>, std::int64_t>& suspended_before);

    care_world world_;
    std::vector<agent> agents_;
    trace_log trace_;
    std::int64_t step_ = 0;
    std::vector<std::string> violations_;
};

std::string format_summary(const run_summary& s);

}  // namespace spbdi

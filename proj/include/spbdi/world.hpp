#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spbdi/term.hpp"

namespace spbdi {

/// Half-open tick interval; `end` is empty while the action is running.
struct interval {
    std::int64_t start = 0;
    std::optional<std::int64_t> end;

    bool operator==(const interval&) const = default;
};

struct action_outcome {
    bool success = true;
};

class environment {
public:
    virtual ~environment() = default;
    virtual action_outcome execute(const std::string& actor, const term& action) = 0;
    virtual std::vector<term> percepts(const std::string& agent) const = 0;
    virtual std::int64_t tick() const = 0;
    virtual std::unique_ptr<environment> clone() const = 0;
};

/// Length of the intersection of the participants' interval unions; open
/// intervals count up to `now`.
std::int64_t interval_overlap(const std::vector<std::vector<interval>>& per_participant, std::int64_t now);

struct care_world_config {
    std::int64_t start_tick = 800;
    std::int64_t curtain_delay = 5;
    std::int64_t pod_brew = 3;
    std::int64_t s_min = 20;
    bool mozart_stimulates = false;
    std::vector<term> facts;
};

class care_world : public environment {
public:
    explicit care_world(care_world_config config = {});

    action_outcome execute(const std::string& actor, const term& action) override;
    std::vector<term> percepts(const std::string& agent) const override;
    std::int64_t tick() const override { return tick_; }
    std::unique_ptr<environment> clone() const override { return std::make_unique<care_world>(*this); }

    /// Moves the clock directly, firing delayed effects that fall due.
    void set_tick(std::int64_t t);

    const std::vector<term>& facts() const { return facts_; }
    bool holds(const term& fact) const;
    const std::vector<interval>& history(const std::string& actor, const std::string& action) const;
    std::int64_t joint_overlap(const std::string& action, const std::vector<std::string>& participants) const;
    std::optional<std::int64_t> stimulation() const { return stimulation_; }
    std::size_t pending_effects() const { return delayed_.size(); }
    const care_world_config& config() const { return config_; }

    /// Consistency of the interval history (disjoint, ordered, at most one open).
    bool intervals_consistent() const;

private:
    void set_fact(const term& f);
    void drop_fact(const term& f);
    void replace_functor(const term& f);
    void fire_due();
    void record_execution(const std::string& actor, const std::string& action);
    void notify(const std::vector<std::string>& participants, const std::string& actor, const term& percept);
    void set_stimulation(const std::string& action, const std::vector<std::string>& participants);
    static std::vector<std::string> participants_of(const term& action);

    care_world_config config_;
    std::int64_t tick_;
    std::vector<term> facts_;
    std::multimap<std::int64_t, term> delayed_;
    std::map<std::pair<std::string, std::string>, std::vector<interval>> history_;
    std::map<std::pair<std::string, std::string>, std::int64_t> run_length_;
    std::map<std::pair<std::string, std::string>, std::int64_t> closed_executions_;
    std::map<std::pair<std::string, std::string>, std::int64_t> last_execution_;
    std::map<std::string, std::vector<term>> private_;
    std::optional<std::int64_t> stimulation_;
};

}  // namespace spbdi

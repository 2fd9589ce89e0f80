#include <doctest.h>

#include <fstream>
#include <random>

#include "spbdi/parser.hpp"
#include "spbdi/simulation.hpp"
#include "support/oracles.hpp"

using namespace spbdi;
using spbdi::testing::brute_overlap;

namespace {

const std::string k_manifest = std::string(SPBDI_SCENARIO_DIR) + "/care_robot/care_robot.scn";

term durative(const std::string& name, std::vector<std::string> participants = {}) {
    term t = term::atom(name);
    t.annots.push_back(term::atom("durative"));
    if (!participants.empty()) {
        std::vector<term> ps;
        for (const auto& p : participants) {
            ps.push_back(term::atom(p));
        }
        t.annots.push_back(term::make("participants", {term::list(ps)}));
    }
    return t;
}

term stop(const std::string& name, std::vector<std::string> participants = {}) {
    term t = durative(name, std::move(participants));
    return term::make("stop", {term::atom(name)}).with_annots(t.annots);
}

std::vector<std::string> emitted(const simulation& sim, const std::string& agent) {
    std::vector<std::string> out;
    for (const auto& r : sim.trace().records()) {
        if (r.agent == agent && r.kind == "action" && r.payload.value("op", "") == "emit") {
            out.push_back(r.payload["action"]);
        }
    }
    return out;
}

bool contains_prefix(const std::vector<std::string>& xs, const std::string& prefix) {
    return std::any_of(xs.begin(), xs.end(), [&](const std::string& x) { return x.rfind(prefix, 0) == 0; });
}

}  // namespace

TEST_CASE("interval overlap matches per-tick counting") {
    std::mt19937 rng(17);
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    for (int k = 0; k < 100; ++k) {
        const std::int64_t now = 20 + pick(60);
        const auto per = spbdi::testing::random_intervals(rng, now);
        CHECK(interval_overlap(per, now) == brute_overlap(per, now));
    }
    CHECK(interval_overlap({{{10, 60}}, {{15, 55}}}, 100) == 40);
    CHECK(interval_overlap({{{10, 60}}, {{15, std::nullopt}}}, 30) == 15);
    CHECK(interval_overlap({}, 10) == 0);
}

TEST_CASE("delayed effects fire exactly at the due tick") {
    care_world w;
    CHECK(w.execute("robot", term::atom("open_curtains")).success);
    CHECK(w.holds(parse_term("curtains(open)")));
    CHECK(w.pending_effects() == 1);
    w.set_tick(w.config().start_tick + w.config().curtain_delay - 1);
    CHECK_FALSE(w.holds(term::atom("awake")));
    w.set_tick(w.tick() + 1);
    CHECK(w.holds(term::atom("awake")));
    CHECK(w.holds(parse_term("mood(good)")));
    CHECK(w.holds(parse_term("time(805)")));
    CHECK(w.pending_effects() == 0);
    // A later shake does not change the mood.
    w.execute("robot", term::atom("shake"));
    CHECK(w.holds(parse_term("mood(good)")));
}

TEST_CASE("a shake first makes the mood bad and the curtains do not override it") {
    care_world w;
    w.execute("robot", term::atom("open_curtains"));
    w.execute("robot", term::atom("shake"));
    w.set_tick(900);
    CHECK(w.holds(parse_term("mood(bad)")));
    CHECK_FALSE(w.holds(parse_term("mood(good)")));
}

TEST_CASE("coffee actions") {
    care_world w;
    CHECK_FALSE(w.execute("robot", term::atom("serve_coffee")).success);
    for (int k = 0; k < 2; ++k) {
        CHECK(w.execute("robot", durative("make_pod_coffee")).success);
        w.execute("ticker", term::atom("tick"));
    }
    CHECK_FALSE(w.holds(term::atom("coffee_made")));
    CHECK(w.execute("robot", durative("make_pod_coffee")).success);
    CHECK(w.holds(term::atom("coffee_made")));
    CHECK(w.holds(parse_term("coffee(pod)")));
    w.execute("ticker", term::atom("tick"));
    CHECK(w.execute("robot", stop("make_pod_coffee")).success);
    CHECK(w.history("robot", "make_pod_coffee") == std::vector<interval>{{800, 803}});
    CHECK(w.execute("robot", term::atom("serve_coffee")).success);
    CHECK(w.holds(parse_term("served(coffee)")));
    CHECK(w.intervals_consistent());

    care_world one;
    CHECK(one.execute("robot", term::atom("make_pod_coffee")).success);
    CHECK_FALSE(one.holds(term::atom("coffee_made")));
    CHECK(one.history("robot", "make_pod_coffee") == std::vector<interval>{{800, 801}});
    CHECK(one.intervals_consistent());
    CHECK(one.execute("robot", term::atom("make_instant_coffee")).success);
    CHECK(one.holds(parse_term("coffee(instant)")));
}

TEST_CASE("stop needs an open interval") {
    care_world w;
    CHECK_FALSE(w.execute("robot", stop("make_pod_coffee")).success);
    w.execute("robot", durative("make_pod_coffee"));
    w.execute("ticker", term::atom("tick"));
    CHECK(w.execute("robot", stop("make_pod_coffee")).success);
    CHECK_FALSE(w.execute("robot", stop("make_pod_coffee")).success);
    CHECK_FALSE(w.execute("robot", term::atom("juggle")).success);
}

TEST_CASE("joint reading notifies partners and scores the overlap") {
    care_world_config cfg;
    cfg.s_min = 5;
    care_world w(cfg);
    const std::vector<std::string> both = {"robot", "patient"};
    CHECK_FALSE(w.execute("robot", term::atom("read_newspaper")).success);
    CHECK(w.execute("robot", durative("read_newspaper", both)).success);
    const auto seen = w.percepts("patient");
    CHECK(std::find(seen.begin(), seen.end(), parse_term("joint_started(read_newspaper, robot)")) != seen.end());
    const auto own = w.percepts("robot");
    CHECK(std::find(own.begin(), own.end(), parse_term("joint_started(read_newspaper, robot)")) == own.end());
    // robot reads ticks 800..809, patient 802..806.
    for (int t = 0; t < 10; ++t) {
        if (t > 0) {
            w.execute("robot", durative("read_newspaper", both));
        }
        if (t >= 2 && t < 7) {
            w.execute("patient", durative("read_newspaper", both));
        }
        if (t == 7) {
            w.execute("patient", stop("read_newspaper", both));
        }
        w.execute("ticker", term::atom("tick"));
    }
    CHECK_FALSE(w.stimulation());
    w.execute("robot", stop("read_newspaper", both));
    REQUIRE(w.stimulation());
    CHECK(*w.stimulation() == 5);
    CHECK(*w.stimulation() ==
          brute_overlap({w.history("robot", "read_newspaper"), w.history("patient", "read_newspaper")}, w.tick()));
    CHECK(w.holds(term::atom("stimulated")));
    CHECK(w.holds(parse_term("stimulation(5)")));
    const auto stopped = w.percepts("robot");
    CHECK(std::find(stopped.begin(), stopped.end(), parse_term("joint_stopped(read_newspaper, patient)")) !=
          stopped.end());
}

TEST_CASE("mozart stimulates only when configured") {
    care_world off;
    off.execute("robot", term::atom("play_mozart"));
    CHECK_FALSE(off.holds(term::atom("stimulated")));
    care_world_config cfg;
    cfg.mozart_stimulates = true;
    care_world on(cfg);
    on.execute("robot", term::atom("play_mozart"));
    CHECK(on.holds(term::atom("stimulated")));
}

TEST_CASE("interval lengths equal executions under random durative traffic") {
    for (std::uint32_t seed = 0; seed < 50; ++seed) {
        std::mt19937 rng(seed);
        auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
        care_world w;
        std::map<std::pair<std::string, std::string>, std::int64_t> executions;
        const std::vector<std::string> actors = {"robot", "patient"};
        const std::vector<std::string> actions = {"make_pod_coffee", "read_newspaper"};
        for (int t = 0; t < 60; ++t) {
            for (const auto& actor : actors) {
                const std::string& a = actions[pick(2)];
                switch (pick(4)) {
                    case 0:
                        w.execute(actor, stop(a));
                        break;
                    case 1:
                        break;
                    default:
                        if (w.execute(actor, durative(a)).success) {
                            ++executions[{actor, a}];
                        }
                }
            }
            w.execute("ticker", term::atom("tick"));
            REQUIRE(w.intervals_consistent());
        }
        for (const auto& actor : actors) {
            for (const auto& a : actions) {
                w.execute(actor, stop(a));
                std::int64_t covered = 0;
                for (const auto& x : w.history(actor, a)) {
                    REQUIRE(x.end);
                    covered += *x.end - x.start;
                }
                CHECK(covered == executions[{actor, a}]);
            }
        }
        CHECK(w.intervals_consistent());
    }
}

TEST_CASE("cloned worlds evolve independently") {
    care_world w;
    w.execute("robot", term::atom("open_curtains"));
    auto copy = w.clone();
    w.set_tick(810);
    CHECK(w.holds(term::atom("awake")));
    CHECK(copy->tick() == 800);
    auto* cw = dynamic_cast<care_world*>(copy.get());
    REQUIRE(cw);
    CHECK_FALSE(cw->holds(term::atom("awake")));
    CHECK(cw->pending_effects() == 1);
}

TEST_CASE("scenario manifest loading") {
    const scenario sc = load_scenario(k_manifest);
    REQUIRE(sc.agents.size() == 3);
    CHECK(sc.agents[0].name == "robot");
    CHECK(sc.agents[0].practice_files == std::vector<std::string>{"morning.sp"});
    CHECK(sc.params.at("start_time") == term::number(800));
    CHECK(sc.programs.count("patient") == 1);
    CHECK(sc.programs.at("robot").practices.size() == 1);
    CHECK_THROWS_AS(load_scenario(std::string(SPBDI_SCENARIO_DIR) + "/../tests/data/broken.scn"), parse_error);
    CHECK_THROWS_AS(load_scenario("/nonexistent/x.scn"), scenario_error);
    CHECK_THROWS_AS(parse_scenario("fact(x).", SPBDI_SCENARIO_DIR), scenario_error);
    CHECK_THROWS_AS(parse_scenario("agent(a, \"a.asp\", []). p :- q.", SPBDI_SCENARIO_DIR), scenario_error);
    CHECK_THROWS_AS(parse_scenario("agent(a, \"a.asp\", []). agent(a, \"b.asp\", []).", SPBDI_SCENARIO_DIR),
                    scenario_error);
}

TEST_CASE("care scenario with the practice") {
    const scenario sc = load_scenario(k_manifest);
    simulation sim(sc);
    sim.run(200);
    CHECK(sim.violations().empty());
    const run_summary s = sim.summarize();
    CHECK(s.mood == "good");
    CHECK(s.stimulated);
    REQUIRE(s.stimulation);
    CHECK(*s.stimulation >= 20);
    CHECK(s.practice_completed);
    REQUIRE(s.landmark_ticks.size() == 4);
    CHECK(s.landmark_ticks.at("l1") <= s.landmark_ticks.at("l2"));
    CHECK(s.landmark_ticks.at("l1") <= s.landmark_ticks.at("l3"));
    CHECK(s.landmark_ticks.at("l2") <= s.landmark_ticks.at("l4"));
    CHECK(s.landmark_ticks.at("l3") <= s.landmark_ticks.at("l4"));
    const auto robot = emitted(sim, "robot");
    CHECK(contains_prefix(robot, "open_curtains"));
    CHECK(contains_prefix(robot, "make_pod_coffee"));
    CHECK(contains_prefix(robot, "serve_coffee"));
    CHECK_FALSE(contains_prefix(robot, "shake"));
    CHECK_FALSE(contains_prefix(robot, "talk"));
    CHECK_FALSE(contains_prefix(robot, "make_instant_coffee"));
    CHECK(contains_prefix(emitted(sim, "patient"), "take_pills"));
    CHECK(sim.world().intervals_consistent());
}

TEST_CASE("care scenario without the practice") {
    const scenario sc = load_scenario(k_manifest);
    sim_options o;
    o.practices_enabled = false;
    simulation sim(sc, o);
    sim.run(200);
    CHECK(sim.violations().empty());
    const run_summary s = sim.summarize();
    CHECK(s.mood == "bad");
    CHECK(s.stimulated);
    CHECK_FALSE(s.practice_completed);
    CHECK(s.landmark_ticks.empty());
    const auto robot = emitted(sim, "robot");
    CHECK(robot.at(0) == "talk");
    CHECK(contains_prefix(robot, "shake"));
    CHECK(contains_prefix(robot, "play_mozart"));
    CHECK_FALSE(contains_prefix(robot, "open_curtains"));
}

TEST_CASE("runs are deterministic") {
    const scenario sc = load_scenario(k_manifest);
    for (bool practices : {true, false}) {
        sim_options o;
        o.practices_enabled = practices;
        simulation a(sc, o);
        simulation b(sc, o);
        a.run(120);
        b.run(120);
        CHECK(a.trace().to_jsonl() == b.trace().to_jsonl());
    }
}

TEST_CASE("steps advance the clock through the ticker") {
    const scenario sc = load_scenario(k_manifest);
    simulation sim(sc);
    sim.run(10);
    CHECK(sim.steps_done() == 10);
    CHECK(sim.world().tick() > 800);
    CHECK(sim.summarize().final_tick == sim.world().tick());
}

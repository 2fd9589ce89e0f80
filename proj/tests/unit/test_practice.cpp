#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "spbdi/practice.hpp"
#include "support/driver.hpp"
#include "support/oracles.hpp"

using namespace spbdi;
using spbdi::testing::driver;
using spbdi::testing::graph_orders;
using spbdi::testing::pattern_orders;
using spbdi::testing::random_pattern;
using spbdi::testing::reduced_order;

namespace {

using order = std::vector<std::string>;
using prior_map = std::map<std::string, std::vector<std::string>>;

prior_map priors_of(const landmark_graph& g) { return g.priors_map(); }

// Completion needs every prior completed, ignoring choice groups.
bool plain_ready(const practice_state& st, const std::string& id) {
    for (const auto& p : st.graph.find(id)->priors) {
        if (st.status.at(p) != landmark_status::completed) {
            return false;
        }
    }
    return true;
}

const char* k_coffee = R"P(
    @serve +!served(coffee) <- !coffee_made; serve_coffee.
    @instant +!coffee_made <- make_instant_coffee.
    @pod +!coffee_made <- make_pod_coffee.
)P";

const char* k_practice_agent = R"P(
    ok.
    sp(p, [ok]).
    lm(p, l1, [], [(ag, a1)], d1).
    lm(p, l2, [l1], [(other, a2)], d2).
    lm(p, l3, [l1], [(ag, a3)], d3).
    lm(p, l4, [l2, l3], [], d4).
    !d3.
    @native3 +!d3 <- slow; a3.
)P";

}  // namespace

TEST_CASE("compile the morning pattern") {
    const plan_pattern pp = parse_plan_pattern("l1:awake ; (l2:pills_taken & l3:served(coffee)) ; l4:stimulated");
    const landmark_graph g = compile_plan_pattern(pp);
    const prior_map expected = {{"l1", {}}, {"l2", {"l1"}}, {"l3", {"l1"}}, {"l4", {"l2", "l3"}}};
    CHECK(priors_of(g) == expected);
    CHECK(g.find("l3")->purpose == parse_term("served(coffee)"));
    CHECK(g.groups.empty());
}

TEST_CASE("single segment and duplicate labels") {
    const landmark_graph g = compile_plan_pattern(parse_plan_pattern("a:p"));
    REQUIRE(g.nodes.size() == 1);
    CHECK(g.nodes[0].priors.empty());
    CHECK_THROWS_AS(parse_plan_pattern("a:p ; a:q"), parse_error);
    const plan_pattern dup = plan_pattern::combine(pattern_op::seq, plan_pattern::segment("a", term::atom("p")),
                                                   plan_pattern::segment("a", term::atom("q")));
    CHECK_THROWS_AS(compile_plan_pattern(dup), spbdi::runtime_error);
    CHECK_THROWS_AS(compile_plan_pattern(parse_plan_pattern("(a:p ; b:q) + c:r")), spbdi::runtime_error);
}

TEST_CASE("Seq and Par patterns agree with order enumeration") {
    std::mt19937 rng(5);
    for (int k = 0; k < 300; ++k) {
        int next = 0;
        const int leaves = 1 + static_cast<int>(rng() % 5);
        const plan_pattern pp = random_pattern(rng, next, leaves, false);
        const landmark_graph g = compile_plan_pattern(pp);
        INFO(print_plan_pattern(pp));
        CHECK(graph_orders(g, plain_ready) == pattern_orders(pp));
        CHECK(priors_of(g) == reduced_order(pp));
    }
}

TEST_CASE("choice groups release successors when any member completes") {
    std::mt19937 rng(9);
    for (int k = 0; k < 200; ++k) {
        int next = 0;
        const plan_pattern pp = random_pattern(rng, next, 2 + static_cast<int>(rng() % 4), true);
        practice_state st;
        st.graph = compile_plan_pattern(pp);
        order ids;
        for (const auto& n : st.graph.nodes) {
            ids.push_back(n.id);
            st.status[n.id] = landmark_status::inactive;
        }
        CHECK(graph_orders(st.graph, priors_satisfied) == pattern_orders(pp));
        // Group members share priors.
        for (const auto& grp : st.graph.groups) {
            for (const auto& m : grp) {
                auto a = st.graph.find(m)->priors;
                auto b = st.graph.find(grp.front())->priors;
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                CHECK(a == b);
            }
        }
        // Complete landmarks in every admissible order; a landmark may only
        // complete once priors_satisfied says so, and that must match the
        // direct definition over groups.
        std::sort(ids.begin(), ids.end());
        do {
            for (auto& [id, s] : st.status) {
                s = landmark_status::inactive;
            }
            for (const auto& id : ids) {
                bool direct = true;
                for (const auto& p : st.graph.find(id)->priors) {
                    bool done = st.status[p] == landmark_status::completed;
                    if (auto gi = st.graph.find(p)->group) {
                        for (const auto& m : st.graph.groups[*gi]) {
                            done = done || st.status[m] == landmark_status::completed;
                        }
                    }
                    direct = direct && done;
                }
                INFO(print_plan_pattern(pp) << " at " << id);
                CHECK(priors_satisfied(st, id) == direct);
                if (!direct) {
                    break;
                }
                st.status[id] = landmark_status::completed;
            }
        } while (std::next_permutation(ids.begin(), ids.end()));
    }
    practice_state st;
    st.graph = compile_plan_pattern(parse_plan_pattern("(a:p + b:q) ; c:r"));
    REQUIRE(st.graph.groups.size() == 1);
    CHECK(st.graph.groups[0] == order{"a", "b"});
    for (const char* id : {"a", "b", "c"}) {
        st.status[id] = landmark_status::inactive;
    }
    CHECK_FALSE(priors_satisfied(st, "c"));
    st.status["b"] = landmark_status::completed;
    CHECK(priors_satisfied(st, "c"));
}

TEST_CASE("landmark declarations are checked against the pattern") {
    const agent_program ok = parse_program(R"P(
        lm(m, l1, [], [], a). lm(m, l2, [l1], [], b). lm(m, l3, [l1], [], c).
        pattern(m, "l1:a ; (l2:b & l3:c)").
    )P");
    const landmark_graph g = build_landmark_graph("m", ok.landmarks, ok.patterns);
    CHECK(g.nodes.size() == 3);
    const agent_program bad = parse_program(R"P(
        lm(m, l1, [], [], a). lm(m, l2, [], [], b).
        pattern(m, "l1:a ; l2:b").
    )P");
    CHECK_THROWS_AS(build_landmark_graph("m", bad.landmarks, bad.patterns), spbdi::runtime_error);
    const agent_program cyclic = parse_program("lm(m, x, [y], [], a). lm(m, y, [x], [], b).");
    CHECK_THROWS_AS(build_landmark_graph("m", cyclic.landmarks, cyclic.patterns), spbdi::runtime_error);
    const agent_program only_pattern = parse_program(R"P(pattern(m, "x:a ; y:b").)P");
    CHECK(build_landmark_graph("m", only_pattern.landmarks, only_pattern.patterns).find("y")->priors ==
          order{"x"});
}

TEST_CASE("relevance and selection") {
    const agent_program decls = parse_program(R"P(
        sp(morning, [location(bedroom), resource(coffee_maker), time(T), T < 1200]).
        sp(evening, [location(bedroom)]).
    )P");
    belief_base bb;
    bb.add(parse_term("location(bedroom)"));
    bb.add(parse_term("resource(coffee_maker)"));
    bb.add(parse_term("time(800)"));
    CHECK(relevant_practices(bb, decls.practices) == order{"morning", "evening"});
    bb.remove(parse_term("time(_)"));
    bb.add(parse_term("time(1300)"));
    CHECK(relevant_practices(bb, decls.practices) == order{"evening"});
    bb.remove(parse_term("location(_)"));
    CHECK(relevant_practices(bb, decls.practices).empty());
    CHECK(select_practice({"a", "b"}) == std::string("a"));
    CHECK(select_practice({"x"}) == std::string("x"));
    CHECK_FALSE(select_practice({}));
}

TEST_CASE("guided path search on the coffee plans") {
    driver d(k_coffee);
    const auto path = find_guided_path(d.a.plans(), d.a.beliefs(), parse_term("served(coffee)"),
                                       term::atom("make_pod_coffee"), 3);
    REQUIRE(path);
    const goal_plan_path expected = {{parse_term("served(coffee)"), "serve", 0}, {term::atom("coffee_made"), "pod", 0}};
    CHECK(*path == expected);
    CHECK_FALSE(find_guided_path(d.a.plans(), d.a.beliefs(), parse_term("served(coffee)"), term::atom("dance"), 3));
    CHECK_FALSE(find_guided_path(d.a.plans(), d.a.beliefs(), parse_term("served(coffee)"),
                                 term::atom("make_pod_coffee"), 1));
}

TEST_CASE("guided path depth bound") {
    driver d(R"P(
        +!g1 <- !g2.
        +!g2 <- x; !g3.
        +!g3 <- !g4.
        +!g4 <- target.
    )P");
    CHECK_FALSE(find_guided_path(d.a.plans(), d.a.beliefs(), term::atom("g1"), term::atom("target"), 3));
    const auto p = find_guided_path(d.a.plans(), d.a.beliefs(), term::atom("g1"), term::atom("target"), 4);
    REQUIRE(p);
    CHECK(p->size() == 4);
    CHECK(p->at(1).step_index == 1);
}

TEST_CASE("guided path search agrees with exhaustive enumeration") {
    int found = 0;
    for (std::uint32_t seed = 0; seed < 40; ++seed) {
        const std::string text = spbdi::testing::random_library(seed);
        driver d(text);
        for (int depth = 1; depth <= 4; ++depth) {
            for (int a = 0; a < 6; ++a) {
                const term action = term::atom("a" + std::to_string(a));
                const bool expected = spbdi::testing::reachable(d.a.plans(), d.a.beliefs(), term::atom("g0"), action, depth);
                const auto path = find_guided_path(d.a.plans(), d.a.beliefs(), term::atom("g0"), action, depth);
                INFO("seed " << seed << " depth " << depth << " action " << a << "\n" << text);
                CHECK(path.has_value() == expected);
                if (!path) {
                    continue;
                }
                ++found;
                CHECK(static_cast<int>(path->size()) <= depth);
                // Each entry names a plan for its goal and points at the next
                // goal or the action.
                for (std::size_t k = 0; k < path->size(); ++k) {
                    const auto& e = (*path)[k];
                    const auto it = std::find_if(d.a.plans().begin(), d.a.plans().end(),
                                                 [&](const plan& p) { return p.label == e.label; });
                    REQUIRE(it != d.a.plans().end());
                    CHECK(unify(it->trig.literal, e.goal));
                    REQUIRE(e.step_index < it->body.size());
                    const body_step& st = it->body[e.step_index];
                    if (k + 1 < path->size()) {
                        CHECK(st.kind == step_kind::achieve);
                        CHECK(st.payload == (*path)[k + 1].goal);
                    } else {
                        CHECK(st.payload == action);
                    }
                }
            }
        }
    }
    CHECK(found > 50);
}

TEST_CASE("practice lifecycle in a single agent") {
    driver d(k_practice_agent);
    d.outcome = [](driver& self, const term& a) {
        if (a.name == "a1") {
            self.percepts.push_back(term::atom("d1"));
        }
        if (a.name == "a3") {
            self.percepts.push_back(term::atom("d3"));
        }
        return true;
    };
    d.run(1);
    const practice_state& st = d.a.practice();
    REQUIRE(st.selected == std::string("p"));
    // The pre-existing !d3 intention is suspended and guarded.
    const intention* native = d.intention_by_goal("d3");
    REQUIRE(native);
    CHECK(native->status == intention_status::suspended);
    CHECK(st.guards.size() == 4);
    CHECK(st.status.at("l1") == landmark_status::monitored);
    CHECK(d.believes("monitoring(p, l1)"));

    d.run(8);
    CHECK(st.status.at("l1") == landmark_status::completed);
    CHECK(st.status.at("l2") == landmark_status::monitored);
    CHECK(st.status.at("l3") == landmark_status::completed);
    CHECK(st.status.at("l4") == landmark_status::inactive);
    // The guided run executes the native plan body once; the suspended
    // native intention itself never takes a step.
    const auto acts = d.action_names();
    CHECK(std::count(acts.begin(), acts.end(), "a3") == 1);
    CHECK(std::count(acts.begin(), acts.end(), "slow") == 1);
    CHECK(native->steps_taken == 0);
    CHECK(native->status == intention_status::done_success);
    CHECK(d.find("practice", "suspension_succeeded").size() == 1);

    // Another agent's landmark is only monitored.
    CHECK(std::count(acts.begin(), acts.end(), "a2") == 0);
    d.percepts.push_back(term::atom("d2"));
    d.run(4);
    CHECK(st.status.at("l2") == landmark_status::completed);
    CHECK(st.status.at("l4") == landmark_status::monitored);
    d.percepts.push_back(term::atom("d4"));
    d.run(4);
    CHECK(st.completed);
    CHECK(d.believes("practice_completed(p)"));
    CHECK(st.guards.empty());

    // Monitoring never precedes priors in the trace.
    std::set<std::string> done;
    for (const auto& r : d.log.records()) {
        if (r.kind != "landmark" || !r.payload.contains("status")) {
            continue;
        }
        const std::string id = r.payload["landmark"];
        if (r.payload["status"] == "monitored") {
            for (const auto& p : st.graph.find(id)->priors) {
                CHECK(done.count(p) == 1);
            }
        }
        if (r.payload["status"] == "completed") {
            done.insert(id);
        }
    }
}

TEST_CASE("dispatch kinds for landmark actions") {
    driver d(R"P(
        durative(chat, chatting).
        chatting :- false.
        sp(p, [true]).
        lm(p, l1, [], [(ag, plain)], d1).
        lm(p, l2, [], [(ag, chat)], d2).
        lm(p, l3, [], [(ag, .print(hello))], d3).
        lm(p, l4, [], [(ag, inside)], d4).
        +!d4 <- inside.
    )P");
    d.run(1);
    std::map<std::string, std::string> kind;
    for (const auto& r : d.log.records()) {
        if (r.kind == "landmark" && r.payload.contains("dispatch")) {
            kind[r.payload["landmark"]] = r.payload["dispatch"];
        }
    }
    CHECK(kind["l1"] == "direct");
    CHECK(kind["l2"] == "metainterpreter");
    CHECK(kind["l3"] == "metainterpreter");
    CHECK(kind["l4"] == "guided");
}

TEST_CASE("deactivation abandons landmarks and resumes suspended intentions") {
    driver d(R"P(
        sp(p, [window]).
        lm(p, l1, [], [(other, x)], d1).
        lm(p, l2, [l1], [], d2).
        !d2.
        +!d2 <- native_work.
    )P");
    d.percepts = {term::atom("window")};
    d.run(2);
    const practice_state& st = d.a.practice();
    REQUIRE(st.selected);
    CHECK(d.intention_by_goal("d2")->status == intention_status::suspended);
    d.percepts.clear();
    d.run(6);
    CHECK_FALSE(st.selected);
    CHECK(st.suspensions.empty());
    CHECK(d.find("practice", "suspension_resumed").size() == 1);
    const auto abandoned = std::count_if(d.log.records().begin(), d.log.records().end(), [](const trace_record& r) {
        return r.kind == "landmark" && r.payload.value("status", "") == "abandoned";
    });
    CHECK(abandoned == 1);
    CHECK(d.action_names() == std::vector<std::string>{"native_work"});
    CHECK_FALSE(d.believes("selected_practice(p)"));
}

TEST_CASE("guards keep one intention per purpose while selected") {
    driver d(R"P(
        sp(p, [true]).
        lm(p, l1, [], [(other, x)], d1).
        !spam.
        +!spam <- !!d1; !!d1; !!d1.
        +!d1 <- work.
    )P");
    d.run(10);
    std::set<int> ids;
    for (const auto& r : d.log.records()) {
        if (r.kind == "intention" && r.payload.value("op", "") == "created" && r.payload.value("goal", "") == "d1") {
            ids.insert(r.payload["intention"].get<int>());
        }
    }
    CHECK(ids.size() == 3);
    CHECK(d.action_names().empty());
    for (int id : ids) {
        CHECK(d.a.find_intention(id)->status == intention_status::suspended);
    }
}

TEST_CASE("guided plans that re-pursue a completed purpose are traced") {
    driver d(R"P(
        sp(p, [true]).
        lm(p, l1, [], [(ag, wake)], d1).
        lm(p, l2, [l1], [(ag, brew)], d2).
        +!d1 <- wake.
        @again +!d2 <- !d1; brew.
    )P");
    d.outcome = [](driver& self, const term& a) {
        self.percepts.push_back(term::atom(a.name == "wake" ? "d1" : "d2"));
        return true;
    };
    d.run(12);
    CHECK(d.a.practice().completed);
    std::vector<json> notes;
    for (const auto& r : d.log.records()) {
        if (r.kind == "landmark" && r.payload.contains("prior_purpose_subgoal")) {
            notes.push_back(r.payload);
        }
    }
    REQUIRE(notes.size() == 1);
    CHECK(notes[0]["landmark"] == "l2");
    CHECK(notes[0]["prior"] == "l1");
    CHECK(notes[0]["plan"] == "again");
}

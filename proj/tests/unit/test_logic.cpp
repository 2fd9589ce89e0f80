#include <doctest.h>

#include <algorithm>
#include <set>

#include "spbdi/logic.hpp"
#include "spbdi/parser.hpp"
#include "support/gen.hpp"

using namespace spbdi;

namespace {

term t(const char* text) { return parse_term(text); }

// Injective matching of query annotations into data annotations, tried
// exhaustively; independent of the engine's own search order.
bool annots_match(const std::vector<term>& q, std::size_t k, const std::vector<term>& d, std::vector<bool>& used,
                  const substitution& s) {
    if (k == q.size()) {
        return true;
    }
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (used[j]) {
            continue;
        }
        if (auto s2 = unify(q[k], d[j], s)) {
            used[j] = true;
            if (annots_match(q, k + 1, d, used, *s2)) {
                return true;
            }
            used[j] = false;
        }
    }
    return false;
}

bool subset_oracle(const term& q, const term& d) {
    auto s = unify(q.stripped(), d.stripped());
    if (!s) {
        return false;
    }
    std::vector<bool> used(d.annots.size(), false);
    return annots_match(q.annots, 0, d.annots, used, *s);
}

term random_annot(testing::term_gen& g, bool allow_vars) {
    static const char* names[] = {"source", "time", "tag"};
    static const char* vals[] = {"percept", "self", "a", "b"};
    term arg = allow_vars && g.pick(3) == 0 ? term::var(g.coin() ? "X" : "Y") : term::atom(vals[g.pick(4)]);
    return term::make(names[g.pick(3)], {arg});
}

// Replaces random subterms of `x` with fresh variables.
term generalize(testing::term_gen& g, const term& x, int& fresh) {
    if (g.pick(4) == 0) {
        return term::var("V" + std::to_string(fresh++));
    }
    term out = x;
    for (auto& a : out.args) {
        a = generalize(g, a, fresh);
    }
    return out;
}

std::multiset<std::string> answers_of(const belief_base& bb, const term& goal, const std::string& var) {
    std::multiset<std::string> out;
    for (const auto& s : query(bb, goal, {}, 6)) {
        out.insert(print_term(substitute(s, term::var(var))));
    }
    return out;
}

}  // namespace

TEST_CASE("unify examples") {
    auto s = unify(t("coffee(X)"), t("coffee(pod)"));
    REQUIRE(s);
    CHECK(substitute(*s, term::var("X")) == t("pod"));
    auto e = unify(t("awake[source(percept)]"), t("awake[source(percept),time(5)]"));
    REQUIRE(e);
    CHECK(e->empty());
    CHECK_FALSE(unify(t("f(X)"), t("g(X)")));
    CHECK_FALSE(unify(t("X"), t("f(X)")));
    CHECK_FALSE(unify(t("awake[source(self)]"), t("awake[source(percept)]")));
    CHECK(unify(t("awake"), t("awake[source(percept)]")));
    CHECK_FALSE(unify(t("awake[source(percept)]"), t("awake")));
}

TEST_CASE("annotation subset matching agrees with injection oracle") {
    testing::term_gen g(11);
    int positives = 0;
    for (int k = 0; k < 3000; ++k) {
        term q = g.coin() ? t("b(X)") : t("b(a)");
        term d = t("b(a)");
        std::vector<term> qa;
        std::vector<term> da;
        for (int n = g.pick(3); n > 0; --n) {
            qa.push_back(random_annot(g, true));
        }
        for (int n = g.pick(4); n > 0; --n) {
            da.push_back(random_annot(g, false));
        }
        q = q.with_annots(qa);
        d = d.with_annots(da);
        const bool expected = subset_oracle(q, d);
        positives += expected ? 1 : 0;
        INFO(print_term(q) << " vs " << print_term(d));
        CHECK(unify(q, d).has_value() == expected);
    }
    CHECK(positives > 100);
}

TEST_CASE("unification is symmetric on annotation-free terms") {
    for (std::uint32_t seed = 0; seed < 20; ++seed) {
        testing::term_gen g(seed);
        for (int k = 0; k < 100; ++k) {
            const term a = g.any(3);
            int fresh = 0;
            const term b = k % 3 == 0 ? g.any(3) : generalize(g, a, fresh);
            auto ab = unify(a, b);
            auto ba = unify(b, a);
            INFO(print_term(a) << " ~ " << print_term(b));
            CHECK(ab.has_value() == ba.has_value());
            if (ab) {
                CHECK(substitute(*ab, a) == substitute(*ab, b));
                // Idempotent: applying twice changes nothing.
                CHECK(substitute(*ab, substitute(*ab, a)) == substitute(*ab, a));
            }
        }
    }
}

TEST_CASE("query examples") {
    belief_base bb;
    bb.add(t("time(800)"));
    auto s = query_first(bb, t("time(T) & T < 1200"));
    REQUIRE(s);
    CHECK(substitute(*s, term::var("T")) == t("800"));
    bb.add(t("q"));
    bb.add_rule(rule{t("p"), t("q")});
    const auto ps = query(bb, t("p"));
    REQUIRE(ps.size() == 1);
    for (const char* f : {"c(1)", "c(2)", "c(3)"}) {
        bb.add(t(f));
    }
    const auto cs = query(bb, t("c(X)"));
    REQUIRE(cs.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(substitute(cs[static_cast<std::size_t>(k)], term::var("X")) == term::number(k + 1));
    }
    CHECK(query_first(bb, t("not c(4) & c(2)")));
    CHECK_FALSE(query_first(bb, t("not c(2)")));
    CHECK(query_first(bb, t("c(X) & X >= 3 & X == 3")));
    CHECK(query_first(bb, t("c(X) & X + 1 <= 2")));
    CHECK(query_first(bb, t("c(4) | c(1)")));
}

TEST_CASE("facts come before rules") {
    belief_base bb;
    bb.add_rule(rule{t("r(rule)"), t("true")});
    bb.add(t("r(fact)"));
    const auto rs = query(bb, t("r(X)"));
    REQUIRE(rs.size() == 2);
    CHECK(substitute(rs[0], term::var("X")) == t("fact"));
    CHECK(substitute(rs[1], term::var("X")) == t("rule"));
}

TEST_CASE("depth exhaustion fails the branch quietly") {
    belief_base bb;
    bb.add_rule(rule{t("loop"), t("loop")});
    query_stats st;
    int n = 0;
    for_each_answer(bb, t("loop"), {}, 8, [&](const substitution&) { return ++n, true; }, &st);
    CHECK(n == 0);
    CHECK(st.depth_exhausted);
}

// Non-recursive Datalog over a small domain. The oracle counts proofs bottom-up:
// a ground atom has one proof per matching fact plus, for each rule grounding
// with that head, the product of the proof counts of the body atoms.
TEST_CASE("query answers match bottom-up proof counting") {
    const std::vector<std::string> dom = {"a", "b", "c"};
    for (std::uint32_t seed = 0; seed < 60; ++seed) {
        testing::term_gen g(seed);
        belief_base bb;
        std::map<std::string, int> proofs;  // ground atom text -> count
        auto key = [](const std::string& p, const std::string& x) { return p + "(" + x + ")"; };
        int clauses = 0;
        // Layer 0: facts over e0/e1.
        for (const char* p : {"e0", "e1"}) {
            for (int n = g.pick(4); n > 0; --n) {
                const std::string x = dom[static_cast<std::size_t>(g.pick(3))];
                bb.add(t(key(p, x).c_str()));
                ++clauses;
            }
        }
        // Annotation merge keeps one copy, so count distinct facts.
        for (const auto& f : bb.facts()) {
            proofs[print_term(f)] = 1;
        }
        // Layers 1 and 2: rules m1(X) :- body, m2(X) :- body over lower layers.
        std::vector<std::string> lower = {"e0", "e1"};
        for (const char* head : {"m1", "m2"}) {
            std::map<std::string, int> add;
            for (int r = 1 + g.pick(3); r > 0 && clauses < 20; --r, ++clauses) {
                const std::string p1 = lower[static_cast<std::size_t>(g.pick(static_cast<int>(lower.size())))];
                const std::string p2 = lower[static_cast<std::size_t>(g.pick(static_cast<int>(lower.size())))];
                const bool two = g.coin();
                const bool link = g.coin();  // second atom shares X or uses Y
                const std::string body = two ? p1 + "(X) & " + p2 + (link ? "(X)" : "(Y)") : p1 + "(X)";
                bb.add_rule(rule{t((std::string(head) + "(X)").c_str()), t(body.c_str())});
                for (const auto& x : dom) {
                    int c = proofs[key(p1, x)];
                    if (two) {
                        int c2 = 0;
                        if (link) {
                            c2 = proofs[key(p2, x)];
                        } else {
                            for (const auto& y : dom) {
                                c2 += proofs[key(p2, y)];
                            }
                        }
                        c *= c2;
                    }
                    add[key(head, x)] += c;
                }
            }
            for (const auto& [k, v] : add) {
                proofs[k] += v;
            }
            lower.push_back(head);
        }
        for (const char* p : {"e0", "m1", "m2"}) {
            std::multiset<std::string> expected;
            for (const auto& x : dom) {
                for (int n = proofs[key(p, x)]; n > 0; --n) {
                    expected.insert(x);
                }
            }
            INFO("seed " << seed << " predicate " << p);
            CHECK(answers_of(bb, t((std::string(p) + "(Z)").c_str()), "Z") == expected);
        }
    }
}

TEST_CASE("assert and retract examples") {
    belief_base bb;
    auto ev = bb.add(t("awake"));
    REQUIRE(ev);
    CHECK(print_belief_event(*ev) == "+awake");
    CHECK_FALSE(bb.add(t("awake")));

    bb.add(t("tried(p1)"));
    bb.add(t("tried(p2)"));
    auto r = bb.remove(t("tried(_)"));
    REQUIRE(r);
    CHECK(r->first.literal == t("tried(p1)"));
    CHECK(bb.contains(t("tried(p2)")));
    CHECK_FALSE(bb.contains(t("tried(p1)")));
    CHECK_FALSE(bb.remove(t("nothing_here")));

    bb.add(t("mood(good)[source(percept)]"));
    bb.add(t("mood(good)[source(self)]"));
    const auto n = std::count_if(bb.facts().begin(), bb.facts().end(),
                                 [](const term& f) { return f.stripped() == t("mood(good)"); });
    CHECK(n == 1);
    CHECK(query_first(bb, t("mood(good)[source(percept),source(self)]")));

    // Distinct annotations with the same functor are both kept.
    bb.add(t("seen[time(1)]"));
    bb.add(t("seen[time(2)]"));
    CHECK(query_first(bb, t("seen[time(1),time(2)]")));

    auto all = bb.remove_all(t("tried(_)"));
    CHECK(all.size() == 1);
}

TEST_CASE("replaying events reconstructs the belief base") {
    for (std::uint32_t seed = 0; seed < 30; ++seed) {
        testing::term_gen g(seed);
        belief_base bb;
        std::vector<belief_event> log;
        for (int k = 0; k < 80; ++k) {
            const term lit = term::make(g.coin() ? "p" : "q", {term::atom(g.coin() ? "a" : "b")});
            std::vector<term> annots;
            if (g.coin()) {
                annots.push_back(term::make("source", {term::atom(g.coin() ? "self" : "percept")}));
            }
            switch (g.pick(3)) {
                case 0:
                case 1:
                    if (auto e = bb.add(lit.with_annots(annots))) {
                        log.push_back(*e);
                    }
                    break;
                default:
                    if (auto e = bb.remove(lit.with_annots(annots))) {
                        log.push_back(e->first);
                    }
                    break;
            }
        }
        belief_base replay;
        for (const auto& e : log) {
            if (e.kind == belief_change::add) {
                replay.add(e.literal);
            } else {
                replay.remove(e.literal);
            }
        }
        INFO("seed " << seed);
        CHECK(replay.facts() == bb.facts());
    }
}

TEST_CASE("eval_int and rename_vars") {
    CHECK(eval_int(t("3 + 4 - 2")) == 5);
    CHECK_FALSE(eval_int(t("x + 1")));
    CHECK(rename_vars(t("f(X, g(Y))[a(X)]"), "1") == t("f(X_1, g(Y_1))[a(X_1)]"));
}

#include <algorithm>
#include <functional>
#include <set>

#include "spbdi/parser.hpp"
#include "spbdi/practice.hpp"

namespace spbdi {

std::string to_string(landmark_status s) {
    switch (s) {
        case landmark_status::inactive: return "inactive";
        case landmark_status::monitored: return "monitored";
        case landmark_status::completed: return "completed";
        case landmark_status::abandoned: return "abandoned";
    }
    return {};
}

const landmark_node* landmark_graph::find(const std::string& id) const {
    for (const auto& n : nodes) {
        if (n.id == id) {
            return &n;
        }
    }
    return nullptr;
}

std::map<std::string, std::vector<std::string>> landmark_graph::priors_map() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& n : nodes) {
        auto p = n.priors;
        std::sort(p.begin(), p.end());
        out[n.id] = std::move(p);
    }
    return out;
}

namespace {

struct ends {
    std::vector<std::string> sources;
    std::vector<std::string> sinks;
};

void append_unique(std::vector<std::string>& to, const std::vector<std::string>& from) {
    for (const auto& s : from) {
        if (std::find(to.begin(), to.end(), s) == to.end()) {
            to.push_back(s);
        }
    }
}

class pattern_compiler {
public:
    landmark_graph graph;

    ends compile(const plan_pattern& p) {
        switch (p.op) {
            case pattern_op::segment: {
                if (graph.find(p.label)) {
                    throw runtime_error("duplicate segment label " + p.label);
                }
                graph.nodes.push_back(landmark_node{p.label, {}, p.purpose, std::nullopt});
                return ends{{p.label}, {p.label}};
            }
            case pattern_op::seq: {
                ends l = compile(*p.left);
                ends r = compile(*p.right);
                for (const auto& s : r.sources) {
                    append_unique(node(s).priors, l.sinks);
                }
                return ends{l.sources, r.sinks};
            }
            case pattern_op::par: {
                ends l = compile(*p.left);
                ends r = compile(*p.right);
                append_unique(l.sources, r.sources);
                append_unique(l.sinks, r.sinks);
                return l;
            }
            case pattern_op::choice: {
                std::vector<std::string> members;
                collect_choice(p, members);
                const std::size_t g = graph.groups.size();
                graph.groups.push_back(members);
                for (const auto& m : members) {
                    node(m).group = g;
                }
                return ends{members, members};
            }
        }
        return {};
    }

private:
    landmark_node& node(const std::string& id) {
        for (auto& n : graph.nodes) {
            if (n.id == id) {
                return n;
            }
        }
        throw runtime_error("unknown landmark " + id);
    }

    void collect_choice(const plan_pattern& p, std::vector<std::string>& members) {
        if (p.op == pattern_op::choice) {
            collect_choice(*p.left, members);
            collect_choice(*p.right, members);
            return;
        }
        if (p.op != pattern_op::segment) {
            throw runtime_error("choice operands must be segments");
        }
        compile(p);
        members.push_back(p.label);
    }
};

void check_acyclic(const landmark_graph& g) {
    std::map<std::string, int> mark;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
        int& m = mark[id];
        if (m == 2) {
            return;
        }
        if (m == 1) {
            throw runtime_error("landmark priors form a cycle through " + id);
        }
        m = 1;
        const landmark_node* n = g.find(id);
        for (const auto& p : n->priors) {
            if (!g.find(p)) {
                throw runtime_error("landmark " + id + " has unknown prior " + p);
            }
            visit(p);
        }
        mark[id] = 2;
    };
    for (const auto& n : g.nodes) {
        visit(n.id);
    }
}

}  // namespace

landmark_graph compile_plan_pattern(const plan_pattern& pp) {
    pattern_compiler c;
    c.compile(pp);
    return std::move(c.graph);
}

landmark_graph build_landmark_graph(const std::string& name, const std::vector<landmark_decl>& landmarks,
                                    const std::vector<std::pair<std::string, std::string>>& patterns) {
    landmark_graph g;
    for (const auto& lm : landmarks) {
        if (lm.practice != name) {
            continue;
        }
        if (g.find(lm.id)) {
            throw runtime_error("duplicate landmark " + lm.id + " in practice " + name);
        }
        g.nodes.push_back(landmark_node{lm.id, lm.priors, lm.purpose, std::nullopt});
    }
    for (const auto& [practice, text] : patterns) {
        if (practice != name) {
            continue;
        }
        const landmark_graph compiled = compile_plan_pattern(parse_plan_pattern(text));
        if (g.nodes.empty()) {
            g = compiled;
            break;
        }
        const auto declared = g.priors_map();
        for (const auto& n : compiled.nodes) {
            auto it = declared.find(n.id);
            if (it == declared.end()) {
                throw runtime_error("pattern segment " + n.id + " has no landmark declaration");
            }
            auto pri = n.priors;
            std::sort(pri.begin(), pri.end());
            if (pri != it->second) {
                throw runtime_error("priors of landmark " + n.id + " disagree with the plan pattern");
            }
        }
        g.groups = compiled.groups;
        for (auto& n : g.nodes) {
            if (const auto* c = compiled.find(n.id)) {
                n.group = c->group;
            }
        }
        break;
    }
    check_acyclic(g);
    return g;
}

std::vector<std::string> relevant_practices(const belief_base& bb, const std::vector<practice_decl>& decls,
                                            int depth) {
    std::vector<std::string> out;
    for (const auto& d : decls) {
        term conj = term::atom("true");
        for (auto it = d.requirements.rbegin(); it != d.requirements.rend(); ++it) {
            conj = conj.is_atom("true") ? *it : term::make("&", {*it, conj});
        }
        if (query_first(bb, conj, {}, depth)) {
            out.push_back(d.name);
        }
    }
    return out;
}

std::optional<std::string> select_practice(const std::vector<std::string>& candidates) {
    if (candidates.empty()) {
        return std::nullopt;
    }
    return candidates.front();
}

namespace {

class path_search {
public:
    path_search(const std::vector<plan>& plans, const belief_base& bb, const term& action, int query_depth)
        : plans_(plans), bb_(bb), action_(action.stripped()), query_depth_(query_depth) {}

    std::optional<goal_plan_path> search(const term& goal, int remaining, bool top) {
        if (remaining <= 0) {
            return std::nullopt;
        }
        for (const auto& p : plans_) {
            if (p.guard || p.trig.op != trigger_op::add || p.trig.type != trigger_type::achieve) {
                continue;
            }
            const std::string suffix = "P" + bb_.fresh_suffix();
            auto s = unify(rename_vars(p.trig.literal, suffix), goal);
            if (!s) {
                continue;
            }
            if (top) {
                s = query_first(bb_, rename_vars(p.context, suffix), *s, query_depth_);
                if (!s) {
                    continue;
                }
            }
            for (std::size_t i = 0; i < p.body.size(); ++i) {
                const body_step& st = p.body[i];
                const term payload = substitute(*s, rename_vars(st.payload, suffix));
                if ((st.kind == step_kind::action || st.kind == step_kind::internal_action) &&
                    unify(action_, payload.stripped())) {
                    return goal_plan_path{path_entry{goal, p.label, i}};
                }
                if (st.kind == step_kind::achieve) {
                    if (auto sub = search(payload, remaining - 1, false)) {
                        goal_plan_path out{path_entry{goal, p.label, i}};
                        out.insert(out.end(), sub->begin(), sub->end());
                        return out;
                    }
                }
            }
        }
        return std::nullopt;
    }

private:
    const std::vector<plan>& plans_;
    const belief_base& bb_;
    term action_;
    int query_depth_;
};

}  // namespace

std::optional<goal_plan_path> find_guided_path(const std::vector<plan>& plans, const belief_base& bb,
                                               const term& purpose, const term& action, int depth,
                                               int query_depth) {
    path_search s(plans, bb, action, query_depth);
    return s.search(purpose, depth, true);
}

}  // namespace spbdi

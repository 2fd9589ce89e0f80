#include "spbdi/plan_pattern.hpp"
#include "spbdi/program.hpp"

namespace spbdi {

std::string print_step(const body_step& s) {
    const std::string p = print_term(s.payload);
    switch (s.kind) {
        case step_kind::achieve:
            return "!" + p;
        case step_kind::achieve_new:
            return "!!" + p;
        case step_kind::test:
            return "?" + p;
        case step_kind::add_belief:
            return "+" + p;
        case step_kind::del_belief:
            return "-" + p;
        case step_kind::action:
        case step_kind::internal_action:
            break;
    }
    return p;
}

std::string print_trigger(const trigger& t) {
    std::string out = t.op == trigger_op::add ? "+" : "-";
    if (t.type == trigger_type::achieve) {
        out += "!";
    }
    return out + print_term(t.literal);
}

std::string print_plan(const plan& p) {
    std::string out = "@" + p.label;
    if (p.atomic) {
        out += "[atomic]";
    }
    out += " " + print_trigger(p.trig);
    if (!p.context.is_atom("true")) {
        out += " : " + print_term(p.context);
    }
    if (!p.body.empty()) {
        out += " <- ";
        for (std::size_t i = 0; i < p.body.size(); ++i) {
            out += (i ? "; " : "") + print_step(p.body[i]);
        }
    }
    return out + ".";
}

namespace {

std::optional<step_kind> kind_for_prefix(std::string_view prefix) {
    if (prefix == "!") return step_kind::achieve;
    if (prefix == "!!") return step_kind::achieve_new;
    if (prefix == "?") return step_kind::test;
    if (prefix == "+") return step_kind::add_belief;
    if (prefix == "-") return step_kind::del_belief;
    if (prefix.empty()) return step_kind::action;
    return std::nullopt;
}

}  // namespace

body_step step_from_term(const term& t) {
    if (t.is_compound("plan_body", 2) && t.args[0].is_string()) {
        if (auto k = kind_for_prefix(t.args[0].name)) {
            body_step s{*k, t.args[1]};
            if (s.kind == step_kind::action && s.payload.is_internal()) {
                s.kind = step_kind::internal_action;
            }
            return s;
        }
    }
    if (t.is_symbol() && t.args.size() == 1 && t.annots.empty()) {
        if (t.name == "achieve") return {step_kind::achieve, t.args[0]};
        if (t.name == "achieve_new") return {step_kind::achieve_new, t.args[0]};
        if (t.name == "test") return {step_kind::test, t.args[0]};
        if (t.name == "add") return {step_kind::add_belief, t.args[0]};
        if (t.name == "del") return {step_kind::del_belief, t.args[0]};
    }
    return {t.is_internal() ? step_kind::internal_action : step_kind::action, t};
}

term step_to_term(const body_step& s) {
    switch (s.kind) {
        case step_kind::achieve:
            return term::make("achieve", {s.payload});
        case step_kind::achieve_new:
            return term::make("achieve_new", {s.payload});
        case step_kind::test:
            return term::make("test", {s.payload});
        case step_kind::add_belief:
            return term::make("add", {s.payload});
        case step_kind::del_belief:
            return term::make("del", {s.payload});
        case step_kind::action:
        case step_kind::internal_action:
            break;
    }
    return s.payload;
}

// ---- plan patterns ---------------------------------------------------------

plan_pattern plan_pattern::segment(std::string label, term purpose) {
    plan_pattern p;
    p.label = std::move(label);
    p.purpose = std::move(purpose);
    return p;
}

plan_pattern plan_pattern::combine(pattern_op op, plan_pattern l, plan_pattern r) {
    plan_pattern p;
    p.op = op;
    p.left = std::make_shared<const plan_pattern>(std::move(l));
    p.right = std::make_shared<const plan_pattern>(std::move(r));
    return p;
}

std::vector<const plan_pattern*> plan_pattern::leaves() const {
    if (op == pattern_op::segment) {
        return {this};
    }
    auto out = left->leaves();
    auto r = right->leaves();
    out.insert(out.end(), r.begin(), r.end());
    return out;
}

bool plan_pattern::operator==(const plan_pattern& o) const {
    if (op != o.op) {
        return false;
    }
    if (op == pattern_op::segment) {
        return label == o.label && purpose == o.purpose;
    }
    return *left == *o.left && *right == *o.right;
}

namespace {

int pattern_prec(pattern_op op) {
    switch (op) {
        case pattern_op::seq:
            return 1;
        case pattern_op::choice:
            return 2;
        case pattern_op::par:
            return 3;
        case pattern_op::segment:
            break;
    }
    return 4;
}

void print_pattern_into(std::string& out, const plan_pattern& p, int ctx) {
    if (p.op == pattern_op::segment) {
        out += p.label + ":" + print_term(p.purpose);
        return;
    }
    const int prec = pattern_prec(p.op);
    const bool wrap = prec < ctx;
    if (wrap) {
        out.push_back('(');
    }
    // Operators are right-associative.
    print_pattern_into(out, *p.left, prec + 1);
    out += p.op == pattern_op::seq ? " ; " : p.op == pattern_op::choice ? " + " : " & ";
    print_pattern_into(out, *p.right, prec);
    if (wrap) {
        out.push_back(')');
    }
}

}  // namespace

std::string print_plan_pattern(const plan_pattern& p) {
    std::string out;
    print_pattern_into(out, p, 0);
    return out;
}

}  // namespace spbdi

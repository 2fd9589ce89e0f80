#include "spbdi/term.hpp"

#include <algorithm>
#include <cctype>

namespace spbdi {

term term::atom(std::string name) {
    term t;
    t.name = std::move(name);
    return t;
}

term term::make(std::string functor, std::vector<term> args) {
    term t;
    t.name = std::move(functor);
    t.args = std::move(args);
    return t;
}

term term::var(std::string name) {
    term t;
    t.kind = term_kind::variable;
    t.name = std::move(name);
    return t;
}

term term::number(std::int64_t v) {
    term t;
    t.kind = term_kind::number;
    t.value = v;
    return t;
}

term term::str(std::string s) {
    term t;
    t.kind = term_kind::string;
    t.name = std::move(s);
    return t;
}

term term::list(std::vector<term> items) {
    term t;
    t.kind = term_kind::list;
    t.args = std::move(items);
    return t;
}

term term::tuple(std::vector<term> items) { return make(",", std::move(items)); }

bool term::is_ground() const {
    if (kind == term_kind::variable) {
        return false;
    }
    return std::all_of(args.begin(), args.end(), [](const term& a) { return a.is_ground(); }) &&
           std::all_of(annots.begin(), annots.end(), [](const term& a) { return a.is_ground(); });
}

term term::stripped() const {
    term t = *this;
    t.annots.clear();
    return t;
}

term term::with_annots(std::vector<term> a) const {
    term t = *this;
    t.annots = std::move(a);
    return t;
}

void collect_vars(const term& t, std::vector<std::string>& out) {
    if (t.is_var()) {
        if (std::find(out.begin(), out.end(), t.name) == out.end()) {
            out.push_back(t.name);
        }
        return;
    }
    for (const auto& a : t.args) {
        collect_vars(a, out);
    }
    for (const auto& a : t.annots) {
        collect_vars(a, out);
    }
}

namespace {

struct op_info {
    std::string_view name;
    std::size_t arity;
    int prec;
    bool left_assoc;
};

constexpr op_info k_ops[] = {
    {"|", 2, 1, true},  {"&", 2, 2, true},  {"not", 1, 3, false}, {"<", 2, 4, false},
    {"<=", 2, 4, false}, {">", 2, 4, false}, {">=", 2, 4, false}, {"==", 2, 4, false},
    {"\\==", 2, 4, false}, {"=", 2, 4, false}, {"+", 2, 5, true},  {"-", 2, 5, true},
};

constexpr int k_atomic_prec = 10;

const op_info* find_op(const term& t) {
    if (t.kind != term_kind::symbol || !t.annots.empty()) {
        return nullptr;
    }
    for (const auto& op : k_ops) {
        if (op.name == t.name && op.arity == t.args.size()) {
            return &op;
        }
    }
    return nullptr;
}

bool is_plain_atom_name(std::string_view n) {
    if (n.empty()) {
        return false;
    }
    std::size_t i = 0;
    if (n[0] == '.') {
        i = 1;
        if (n.size() == 1) {
            return false;
        }
    }
    if (!std::islower(static_cast<unsigned char>(n[i]))) {
        return false;
    }
    for (std::size_t k = i + 1; k < n.size(); ++k) {
        const auto c = static_cast<unsigned char>(n[k]);
        if (!std::isalnum(c) && c != '_') {
            return false;
        }
    }
    return n != "not";
}

void print_quoted(std::string& out, std::string_view s, char q) {
    out.push_back(q);
    for (char c : s) {
        if (c == q || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    out.push_back(q);
}

void print_into(std::string& out, const term& t, int ctx_prec);

void print_seq(std::string& out, const std::vector<term>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) {
            out.push_back(',');
        }
        print_into(out, items[i], 0);
    }
}

void print_into(std::string& out, const term& t, int ctx_prec) {
    switch (t.kind) {
        case term_kind::variable:
            out += t.name;
            return;
        case term_kind::number:
            out += std::to_string(t.value);
            return;
        case term_kind::string:
            print_quoted(out, t.name, '"');
            return;
        case term_kind::list:
            out.push_back('[');
            print_seq(out, t.args);
            out.push_back(']');
            return;
        case term_kind::symbol:
            break;
    }

    if (const op_info* op = find_op(t)) {
        const bool wrap = op->prec < ctx_prec;
        if (wrap) {
            out.push_back('(');
        }
        if (op->arity == 1) {
            out += op->name;
            out.push_back(' ');
            print_into(out, t.args[0], op->prec);
        } else {
            print_into(out, t.args[0], op->left_assoc ? op->prec : op->prec + 1);
            out.push_back(' ');
            out += op->name;
            out.push_back(' ');
            print_into(out, t.args[1], op->prec + 1);
        }
        if (wrap) {
            out.push_back(')');
        }
        return;
    }

    if (t.name == "," && t.args.size() >= 2 && t.annots.empty()) {
        out.push_back('(');
        print_seq(out, t.args);
        out.push_back(')');
        return;
    }

    if (is_plain_atom_name(t.name)) {
        out += t.name;
    } else {
        print_quoted(out, t.name, '\'');
    }
    if (!t.args.empty()) {
        out.push_back('(');
        print_seq(out, t.args);
        out.push_back(')');
    }
    if (!t.annots.empty()) {
        out.push_back('[');
        print_seq(out, t.annots);
        out.push_back(']');
    }
}

}  // namespace

bool is_operator_functor(std::string_view f, std::size_t arity) {
    return std::any_of(std::begin(k_ops), std::end(k_ops),
                       [&](const op_info& op) { return op.name == f && op.arity == arity; });
}

std::string print_term(const term& t) {
    std::string out;
    print_into(out, t, 0);
    return out;
}

}  // namespace spbdi

#include <fstream>
#include <sstream>

#include "spbdi/parser.hpp"
#include "spbdi/simulation.hpp"

namespace spbdi {

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) {
        throw scenario_error("cannot read " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string atom_name(const term& t, const char* what) {
    if (!t.is_atom()) {
        throw scenario_error(std::string("expected an atom for ") + what + ", got " + print_term(t));
    }
    return t.name;
}

std::string file_name(const term& t) {
    if (t.is_string()) {
        return t.name;
    }
    return atom_name(t, "file name");
}

agent_program load_program(const std::filesystem::path& path) {
    try {
        return parse_program(read_file(path));
    } catch (const parse_error& e) {
        throw parse_error(e.line(), e.column(), path.string() + ": " + e.what(), e.expected());
    }
}

void merge_declarations(agent_program& into, const agent_program& from) {
    into.beliefs.insert(into.beliefs.end(), from.beliefs.begin(), from.beliefs.end());
    into.rules.insert(into.rules.end(), from.rules.begin(), from.rules.end());
    into.practices.insert(into.practices.end(), from.practices.begin(), from.practices.end());
    into.landmarks.insert(into.landmarks.end(), from.landmarks.begin(), from.landmarks.end());
    into.patterns.insert(into.patterns.end(), from.patterns.begin(), from.patterns.end());
    if (!from.plans.empty() || !from.goals.empty()) {
        throw scenario_error("practice files may only hold declarations");
    }
}

}  // namespace

scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
    const agent_program manifest = parse_program(text);
    if (!manifest.plans.empty() || !manifest.goals.empty() || !manifest.rules.empty()) {
        throw scenario_error("a manifest holds facts only");
    }
    scenario sc;
    sc.base_dir = base_dir;
    for (const auto& f : manifest.beliefs) {
        if (f.is_compound("agent", 3)) {
            agent_spec spec;
            spec.name = atom_name(f.args[0], "agent name");
            spec.program_file = file_name(f.args[1]);
            if (!f.args[2].is_list()) {
                throw scenario_error("agent practice files must be a list");
            }
            for (const auto& p : f.args[2].args) {
                spec.practice_files.push_back(file_name(p));
            }
            for (const auto& other : sc.agents) {
                if (other.name == spec.name) {
                    throw scenario_error("duplicate agent " + spec.name);
                }
            }
            sc.agents.push_back(std::move(spec));
        } else if (f.is_compound("param", 2)) {
            sc.params[atom_name(f.args[0], "parameter")] = f.args[1];
        } else if (f.is_compound("fact", 1)) {
            sc.facts.push_back(f.args[0]);
        } else if (f.is_compound("belief", 2)) {
            sc.beliefs.emplace_back(atom_name(f.args[0], "agent name"), f.args[1]);
        } else {
            throw scenario_error("unknown manifest entry " + print_term(f));
        }
    }
    if (sc.agents.empty()) {
        throw scenario_error("manifest declares no agents");
    }
    return sc;
}

scenario load_scenario(const std::filesystem::path& manifest) {
    const auto base = manifest.parent_path();
    scenario sc = parse_scenario(read_file(manifest), base);
    for (const auto& spec : sc.agents) {
        agent_program prog = load_program(base / spec.program_file);
        for (const auto& pf : spec.practice_files) {
            merge_declarations(prog, load_program(base / pf));
        }
        sc.programs[spec.name] = std::move(prog);
    }
    for (const auto& [name, b] : sc.beliefs) {
        auto it = sc.programs.find(name);
        if (it == sc.programs.end()) {
            throw scenario_error("belief for unknown agent " + name);
        }
        it->second.beliefs.push_back(b);
    }
    return sc;
}

}  // namespace spbdi

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spbdi/parser.hpp"
#include "spbdi/simulation.hpp"

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_parse = 1;
constexpr int k_exit_invariant = 2;

struct run_config {
    std::string scenario;
    std::int64_t steps = 200;
    std::string trace_out;
    bool no_practice = false;
    bool compare = false;
    std::int64_t meta_period = 2;
    int search_depth = 3;
};

struct run_result {
    spbdi::run_summary summary;
    std::string trace;
    std::vector<std::string> violations;
};

run_result run_once(const spbdi::scenario& sc, const run_config& cfg, bool practices) {
    spbdi::sim_options opts;
    opts.practices_enabled = practices;
    opts.meta_period = cfg.meta_period;
    opts.search_depth = cfg.search_depth;
    spbdi::simulation sim(sc, opts);
    sim.run(cfg.steps);
    return run_result{sim.summarize(), sim.trace().to_jsonl(), sim.violations()};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw spbdi::scenario_error("cannot write " + path);
    }
    out << text;
}

std::string opt(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "-"; }

void print_comparison(const spbdi::run_summary& a, const spbdi::run_summary& b) {
    auto row = [](const std::string& k, const std::string& x, const std::string& y) {
        std::cout << std::left << std::setw(34) << k << std::setw(20) << x << std::setw(20) << y
                  << (x == y ? "" : "*") << "\n";
    };
    row("metric", "practice", "no practice");
    row("mood", a.mood, b.mood);
    row("stimulation", opt(a.stimulation), opt(b.stimulation));
    row("stimulated", a.stimulated ? "yes" : "no", b.stimulated ? "yes" : "no");
    row("practice completed", opt(a.practice_completed_tick), opt(b.practice_completed_tick));
    std::set<std::string> ids;
    for (const auto& [id, t] : a.landmark_ticks) ids.insert(id);
    for (const auto& [id, t] : b.landmark_ticks) ids.insert(id);
    for (const auto& id : ids) {
        auto get = [&](const spbdi::run_summary& s) {
            auto it = s.landmark_ticks.find(id);
            return it == s.landmark_ticks.end() ? std::string("-") : std::to_string(it->second);
        };
        row("landmark " + id, get(a), get(b));
    }
    std::set<std::string> actions(a.actions_attempted.begin(), a.actions_attempted.end());
    actions.insert(b.actions_attempted.begin(), b.actions_attempted.end());
    for (const auto& act : actions) {
        auto has = [&](const spbdi::run_summary& s) {
            return std::find(s.actions_attempted.begin(), s.actions_attempted.end(), act) != s.actions_attempted.end()
                       ? std::string("yes")
                       : std::string("no");
        };
        row("attempted " + act, has(a), has(b));
    }
}

int report_violations(const std::vector<std::string>& v) {
    for (const auto& s : v) {
        std::cerr << "invariant violation: " << s << "\n";
    }
    return v.empty() ? k_exit_ok : k_exit_invariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Run a multi-agent scenario with social-practice meta-deliberation"};
    run_config cfg;
    app.add_option("--scenario", cfg.scenario, "Scenario manifest (.scn)")->required();
    app.add_option("--steps", cfg.steps, "Simulation steps")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--trace-out", cfg.trace_out, "Write the JSON-lines trace here");
    app.add_flag("--no-practice", cfg.no_practice, "Disable social-practice reasoning");
    app.add_flag("--compare", cfg.compare, "Run with and without practices and compare");
    app.add_option("--meta-period", cfg.meta_period, "Ticks between metadeliberate passes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--search-depth", cfg.search_depth, "Goal-plan path search depth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return k_exit_parse;
    }

    try {
        const spbdi::scenario sc = spbdi::load_scenario(cfg.scenario);
        if (cfg.compare) {
            const run_result with = run_once(sc, cfg, true);
            const run_result without = run_once(sc, cfg, false);
            if (!cfg.trace_out.empty()) {
                write_file(cfg.trace_out + ".practice.jsonl", with.trace);
                write_file(cfg.trace_out + ".no_practice.jsonl", without.trace);
            }
            print_comparison(with.summary, without.summary);
            auto all = with.violations;
            all.insert(all.end(), without.violations.begin(), without.violations.end());
            return report_violations(all);
        }
        const run_result r = run_once(sc, cfg, !cfg.no_practice);
        if (!cfg.trace_out.empty()) {
            write_file(cfg.trace_out, r.trace);
        }
        std::cout << spbdi::format_summary(r.summary);
        return report_violations(r.violations);
    } catch (const spbdi::parse_error& e) {
        std::cerr << "parse error at " << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return k_exit_parse;
    } catch (const spbdi::scenario_error& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return k_exit_parse;
    } catch (const spbdi::runtime_error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return k_exit_invariant;
    }
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spbdi/parser.hpp"
#include "spbdi/practice.hpp"
#include "spbdi/simulation.hpp"

namespace py = pybind11;
using namespace spbdi;

namespace {

py::dict summary_dict(const run_summary& s) {
    py::dict d;
    d["steps"] = s.steps;
    d["final_tick"] = s.final_tick;
    d["mood"] = s.mood;
    d["stimulation"] = s.stimulation;
    d["stimulated"] = s.stimulated;
    d["practice_completed"] = s.practice_completed;
    d["practice_completed_tick"] = s.practice_completed_tick;
    d["landmark_ticks"] = s.landmark_ticks;
    d["actions_attempted"] = s.actions_attempted;
    return d;
}

std::vector<std::string> print_plans(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& p : parse_program(text).plans) {
        out.push_back(print_plan(p));
    }
    return out;
}

class py_simulation {
public:
    py_simulation(const std::string& manifest, bool practices, std::int64_t meta_period, int search_depth)
        : sim_(load_scenario(manifest), sim_options{practices, meta_period, search_depth}) {}

    void run(std::int64_t steps) { sim_.run(steps); }
    void step() { sim_.step(); }
    std::int64_t steps_done() const { return sim_.steps_done(); }
    std::int64_t tick() const { return sim_.world().tick(); }
    void set_tick(std::int64_t t) { sim_.world().set_tick(t); }
    py::dict summary() const { return summary_dict(sim_.summarize()); }
    std::string trace_jsonl() const { return sim_.trace().to_jsonl(); }
    std::vector<std::string> violations() const { return sim_.violations(); }
    std::vector<std::string> facts() const {
        std::vector<std::string> out;
        for (const auto& f : sim_.world().facts()) {
            out.push_back(print_term(f));
        }
        return out;
    }
    std::map<std::string, std::string> landmarks(const std::string& agent) {
        std::map<std::string, std::string> out;
        for (const auto& [id, s] : sim_.get(agent).practice().status) {
            out[id] = to_string(s);
        }
        return out;
    }
    std::int64_t joint_overlap(const std::string& action, const std::vector<std::string>& participants) const {
        return sim_.world().joint_overlap(action, participants);
    }

private:
    simulation sim_;
};

}  // namespace

PYBIND11_MODULE(_spbdi, m) {
    m.doc() = "BDI agents with social practices";

    auto base = py::register_exception<spbdi::runtime_error>(m, "SpbdiError", PyExc_RuntimeError);
    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<scenario_error>(m, "ScenarioError", base.ptr());

    m.def("canonical_term", [](const std::string& text) { return print_term(parse_term(text)); },
          "Parses a term and prints it in canonical form.", py::arg("text"));
    m.def("print_plans", &print_plans, "Canonical text of each plan in a program.", py::arg("text"));
    m.def(
        "compile_plan_pattern",
        [](const std::string& text) { return compile_plan_pattern(parse_plan_pattern(text)).priors_map(); },
        "Landmark priors of a plan pattern, each list sorted.", py::arg("text"));
    m.def(
        "interval_overlap",
        [](const std::vector<std::vector<std::pair<std::int64_t, std::optional<std::int64_t>>>>& per,
           std::int64_t now) {
            std::vector<std::vector<interval>> xs;
            for (const auto& p : per) {
                auto& v = xs.emplace_back();
                for (const auto& [s, e] : p) {
                    v.push_back(interval{s, e});
                }
            }
            return interval_overlap(xs, now);
        },
        "Ticks shared by every participant; an interval end of None means still open.", py::arg("intervals"),
        py::arg("now"));

    py::class_<py_simulation>(m, "Simulation")
        .def(py::init<const std::string&, bool, std::int64_t, int>(), py::arg("manifest"),
             py::arg("practices") = true, py::arg("meta_period") = 2, py::arg("search_depth") = 3)
        .def("run", &py_simulation::run, py::arg("steps"))
        .def("step", &py_simulation::step)
        .def_property_readonly("steps_done", &py_simulation::steps_done)
        .def_property_readonly("tick", &py_simulation::tick)
        .def("set_tick", &py_simulation::set_tick, py::arg("tick"))
        .def("summary", &py_simulation::summary)
        .def("trace_jsonl", &py_simulation::trace_jsonl)
        .def("violations", &py_simulation::violations)
        .def("facts", &py_simulation::facts)
        .def("landmarks", &py_simulation::landmarks, py::arg("agent"))
        .def("joint_overlap", &py_simulation::joint_overlap, py::arg("action"), py::arg("participants"));
}

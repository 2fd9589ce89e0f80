#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spbdi {

using json = nlohmann::ordered_json;

/// One line of the run trace. `kind` is one of event, action, intention,
/// landmark, practice.
struct trace_record {
    std::int64_t step = 0;
    std::string agent;
    std::string kind;
    json payload;
};

class trace_log {
public:
    void emit(std::int64_t step, std::string agent, std::string kind, json payload) {
        records_.push_back(trace_record{step, std::move(agent), std::move(kind), std::move(payload)});
    }

    const std::vector<trace_record>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    /// Line-delimited JSON with key order step, agent, kind, payload.
    std::string to_jsonl() const {
        std::string out;
        for (const auto& r : records_) {
            out += to_json(r).dump();
            out.push_back('\n');
        }
        return out;
    }

    static json to_json(const trace_record& r) {
        json j;
        j["step"] = r.step;
        j["agent"] = r.agent;
        j["kind"] = r.kind;
        j["payload"] = r.payload;
        return j;
    }

private:
    std::vector<trace_record> records_;
};

}  // namespace spbdi

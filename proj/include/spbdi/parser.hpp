#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spbdi/plan_pattern.hpp"
#include "spbdi/program.hpp"
#include "spbdi/term.hpp"

namespace spbdi {

class parse_error : public std::runtime_error {
public:
    parse_error(int line, int column, std::string message, std::vector<std::string> expected = {});

    int line() const { return line_; }
    int column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

/// Parses a single term or formula (no trailing '.').
term parse_term(std::string_view text);

/// Parses an agent program, practice declaration file or scenario manifest.
/// Throws parse_error; never returns a partial program.
agent_program parse_program(std::string_view text);

plan_pattern parse_plan_pattern(std::string_view text);

}  // namespace spbdi

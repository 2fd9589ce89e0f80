#pragma once

#include <memory>
#include <string>
#include <vector>

#include "spbdi/term.hpp"

namespace spbdi {

enum class pattern_op { segment, choice, par, seq };

/// Plan pattern over segments `label:purpose` combined with `;` (sequence),
/// `&` (parallel) and `+` (choice).
struct plan_pattern {
    pattern_op op = pattern_op::segment;
    std::string label;  // segment only
    term purpose;       // segment only
    std::shared_ptr<const plan_pattern> left;
    std::shared_ptr<const plan_pattern> right;

    static plan_pattern segment(std::string label, term purpose);
    static plan_pattern combine(pattern_op op, plan_pattern l, plan_pattern r);

    /// Segments in left-to-right order.
    std::vector<const plan_pattern*> leaves() const;

    bool operator==(const plan_pattern& o) const;
};

std::string print_plan_pattern(const plan_pattern& p);

}  // namespace spbdi

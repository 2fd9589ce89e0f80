#pragma once

#include <random>
#include <string>

namespace spbdi::testing {

// Programs over goals g0..g2 whose plans never fail: actions succeed, tests
// query a fixed belief, subgoals only point deeper and every goal ends with a
// context-free plan.
inline std::string random_program(std::uint32_t seed) {
    std::mt19937 rng(seed);
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    const char* contexts[] = {"b1", "not b2", "b1 & b3", "not b1 | b2", "b3"};
    std::string out = "base.\n";
    int label = 0;
    for (int g = 0; g <= 2; ++g) {
        const int nplans = 1 + pick(3);
        for (int p = 0; p < nplans; ++p) {
            out += "@l" + std::to_string(label++) + " +!g" + std::to_string(g);
            if (p + 1 < nplans) {
                out += std::string(" : ") + contexts[pick(5)];
            }
            out += " <- ";
            const int nsteps = 1 + pick(4);
            for (int s = 0; s < nsteps; ++s) {
                if (s) {
                    out += "; ";
                }
                const int b = 1 + pick(3);
                switch (pick(g < 2 ? 5 : 4)) {
                    case 0: out += "act" + std::to_string(g) + "_" + std::to_string(pick(3)); break;
                    case 1: out += "+b" + std::to_string(b); break;
                    case 2: out += "-b" + std::to_string(b); break;
                    case 3: out += "?base"; break;
                    default: out += "!g" + std::to_string(g + 1 + pick(2 - g)); break;
                }
            }
            out += ".\n";
        }
    }
    return out;
}

}  // namespace spbdi::testing

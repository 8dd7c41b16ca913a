#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lcsde {

struct PropCounterexample {
    std::uint64_t case_index = 0;
    int size = 0; // complexity level after shrinking
    std::string description;
};

struct PropResult {
    std::string suite;
    int cases = 0;
    bool passed = false;
    std::optional<PropCounterexample> counterexample;
};

std::vector<std::string> prop_suite_names();
bool prop_suite_exists(const std::string& name);

// Runs the named randomized suite. On failure the counterexample is
// shrunk by re-running the failing case at decreasing complexity.
PropResult run_prop_suite(const std::string& name, int cases, std::uint64_t seed);

} // namespace lcsde

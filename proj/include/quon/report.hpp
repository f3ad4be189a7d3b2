#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quon/suites.hpp"

namespace quon {

inline constexpr const char *kToolName = "quon";
inline constexpr const char *kToolVersion = "0.1.0";

struct ReportInfo {
    std::string command;
    std::vector<int> dims;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    std::vector<std::string> sources;  // input files, if any
};

/// JSON report, schema 1. With include_runtime false every runtime_ms is 0,
/// which makes two runs with the same seed byte-identical.
std::string report_json(const ReportInfo &info, const std::vector<CheckRecord> &records, bool include_runtime = true);

}  // namespace quon

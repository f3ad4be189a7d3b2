#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quon/numerics.hpp"

namespace quon {

enum class CheckStatus { Pass, Fail, Error };

std::string to_string(CheckStatus s);

struct CheckRecord {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double max_error = 0.0;
    std::optional<cplx> scalar;
    double runtime_ms = 0.0;
    std::string detail;  // short human note, e.g. a found word or an error message
};

struct SuiteOptions {
    std::vector<int> dims{2, 3, 4, 5};
    Tolerance tol{};
    std::uint64_t seed = 42;
    int trials = 20;  // random instances per cell where a suite samples
};

/// Names of the built-in suites in report order.
const std::vector<std::string> &suite_names();

/// Throws NotFound for an unknown suite.
std::vector<CheckRecord> run_suite(const std::string &name, const SuiteOptions &opts);

/// Every suite, run concurrently and concatenated in suite_names() order.
std::vector<CheckRecord> run_all_suites(const SuiteOptions &opts);

bool all_pass(const std::vector<CheckRecord> &records);

}  // namespace quon

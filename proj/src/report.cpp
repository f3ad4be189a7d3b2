#include "quon/report.hpp"

#include <cmath>
#include <json.hpp>

namespace quon {

std::string report_json(const ReportInfo &info, const std::vector<CheckRecord> &records, bool include_runtime) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["schema"] = 1;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = info.command;
    j["dims"] = info.dims;
    j["tolerance"] = info.tolerance;
    j["seed"] = info.seed;
    j["sources"] = info.sources;
    ordered_json recs = ordered_json::array();
    for (const auto &r : records) {
        ordered_json e;
        e["name"] = r.name;
        e["status"] = to_string(r.status);
        if (std::isfinite(r.max_error)) {
            e["max_error"] = r.max_error;
        } else {
            e["max_error"] = nullptr;
        }
        if (r.scalar) {
            e["scalar"] = {{"re", r.scalar->real()}, {"im", r.scalar->imag()}};
        } else {
            e["scalar"] = nullptr;
        }
        e["runtime_ms"] = include_runtime ? std::round(r.runtime_ms * 1000.0) / 1000.0 : 0.0;
        if (!r.detail.empty()) {
            e["detail"] = r.detail;
        }
        recs.push_back(std::move(e));
    }
    j["records"] = std::move(recs);
    j["pass"] = all_pass(records);
    return j.dump(2) + "\n";
}

}  // namespace quon

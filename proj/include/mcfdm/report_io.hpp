#pragma once

#include <string>

#include <json.hpp>

#include "mcfdm/harness.hpp"

namespace mcfdm::harness {

inline constexpr const char* kCsvHeader =
    "method,maturity_years,price,abs_error,elapsed_seconds,se,theta_scale,n_space,n_time,paths,seed";

/// Error in the compact scientific style used by the comparison tables:
/// 0.00239 -> "2.39E-3", 6.12e-5 -> "6.12E-5".
std::string format_error_sci(double value);

std::string to_csv(const TableReport& report);
std::string to_json(const TableReport& report);
std::string to_human_table(const TableReport& report);
std::string render(const TableReport& report, OutputFormat format);

nlohmann::json job_to_json(const JobSpec& job);
/// Accepts a bare job object or a full JSON report (reads its "job" member).
/// Missing members keep their defaults.
JobSpec job_from_json(const nlohmann::json& j);

}  // namespace mcfdm::harness

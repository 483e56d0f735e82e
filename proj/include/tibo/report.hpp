#pragma once

#include "tibo/bench_harness.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace tibo {

inline constexpr const char* kReportCsvHeader =
    "scenario_id,bc_type,theta,status,max_resid,max_dev_base,max_dev_alt,rk4_dev,iterations,wall_ms";

void write_report_csv(std::ostream& out, std::span<const RunReport> reports);
/// Throws std::runtime_error naming the path on I/O failure.
void write_report_csv(const std::filesystem::path& path, std::span<const RunReport> reports);

/// Aligned per-scenario table followed by per-status tallies.
std::string format_summary(std::span<const RunReport> reports);

/// One `scenario_<id>.csv` per report with columns x,y_opt,y_b.
void write_curves(const std::filesystem::path& dir, std::span<const RunReport> reports);

}  // namespace tibo

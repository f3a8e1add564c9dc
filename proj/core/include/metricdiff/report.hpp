#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metricdiff/harness.hpp"

namespace metricdiff::harness {

enum class ReportFormat : std::uint8_t { Json, Markdown };

[[nodiscard]] ReportFormat report_format_from_name(const std::string& name);

// Context echoed into the document header. Nothing here is derived from the
// environment: reports with the same inputs are byte-identical.
struct ReportOptions {
    ReportFormat format = ReportFormat::Json;
    std::string task;
    double tolerance = -1.0;  // < 0 = per-metric defaults
    std::uint64_t seed = 0;
    std::string preset = "all";
};

// Full-precision rendering used by every report: shortest text that parses
// back to the same double, "inf"/"-inf" for infinities.
[[nodiscard]] std::string format_full(double v);

// Two-decimal display string; ties resolve half-even on the exact binary
// value.
[[nodiscard]] std::string format_2dp(double v);

// The value listing written by `compute`: one row per swept variant.
[[nodiscard]] std::string emit_values(const std::vector<MetricValue>& values,
                                      const ReportOptions& opts,
                                      const std::vector<std::string>& notes = {});

// The discrepancy report written by `diff`. Rows arrive pre-sorted from
// classify_discrepancies; an empty list renders an "all consistent" summary.
[[nodiscard]] std::string emit_report(const std::vector<DiscrepancyRecord>& records,
                                      const ReportOptions& opts,
                                      const std::vector<std::string>& notes = {});

}  // namespace metricdiff::harness

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metricdiff/dataset.hpp"
#include "metricdiff/registry.hpp"
#include "metricdiff/types.hpp"

namespace metricdiff::harness {

struct RunConfig {
    Task task = Task::Classification;
    std::vector<MetricId> metrics;  // empty = every metric of the task family
    std::string variants = "all";   // "all" or a named preset
    double tolerance = -1.0;        // < 0 = per-metric default
    std::uint64_t seed = 0;
    // Fitter-supplied cluster centers (k x dim); only the clustering API can
    // carry these, file inputs have none.
    std::optional<std::vector<double>> provided_centers;
};

// Variant-selection presets. Beyond "all", each preset narrows the reporting
// axis to mimic a component family's habit; metrics the preset says nothing
// about keep their full variant list. A preset may add a caveat to `notes`.
[[nodiscard]] const std::vector<std::string>& preset_names();
[[nodiscard]] std::vector<ConventionDescriptor> select_variants(MetricId id,
                                                                const VariantContext& ctx,
                                                                const std::string& preset,
                                                                std::vector<std::string>* notes);

// One value per selected descriptor, in registration order. A variant whose
// preconditions fail contributes an Undefined value carrying the reason; the
// sweep itself never throws for data reasons.
[[nodiscard]] std::vector<MetricValue> run_variants(const Dataset& data, MetricId id,
                                                    const RunConfig& cfg,
                                                    std::vector<std::string>* notes = nullptr);

// Sweeps every requested metric of the task family.
[[nodiscard]] std::vector<MetricValue> run_all(const Dataset& data, const RunConfig& cfg,
                                               std::vector<std::string>* notes = nullptr);

enum class Discrepancy : std::uint8_t { BUG, ID, RD, NONE };

[[nodiscard]] std::string discrepancy_name(Discrepancy d);

struct DiscrepancyRecord {
    MetricId metric{};
    ConventionDescriptor descriptor_a;
    ConventionDescriptor descriptor_b;
    double value_a = 0.0;
    double value_b = 0.0;
    double abs_delta = 0.0;
    Discrepancy classification = Discrepancy::NONE;
};

// Classification of one comparable pair (same metric and quantity, both
// value-bearing). BUG beats everything: an out-of-domain number must never be
// reported consistent. Otherwise NONE within tolerance; otherwise RD when the
// descriptors share the formula family and every Formula-kind parameter
// (absent keys count at their catalog default), and ID when they do not.
[[nodiscard]] Discrepancy classify_pair(const MetricValue& a, const MetricValue& b,
                                        double tolerance);

// All unordered pairs within each (metric, quantity) group. Undefined values
// carry no number and are skipped. tolerance < 0 uses each metric's default.
// Output order is independent of the input order.
[[nodiscard]] std::vector<DiscrepancyRecord> classify_discrepancies(
    const std::vector<MetricValue>& values, double tolerance = -1.0);

// 0 = at most RD records, 2 = some ID, 3 = some BUG.
[[nodiscard]] int exit_code_for(const std::vector<DiscrepancyRecord>& records);

}  // namespace metricdiff::harness

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metricdiff/imgqual.hpp"
#include "metricdiff/registry.hpp"
#include "metricdiff/segment.hpp"
#include "metricdiff/types.hpp"

namespace metricdiff::harness {

// CLI-level task. Segmentation and image tasks carry their expected grid
// dimensionality; everything else maps 1:1 onto a metric task family.
enum class Task : std::uint8_t {
    Classification,
    Regression,
    Clustering,
    Correlation,
    StatTest,
    Segmentation2d,
    Segmentation3d,
    Image2d,
    Image3d,
};

[[nodiscard]] std::string task_name(Task t);
[[nodiscard]] Task task_from_name(const std::string& name);
[[nodiscard]] TaskFamily family_of(Task t);

// In-memory dataset for one run. Only the fields of the loaded task are
// populated; everything else stays empty.
struct Dataset {
    Task task = Task::Classification;

    // classification
    LabelVector y_true;
    LabelVector y_pred;
    std::vector<double> scores;        // optional "score" column; empty = absent
    std::vector<double> probs;         // optional row-major n x K "prob_<k>" columns
    std::size_t n_prob_classes = 0;

    // regression
    std::vector<double> truth;
    std::vector<double> pred;

    // correlation
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::vector<double>> covariates;  // "z*" columns

    // hypothesis tests, in first-appearance order of the group key
    std::vector<std::string> group_names;
    std::vector<std::vector<double>> groups;

    // clustering
    std::vector<double> points;  // n x dim row-major, from "x*" columns
    std::size_t dim = 0;
    std::vector<std::size_t> cluster_labels;

    // segmentation / image quality; record 1 of the file is the reference,
    // record 2 the prediction or test raster
    std::optional<segment::Mask> mask_ref;
    std::optional<segment::Mask> mask_pred;
    std::optional<imgqual::RasterPair> raster;
};

// Minimal comma-separated table: first row is the header, fields are not
// quoted. Numeric accessors throw with row diagnostics.
struct Table {
    std::string path;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] bool has_column(const std::string& name) const;
    [[nodiscard]] std::size_t column_index(const std::string& name) const;
    [[nodiscard]] std::vector<double> numeric_column(const std::string& name) const;
    [[nodiscard]] std::vector<int> int_column(const std::string& name) const;
    [[nodiscard]] std::vector<std::string> string_column(const std::string& name) const;
};

[[nodiscard]] Table load_table(const std::string& path);

// One grid record of a mask/raster file: a `dims= shape= spacing=
// [data_range=]` header line followed by row-major values. A file may hold
// several records back to back.
struct RasterRecord {
    std::size_t dims = 0;
    std::vector<std::size_t> shape;
    std::vector<double> spacing;
    std::optional<double> data_range;
    std::vector<double> values;
};

[[nodiscard]] std::vector<RasterRecord> load_raster_records(const std::string& path);

[[nodiscard]] segment::Mask to_mask(const RasterRecord& r);
[[nodiscard]] imgqual::RasterPair to_raster_pair(const RasterRecord& ref,
                                                 const RasterRecord& test);

// Parses and validates the file for the task. `truth_col` names the ground
// truth column for tabular tasks ("" = the task's default); mask/raster tasks
// ignore it and read two consecutive grid records, reference first.
[[nodiscard]] Dataset load_dataset(const std::string& path, Task task,
                                   const std::string& truth_col = "");

}  // namespace metricdiff::harness

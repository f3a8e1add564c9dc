#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metricdiff/types.hpp"

namespace metricdiff {

enum class TaskFamily : std::uint8_t {
    Classification,
    Regression,
    Clustering,
    Correlation,
    StatTest,
    Segmentation,
    ImageQuality,
};

[[nodiscard]] std::string task_family_name(TaskFamily t);

enum class MetricId : std::uint16_t {
    // classification
    Accuracy,
    BalancedAccuracy,
    Precision,
    Recall,
    F1,
    FBeta,
    Jaccard,
    CohenKappa,
    Mcc,
    GMean,
    LogLoss,
    RocAuc,
    // regression
    Mae,
    Mse,
    Rmse,
    MedianAe,
    Mape,
    Msle,
    RSquared,
    ExplainedVariance,
    TweedieDeviance,
    Huber,
    // clustering
    Silhouette,
    DaviesBouldin,
    CalinskiHarabasz,
    Wcss,
    // correlation
    Pearson,
    Spearman,
    KendallTau,
    MutualInformation,
    DistanceCorrelation,
    BiweightMidcorrelation,
    PercentageBend,
    ShepherdPi,
    PartialCorrelation,
    // hypothesis tests
    TTestIndependent,
    TTestPaired,
    TTestWelch,
    ZTest,
    KsTest,
    Anova,
    KruskalWallis,
    MannWhitneyU,
    ShapiroWilk,
    FTest,
    Bartlett,
    Levene,
    ChiSquare,
    WilcoxonSignedRank,
    PermutationTest,
    // segmentation
    SegAccuracy,
    SegPrecision,
    SegRecall,
    SegF1,
    Dice,
    Iou,
    MeanIou,
    BoundaryF1,
    Hausdorff,
    AdaptedRandError,
    AdjustedRandIndex,
    VariationOfInformation,
    // image quality
    ImgMae,
    ImgMse,
    ImgRmse,
    ImgRSquared,
    Psnr,
    Ssim,
};

// Whether a parameter changes the formula itself or only how the result is
// reported. This distinction drives the RD/ID split: two conventions that
// agree on formula family and every Formula-kind parameter but still disagree
// numerically differ only in reporting.
enum class ParamKind : std::uint8_t { Formula, Reporting };

struct ParamSpec {
    std::string name;
    ParamKind kind;
    ParamValue default_value;  // also fixes the expected type
    std::vector<std::string> allowed;  // non-empty only for enumerated string params
};

struct MetricInfo {
    MetricId id;
    std::string name;  // stable CLI identifier, e.g. "balanced_accuracy"
    TaskFamily task;
    std::vector<std::string> formula_families;  // first entry is the default
    std::vector<ParamSpec> params;
    bool stochastic = false;  // Monte Carlo style results; widens default tolerance
    std::string summary;      // one line for list-metrics
};

[[nodiscard]] const MetricInfo& metric_info(MetricId id);
[[nodiscard]] std::optional<MetricId> metric_from_name(std::string_view name);
[[nodiscard]] const std::vector<MetricId>& all_metrics();
[[nodiscard]] std::vector<MetricId> metrics_for_task(TaskFamily task);
[[nodiscard]] inline const std::string& metric_name(MetricId id) { return metric_info(id).name; }

// Context the variant expansion depends on: per-class reporting modes are
// emitted once per declared class.
struct VariantContext {
    std::size_t n_classes = 2;
};

// All built-in convention descriptors for a metric, in a fixed deterministic
// order. Variant axes are registered only where real components are known to
// disagree; everything else stays a single pinned convention whose parameters
// remain selectable through descriptors built by hand.
[[nodiscard]] std::vector<ConventionDescriptor> register_variants(MetricId id,
                                                                  const VariantContext& ctx = {});

// Rejects descriptors whose family or parameter keys/types/values are not in
// the metric's declared schema. Throws std::invalid_argument.
void validate_descriptor(const ConventionDescriptor& d);

[[nodiscard]] ParamKind param_kind(MetricId id, const std::string& key);

// Comparison tolerance used by the harness when none is configured.
[[nodiscard]] double default_tolerance(MetricId id);

}  // namespace metricdiff

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "metricdiff/types.hpp"

namespace metricdiff::classify {

using metricdiff::ScalarResult;

struct PRFOptions {
    double beta = 1.0;                                      // recall weight in F
    ZeroDivPolicy zero_division = ZeroDivPolicy::Undefined; // 0/0 handling
};

struct AggregateSet {
    std::optional<double> micro;
    std::optional<double> macro;
    std::optional<double> weighted;
    bool macro_filled = false;
    bool weighted_filled = false;
};

// The full precision/recall/F/Jaccard report. Reporting a single number from
// this is a convention choice; the library always hands back everything.
struct PRFReport {
    std::vector<std::optional<double>> precision;  // per declared class
    std::vector<std::optional<double>> recall;
    std::vector<std::optional<double>> f;
    std::vector<std::optional<double>> jaccard;
    std::vector<std::int64_t> support;             // true count per class
    AggregateSet precision_agg;
    AggregateSet recall_agg;
    AggregateSet f_agg;
    AggregateSet jaccard_agg;
    double beta = 1.0;
};

[[nodiscard]] PRFReport prf_report(const ConfusionMatrix& cm, const PRFOptions& opts = {});

[[nodiscard]] ScalarResult accuracy(const ConfusionMatrix& cm);

enum class BalancedAccuracyVariant { MacroRecall, WeightedRecall, ChanceCorrected };

[[nodiscard]] ScalarResult balanced_accuracy(const ConfusionMatrix& cm,
                                             BalancedAccuracyVariant variant,
                                             ZeroDivPolicy policy = ZeroDivPolicy::Undefined);

[[nodiscard]] ScalarResult cohen_kappa(const ConfusionMatrix& cm);

enum class MccVariant {
    BinaryPositive,   // one-vs-rest counts of a declared positive class
    Generalized,      // multi-class covariance form
    OneVsRestMacro,   // unweighted mean of per-class binary MCCs
};

// Degenerate denominators score 0 by convention; such values come back with
// filled=true so callers can tell a true zero from a filled one.
[[nodiscard]] ScalarResult mcc(const ConfusionMatrix& cm, MccVariant variant,
                               std::size_t positive_class = 1);

[[nodiscard]] ScalarResult g_mean(const ConfusionMatrix& cm);

// Mean negative log-likelihood of the true class. `probs` is row-major
// n x K in declared label order; rows are clipped to [epsilon, 1-epsilon]
// first and renormalized to sum 1 afterwards.
[[nodiscard]] double log_loss(const LabelVector& y_true, const std::vector<double>& probs,
                              const LabelSet& labels, double epsilon = 1e-15);

// Rank-based AUC: the probability that a positive sample outranks a negative
// one, ties counted half. Undefined when either class is absent.
[[nodiscard]] ScalarResult roc_auc(const LabelVector& y_true, const ScoreVector& scores,
                                   Label positive);

}  // namespace metricdiff::classify

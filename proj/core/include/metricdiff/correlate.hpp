#pragma once

#include <cstdint>
#include <vector>

#include "metricdiff/types.hpp"

namespace metricdiff::correlate {

using metricdiff::ScalarResult;

// A pair of equal-length variables plus optional covariate columns.
struct VariablePair {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::vector<double>> covariates;  // each the same length as x

    VariablePair(std::vector<double> xs, std::vector<double> ys,
                 std::vector<std::vector<double>> zs = {});
    [[nodiscard]] std::size_t n() const noexcept { return x.size(); }
};

// Average ranks (1-based, ties share their mean rank).
[[nodiscard]] std::vector<double> average_ranks(const std::vector<double>& v);

[[nodiscard]] ScalarResult pearson(const std::vector<double>& x, const std::vector<double>& y);

[[nodiscard]] ScalarResult spearman(const std::vector<double>& x, const std::vector<double>& y);

enum class KendallVariant {
    TauA,  // (C - D) / C(n,2); ties eat into the attainable range
    TauB,  // (C - D) / sqrt((C(n,2)-Tx)(C(n,2)-Ty)); tie-corrected denominator
};

[[nodiscard]] ScalarResult kendall_tau(const std::vector<double>& x,
                                       const std::vector<double>& y, KendallVariant variant);

// Histogram mutual information in nats over an equal-width 2D grid.
// bins = 0 picks ceil(sqrt(n)). A constant variable has a degenerate
// histogram and no defined value.
[[nodiscard]] ScalarResult mutual_information(const std::vector<double>& x,
                                              const std::vector<double>& y,
                                              std::int64_t bins = 0);

// Distance correlation from double-centered pairwise distance matrices.
[[nodiscard]] ScalarResult distance_correlation(const std::vector<double>& x,
                                                const std::vector<double>& y);

enum class BiweightCentering {
    MedianMad,  // median center, unscaled MAD spread
    MeanSd,     // mean center, sample deviation spread
};

// Biweight midcorrelation with bisquare weights vanishing outside c spreads.
[[nodiscard]] ScalarResult biweight_midcorrelation(const std::vector<double>& x,
                                                   const std::vector<double>& y,
                                                   BiweightCentering centering =
                                                       BiweightCentering::MedianMad,
                                                   double c = 9.0);

// Percentage bend correlation with bend constant beta.
[[nodiscard]] ScalarResult percentage_bend(const std::vector<double>& x,
                                           const std::vector<double>& y, double beta = 0.2);

// Spearman correlation after deterministically pruning points whose squared
// Mahalanobis distance exceeds the chi-square(2) quantile. No resampling.
[[nodiscard]] ScalarResult shepherd_pi(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       double chi2_quantile = 0.975);

// Pearson correlation of the least-squares residuals of x and y on the
// covariates (with intercept). Empty covariates reduce to plain Pearson.
[[nodiscard]] ScalarResult partial_correlation(const std::vector<double>& x,
                                               const std::vector<double>& y,
                                               const std::vector<std::vector<double>>& covariates);

}  // namespace metricdiff::correlate

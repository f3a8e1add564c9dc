#pragma once

#include <vector>

#include "metricdiff/types.hpp"

namespace metricdiff::regress {

using metricdiff::ScalarResult;

// Paired ground truth / prediction series. Construction validates equal,
// nonzero length and finite values.
struct PairedSeries {
    std::vector<double> y_true;
    std::vector<double> y_pred;

    PairedSeries(std::vector<double> truth, std::vector<double> pred);
    [[nodiscard]] std::size_t n() const noexcept { return y_true.size(); }
};

struct BasicErrors {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double median_ae = 0.0;  // even n: mean of the two middle order statistics
};

[[nodiscard]] BasicErrors basic_errors(const PairedSeries& s);

enum class MapeZeroPolicy {
    Error,    // zero truth values are a domain error
    Epsilon,  // replace |y| below epsilon by epsilon in the denominator
    Drop,     // skip zero-truth samples
};
enum class MapeUnits { Fraction, Percent };

[[nodiscard]] double mape(const PairedSeries& s, MapeZeroPolicy policy = MapeZeroPolicy::Error,
                          MapeUnits units = MapeUnits::Fraction, double epsilon = 1e-9);

// Mean squared log1p error; requires nonnegative inputs on both sides.
[[nodiscard]] double msle(const PairedSeries& s);

enum class RSquaredVariant {
    CoefficientOfDetermination,  // 1 - SS_res / SS_tot; unbounded below
    SquaredPearson,              // square of the linear correlation; in [0,1]
    Adjusted,                    // CoD penalized by the predictor count
};

// The three formula families answering to the name "R squared". They agree
// only for a least-squares fit evaluated in-sample; on arbitrary predictions
// they are three different numbers.
[[nodiscard]] ScalarResult r_squared(const PairedSeries& s, RSquaredVariant variant,
                                     std::int64_t n_predictors = 1);

// 1 - Var(y - yhat) / Var(y) with population variances.
[[nodiscard]] ScalarResult explained_variance(const PairedSeries& s);

// Tweedie deviance. power <= 0 needs positive predictions (except power = 0,
// which is plain squared error); power in (0,1) is not a Tweedie family;
// power >= 1 needs nonnegative truths; power >= 2 needs positive truths.
[[nodiscard]] double tweedie_deviance(const PairedSeries& s, double power);

// Mean Huber loss: quadratic within delta of zero, linear outside.
[[nodiscard]] double huber(const PairedSeries& s, double delta = 1.0);

}  // namespace metricdiff::regress

#include "metricdiff/regress.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metricdiff::regress {

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double population_variance(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

}  // namespace

PairedSeries::PairedSeries(std::vector<double> truth, std::vector<double> pred)
    : y_true(std::move(truth)), y_pred(std::move(pred)) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("PairedSeries: length mismatch");
    if (y_true.empty()) throw std::invalid_argument("PairedSeries: empty series");
    for (double v : y_true)
        if (!std::isfinite(v)) throw std::invalid_argument("PairedSeries: non-finite truth");
    for (double v : y_pred)
        if (!std::isfinite(v)) throw std::invalid_argument("PairedSeries: non-finite prediction");
}

BasicErrors basic_errors(const PairedSeries& s) {
    const std::size_t n = s.n();
    std::vector<double> abs_err(n);
    double sum_abs = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = s.y_true[i] - s.y_pred[i];
        abs_err[i] = std::fabs(e);
        sum_abs += abs_err[i];
        sum_sq += e * e;
    }
    BasicErrors out;
    out.mae = sum_abs / static_cast<double>(n);
    out.mse = sum_sq / static_cast<double>(n);
    out.rmse = std::sqrt(out.mse);
    out.median_ae = median_of(std::move(abs_err));
    return out;
}

double mape(const PairedSeries& s, MapeZeroPolicy policy, MapeUnits units, double epsilon) {
    if (policy == MapeZeroPolicy::Epsilon && !(epsilon > 0.0))
        throw std::invalid_argument("mape: epsilon must be > 0");
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        const double y = s.y_true[i];
        double den = std::fabs(y);
        if (den == 0.0) {
            switch (policy) {
                case MapeZeroPolicy::Error:
                    throw std::invalid_argument("mape: zero truth value with zero_policy=error");
                case MapeZeroPolicy::Drop:
                    continue;
                case MapeZeroPolicy::Epsilon:
                    den = epsilon;
                    break;
            }
        }
        sum += std::fabs(y - s.y_pred[i]) / den;
        ++used;
    }
    if (used == 0) throw std::invalid_argument("mape: every sample dropped");
    const double v = sum / static_cast<double>(used);
    return units == MapeUnits::Percent ? 100.0 * v : v;
}

double msle(const PairedSeries& s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        if (s.y_true[i] < 0.0 || s.y_pred[i] < 0.0)
            throw std::invalid_argument("msle: inputs must be nonnegative");
        const double d = std::log1p(s.y_true[i]) - std::log1p(s.y_pred[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(s.n());
}

ScalarResult r_squared(const PairedSeries& s, RSquaredVariant variant,
                       std::int64_t n_predictors) {
    const std::size_t n = s.n();
    switch (variant) {
        case RSquaredVariant::CoefficientOfDetermination:
        case RSquaredVariant::Adjusted: {
            const double mean_y = mean_of(s.y_true);
            double ss_res = 0.0, ss_tot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ss_res += (s.y_true[i] - s.y_pred[i]) * (s.y_true[i] - s.y_pred[i]);
                ss_tot += (s.y_true[i] - mean_y) * (s.y_true[i] - mean_y);
            }
            if (ss_tot == 0.0) return ScalarResult::undefined("constant truth series");
            const double r2 = 1.0 - ss_res / ss_tot;
            if (variant == RSquaredVariant::CoefficientOfDetermination)
                return ScalarResult::ok(r2);
            if (n_predictors < 1)
                throw std::invalid_argument("r_squared: n_predictors must be >= 1");
            const auto p = static_cast<double>(n_predictors);
            const auto dn = static_cast<double>(n);
            if (dn - p - 1.0 <= 0.0)
                return ScalarResult::undefined("adjusted form needs n > n_predictors + 1");
            return ScalarResult::ok(1.0 - (1.0 - r2) * (dn - 1.0) / (dn - p - 1.0));
        }
        case RSquaredVariant::SquaredPearson: {
            const double mx = mean_of(s.y_true), my = mean_of(s.y_pred);
            double sxy = 0.0, sxx = 0.0, syy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dx = s.y_true[i] - mx, dy = s.y_pred[i] - my;
                sxy += dx * dy;
                sxx += dx * dx;
                syy += dy * dy;
            }
            if (sxx == 0.0 || syy == 0.0)
                return ScalarResult::undefined("constant series has no correlation");
            const double r = sxy / std::sqrt(sxx * syy);
            return ScalarResult::ok(r * r);
        }
    }
    throw std::logic_error("r_squared: unreachable");
}

ScalarResult explained_variance(const PairedSeries& s) {
    const double var_y = population_variance(s.y_true);
    if (var_y == 0.0) return ScalarResult::undefined("constant truth series");
    std::vector<double> resid(s.n());
    for (std::size_t i = 0; i < s.n(); ++i) resid[i] = s.y_true[i] - s.y_pred[i];
    return ScalarResult::ok(1.0 - population_variance(resid) / var_y);
}

double tweedie_deviance(const PairedSeries& s, double power) {
    if (power > 0.0 && power < 1.0)
        throw std::invalid_argument("tweedie_deviance: no Tweedie family for power in (0,1)");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        const double y = s.y_true[i], mu = s.y_pred[i];
        double d;
        if (power == 0.0) {
            d = (y - mu) * (y - mu);
        } else if (power == 1.0) {
            if (y < 0.0 || mu <= 0.0)
                throw std::invalid_argument("tweedie_deviance: power 1 needs y >= 0, mu > 0");
            const double ylog = y > 0.0 ? y * std::log(y / mu) : 0.0;  // y ln y -> 0 at y = 0
            d = 2.0 * (ylog - (y - mu));
        } else if (power == 2.0) {
            if (y <= 0.0 || mu <= 0.0)
                throw std::invalid_argument("tweedie_deviance: power 2 needs y > 0, mu > 0");
            d = 2.0 * (std::log(mu / y) + y / mu - 1.0);
        } else if (power < 0.0) {
            if (mu <= 0.0)
                throw std::invalid_argument("tweedie_deviance: negative power needs mu > 0");
            const double ymax = std::max(y, 0.0);
            d = 2.0 * (std::pow(ymax, 2.0 - power) / ((1.0 - power) * (2.0 - power)) -
                       y * std::pow(mu, 1.0 - power) / (1.0 - power) +
                       std::pow(mu, 2.0 - power) / (2.0 - power));
        } else if (power < 2.0) {  // compound Poisson-gamma, 1 < power < 2
            if (y < 0.0 || mu <= 0.0)
                throw std::invalid_argument("tweedie_deviance: power in (1,2) needs y >= 0, mu > 0");
            d = 2.0 * (std::pow(y, 2.0 - power) / ((1.0 - power) * (2.0 - power)) -
                       y * std::pow(mu, 1.0 - power) / (1.0 - power) +
                       std::pow(mu, 2.0 - power) / (2.0 - power));
        } else {  // power > 2
            if (y <= 0.0 || mu <= 0.0)
                throw std::invalid_argument("tweedie_deviance: power > 2 needs y > 0, mu > 0");
            d = 2.0 * (std::pow(y, 2.0 - power) / ((1.0 - power) * (2.0 - power)) -
                       y * std::pow(mu, 1.0 - power) / (1.0 - power) +
                       std::pow(mu, 2.0 - power) / (2.0 - power));
        }
        sum += d;
    }
    return sum / static_cast<double>(s.n());
}

double huber(const PairedSeries& s, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("huber: delta must be > 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) {
        const double a = std::fabs(s.y_true[i] - s.y_pred[i]);
        sum += a <= delta ? 0.5 * a * a : delta * (a - 0.5 * delta);
    }
    return sum / static_cast<double>(s.n());
}

}  // namespace metricdiff::regress

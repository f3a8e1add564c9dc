#include "metricdiff/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "metricdiff/special.hpp"

namespace metricdiff::correlate {

namespace {

void check_lengths(const std::vector<double>& x, const std::vector<double>& y,
                   std::size_t min_n, const char* who) {
    if (x.size() != y.size()) throw std::invalid_argument(std::string(who) + ": length mismatch");
    if (x.size() < min_n)
        throw std::invalid_argument(std::string(who) + ": needs at least " +
                                    std::to_string(min_n) + " samples");
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a;
    return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
}

ScalarResult pearson_impl(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return ScalarResult::undefined("constant variable");
    return ScalarResult::ok(sxy / std::sqrt(sxx * syy));
}

}  // namespace

VariablePair::VariablePair(std::vector<double> xs, std::vector<double> ys,
                           std::vector<std::vector<double>> zs)
    : x(std::move(xs)), y(std::move(ys)), covariates(std::move(zs)) {
    if (x.size() != y.size()) throw std::invalid_argument("VariablePair: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("VariablePair: needs at least 2 samples");
    for (const auto& z : covariates)
        if (z.size() != x.size())
            throw std::invalid_argument("VariablePair: covariate length mismatch");
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && v[order[j]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = avg;
        i = j;
    }
    return ranks;
}

ScalarResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
    check_lengths(x, y, 2, "pearson");
    return pearson_impl(x, y);
}

ScalarResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    check_lengths(x, y, 2, "spearman");
    return pearson_impl(average_ranks(x), average_ranks(y));
}

ScalarResult kendall_tau(const std::vector<double>& x, const std::vector<double>& y,
                         KendallVariant variant) {
    check_lengths(x, y, 2, "kendall_tau");
    const std::size_t n = x.size();
    std::int64_t concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j], dy = y[i] - y[j];
            if (dx == 0.0) ++tied_x;        // pairs tied in both count in both totals
            if (dy == 0.0) ++tied_y;
            if (dx == 0.0 || dy == 0.0) continue;
            if ((dx > 0.0) == (dy > 0.0))
                ++concordant;
            else
                ++discordant;
        }
    }
    const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double num = static_cast<double>(concordant - discordant);
    if (variant == KendallVariant::TauA) return ScalarResult::ok(num / n0);
    const double dx = n0 - static_cast<double>(tied_x);
    const double dy = n0 - static_cast<double>(tied_y);
    if (dx <= 0.0 || dy <= 0.0) return ScalarResult::undefined("constant variable");
    return ScalarResult::ok(num / std::sqrt(dx * dy));
}

ScalarResult mutual_information(const std::vector<double>& x, const std::vector<double>& y,
                                std::int64_t bins) {
    check_lengths(x, y, 2, "mutual_information");
    const std::size_t n = x.size();
    const std::size_t b = bins > 0
                              ? static_cast<std::size_t>(bins)
                              : static_cast<std::size_t>(
                                    std::ceil(std::sqrt(static_cast<double>(n))));
    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
    if (*xmin_it == *xmax_it || *ymin_it == *ymax_it)
        return ScalarResult::undefined("degenerate histogram: constant variable");

    auto bin_of = [b](double v, double lo, double hi) {
        const auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(b));
        return std::min(idx, b - 1);  // the maximum lands in the last bin
    };
    std::vector<double> joint(b * b, 0.0), px(b, 0.0), py(b, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bx = bin_of(x[i], *xmin_it, *xmax_it);
        const std::size_t by = bin_of(y[i], *ymin_it, *ymax_it);
        joint[bx * b + by] += inv_n;
        px[bx] += inv_n;
        py[by] += inv_n;
    }
    double mi = 0.0;
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j) {
            const double p = joint[i * b + j];
            if (p > 0.0) mi += p * std::log(p / (px[i] * py[j]));
        }
    return ScalarResult::ok(std::max(mi, 0.0));
}

ScalarResult distance_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    check_lengths(x, y, 2, "distance_correlation");
    const std::size_t n = x.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    // Row means and grand means of the pairwise distance matrices; the
    // centered products are then accumulated in a second pass without ever
    // holding the n x n matrices.
    std::vector<double> ax(n, 0.0), by(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ax[i] += std::fabs(x[i] - x[j]);
            by[i] += std::fabs(y[i] - y[j]);
        }
    for (std::size_t i = 0; i < n; ++i) {
        ax[i] *= inv_n;
        by[i] *= inv_n;
    }
    double agrand = 0.0, bgrand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        agrand += ax[i];
        bgrand += by[i];
    }
    agrand *= inv_n;
    bgrand *= inv_n;

    double cov = 0.0, varx = 0.0, vary = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double A = std::fabs(x[i] - x[j]) - ax[i] - ax[j] + agrand;
            const double B = std::fabs(y[i] - y[j]) - by[i] - by[j] + bgrand;
            cov += A * B;
            varx += A * A;
            vary += B * B;
        }
    cov *= inv_n * inv_n;
    varx *= inv_n * inv_n;
    vary *= inv_n * inv_n;
    if (varx <= 0.0 || vary <= 0.0) return ScalarResult::undefined("constant variable");
    const double r2 = cov / std::sqrt(varx * vary);
    return ScalarResult::ok(std::sqrt(std::max(r2, 0.0)));
}

ScalarResult biweight_midcorrelation(const std::vector<double>& x, const std::vector<double>& y,
                                     BiweightCentering centering, double c) {
    check_lengths(x, y, 2, "biweight_midcorrelation");
    if (!(c > 0.0)) throw std::invalid_argument("biweight_midcorrelation: c must be > 0");
    const std::size_t n = x.size();

    auto weighted_dev = [&](const std::vector<double>& v) {
        double center, spread;
        if (centering == BiweightCentering::MedianMad) {
            center = median_of(v);
            std::vector<double> abs_dev(n);
            for (std::size_t i = 0; i < n; ++i) abs_dev[i] = std::fabs(v[i] - center);
            spread = median_of(std::move(abs_dev));  // unscaled MAD
        } else {
            center = mean_of(v);
            double ss = 0.0;
            for (double a : v) ss += (a - center) * (a - center);
            spread = std::sqrt(ss / static_cast<double>(n - 1));
        }
        std::vector<double> out(n, 0.0);
        if (spread == 0.0) return out;  // every weight vanishes
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (v[i] - center) / (c * spread);
            if (std::fabs(u) < 1.0) {
                const double w = (1.0 - u * u) * (1.0 - u * u);
                out[i] = (v[i] - center) * w;
            }
        }
        return out;
    };

    const auto a = weighted_dev(x);
    const auto b = weighted_dev(y);
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += a[i] * b[i];
        da += a[i] * a[i];
        db += b[i] * b[i];
    }
    if (da == 0.0 || db == 0.0) return ScalarResult::undefined("zero spread");
    return ScalarResult::ok(num / std::sqrt(da * db));
}

ScalarResult percentage_bend(const std::vector<double>& x, const std::vector<double>& y,
                             double beta) {
    check_lengths(x, y, 2, "percentage_bend");
    if (!(beta >= 0.0 && beta < 0.5))
        throw std::invalid_argument("percentage_bend: beta must be in [0, 0.5)");
    const std::size_t n = x.size();

    // One variable's bend transform: deviations from the percentage bend
    // measure of location, clipped to [-1, 1] in omega units.
    auto bend = [&](const std::vector<double>& v, bool& degenerate) {
        const double med = median_of(v);
        std::vector<double> abs_dev(n);
        for (std::size_t i = 0; i < n; ++i) abs_dev[i] = std::fabs(v[i] - med);
        std::sort(abs_dev.begin(), abs_dev.end());
        const auto m = static_cast<std::size_t>(
            std::floor((1.0 - beta) * static_cast<double>(n)));
        const double omega = abs_dev[m == 0 ? 0 : m - 1];
        std::vector<double> out(n, 0.0);
        if (omega == 0.0) {
            degenerate = true;
            return out;
        }
        std::size_t below = 0, above = 0;
        double kept_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double psi = (v[i] - med) / omega;
            if (psi < -1.0)
                ++below;
            else if (psi > 1.0)
                ++above;
            else
                kept_sum += v[i];
        }
        const double loc = (kept_sum + omega * (static_cast<double>(above) -
                                                static_cast<double>(below))) /
                           static_cast<double>(n - below - above);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::clamp((v[i] - loc) / omega, -1.0, 1.0);
        return out;
    };

    bool degenerate = false;
    const auto a = bend(x, degenerate);
    const auto b = bend(y, degenerate);
    if (degenerate) return ScalarResult::undefined("zero bend scale");
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += a[i] * b[i];
        da += a[i] * a[i];
        db += b[i] * b[i];
    }
    if (da == 0.0 || db == 0.0) return ScalarResult::undefined("zero spread");
    return ScalarResult::ok(num / std::sqrt(da * db));
}

ScalarResult shepherd_pi(const std::vector<double>& x, const std::vector<double>& y,
                         double chi2_quantile) {
    check_lengths(x, y, 4, "shepherd_pi");
    if (!(chi2_quantile > 0.0 && chi2_quantile < 1.0))
        throw std::invalid_argument("shepherd_pi: quantile must be in (0,1)");
    const std::size_t n = x.size();
    const double mx = mean_of(x), my = mean_of(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double denom = static_cast<double>(n) - 1.0;
    sxx /= denom;
    syy /= denom;
    sxy /= denom;
    const double det = sxx * syy - sxy * sxy;
    if (det <= 0.0) return ScalarResult::undefined("singular covariance");

    const double cutoff = special::chi_square_quantile(chi2_quantile, 2.0);
    std::vector<double> kept_x, kept_y;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        const double d2 = (syy * dx * dx - 2.0 * sxy * dx * dy + sxx * dy * dy) / det;
        if (d2 <= cutoff) {
            kept_x.push_back(x[i]);
            kept_y.push_back(y[i]);
        }
    }
    if (kept_x.size() < 3) return ScalarResult::undefined("too few points after pruning");
    auto r = spearman(kept_x, kept_y);
    r.note = r.value ? "pruned " + std::to_string(n - kept_x.size()) + " outliers" : r.note;
    return r;
}

ScalarResult partial_correlation(const std::vector<double>& x, const std::vector<double>& y,
                                 const std::vector<std::vector<double>>& covariates) {
    check_lengths(x, y, 3, "partial_correlation");
    const std::size_t n = x.size();
    const std::size_t m = covariates.size();
    for (const auto& z : covariates)
        if (z.size() != n)
            throw std::invalid_argument("partial_correlation: covariate length mismatch");
    if (m == 0) return pearson_impl(x, y);
    if (n < m + 2)
        throw std::invalid_argument("partial_correlation: needs n >= covariates + 2");

    // Least-squares residuals against [1, Z] via normal equations; the
    // covariate count is small so Gaussian elimination is plenty.
    const std::size_t p = m + 1;
    std::vector<double> design(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        design[i * p] = 1.0;
        for (std::size_t j = 0; j < m; ++j) design[i * p + 1 + j] = covariates[j][i];
    }
    auto residuals = [&](const std::vector<double>& target) {
        std::vector<double> ata(p * p, 0.0), atb(p, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < p; ++a) {
                atb[a] += design[i * p + a] * target[i];
                for (std::size_t b = 0; b < p; ++b)
                    ata[a * p + b] += design[i * p + a] * design[i * p + b];
            }
        // Gaussian elimination with partial pivoting.
        std::vector<std::size_t> perm(p);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t col = 0; col < p; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < p; ++r)
                if (std::fabs(ata[r * p + col]) > std::fabs(ata[piv * p + col])) piv = r;
            if (std::fabs(ata[piv * p + col]) < 1e-12)
                throw std::invalid_argument("partial_correlation: rank-deficient covariates");
            if (piv != col) {
                for (std::size_t cc = 0; cc < p; ++cc)
                    std::swap(ata[piv * p + cc], ata[col * p + cc]);
                std::swap(atb[piv], atb[col]);
            }
            for (std::size_t r = col + 1; r < p; ++r) {
                const double f = ata[r * p + col] / ata[col * p + col];
                for (std::size_t cc = col; cc < p; ++cc) ata[r * p + cc] -= f * ata[col * p + cc];
                atb[r] -= f * atb[col];
            }
        }
        std::vector<double> beta(p);
        for (std::size_t r = p; r-- > 0;) {
            double s = atb[r];
            for (std::size_t cc = r + 1; cc < p; ++cc) s -= ata[r * p + cc] * beta[cc];
            beta[r] = s / ata[r * p + r];
        }
        std::vector<double> res(n);
        for (std::size_t i = 0; i < n; ++i) {
            double fit = 0.0;
            for (std::size_t a = 0; a < p; ++a) fit += design[i * p + a] * beta[a];
            res[i] = target[i] - fit;
        }
        return res;
    };

    return pearson_impl(residuals(x), residuals(y));
}

}  // namespace metricdiff::correlate

#include "metricdiff/imgqual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace metricdiff::imgqual {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return n;
}

regress::PairedSeries flattened(const RasterPair& p) {
    return regress::PairedSeries(p.ref, p.test);
}

}  // namespace

RasterPair::RasterPair(std::vector<std::size_t> shape_in, std::vector<double> ref_in,
                       std::vector<double> test_in, std::optional<double> declared)
    : shape(std::move(shape_in)),
      ref(std::move(ref_in)),
      test(std::move(test_in)),
      declared_range(declared) {
    if (shape.empty() || shape.size() > 3)
        throw std::invalid_argument("raster pair: 1 to 3 axes required");
    for (std::size_t s : shape)
        if (s == 0) throw std::invalid_argument("raster pair: zero-extent axis");
    const std::size_t n = product(shape);
    if (ref.size() != n || test.size() != n)
        throw std::invalid_argument("raster pair: value counts do not match the shape");
    for (double v : ref)
        if (!std::isfinite(v)) throw std::invalid_argument("raster pair: non-finite reference");
    for (double v : test)
        if (!std::isfinite(v)) throw std::invalid_argument("raster pair: non-finite test value");
    if (declared_range && !(std::isfinite(*declared_range) && *declared_range > 0.0))
        throw std::invalid_argument("raster pair: declared range must be finite and positive");
}

ScalarResult resolve_range(const RasterPair& p, RangeMode mode) {
    switch (mode) {
        case RangeMode::Declared:
            if (!p.declared_range)
                return ScalarResult::undefined("no declared data range on this pair");
            return ScalarResult::ok(*p.declared_range);
        case RangeMode::ObservedRef: {
            const auto [lo, hi] = std::minmax_element(p.ref.begin(), p.ref.end());
            const double l = *hi - *lo;
            if (l <= 0.0)
                return ScalarResult::undefined("constant reference has zero observed range");
            return ScalarResult::ok(l);
        }
        case RangeMode::Unit:
            return ScalarResult::ok(1.0);
    }
    return ScalarResult::undefined("unreachable");
}

ScalarResult img_mae(const RasterPair& p) {
    return ScalarResult::ok(regress::basic_errors(flattened(p)).mae);
}

ScalarResult img_mse(const RasterPair& p) {
    return ScalarResult::ok(regress::basic_errors(flattened(p)).mse);
}

ScalarResult img_rmse(const RasterPair& p) {
    return ScalarResult::ok(regress::basic_errors(flattened(p)).rmse);
}

ScalarResult img_r_squared(const RasterPair& p, regress::RSquaredVariant variant,
                           std::int64_t n_predictors) {
    return regress::r_squared(flattened(p), variant, n_predictors);
}

ScalarResult psnr(const RasterPair& p, RangeMode mode) {
    const ScalarResult l = resolve_range(p, mode);
    if (!l.value) return l;
    const double mse = regress::basic_errors(flattened(p)).mse;
    if (mse == 0.0) {
        ScalarResult r = ScalarResult::ok(std::numeric_limits<double>::infinity());
        r.note = "identical rasters; +inf sentinel";
        return r;
    }
    return ScalarResult::ok(10.0 * std::log10(*l.value * *l.value / mse));
}

// --- SSIM ---------------------------------------------------------------------

namespace {

struct WindowPlan {
    std::array<std::size_t, 3> ext{1, 1, 1};   // raster extent, padded to 3 axes
    std::array<std::size_t, 3> win{1, 1, 1};   // per-axis window extent
    std::vector<double> weights;               // flattened window kernel, sums to 1
};

WindowPlan plan_window(const RasterPair& p, const SsimParams& params) {
    if (params.window < 1 || params.window % 2 == 0)
        throw std::invalid_argument("ssim: window must be odd and positive");
    if (!(params.k1 > 0.0) || !(params.k2 > 0.0))
        throw std::invalid_argument("ssim: k1 and k2 must be positive");
    if (params.window_kind == SsimWindow::Gaussian && !(params.sigma > 0.0))
        throw std::invalid_argument("ssim: sigma must be positive");

    WindowPlan plan;
    for (std::size_t a = 0; a < p.shape.size(); ++a) {
        plan.ext[a] = p.shape[a];
        if (p.shape[a] == 1) continue;  // degenerate axis keeps window 1
        if (static_cast<std::size_t>(params.window) > p.shape[a])
            throw std::invalid_argument("ssim: window larger than the raster");
        plan.win[a] = static_cast<std::size_t>(params.window);
    }

    std::array<std::vector<double>, 3> axis_w;
    for (std::size_t a = 0; a < 3; ++a) {
        axis_w[a].assign(plan.win[a], 1.0);
        if (params.window_kind == SsimWindow::Gaussian && plan.win[a] > 1) {
            const double c = static_cast<double>(plan.win[a] - 1) / 2.0;
            for (std::size_t i = 0; i < plan.win[a]; ++i) {
                const double o = static_cast<double>(i) - c;
                axis_w[a][i] = std::exp(-(o * o) / (2.0 * params.sigma * params.sigma));
            }
        }
    }
    plan.weights.reserve(plan.win[0] * plan.win[1] * plan.win[2]);
    double total = 0.0;
    for (std::size_t i = 0; i < plan.win[0]; ++i)
        for (std::size_t j = 0; j < plan.win[1]; ++j)
            for (std::size_t k = 0; k < plan.win[2]; ++k) {
                const double w = axis_w[0][i] * axis_w[1][j] * axis_w[2][k];
                plan.weights.push_back(w);
                total += w;
            }
    for (double& w : plan.weights) w /= total;
    return plan;
}

}  // namespace

ScalarResult ssim(const RasterPair& p, const SsimParams& params) {
    const ScalarResult l = resolve_range(p, params.range);
    if (!l.value) return l;
    const WindowPlan plan = plan_window(p, params);
    const double c1 = (params.k1 * *l.value) * (params.k1 * *l.value);
    const double c2 = (params.k2 * *l.value) * (params.k2 * *l.value);

    const auto& ext = plan.ext;
    const auto& win = plan.win;
    const std::size_t stride1 = ext[2];            // step along axis 1
    const std::size_t stride0 = ext[1] * ext[2];   // step along axis 0

    double sum = 0.0;
    std::size_t positions = 0;
    for (std::size_t i = 0; i + win[0] <= ext[0]; ++i)
        for (std::size_t j = 0; j + win[1] <= ext[1]; ++j)
            for (std::size_t k = 0; k + win[2] <= ext[2]; ++k) {
                double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
                std::size_t wi = 0;
                for (std::size_t a = 0; a < win[0]; ++a)
                    for (std::size_t b = 0; b < win[1]; ++b) {
                        std::size_t base = (i + a) * stride0 + (j + b) * stride1 + k;
                        for (std::size_t c = 0; c < win[2]; ++c, ++base, ++wi) {
                            const double w = plan.weights[wi];
                            const double x = p.ref[base];
                            const double y = p.test[base];
                            mx += w * x;
                            my += w * y;
                            sxx += w * x * x;
                            syy += w * y * y;
                            sxy += w * x * y;
                        }
                    }
                const double vx = sxx - mx * mx;
                const double vy = syy - my * my;
                const double cxy = sxy - mx * my;
                const double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
                const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
                sum += num / den;
                ++positions;
            }
    return ScalarResult::ok(sum / static_cast<double>(positions));
}

}  // namespace metricdiff::imgqual

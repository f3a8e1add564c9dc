#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "metricdiff/regress.hpp"
#include "metricdiff/types.hpp"

namespace metricdiff::imgqual {

using metricdiff::ScalarResult;

// A reference/test raster pair over a 1-3 axis grid, single channel. The
// declared range is the dynamic-range constant L a caller asserts for the
// data (e.g. 255 for 8-bit content); it is never inferred from pixel values.
struct RasterPair {
    std::vector<std::size_t> shape;
    std::vector<double> ref;
    std::vector<double> test;
    std::optional<double> declared_range;

    RasterPair(std::vector<std::size_t> shape, std::vector<double> ref,
               std::vector<double> test, std::optional<double> declared_range = std::nullopt);

    [[nodiscard]] std::size_t size() const noexcept { return ref.size(); }
};

// How the dynamic range L is resolved. Range inference is the dominant
// cross-library divergence for PSNR and SSIM, so the policy is always an
// explicit input.
enum class RangeMode : std::uint8_t {
    Declared,     // the pair's declared_range; undefined when absent
    ObservedRef,  // max(ref) - min(ref); undefined when the reference is constant
    Unit,         // L = 1
};

[[nodiscard]] ScalarResult resolve_range(const RasterPair& p, RangeMode mode);

// Flatten both rasters and score them as a regression with truth = ref.
// These are bit-for-bit the regress-module results on the same vectors.
[[nodiscard]] ScalarResult img_mae(const RasterPair& p);
[[nodiscard]] ScalarResult img_mse(const RasterPair& p);
[[nodiscard]] ScalarResult img_rmse(const RasterPair& p);
[[nodiscard]] ScalarResult img_r_squared(const RasterPair& p, regress::RSquaredVariant variant,
                                         std::int64_t n_predictors = 1);

// 10 log10(L^2 / MSE). Identical rasters have MSE = 0 and report the +inf
// sentinel as a valid value. Negative values occur exactly when MSE > L^2.
[[nodiscard]] ScalarResult psnr(const RasterPair& p, RangeMode mode = RangeMode::Declared);

enum class SsimWindow : std::uint8_t {
    Gaussian,  // separable Gaussian weights (window, sigma)
    Uniform,   // unweighted square/cubic window
};

struct SsimParams {
    SsimWindow window_kind = SsimWindow::Gaussian;
    std::int64_t window = 11;  // odd; per-axis; axes of extent 1 use window 1
    double sigma = 1.5;        // Gaussian only
    double k1 = 0.01;
    double k2 = 0.03;
    RangeMode range = RangeMode::Declared;
};

// Mean over valid window positions (no padding) of the standard luminance x
// contrast x structure product with C1 = (k1 L)^2, C2 = (k2 L)^2. Moments are
// window-weighted population moments. 3D rasters use cubic windows; axes of
// extent 1 degenerate to window 1, so a (h, w, 1) raster scores exactly like
// its (h, w) slice.
[[nodiscard]] ScalarResult ssim(const RasterPair& p, const SsimParams& params = {});

}  // namespace metricdiff::imgqual

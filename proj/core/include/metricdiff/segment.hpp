#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "metricdiff/types.hpp"

namespace metricdiff::segment {

using metricdiff::ScalarResult;

// Binary raster mask over a 1-3 axis grid with physical per-axis spacing.
// Voxel (i, j, k) sits at physical coordinates (i*spacing[0], j*spacing[1],
// k*spacing[2]); all distances below are Euclidean in those units.
struct Mask {
    std::vector<std::size_t> shape;    // extent per axis
    std::vector<double> spacing;      // physical step per axis, defaults to 1.0
    std::vector<std::uint8_t> fg;     // row-major, nonzero = foreground

    Mask(std::vector<std::size_t> shape, std::vector<std::uint8_t> fg,
         std::vector<double> spacing = {});

    [[nodiscard]] std::size_t size() const noexcept { return fg.size(); }
    [[nodiscard]] std::size_t foreground_count() const;
};

// Voxelwise one-vs-rest counts with foreground as the positive class.
struct OverlapCounts {
    std::int64_t tp = 0;  // predicted foreground, reference foreground
    std::int64_t fp = 0;  // predicted foreground, reference background
    std::int64_t fn = 0;  // predicted background, reference foreground
    std::int64_t tn = 0;
};

[[nodiscard]] OverlapCounts overlap_counts(const Mask& pred, const Mask& ref);

// Overlap family. The reporting mode selects the class reduction:
// BinaryPositive(1)/PerClass(1) score the foreground, PerClass(0) and
// BinaryPositive(0) the background, Macro averages both classes, Weighted
// weights them by reference support, Micro pools the one-vs-rest counts of
// both classes (which makes micro precision/recall/F1/Dice all equal
// accuracy). 0/0 ratios fall to `empty_policy`: the usual divergence is two
// empty masks, where ecosystems disagree between 1, 0 and NaN.
[[nodiscard]] ScalarResult seg_accuracy(const Mask& pred, const Mask& ref);
[[nodiscard]] ScalarResult seg_precision(const Mask& pred, const Mask& ref, ReportingMode mode,
                                         ZeroDivPolicy empty_policy = ZeroDivPolicy::Undefined);
[[nodiscard]] ScalarResult seg_recall(const Mask& pred, const Mask& ref, ReportingMode mode,
                                      ZeroDivPolicy empty_policy = ZeroDivPolicy::Undefined);
[[nodiscard]] ScalarResult seg_f1(const Mask& pred, const Mask& ref, ReportingMode mode,
                                  ZeroDivPolicy empty_policy = ZeroDivPolicy::Undefined);
[[nodiscard]] ScalarResult dice(const Mask& pred, const Mask& ref, ReportingMode mode,
                                ZeroDivPolicy empty_policy = ZeroDivPolicy::Undefined);
[[nodiscard]] ScalarResult iou(const Mask& pred, const Mask& ref, ReportingMode mode,
                               ZeroDivPolicy empty_policy = ZeroDivPolicy::Undefined);
// Mean of the per-class IoUs; identical to iou under Macro.
[[nodiscard]] ScalarResult mean_iou(const Mask& pred, const Mask& ref,
                                    ZeroDivPolicy empty_policy = ZeroDivPolicy::Undefined);

enum class Connectivity : std::uint8_t {
    Face,    // 4-neighborhood in 2D, 6 in 3D
    Corner,  // 8-neighborhood in 2D, 26 in 3D
};

// Foreground voxels with at least one adjacent background or out-of-grid
// neighbor, as physical points. Axes of extent 1 contribute no neighbors, so
// a (h, w, 1) mask has exactly the 2D boundary of its single slice.
[[nodiscard]] std::vector<std::array<double, 3>> boundary_points(
    const Mask& m, Connectivity conn = Connectivity::Face);

[[nodiscard]] std::vector<std::array<double, 3>> foreground_points(const Mask& m);

enum class HausdorffDirection : std::uint8_t {
    AB,            // max over a's points of the nearest distance into b
    BA,
    SymmetricMax,  // max of the two directed values
    Percentile,    // q-th percentile of both directions' distances pooled
};

enum class PointSet : std::uint8_t { Boundary, AllForeground };

// Percentiles interpolate linearly over the sorted pooled multiset, so
// Percentile with q = 100 reproduces SymmetricMax exactly. Either point set
// empty yields an undefined result.
[[nodiscard]] ScalarResult hausdorff(const Mask& a, const Mask& b,
                                     HausdorffDirection direction = HausdorffDirection::SymmetricMax,
                                     double q = 95.0, PointSet point_set = PointSet::Boundary,
                                     Connectivity conn = Connectivity::Face);

// Boundary precision = fraction of pred boundary points within theta
// (inclusive, physical units) of the ref boundary; recall mirrors it; the
// score is their harmonic mean. Either boundary empty yields undefined.
[[nodiscard]] ScalarResult boundary_f1(const Mask& pred, const Mask& ref, double theta = 1.0,
                                       Connectivity conn = Connectivity::Face);

// Partition-comparison family over the two-segment partitions
// {foreground, background}. All three reduce to the 2x2 contingency table of
// voxel label pairs.
[[nodiscard]] ScalarResult adapted_rand_error(const Mask& pred, const Mask& ref);
[[nodiscard]] ScalarResult adjusted_rand_index(const Mask& pred, const Mask& ref);
// H(pred|ref) + H(ref|pred) in nats.
[[nodiscard]] ScalarResult variation_of_information(const Mask& pred, const Mask& ref);

}  // namespace metricdiff::segment

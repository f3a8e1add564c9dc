#pragma once

#include <optional>
#include <vector>

#include "metricdiff/types.hpp"

namespace metricdiff::cluster {

using metricdiff::ScalarResult;

// Row-major points with a cluster assignment per row. Cluster ids must cover
// 0..k-1 with every cluster non-empty. Provided centers are optional; the
// metrics that can use them say so explicitly.
struct ClusteredData {
    std::vector<double> points;       // n x dim, row-major
    std::size_t dim = 0;
    std::vector<std::size_t> labels;  // cluster id per point
    std::optional<std::vector<double>> centers;  // k x dim when present

    ClusteredData(std::vector<double> pts, std::size_t dimension,
                  std::vector<std::size_t> assignment,
                  std::optional<std::vector<double>> provided_centers = std::nullopt);

    [[nodiscard]] std::size_t n() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    [[nodiscard]] const double* point(std::size_t i) const { return points.data() + i * dim; }

private:
    std::size_t k_ = 0;
};

// Mean silhouette width over all points, Euclidean distances. Points in
// singleton clusters contribute 0. Needs 2 <= k <= n-1.
[[nodiscard]] ScalarResult silhouette(const ClusteredData& d);

// Davies-Bouldin index with recomputed centroids and mean intra-cluster
// distances. Lower is better; identical centroids make it undefined.
[[nodiscard]] ScalarResult davies_bouldin(const ClusteredData& d);

// Calinski-Harabasz ratio of between to within dispersion.
[[nodiscard]] ScalarResult calinski_harabasz(const ClusteredData& d);

enum class WcssCenters {
    RecomputedMeans,  // centroids recomputed from the assignment
    ProvidedCenters,  // caller-supplied centers (e.g. the fitter's own)
};

// Within-cluster sum of squared Euclidean deviations. Means minimize this,
// so the recomputed flavour can never exceed the provided one.
[[nodiscard]] ScalarResult wcss(const ClusteredData& d, WcssCenters source);

}  // namespace metricdiff::cluster

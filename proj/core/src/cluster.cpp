#include "metricdiff/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace metricdiff::cluster {

namespace {

double sq_dist(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

double dist(const double* a, const double* b, std::size_t dim) {
    return std::sqrt(sq_dist(a, b, dim));
}

std::vector<std::size_t> cluster_sizes(const ClusteredData& d) {
    std::vector<std::size_t> sizes(d.k(), 0);
    for (std::size_t l : d.labels) ++sizes[l];
    return sizes;
}

std::vector<double> recomputed_means(const ClusteredData& d) {
    std::vector<double> c(d.k() * d.dim, 0.0);
    const auto sizes = cluster_sizes(d);
    for (std::size_t i = 0; i < d.n(); ++i) {
        const double* p = d.point(i);
        double* target = c.data() + d.labels[i] * d.dim;
        for (std::size_t j = 0; j < d.dim; ++j) target[j] += p[j];
    }
    for (std::size_t l = 0; l < d.k(); ++l)
        for (std::size_t j = 0; j < d.dim; ++j)
            c[l * d.dim + j] /= static_cast<double>(sizes[l]);
    return c;
}

}  // namespace

ClusteredData::ClusteredData(std::vector<double> pts, std::size_t dimension,
                             std::vector<std::size_t> assignment,
                             std::optional<std::vector<double>> provided_centers)
    : points(std::move(pts)), dim(dimension), labels(std::move(assignment)),
      centers(std::move(provided_centers)) {
    if (dim == 0) throw std::invalid_argument("ClusteredData: dimension must be > 0");
    if (labels.empty()) throw std::invalid_argument("ClusteredData: no points");
    if (points.size() != labels.size() * dim)
        throw std::invalid_argument("ClusteredData: points size must be n * dim");
    k_ = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<bool> seen(k_, false);
    for (std::size_t l : labels) seen[l] = true;
    for (std::size_t l = 0; l < k_; ++l)
        if (!seen[l])
            throw std::invalid_argument("ClusteredData: cluster ids must cover 0..k-1");
    if (centers && centers->size() != k_ * dim)
        throw std::invalid_argument("ClusteredData: centers size must be k * dim");
}

ScalarResult silhouette(const ClusteredData& d) {
    const std::size_t n = d.n(), k = d.k();
    if (k < 2) return ScalarResult::undefined("needs at least two clusters");
    if (k > n - 1) return ScalarResult::undefined("needs k <= n - 1");
    const auto sizes = cluster_sizes(d);

    double total = 0.0;
    std::vector<double> sum_to_cluster(k);
    for (std::size_t i = 0; i < n; ++i) {
        if (sizes[d.labels[i]] == 1) continue;  // singleton scores 0
        std::fill(sum_to_cluster.begin(), sum_to_cluster.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum_to_cluster[d.labels[j]] += dist(d.point(i), d.point(j), d.dim);
        }
        const std::size_t own = d.labels[i];
        const double a = sum_to_cluster[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < k; ++l) {
            if (l == own) continue;
            b = std::min(b, sum_to_cluster[l] / static_cast<double>(sizes[l]));
        }
        const double m = std::max(a, b);
        total += m > 0.0 ? (b - a) / m : 0.0;
    }
    return ScalarResult::ok(total / static_cast<double>(n));
}

ScalarResult davies_bouldin(const ClusteredData& d) {
    const std::size_t k = d.k();
    if (k < 2) return ScalarResult::undefined("needs at least two clusters");
    const auto centers = recomputed_means(d);
    const auto sizes = cluster_sizes(d);

    // Mean distance of members to their centroid.
    std::vector<double> scatter(k, 0.0);
    for (std::size_t i = 0; i < d.n(); ++i)
        scatter[d.labels[i]] += dist(d.point(i), centers.data() + d.labels[i] * d.dim, d.dim);
    for (std::size_t l = 0; l < k; ++l) scatter[l] /= static_cast<double>(sizes[l]);

    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double sep = dist(centers.data() + i * d.dim, centers.data() + j * d.dim, d.dim);
            if (sep == 0.0) return ScalarResult::undefined("coincident centroids");
            worst = std::max(worst, (scatter[i] + scatter[j]) / sep);
        }
        sum += worst;
    }
    return ScalarResult::ok(sum / static_cast<double>(k));
}

ScalarResult calinski_harabasz(const ClusteredData& d) {
    const std::size_t n = d.n(), k = d.k();
    if (k < 2) return ScalarResult::undefined("needs at least two clusters");
    if (n <= k) return ScalarResult::undefined("needs n > k");
    const auto centers = recomputed_means(d);
    const auto sizes = cluster_sizes(d);

    std::vector<double> grand(d.dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d.dim; ++j) grand[j] += d.point(i)[j];
    for (std::size_t j = 0; j < d.dim; ++j) grand[j] /= static_cast<double>(n);

    double between = 0.0;
    for (std::size_t l = 0; l < k; ++l)
        between += static_cast<double>(sizes[l]) *
                   sq_dist(centers.data() + l * d.dim, grand.data(), d.dim);
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        within += sq_dist(d.point(i), centers.data() + d.labels[i] * d.dim, d.dim);
    if (within == 0.0) return ScalarResult::undefined("zero within-cluster dispersion");
    return ScalarResult::ok((between / static_cast<double>(k - 1)) /
                            (within / static_cast<double>(n - k)));
}

ScalarResult wcss(const ClusteredData& d, WcssCenters source) {
    const double* centers = nullptr;
    std::vector<double> recomputed;
    if (source == WcssCenters::RecomputedMeans) {
        recomputed = recomputed_means(d);
        centers = recomputed.data();
    } else {
        if (!d.centers) return ScalarResult::undefined("no provided centers");
        centers = d.centers->data();
    }
    double total = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i)
        total += sq_dist(d.point(i), centers + d.labels[i] * d.dim, d.dim);
    return ScalarResult::ok(total);
}

}  // namespace metricdiff::cluster

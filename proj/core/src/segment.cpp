#include "metricdiff/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace metricdiff::segment {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return n;
}

void require_same_grid(const Mask& a, const Mask& b, const char* who) {
    if (a.shape != b.shape)
        throw std::invalid_argument(std::string(who) + ": grid shapes differ");
    if (a.spacing != b.spacing)
        throw std::invalid_argument(std::string(who) + ": spacings differ");
}

ScalarResult ratio(double num, double den, ZeroDivPolicy policy, const char* what) {
    if (den != 0.0) return ScalarResult::ok(num / den);
    switch (policy) {
        case ZeroDivPolicy::Zero:
            return ScalarResult::fill(0.0, std::string(what) + " is 0/0, filled with 0");
        case ZeroDivPolicy::One:
            return ScalarResult::fill(1.0, std::string(what) + " is 0/0, filled with 1");
        default:
            return ScalarResult::undefined(std::string(what) + " is 0/0");
    }
}

enum class OverlapKind { Precision, Recall, F1, Dice, Iou };

// One-vs-rest score for one class. Class 1 is the foreground; class 0 swaps
// the positive/negative roles.
ScalarResult class_score(const OverlapCounts& c, int cls, OverlapKind kind,
                         ZeroDivPolicy policy) {
    const double tp = static_cast<double>(cls == 1 ? c.tp : c.tn);
    const double fp = static_cast<double>(cls == 1 ? c.fp : c.fn);
    const double fn = static_cast<double>(cls == 1 ? c.fn : c.fp);
    switch (kind) {
        case OverlapKind::Precision: return ratio(tp, tp + fp, policy, "precision");
        case OverlapKind::Recall: return ratio(tp, tp + fn, policy, "recall");
        case OverlapKind::F1:
        case OverlapKind::Dice: return ratio(2.0 * tp, 2.0 * tp + fp + fn, policy, "dice");
        case OverlapKind::Iou: return ratio(tp, tp + fp + fn, policy, "iou");
    }
    return ScalarResult::undefined("unreachable");
}

ScalarResult overlap_score(const Mask& pred, const Mask& ref, ReportingMode mode,
                           OverlapKind kind, ZeroDivPolicy policy) {
    require_same_grid(pred, ref, "overlap");
    const OverlapCounts c = overlap_counts(pred, ref);
    const auto n = static_cast<double>(pred.size());

    switch (mode.kind) {
        case ReportingModeKind::BinaryPositive:
        case ReportingModeKind::PerClass: {
            if (mode.class_index != 0 && mode.class_index != 1)
                throw std::invalid_argument("overlap: class index must be 0 or 1");
            return class_score(c, mode.class_index, kind, policy);
        }
        case ReportingModeKind::Micro: {
            // Pool the one-vs-rest counts of both classes. Every error is one
            // class's FP and the other's FN, so the pooled FP and FN both
            // equal the error count.
            const auto correct = static_cast<double>(c.tp + c.tn);
            const auto errors = static_cast<double>(c.fp + c.fn);
            switch (kind) {
                case OverlapKind::Precision:
                case OverlapKind::Recall:
                    return ratio(correct, correct + errors, policy, "micro score");
                case OverlapKind::F1:
                case OverlapKind::Dice:
                    return ratio(2.0 * correct, 2.0 * correct + 2.0 * errors, policy,
                                 "micro dice");
                case OverlapKind::Iou:
                    return ratio(correct, correct + 2.0 * errors, policy, "micro iou");
            }
            return ScalarResult::undefined("unreachable");
        }
        case ReportingModeKind::Macro:
        case ReportingModeKind::Weighted: {
            const ScalarResult bg = class_score(c, 0, kind, policy);
            const ScalarResult fgs = class_score(c, 1, kind, policy);
            if (!bg.value || !fgs.value)
                return ScalarResult::undefined("a class score is undefined");
            double w_fg = 0.5;
            if (mode.kind == ReportingModeKind::Weighted) {
                if (n == 0.0) return ScalarResult::undefined("empty grid");
                w_fg = static_cast<double>(c.tp + c.fn) / n;  // reference support
            }
            const double v = (1.0 - w_fg) * *bg.value + w_fg * *fgs.value;
            if (bg.filled || fgs.filled)
                return ScalarResult::fill(v, "a class score was convention-filled");
            return ScalarResult::ok(v);
        }
        case ReportingModeKind::Scalar:
            throw std::invalid_argument("overlap: scalar mode has no class reduction");
    }
    return ScalarResult::undefined("unreachable");
}

struct Contingency2x2 {
    // n[i][j]: voxels with pred segment i and ref segment j (0 = background).
    double n[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double total = 0.0;
    [[nodiscard]] double pred_sum(int i) const { return n[i][0] + n[i][1]; }
    [[nodiscard]] double ref_sum(int j) const { return n[0][j] + n[1][j]; }
};

Contingency2x2 contingency(const Mask& pred, const Mask& ref) {
    Contingency2x2 c;
    for (std::size_t v = 0; v < pred.size(); ++v)
        c.n[pred.fg[v] ? 1 : 0][ref.fg[v] ? 1 : 0] += 1.0;
    c.total = static_cast<double>(pred.size());
    return c;
}

double pairs2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

Mask::Mask(std::vector<std::size_t> shape_in, std::vector<std::uint8_t> fg_in,
           std::vector<double> spacing_in)
    : shape(std::move(shape_in)), spacing(std::move(spacing_in)), fg(std::move(fg_in)) {
    if (shape.empty() || shape.size() > 3)
        throw std::invalid_argument("mask: 1 to 3 axes required");
    for (std::size_t s : shape)
        if (s == 0) throw std::invalid_argument("mask: zero-extent axis");
    if (spacing.empty()) spacing.assign(shape.size(), 1.0);
    if (spacing.size() != shape.size())
        throw std::invalid_argument("mask: spacing arity must match the shape");
    for (double s : spacing)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("mask: spacing must be finite and positive");
    if (fg.size() != product(shape))
        throw std::invalid_argument("mask: value count does not match the shape");
}

std::size_t Mask::foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : fg) n += v ? 1 : 0;
    return n;
}

OverlapCounts overlap_counts(const Mask& pred, const Mask& ref) {
    require_same_grid(pred, ref, "overlap_counts");
    OverlapCounts c;
    for (std::size_t v = 0; v < pred.size(); ++v) {
        const bool p = pred.fg[v] != 0, r = ref.fg[v] != 0;
        if (p && r) ++c.tp;
        else if (p) ++c.fp;
        else if (r) ++c.fn;
        else ++c.tn;
    }
    return c;
}

ScalarResult seg_accuracy(const Mask& pred, const Mask& ref) {
    require_same_grid(pred, ref, "seg_accuracy");
    const OverlapCounts c = overlap_counts(pred, ref);
    return ScalarResult::ok(static_cast<double>(c.tp + c.tn) / static_cast<double>(pred.size()));
}

ScalarResult seg_precision(const Mask& pred, const Mask& ref, ReportingMode mode,
                           ZeroDivPolicy empty_policy) {
    return overlap_score(pred, ref, mode, OverlapKind::Precision, empty_policy);
}

ScalarResult seg_recall(const Mask& pred, const Mask& ref, ReportingMode mode,
                        ZeroDivPolicy empty_policy) {
    return overlap_score(pred, ref, mode, OverlapKind::Recall, empty_policy);
}

ScalarResult seg_f1(const Mask& pred, const Mask& ref, ReportingMode mode,
                    ZeroDivPolicy empty_policy) {
    return overlap_score(pred, ref, mode, OverlapKind::F1, empty_policy);
}

ScalarResult dice(const Mask& pred, const Mask& ref, ReportingMode mode,
                  ZeroDivPolicy empty_policy) {
    return overlap_score(pred, ref, mode, OverlapKind::Dice, empty_policy);
}

ScalarResult iou(const Mask& pred, const Mask& ref, ReportingMode mode,
                 ZeroDivPolicy empty_policy) {
    return overlap_score(pred, ref, mode, OverlapKind::Iou, empty_policy);
}

ScalarResult mean_iou(const Mask& pred, const Mask& ref, ZeroDivPolicy empty_policy) {
    return iou(pred, ref, ReportingMode::macro(), empty_policy);
}

// --- point sets -------------------------------------------------------------

namespace {

struct GridWalk {
    const Mask& m;
    std::array<std::size_t, 3> ext{1, 1, 1};

    explicit GridWalk(const Mask& mask) : m(mask) {
        for (std::size_t a = 0; a < m.shape.size(); ++a) ext[a] = m.shape[a];
    }

    [[nodiscard]] std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * ext[1] + j) * ext[2] + k;
    }

    [[nodiscard]] bool fg_at(std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) const {
        if (i < 0 || j < 0 || k < 0) return false;
        if (i >= static_cast<std::ptrdiff_t>(ext[0]) ||
            j >= static_cast<std::ptrdiff_t>(ext[1]) ||
            k >= static_cast<std::ptrdiff_t>(ext[2]))
            return false;
        return m.fg[flat(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                         static_cast<std::size_t>(k))] != 0;
    }

    [[nodiscard]] std::array<double, 3> point(std::size_t i, std::size_t j,
                                              std::size_t k) const {
        std::array<double, 3> p{0.0, 0.0, 0.0};
        const std::size_t idx[3] = {i, j, k};
        for (std::size_t a = 0; a < m.shape.size(); ++a)
            p[a] = static_cast<double>(idx[a]) * m.spacing[a];
        return p;
    }
};

// Neighbor offsets honoring the connectivity model. Axes of extent 1 are
// degenerate: they contribute no offsets, so a single-slice 3D mask gets its
// slice's 2D neighborhood.
std::vector<std::array<int, 3>> neighbor_offsets(std::size_t dims, Connectivity conn) {
    // offsets cover every declared axis, even those of extent 1: a flat 3d
    // slab is all boundary, while a 2d mask never probes the padded axis
    std::vector<std::array<int, 3>> out;
    const int lo[3] = {-1, dims > 1 ? -1 : 0, dims > 2 ? -1 : 0};
    for (int di = lo[0]; di <= -lo[0]; ++di)
        for (int dj = lo[1]; dj <= -lo[1]; ++dj)
            for (int dk = lo[2]; dk <= -lo[2]; ++dk) {
                const int manhattan = std::abs(di) + std::abs(dj) + std::abs(dk);
                if (manhattan == 0) continue;
                if (conn == Connectivity::Face && manhattan != 1) continue;
                out.push_back({di, dj, dk});
            }
    return out;
}

double min_distance2(const std::array<double, 3>& p,
                     const std::vector<std::array<double, 3>>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : set) {
        const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
        best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    return best;
}

// Min distances from every point of `from` into `into`.
std::vector<double> directed_distances(const std::vector<std::array<double, 3>>& from,
                                       const std::vector<std::array<double, 3>>& into) {
    std::vector<double> d;
    d.reserve(from.size());
    for (const auto& p : from) d.push_back(std::sqrt(min_distance2(p, into)));
    return d;
}

double percentile_linear(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double rank = q / 100.0 * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    if (lo + 1 >= v.size()) return v.back();
    const double frac = rank - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace

std::vector<std::array<double, 3>> boundary_points(const Mask& m, Connectivity conn) {
    GridWalk g(m);
    const auto offsets = neighbor_offsets(m.shape.size(), conn);
    std::vector<std::array<double, 3>> out;
    for (std::size_t i = 0; i < g.ext[0]; ++i)
        for (std::size_t j = 0; j < g.ext[1]; ++j)
            for (std::size_t k = 0; k < g.ext[2]; ++k) {
                if (m.fg[g.flat(i, j, k)] == 0) continue;
                bool exposed = false;
                for (const auto& d : offsets) {
                    if (!g.fg_at(static_cast<std::ptrdiff_t>(i) + d[0],
                                 static_cast<std::ptrdiff_t>(j) + d[1],
                                 static_cast<std::ptrdiff_t>(k) + d[2])) {
                        exposed = true;
                        break;
                    }
                }
                if (exposed) out.push_back(g.point(i, j, k));
            }
    return out;
}

std::vector<std::array<double, 3>> foreground_points(const Mask& m) {
    GridWalk g(m);
    std::vector<std::array<double, 3>> out;
    for (std::size_t i = 0; i < g.ext[0]; ++i)
        for (std::size_t j = 0; j < g.ext[1]; ++j)
            for (std::size_t k = 0; k < g.ext[2]; ++k)
                if (m.fg[g.flat(i, j, k)] != 0) out.push_back(g.point(i, j, k));
    return out;
}

ScalarResult hausdorff(const Mask& a, const Mask& b, HausdorffDirection direction, double q,
                       PointSet point_set, Connectivity conn) {
    if (a.shape.size() != b.shape.size())
        throw std::invalid_argument("hausdorff: dimensionality differs");
    if (direction == HausdorffDirection::Percentile && !(q >= 0.0 && q <= 100.0))
        throw std::invalid_argument("hausdorff: q must lie in [0, 100]");
    const auto pts_a = point_set == PointSet::Boundary ? boundary_points(a, conn)
                                                       : foreground_points(a);
    const auto pts_b = point_set == PointSet::Boundary ? boundary_points(b, conn)
                                                       : foreground_points(b);
    if (pts_a.empty() || pts_b.empty())
        return ScalarResult::undefined("empty point set");

    switch (direction) {
        case HausdorffDirection::AB: {
            const auto d = directed_distances(pts_a, pts_b);
            return ScalarResult::ok(*std::max_element(d.begin(), d.end()));
        }
        case HausdorffDirection::BA: {
            const auto d = directed_distances(pts_b, pts_a);
            return ScalarResult::ok(*std::max_element(d.begin(), d.end()));
        }
        case HausdorffDirection::SymmetricMax: {
            const auto dab = directed_distances(pts_a, pts_b);
            const auto dba = directed_distances(pts_b, pts_a);
            return ScalarResult::ok(std::max(*std::max_element(dab.begin(), dab.end()),
                                             *std::max_element(dba.begin(), dba.end())));
        }
        case HausdorffDirection::Percentile: {
            auto pooled = directed_distances(pts_a, pts_b);
            const auto dba = directed_distances(pts_b, pts_a);
            pooled.insert(pooled.end(), dba.begin(), dba.end());
            return ScalarResult::ok(percentile_linear(std::move(pooled), q));
        }
    }
    return ScalarResult::undefined("unreachable");
}

ScalarResult boundary_f1(const Mask& pred, const Mask& ref, double theta, Connectivity conn) {
    require_same_grid(pred, ref, "boundary_f1");
    if (!(theta >= 0.0)) throw std::invalid_argument("boundary_f1: theta must be >= 0");
    const auto bp = boundary_points(pred, conn);
    const auto br = boundary_points(ref, conn);
    if (bp.empty() || br.empty()) return ScalarResult::undefined("empty boundary");

    const double t2 = theta * theta;
    auto matched_fraction = [&](const std::vector<std::array<double, 3>>& from,
                                const std::vector<std::array<double, 3>>& into) {
        std::size_t hit = 0;
        for (const auto& p : from)
            if (min_distance2(p, into) <= t2) ++hit;
        return static_cast<double>(hit) / static_cast<double>(from.size());
    };
    const double precision = matched_fraction(bp, br);
    const double recall = matched_fraction(br, bp);
    if (precision + recall == 0.0)
        return ScalarResult::fill(0.0, "no boundary points matched, filled with 0");
    return ScalarResult::ok(2.0 * precision * recall / (precision + recall));
}

// --- partition comparison -----------------------------------------------------

ScalarResult adapted_rand_error(const Mask& pred, const Mask& ref) {
    require_same_grid(pred, ref, "adapted_rand_error");
    const Contingency2x2 c = contingency(pred, ref);
    double joint = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) joint += pairs2(c.n[i][j]);
    const double in_pred = pairs2(c.pred_sum(0)) + pairs2(c.pred_sum(1));
    const double in_ref = pairs2(c.ref_sum(0)) + pairs2(c.ref_sum(1));
    if (in_pred == 0.0 || in_ref == 0.0)
        return ScalarResult::undefined("a partition has no same-segment pairs");
    const double precision = joint / in_pred;
    const double recall = joint / in_ref;
    if (precision + recall == 0.0) return ScalarResult::ok(1.0);  // F = 0
    return ScalarResult::ok(1.0 - 2.0 * precision * recall / (precision + recall));
}

ScalarResult adjusted_rand_index(const Mask& pred, const Mask& ref) {
    require_same_grid(pred, ref, "adjusted_rand_index");
    const Contingency2x2 c = contingency(pred, ref);
    if (c.total < 2.0) return ScalarResult::undefined("fewer than two voxels");
    double index = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) index += pairs2(c.n[i][j]);
    const double sum_pred = pairs2(c.pred_sum(0)) + pairs2(c.pred_sum(1));
    const double sum_ref = pairs2(c.ref_sum(0)) + pairs2(c.ref_sum(1));
    const double expected = sum_pred * sum_ref / pairs2(c.total);
    const double max_index = 0.5 * (sum_pred + sum_ref);
    if (max_index == expected)
        return ScalarResult::fill(1.0, "degenerate partitions agree by construction");
    return ScalarResult::ok((index - expected) / (max_index - expected));
}

ScalarResult variation_of_information(const Mask& pred, const Mask& ref) {
    require_same_grid(pred, ref, "variation_of_information");
    const Contingency2x2 c = contingency(pred, ref);
    if (c.total == 0.0) return ScalarResult::undefined("empty grid");
    // VI = H(pred) + H(ref) - 2 I(pred, ref), accumulated per joint cell.
    double vi = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double nij = c.n[i][j];
            if (nij == 0.0) continue;
            const double pij = nij / c.total;
            const double pi = c.pred_sum(i) / c.total;
            const double pj = c.ref_sum(j) / c.total;
            vi -= pij * (std::log(pij / pi) + std::log(pij / pj));
        }
    return ScalarResult::ok(std::max(vi, 0.0));
}

}  // namespace metricdiff::segment

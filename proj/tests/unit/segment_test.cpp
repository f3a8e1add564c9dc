#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "metricdiff/segment.hpp"
#include "oracles.hpp"

using namespace metricdiff;
using namespace metricdiff::segment;

namespace {

constexpr double kTight = 1e-12;

Mask line3(std::vector<std::uint8_t> fg) { return Mask({1, 3}, std::move(fg)); }

Mask random_mask(std::mt19937& rng, std::size_t h, std::size_t w, double density) {
    std::bernoulli_distribution bit(density);
    std::vector<std::uint8_t> fg(h * w);
    for (auto& v : fg) v = bit(rng) ? 1 : 0;
    return Mask({h, w}, std::move(fg));
}

}  // namespace

TEST_CASE("Mask validates shape, payload and spacing") {
    CHECK_THROWS_AS(Mask({2, 2}, {1, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Mask({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(Mask({2, 2, 2, 2}, std::vector<std::uint8_t>(16, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(Mask({2, 2}, {1, 0, 1, 0}, {1.0}), std::invalid_argument);
    Mask m({2, 3}, {1, 0, 1, 0, 0, 0});
    CHECK(m.size() == 6);
    CHECK(m.foreground_count() == 2);
}

TEST_CASE("overlap counts on the shifted line example") {
    // pred = {(0,0),(0,1)}, ref = {(0,1),(0,2)}
    auto pred = line3({1, 1, 0});
    auto ref = line3({0, 1, 1});
    auto c = overlap_counts(pred, ref);
    CHECK(c.tp == 1);
    CHECK(c.fp == 1);
    CHECK(c.fn == 1);
    CHECK(c.tn == 0);

    CHECK(dice(pred, ref, ReportingMode::binary_positive(1)).value.value() ==
          doctest::Approx(0.5).epsilon(kTight));
    CHECK(iou(pred, ref, ReportingMode::binary_positive(1)).value.value() ==
          doctest::Approx(1.0 / 3.0).epsilon(kTight));
    CHECK(seg_precision(pred, ref, ReportingMode::binary_positive(1)).value.value() ==
          doctest::Approx(0.5).epsilon(kTight));
    CHECK(seg_recall(pred, ref, ReportingMode::binary_positive(1)).value.value() ==
          doctest::Approx(0.5).epsilon(kTight));
}

TEST_CASE("identical nonempty masks score perfectly") {
    Mask m({2, 2}, {1, 0, 1, 1});
    for (auto mode : {ReportingMode::binary_positive(1), ReportingMode::macro(),
                      ReportingMode::micro()}) {
        CHECK(dice(m, m, mode).value.value() == doctest::Approx(1.0).epsilon(kTight));
        CHECK(iou(m, m, mode).value.value() == doctest::Approx(1.0).epsilon(kTight));
        CHECK(seg_f1(m, m, mode).value.value() == doctest::Approx(1.0).epsilon(kTight));
    }
    CHECK(seg_accuracy(m, m).value.value() == doctest::Approx(1.0).epsilon(kTight));
}

TEST_CASE("foreground-only and class-averaged IoU diverge on sparse masks") {
    // two small disjoint blobs on a big grid
    std::vector<std::uint8_t> a(400, 0), b(400, 0);
    a[0] = 1;
    b[399] = 1;
    Mask pred({20, 20}, a), ref({20, 20}, b);

    CHECK(iou(pred, ref, ReportingMode::binary_positive(1)).value.value() ==
          doctest::Approx(0.0).epsilon(kTight));
    // background overlap dominates the class-averaged number
    auto macro = iou(pred, ref, ReportingMode::macro());
    CHECK(macro.value.value() > 0.45);
    CHECK(mean_iou(pred, ref).value.value() ==
          doctest::Approx(macro.value.value()).epsilon(kTight));
}

TEST_CASE("micro pooling makes precision, recall, F1 and accuracy coincide") {
    std::mt19937 rng(101);
    for (int t = 0; t < 20; ++t) {
        auto pred = random_mask(rng, 8, 9, 0.4);
        auto ref = random_mask(rng, 8, 9, 0.5);
        const double acc = seg_accuracy(pred, ref).value.value();
        CHECK(seg_precision(pred, ref, ReportingMode::micro()).value.value() ==
              doctest::Approx(acc).epsilon(1e-12));
        CHECK(seg_recall(pred, ref, ReportingMode::micro()).value.value() ==
              doctest::Approx(acc).epsilon(1e-12));
        CHECK(seg_f1(pred, ref, ReportingMode::micro()).value.value() ==
              doctest::Approx(acc).epsilon(1e-12));
        CHECK(dice(pred, ref, ReportingMode::micro()).value.value() ==
              doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("dice and iou are the same information") {
    std::mt19937 rng(103);
    for (int t = 0; t < 50; ++t) {
        auto pred = random_mask(rng, 7, 7, 0.5);
        auto ref = random_mask(rng, 7, 7, 0.5);
        auto d = dice(pred, ref, ReportingMode::binary_positive(1));
        auto j = iou(pred, ref, ReportingMode::binary_positive(1));
        if (!d.value || !j.value) continue;
        CHECK(*d.value == doctest::Approx(2.0 * *j.value / (1.0 + *j.value)).epsilon(1e-12));
    }
}

TEST_CASE("empty-vs-empty foreground follows the declared policy") {
    Mask e({2, 2}, {0, 0, 0, 0});
    auto undef = dice(e, e, ReportingMode::binary_positive(1), ZeroDivPolicy::Undefined);
    CHECK_FALSE(undef.value.has_value());
    auto zero = dice(e, e, ReportingMode::binary_positive(1), ZeroDivPolicy::Zero);
    CHECK(zero.value.value() == 0.0);
    CHECK(zero.filled);
    auto one = dice(e, e, ReportingMode::binary_positive(1), ZeroDivPolicy::One);
    CHECK(one.value.value() == 1.0);
    CHECK(one.filled);
}

TEST_CASE("boundary extraction on canonical shapes") {
    // filled 3x3 square: everything except the center
    Mask sq({3, 3}, std::vector<std::uint8_t>(9, 1));
    auto b = boundary_points(sq);
    CHECK(b.size() == 8);
    for (const auto& p : b) CHECK_FALSE((p[0] == 1.0 && p[1] == 1.0));

    // a 1-pixel line is its own boundary
    Mask ln({1, 4}, {1, 1, 1, 1});
    CHECK(boundary_points(ln).size() == 4);

    Mask empty({2, 2}, {0, 0, 0, 0});
    CHECK(boundary_points(empty).empty());
}

TEST_CASE("corner connectivity sees diagonal background") {
    // plus shape: center has all face neighbors foreground but corner gaps
    Mask plus({3, 3}, {0, 1, 0, 1, 1, 1, 0, 1, 0});
    CHECK(boundary_points(plus, Connectivity::Face).size() == 4);
    CHECK(boundary_points(plus, Connectivity::Corner).size() == 5);
}

TEST_CASE("a depth-1 slab declared 3d is boundary everywhere") {
    // every voxel of the slab has an out-of-grid face neighbor along the
    // third axis, unlike the same pixels declared as a 2d mask
    Mask flat3d({3, 3, 1}, std::vector<std::uint8_t>(9, 1));
    Mask flat2d({3, 3}, std::vector<std::uint8_t>(9, 1));
    CHECK(boundary_points(flat3d).size() == 9);
    CHECK(boundary_points(flat2d).size() == 8);
}

TEST_CASE("hausdorff on hand-checked point sets") {
    Mask a({4, 5}, [] {
        std::vector<std::uint8_t> v(20, 0);
        v[0] = 1;  // (0,0)
        return v;
    }());
    Mask b({4, 5}, [] {
        std::vector<std::uint8_t> v(20, 0);
        v[3 * 5 + 4] = 1;  // (3,4)
        return v;
    }());
    for (auto dir : {HausdorffDirection::AB, HausdorffDirection::BA,
                     HausdorffDirection::SymmetricMax}) {
        CHECK(hausdorff(a, b, dir).value.value() == doctest::Approx(5.0).epsilon(kTight));
    }
    CHECK(hausdorff(a, a, HausdorffDirection::SymmetricMax).value.value() ==
          doctest::Approx(0.0).epsilon(kTight));
}

TEST_CASE("hausdorff asymmetry witness") {
    Mask a({1, 11}, [] {
        std::vector<std::uint8_t> v(11, 0);
        v[0] = 1;
        return v;
    }());
    Mask b({1, 11}, [] {
        std::vector<std::uint8_t> v(11, 0);
        v[0] = 1;
        v[10] = 1;
        return v;
    }());
    CHECK(hausdorff(a, b, HausdorffDirection::AB).value.value() ==
          doctest::Approx(0.0).epsilon(kTight));
    CHECK(hausdorff(a, b, HausdorffDirection::BA).value.value() ==
          doctest::Approx(10.0).epsilon(kTight));
    CHECK(hausdorff(a, b, HausdorffDirection::SymmetricMax).value.value() ==
          doctest::Approx(10.0).epsilon(kTight));
}

TEST_CASE("hausdorff respects physical spacing") {
    Mask a({2, 2}, {1, 0, 0, 0}, {2.0, 3.0});
    Mask b({2, 2}, {0, 0, 0, 1}, {2.0, 3.0});
    CHECK(hausdorff(a, b, HausdorffDirection::SymmetricMax).value.value() ==
          doctest::Approx(std::sqrt(13.0)).epsilon(kTight));
}

TEST_CASE("hausdorff agrees with the brute-force oracle") {
    std::mt19937 rng(107);
    for (int t = 0; t < 25; ++t) {
        auto a = random_mask(rng, 9, 8, 0.3);
        auto b = random_mask(rng, 9, 8, 0.3);
        if (a.foreground_count() == 0 || b.foreground_count() == 0) continue;

        auto ba = boundary_points(a);
        auto bb = boundary_points(b);
        CHECK(hausdorff(a, b, HausdorffDirection::AB).value.value() ==
              doctest::Approx(oracles::naive_directed_hausdorff(ba, bb)).epsilon(1e-12));
        CHECK(hausdorff(a, b, HausdorffDirection::SymmetricMax).value.value() ==
              doctest::Approx(oracles::naive_hausdorff(ba, bb)).epsilon(1e-12));

        auto fa = foreground_points(a);
        auto fb = foreground_points(b);
        CHECK(hausdorff(a, b, HausdorffDirection::SymmetricMax, 95.0,
                        PointSet::AllForeground)
                  .value.value() ==
              doctest::Approx(oracles::naive_hausdorff(fa, fb)).epsilon(1e-12));
    }
}

TEST_CASE("percentile hausdorff interpolates up to the maximum") {
    std::mt19937 rng(109);
    for (int t = 0; t < 25; ++t) {
        auto a = random_mask(rng, 9, 9, 0.35);
        auto b = random_mask(rng, 9, 9, 0.35);
        if (a.foreground_count() == 0 || b.foreground_count() == 0) continue;
        const double mx =
            hausdorff(a, b, HausdorffDirection::SymmetricMax).value.value();
        const double p95 =
            hausdorff(a, b, HausdorffDirection::Percentile, 95.0).value.value();
        const double p50 =
            hausdorff(a, b, HausdorffDirection::Percentile, 50.0).value.value();
        const double p100 =
            hausdorff(a, b, HausdorffDirection::Percentile, 100.0).value.value();
        CHECK(p50 <= p95 + 1e-12);
        CHECK(p95 <= mx + 1e-12);
        CHECK(p100 == doctest::Approx(mx).epsilon(1e-12));
        CHECK(hausdorff(a, b, HausdorffDirection::AB).value.value() <= mx + 1e-12);
    }
}

TEST_CASE("hausdorff with an empty side is undefined") {
    Mask full({2, 2}, {1, 1, 1, 1});
    Mask empty({2, 2}, {0, 0, 0, 0});
    CHECK_FALSE(hausdorff(full, empty).value.has_value());
    CHECK_FALSE(hausdorff(empty, full).value.has_value());
}

TEST_CASE("boundary f1 on unit-shifted lines flips with theta") {
    // two horizontal 1-pixel lines, one row apart
    Mask top({3, 4}, {1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0});
    Mask mid({3, 4}, {0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0});
    CHECK(boundary_f1(top, mid, 1.0).value.value() == doctest::Approx(1.0).epsilon(kTight));
    CHECK(boundary_f1(top, mid, 0.5).value.value() == doctest::Approx(0.0).epsilon(kTight));
    CHECK(boundary_f1(top, top, 0.25).value.value() == doctest::Approx(1.0).epsilon(kTight));

    Mask empty({3, 4}, std::vector<std::uint8_t>(12, 0));
    CHECK_FALSE(boundary_f1(top, empty, 1.0).value.has_value());
}

TEST_CASE("partition scores on identical and frozen masks") {
    Mask m({2, 2}, {1, 0, 0, 1});
    CHECK(adapted_rand_error(m, m).value.value() == doctest::Approx(0.0).epsilon(kTight));
    CHECK(adjusted_rand_index(m, m).value.value() == doctest::Approx(1.0).epsilon(kTight));
    CHECK(variation_of_information(m, m).value.value() ==
          doctest::Approx(0.0).epsilon(kTight));

    // pred all foreground, ref half foreground on 4 voxels
    Mask pred({2, 2}, {1, 1, 1, 1});
    Mask ref({2, 2}, {1, 1, 0, 0});
    CHECK(adapted_rand_error(pred, ref).value.value() == doctest::Approx(0.5).epsilon(kTight));
}

TEST_CASE("partition scores match brute-force pair counting") {
    std::mt19937 rng(113);
    for (int t = 0; t < 20; ++t) {
        auto pred = random_mask(rng, 5, 6, 0.5);
        auto ref = random_mask(rng, 5, 6, 0.5);
        std::vector<int> pv, rv;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            pv.push_back(pred.fg[i] ? 1 : 0);
            rv.push_back(ref.fg[i] ? 1 : 0);
        }
        auto oracle = oracles::pair_counting_rand(pv, rv);

        auto ari = adjusted_rand_index(pred, ref);
        REQUIRE(ari.value.has_value());
        CHECK(*ari.value == doctest::Approx(oracle.ari).epsilon(1e-12));

        auto are = adapted_rand_error(pred, ref);
        if (!std::isnan(oracle.are)) {
            REQUIRE(are.value.has_value());
            CHECK(*are.value == doctest::Approx(oracle.are).epsilon(1e-12));
        }

        auto voi = variation_of_information(pred, ref);
        REQUIRE(voi.value.has_value());
        CHECK(*voi.value == doctest::Approx(oracle.voi).epsilon(1e-10));
        CHECK(*voi.value >= 0.0);
    }
}

TEST_CASE("adjusted rand index is chance-corrected") {
    std::mt19937 rng(127);
    auto pred = random_mask(rng, 100, 100, 0.5);
    auto ref = random_mask(rng, 100, 100, 0.5);
    CHECK(std::fabs(adjusted_rand_index(pred, ref).value.value()) < 0.05);
}

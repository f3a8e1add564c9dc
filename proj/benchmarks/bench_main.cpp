#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "metricdiff/classify.hpp"
#include "metricdiff/dataset.hpp"
#include "metricdiff/harness.hpp"
#include "metricdiff/imgqual.hpp"
#include "metricdiff/segment.hpp"
#include "metricdiff/stattest.hpp"

using namespace metricdiff;

namespace {

ConfusionMatrix make_cm(std::size_t k, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> yt(n), yp(n), members(k);
    std::iota(members.begin(), members.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        yt[i] = static_cast<int>(rng() % k);
        yp[i] = static_cast<int>(rng() % k);
    }
    return confusion_matrix(yt, yp, LabelSet(members));
}

void bm_prf_report(benchmark::State& state) {
    const auto cm = make_cm(static_cast<std::size_t>(state.range(0)), 5000, 7);
    for (auto _ : state) benchmark::DoNotOptimize(classify::prf_report(cm));
}
BENCHMARK(bm_prf_report)->Arg(2)->Arg(10)->Arg(50);

void bm_roc_auc(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(rng() % 2);
        s[i] = u(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(classify::roc_auc(y, s, 1));
}
BENCHMARK(bm_roc_auc)->Arg(1000)->Arg(10000);

void bm_mwu_exact(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng) + 0.4;
    for (auto _ : state)
        benchmark::DoNotOptimize(stattest::mann_whitney_u(
            x, y, stattest::MwuStatistic::U1, stattest::RankPMethod::Exact));
}
BENCHMARK(bm_mwu_exact)->Arg(10)->Arg(20);

void bm_permutation_mc(benchmark::State& state) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(30), y(30);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng) + 0.4;
    for (auto _ : state)
        benchmark::DoNotOptimize(stattest::permutation_test(
            x, y, stattest::PermutationStatistic::MeanDiff,
            stattest::PermutationMethod::MonteCarlo, stattest::Tail::TwoSided,
            static_cast<std::size_t>(state.range(0)), 5));
}
BENCHMARK(bm_permutation_mc)->Arg(1000)->Arg(10000);

segment::Mask bench_mask(std::size_t side, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> fg(side * side, 0);
    // a blob plus salt, so boundaries are non-trivial
    for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = 0; j < side; ++j) {
            const double di = static_cast<double>(i) - static_cast<double>(side) / 2.0;
            const double dj = static_cast<double>(j) - static_cast<double>(side) / 2.0;
            if (di * di + dj * dj < static_cast<double>(side * side) / 9.0)
                fg[i * side + j] = 1;
        }
    for (int s = 0; s < 32; ++s) fg[rng() % (side * side)] ^= 1;
    return segment::Mask({side, side}, fg);
}

void bm_hausdorff(benchmark::State& state) {
    const auto a = bench_mask(static_cast<std::size_t>(state.range(0)), 19);
    const auto b = bench_mask(static_cast<std::size_t>(state.range(0)), 23);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            segment::hausdorff(a, b, segment::HausdorffDirection::SymmetricMax));
}
BENCHMARK(bm_hausdorff)->Arg(64)->Arg(128);

void bm_ssim(benchmark::State& state) {
    const std::size_t side = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> ref(side * side), test(side * side);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ref[i] = u(rng);
        test[i] = std::clamp(ref[i] + 0.1 * (u(rng) - 0.5), 0.0, 1.0);
    }
    const imgqual::RasterPair p({side, side}, ref, test, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(imgqual::ssim(p));
}
BENCHMARK(bm_ssim)->Arg(64)->Arg(128);

void bm_harness_sweep(benchmark::State& state) {
    std::mt19937_64 rng(31);
    harness::Dataset d;
    d.task = harness::Task::Classification;
    for (int i = 0; i < 2000; ++i) {
        d.y_true.push_back(static_cast<int>(rng() % 4));
        d.y_pred.push_back(static_cast<int>(rng() % 4));
    }
    harness::RunConfig cfg;
    cfg.task = harness::Task::Classification;
    for (auto _ : state) {
        auto values = harness::run_all(d, cfg);
        benchmark::DoNotOptimize(harness::classify_discrepancies(values));
    }
}
BENCHMARK(bm_harness_sweep);

}  // namespace

BENCHMARK_MAIN();

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "metricdiff/stattest.hpp"
#include "oracles.hpp"

using namespace metricdiff;
using namespace metricdiff::stattest;

namespace {

constexpr double kTight = 1e-12;

std::vector<double> normal_sample(std::mt19937& rng, int n, double mu = 0.0, double sd = 1.0) {
    std::normal_distribution<double> g(mu, sd);
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(g(rng));
    return v;
}

}  // namespace

TEST_CASE("two_sided_from_tails doubles the smaller tail and caps at 1") {
    CHECK(two_sided_from_tails(0.2, 0.8) == doctest::Approx(0.4).epsilon(kTight));
    CHECK(two_sided_from_tails(0.9, 0.3) == doctest::Approx(0.6).epsilon(kTight));
    CHECK(two_sided_from_tails(0.7, 0.6) == doctest::Approx(1.0).epsilon(kTight));
}

TEST_CASE("tail_from_name round trips and rejects junk") {
    CHECK(tail_from_name("two_sided") == Tail::TwoSided);
    CHECK(tail_from_name("greater") == Tail::Greater);
    CHECK(tail_from_name("less") == Tail::Less);
    CHECK_THROWS_AS(tail_from_name("sideways"), std::invalid_argument);
}

TEST_CASE("SampleGroups validates") {
    CHECK_THROWS_AS(SampleGroups({{1.0, 2.0}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(SampleGroups({}), std::invalid_argument);
    SampleGroups s({{1.0, 2.0}, {3.0}});
    CHECK(s.g() == 2);
    CHECK(s.total_n() == 3);
}

TEST_CASE("pooled t test on the shifted quintet") {
    auto r = t_test_pooled({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6});
    CHECK(r.statistic == doctest::Approx(-1.0).epsilon(kTight));
    CHECK(r.df1.value() == doctest::Approx(8.0).epsilon(kTight));
    // p = 2 P(T_8 <= -1), checked against quadrature
    const double expect = 2.0 * oracles::numeric_cdf(oracles::Dist::StudentT, -1.0, 8);
    CHECK(r.p == doctest::Approx(expect).epsilon(1e-8));
    CHECK(r.p == doctest::Approx(0.3466).epsilon(1e-3));

    auto same = t_test_pooled({1, 2, 3}, {1, 2, 3});
    CHECK(same.statistic == doctest::Approx(0.0).epsilon(kTight));
    CHECK(same.p == doctest::Approx(1.0).epsilon(kTight));
}

TEST_CASE("paired t test works on the differences") {
    // x - y = [1, 0, -1, 2]
    auto r = t_test_paired({2, 1, 0, 3}, {1, 1, 1, 1});
    CHECK(r.statistic == doctest::Approx(std::sqrt(3.0 / 5.0)).epsilon(kTight));
    CHECK(r.df1.value() == doctest::Approx(3.0).epsilon(kTight));
    const double expect =
        2.0 * oracles::numeric_cdf(oracles::Dist::StudentT, -std::sqrt(3.0 / 5.0), 3);
    CHECK(r.p == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("welch and pooled agree on the statistic for equal sample sizes") {
    std::mt19937 rng(61);
    for (int t = 0; t < 20; ++t) {
        auto x = normal_sample(rng, 12);
        auto y = normal_sample(rng, 12, 0.5, 2.0);
        auto w = t_test_welch(x, y);
        auto p = t_test_pooled(x, y);
        CHECK(w.statistic == doctest::Approx(p.statistic).epsilon(1e-12));
        CHECK(w.df1.value() <= p.df1.value() + 1e-9);
    }
}

TEST_CASE("z test with known sigma") {
    auto r = z_test({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6}, std::sqrt(2.5));
    CHECK(r.statistic == doctest::Approx(-1.0).epsilon(kTight));
    const double expect = 2.0 * oracles::numeric_cdf(oracles::Dist::Normal, -1.0);
    CHECK(r.p == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("ks statistic is the sup gap between empirical cdfs") {
    auto r = ks_test({1, 2, 3, 4}, {1.5, 2.5, 3.5, 4.5});
    CHECK(r.statistic == doctest::Approx(0.25).epsilon(kTight));

    auto disjoint = ks_test({1, 2, 3, 4}, {10, 11, 12, 13}, KsPMethod::Exact);
    CHECK(disjoint.statistic == doctest::Approx(1.0).epsilon(kTight));
    // only the two fully separated orderings reach D = 1
    CHECK(disjoint.p == doctest::Approx(2.0 / 70.0).epsilon(1e-12));
}

TEST_CASE("ks exact and asymptotic p disagree on tiny samples") {
    std::vector<double> x = {1, 2, 3, 4}, y = {1.5, 2.5, 3.5, 4.5};
    auto exact = ks_test(x, y, KsPMethod::Exact);
    auto asym = ks_test(x, y, KsPMethod::Asymptotic);
    CHECK(exact.statistic == doctest::Approx(asym.statistic).epsilon(kTight));
    CHECK(std::fabs(exact.p - asym.p) > 1e-3);
}

TEST_CASE("shapiro-wilk behaves like a normality score") {
    // near-perfect normal scores: W close to 1, comfortable p
    std::mt19937 rng(67);
    auto x = normal_sample(rng, 30);
    auto nr = shapiro_wilk(x);
    CHECK(nr.statistic > 0.9);
    CHECK(nr.statistic <= 1.0 + 1e-12);
    CHECK(nr.p > 0.01);

    // heavily skewed data: decisively rejected
    std::vector<double> skew;
    for (int i = 0; i < 50; ++i) skew.push_back(std::exp(normal_sample(rng, 1)[0] * 1.5));
    auto sr = shapiro_wilk(skew);
    CHECK(sr.p < 0.01);
    CHECK_THROWS_AS(shapiro_wilk({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("chi-square goodness of fit on the frozen triple") {
    auto r = chi_square_gof({10, 20, 30}, {20, 20, 20});
    CHECK(r.statistic == doctest::Approx(10.0).epsilon(kTight));
    CHECK(r.df1.value() == doctest::Approx(2.0).epsilon(kTight));
    // chi-square sf with two degrees of freedom is exp(-x/2)
    CHECK(r.p == doctest::Approx(std::exp(-5.0)).epsilon(1e-10));
    CHECK_THROWS_AS(chi_square_gof({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("chi-square independence on a 2x2 table") {
    auto r = chi_square_independence({10, 20, 20, 10}, 2, 2);
    CHECK(r.statistic == doctest::Approx(20.0 / 3.0).epsilon(1e-12));
    CHECK(r.df1.value() == doctest::Approx(1.0).epsilon(kTight));
}

TEST_CASE("anova on the arithmetic triple of groups") {
    auto r = anova(SampleGroups({{1, 2, 3}, {2, 3, 4}, {3, 4, 5}}));
    CHECK(r.statistic == doctest::Approx(3.0).epsilon(kTight));
    CHECK(r.df1.value() == doctest::Approx(2.0).epsilon(kTight));
    CHECK(r.df2.value() == doctest::Approx(6.0).epsilon(kTight));
    // F(2, 6) survival at 3 has the closed form (1 + f)⁻³ at f = 1
    CHECK(r.p == doctest::Approx(0.125).epsilon(1e-10));
}

TEST_CASE("two-group anova is the squared pooled t test") {
    std::mt19937 rng(71);
    for (int t = 0; t < 20; ++t) {
        auto x = normal_sample(rng, 9);
        auto y = normal_sample(rng, 14, 0.3);
        auto f = anova(SampleGroups({x, y}));
        auto tt = t_test_pooled(x, y);
        CHECK(f.statistic == doctest::Approx(tt.statistic * tt.statistic).epsilon(1e-10));
        CHECK(f.p == doctest::Approx(tt.p).epsilon(1e-9));
    }
}

TEST_CASE("kruskal-wallis on identical groups is exactly null") {
    auto r = kruskal_wallis(SampleGroups({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}));
    CHECK(r.statistic == doctest::Approx(0.0).epsilon(kTight));
    CHECK(r.p == doctest::Approx(1.0).epsilon(kTight));
}

TEST_CASE("mann-whitney statistic labels on the frozen quartet") {
    std::vector<double> x = {1, 2}, y = {3, 4};
    auto u1 = mann_whitney_u(x, y, MwuStatistic::U1, RankPMethod::Exact);
    auto u2 = mann_whitney_u(x, y, MwuStatistic::U2, RankPMethod::Exact);
    auto w = mann_whitney_u(x, y, MwuStatistic::RankSumW, RankPMethod::Exact);
    CHECK(u1.statistic == doctest::Approx(0.0).epsilon(kTight));
    CHECK(u2.statistic == doctest::Approx(4.0).epsilon(kTight));
    CHECK(w.statistic == doctest::Approx(3.0).epsilon(kTight));
    // the label never changes the evidence
    CHECK(u1.p == doctest::Approx(2.0 / 6.0).epsilon(kTight));
    CHECK(u2.p == doctest::Approx(u1.p).epsilon(kTight));
    CHECK(w.p == doctest::Approx(u1.p).epsilon(kTight));
}

TEST_CASE("mann-whitney identities hold on random data") {
    std::mt19937 rng(73);
    for (int t = 0; t < 50; ++t) {
        auto x = normal_sample(rng, 8);
        auto y = normal_sample(rng, 11, 0.4);
        const double n1 = 8, n2 = 11;
        auto u1 = mann_whitney_u(x, y, MwuStatistic::U1);
        auto u2 = mann_whitney_u(x, y, MwuStatistic::U2);
        auto w = mann_whitney_u(x, y, MwuStatistic::RankSumW);
        CHECK(u1.statistic + u2.statistic == doctest::Approx(n1 * n2).epsilon(1e-12));
        CHECK(w.statistic ==
              doctest::Approx(u1.statistic + n1 * (n1 + 1.0) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("mann-whitney exact p matches the enumeration oracle") {
    std::mt19937 rng(79);
    auto x = normal_sample(rng, 5);
    auto y = normal_sample(rng, 6, 0.8);
    auto r = mann_whitney_u(x, y, MwuStatistic::U1, RankPMethod::Exact);

    auto dist = oracles::exact_mwu_distribution(5, 6);
    const auto ui = static_cast<std::size_t>(std::llround(r.statistic));
    double cdf = 0.0, sf = 0.0;
    for (std::size_t u = 0; u < dist.size(); ++u) {
        if (u <= ui) cdf += dist[u];
        if (u >= ui) sf += dist[u];
    }
    const double expect = std::min(1.0, 2.0 * std::min(cdf, sf));
    CHECK(r.p == doctest::Approx(expect).epsilon(1e-12));

    // normal approximation is a different formula and a visibly different p
    auto normal = mann_whitney_u({1, 2}, {3, 4}, MwuStatistic::U1, RankPMethod::Normal);
    auto exact = mann_whitney_u({1, 2}, {3, 4}, MwuStatistic::U1, RankPMethod::Exact);
    CHECK(std::fabs(normal.p - exact.p) > 0.05);
}

TEST_CASE("wilcoxon signed rank on the frozen differences") {
    // x - y = [1, -2, 3]
    std::vector<double> x = {2, 0, 4}, y = {1, 2, 1};
    auto wp = wilcoxon_signed_rank(x, y, WilcoxonStatistic::WPlus,
                                   WilcoxonZeroPolicy::Wilcoxon, RankPMethod::Exact);
    auto wm = wilcoxon_signed_rank(x, y, WilcoxonStatistic::WMin,
                                   WilcoxonZeroPolicy::Wilcoxon, RankPMethod::Exact);
    CHECK(wp.statistic == doctest::Approx(4.0).epsilon(kTight));
    CHECK(wm.statistic == doctest::Approx(2.0).epsilon(kTight));
    CHECK(wp.p == doctest::Approx(0.75).epsilon(kTight));
    CHECK(wp.p == doctest::Approx(oracles::exhaustive_wilcoxon({1, -2, 3})).epsilon(1e-12));
}

TEST_CASE("wilcoxon zero policies change the ranks, hence the statistic") {
    // x - y = [0, 1, -2, 3]
    std::vector<double> x = {1, 2, 0, 4}, y = {1, 1, 2, 1};
    auto drop = wilcoxon_signed_rank(x, y, WilcoxonStatistic::WPlus,
                                     WilcoxonZeroPolicy::Wilcoxon, RankPMethod::Exact);
    auto pratt = wilcoxon_signed_rank(x, y, WilcoxonStatistic::WPlus,
                                      WilcoxonZeroPolicy::Pratt, RankPMethod::Exact);
    CHECK(drop.statistic == doctest::Approx(4.0).epsilon(kTight));
    CHECK(pratt.statistic == doctest::Approx(6.0).epsilon(kTight));
}

TEST_CASE("f test and bartlett are exactly null on equal spreads") {
    auto f = f_test({1, 2, 3, 4}, {5, 6, 7, 8});
    CHECK(f.statistic == doctest::Approx(1.0).epsilon(kTight));
    CHECK(f.p == doctest::Approx(1.0).epsilon(kTight));

    auto b = bartlett(SampleGroups({{1, 2, 3}, {4, 5, 6}}));
    CHECK(b.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("levene centers coincide on symmetric groups") {
    // mean == median inside every group, so the centered deviations match
    SampleGroups s({{-2, -1, 0, 1, 2}, {-4, -2, 0, 2, 4}});
    auto mean_c = levene(s, LeveneCenter::Mean);
    auto median_c = levene(s, LeveneCenter::Median);
    CHECK(mean_c.statistic == doctest::Approx(median_c.statistic).epsilon(1e-12));
    CHECK(mean_c.p == doctest::Approx(median_c.p).epsilon(1e-12));
}

TEST_CASE("levene centers split on skewed groups") {
    std::mt19937 rng(83);
    std::vector<double> g1, g2;
    for (int i = 0; i < 40; ++i) {
        g1.push_back(std::exp(normal_sample(rng, 1)[0]));
        g2.push_back(2.0 * std::exp(normal_sample(rng, 1)[0]));
    }
    SampleGroups s({g1, g2});
    auto mean_c = levene(s, LeveneCenter::Mean);
    auto median_c = levene(s, LeveneCenter::Median);
    CHECK(std::fabs(mean_c.statistic - median_c.statistic) > 0.001);
}

TEST_CASE("permutation test exact enumeration on the frozen quartet") {
    auto r = permutation_test({1, 2}, {3, 4}, PermutationStatistic::MeanDiff,
                              PermutationMethod::ExactEnumeration);
    CHECK(r.statistic == doctest::Approx(-2.0).epsilon(kTight));
    CHECK(r.p == doctest::Approx(1.0 / 3.0).epsilon(kTight));
    CHECK(r.p ==
          doctest::Approx(oracles::exhaustive_permutation({1, 2}, {3, 4},
                                                          oracles::PermStatistic::MeanDiff))
              .epsilon(1e-12));

    auto null = permutation_test({1, 2}, {1, 2}, PermutationStatistic::MeanDiff,
                                 PermutationMethod::ExactEnumeration);
    CHECK(null.p == doctest::Approx(1.0).epsilon(kTight));
}

TEST_CASE("monte carlo permutation p is seed-stable and near the exact one") {
    std::vector<double> x = {1, 2, 5, 3}, y = {4, 6, 8, 7};
    auto exact = permutation_test(x, y, PermutationStatistic::MeanDiff,
                                  PermutationMethod::ExactEnumeration);
    auto mc1 = permutation_test(x, y, PermutationStatistic::MeanDiff,
                                PermutationMethod::MonteCarlo, Tail::TwoSided, 4000, 99);
    auto mc2 = permutation_test(x, y, PermutationStatistic::MeanDiff,
                                PermutationMethod::MonteCarlo, Tail::TwoSided, 4000, 99);
    CHECK(mc1.p == mc2.p);  // bitwise reproducible
    const double sd = std::sqrt(exact.p * (1.0 - exact.p) / 4000.0);
    CHECK(std::fabs(mc1.p - exact.p) <= 3.0 * sd + 2.0 / 4000.0);
}

TEST_CASE("median statistic is a different permutation family") {
    std::vector<double> x = {1, 2, 9}, y = {3, 4, 5};
    auto mean_r = permutation_test(x, y, PermutationStatistic::MeanDiff,
                                   PermutationMethod::ExactEnumeration);
    auto med_r = permutation_test(x, y, PermutationStatistic::MedianDiff,
                                  PermutationMethod::ExactEnumeration);
    CHECK(mean_r.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(med_r.statistic == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(med_r.p == doctest::Approx(oracles::exhaustive_permutation(
                                         x, y, oracles::PermStatistic::MedianDiff))
                         .epsilon(1e-12));
}

TEST_CASE("exact rank methods degrade to the normal approximation, with a note") {
    // ties: the untied U enumeration does not apply
    std::vector<double> x = {1, 2, 2, 3}, y = {2, 3, 4, 4};
    auto ex = mann_whitney_u(x, y, MwuStatistic::U1, RankPMethod::Exact);
    auto nm = mann_whitney_u(x, y, MwuStatistic::U1, RankPMethod::Normal);
    CHECK(ex.p == nm.p);
    CHECK(ex.note.find("ties") != std::string::npos);
    CHECK(std::get<std::string>(ex.descriptor.params.at("p_method")) == "exact");

    // more nonzero differences than the 2^n enumeration accepts
    std::vector<double> a(25), b(25);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = static_cast<double>(i) * 1.1;
        b[i] = static_cast<double>(i) * 1.1 + ((i % 2 == 0) ? 0.3 : -0.7);
    }
    auto wex = wilcoxon_signed_rank(a, b, WilcoxonStatistic::WPlus,
                                    WilcoxonZeroPolicy::Wilcoxon, RankPMethod::Exact);
    auto wnm = wilcoxon_signed_rank(a, b, WilcoxonStatistic::WPlus,
                                    WilcoxonZeroPolicy::Wilcoxon, RankPMethod::Normal);
    CHECK(wex.p == wnm.p);
    CHECK_FALSE(wex.note.empty());

    // ks exact path counting refuses n1*n2 > 10000 and uses the asymptotic tail
    std::vector<double> big1(150), big2(150);
    for (std::size_t i = 0; i < big1.size(); ++i) {
        big1[i] = static_cast<double>(i);
        big2[i] = static_cast<double>(i) + 0.5;
    }
    auto kex = ks_test(big1, big2, KsPMethod::Exact);
    auto kas = ks_test(big1, big2, KsPMethod::Asymptotic);
    CHECK(kex.p == kas.p);
    CHECK_FALSE(kex.note.empty());
}

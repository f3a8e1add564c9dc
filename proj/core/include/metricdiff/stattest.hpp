#pragma once

#include <cstdint>
#include <vector>

#include "metricdiff/types.hpp"

namespace metricdiff::stattest {

// One or more samples, each non-empty and finite. Group order is meaningful:
// two-sample tests read groups 0 and 1 as (x, y).
struct SampleGroups {
    std::vector<std::vector<double>> groups;

    explicit SampleGroups(std::vector<std::vector<double>> gs);
    [[nodiscard]] std::size_t g() const noexcept { return groups.size(); }
    [[nodiscard]] const std::vector<double>& group(std::size_t i) const { return groups.at(i); }
    [[nodiscard]] std::size_t total_n() const noexcept;
};

enum class Tail { TwoSided, Greater, Less };

[[nodiscard]] Tail tail_from_name(const std::string& name);

// Two-sided p-values are always 2 * min(lower tail, upper tail), capped at 1.
// Doubling a single tail without the min can exceed 1 on skewed or discrete
// distributions; that mistake is exactly what the harness flags as a BUG.
[[nodiscard]] double two_sided_from_tails(double cdf, double sf);

// --- location tests ---------------------------------------------------------

[[nodiscard]] TestResult t_test_pooled(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       Tail tail = Tail::TwoSided);
[[nodiscard]] TestResult t_test_welch(const std::vector<double>& x,
                                      const std::vector<double>& y,
                                      Tail tail = Tail::TwoSided);
[[nodiscard]] TestResult t_test_paired(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       Tail tail = Tail::TwoSided);
// sigma <= 0 borrows the pooled sample deviation as if it were known.
[[nodiscard]] TestResult z_test(const std::vector<double>& x, const std::vector<double>& y,
                                double sigma = 0.0, Tail tail = Tail::TwoSided);

// --- distribution shape -----------------------------------------------------

enum class KsPMethod {
    Asymptotic,  // Kolmogorov series on the effective sample size
    Exact,       // lattice-path count; needs n1*n2 <= 10000 and assumes no ties
};

[[nodiscard]] TestResult ks_test(const std::vector<double>& x, const std::vector<double>& y,
                                 KsPMethod method = KsPMethod::Asymptotic);

// Royston's approximation, 3 <= n <= 5000.
[[nodiscard]] TestResult shapiro_wilk(const std::vector<double>& x);

[[nodiscard]] TestResult chi_square_gof(const std::vector<double>& observed,
                                        const std::vector<double>& expected);
// Independence on an r x c count table (row-major). No continuity correction.
[[nodiscard]] TestResult chi_square_independence(const std::vector<double>& table,
                                                 std::size_t rows, std::size_t cols);

[[nodiscard]] TestResult anova(const SampleGroups& s);

// --- rank tests --------------------------------------------------------------

enum class MwuStatistic : std::uint8_t {
    U1,        // pairs where x outranks y (ties half)
    U2,        // the complementary count, n1*n2 - U1
    RankSumW,  // rank sum of the first sample, U1 + n1(n1+1)/2
};
enum class RankPMethod {
    Normal,  // tie-corrected normal approximation
    Exact,   // full null distribution; small samples, no ties
};

[[nodiscard]] TestResult mann_whitney_u(const std::vector<double>& x,
                                        const std::vector<double>& y,
                                        MwuStatistic statistic = MwuStatistic::U1,
                                        RankPMethod method = RankPMethod::Normal,
                                        bool continuity = true, Tail tail = Tail::TwoSided);

[[nodiscard]] TestResult kruskal_wallis(const SampleGroups& s);

enum class WilcoxonZeroPolicy {
    Wilcoxon,  // zero differences discarded before ranking
    Pratt,     // zero differences ranked, their ranks then discarded
};
enum class WilcoxonStatistic : std::uint8_t {
    WPlus,  // rank sum of positive differences
    WMin,   // min of the positive and negative rank sums
};

[[nodiscard]] TestResult wilcoxon_signed_rank(const std::vector<double>& x,
                                              const std::vector<double>& y,
                                              WilcoxonStatistic statistic = WilcoxonStatistic::WPlus,
                                              WilcoxonZeroPolicy zeros = WilcoxonZeroPolicy::Wilcoxon,
                                              RankPMethod method = RankPMethod::Normal,
                                              Tail tail = Tail::TwoSided);

// --- spread tests -------------------------------------------------------------

[[nodiscard]] TestResult f_test(const std::vector<double>& x, const std::vector<double>& y,
                                Tail tail = Tail::TwoSided);

[[nodiscard]] TestResult bartlett(const SampleGroups& s);

enum class LeveneCenter {
    Mean,     // classic form
    Median,   // Brown-Forsythe form
    Trimmed,  // trimmed-mean form; alpha cut from each tail
};

[[nodiscard]] TestResult levene(const SampleGroups& s, LeveneCenter center = LeveneCenter::Median,
                                double trim_alpha = 0.1);

// --- resampling ---------------------------------------------------------------

enum class PermutationStatistic { MeanDiff, MedianDiff };
enum class PermutationMethod {
    ExactEnumeration,  // all C(n1+n2, n1) splits; refuses more than 1e6
    MonteCarlo,        // seeded resamples with the add-one correction
};

// Monte Carlo resamples are generated counter-style: resample i depends only
// on (seed, i), so results are identical no matter how work is scheduled.
[[nodiscard]] TestResult permutation_test(const std::vector<double>& x,
                                          const std::vector<double>& y,
                                          PermutationStatistic statistic =
                                              PermutationStatistic::MeanDiff,
                                          PermutationMethod method =
                                              PermutationMethod::ExactEnumeration,
                                          Tail tail = Tail::TwoSided,
                                          std::size_t n_resamples = 10000,
                                          std::uint64_t seed = 0);

}  // namespace metricdiff::stattest

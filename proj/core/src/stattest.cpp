#include "metricdiff/stattest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "metricdiff/correlate.hpp"  // average_ranks
#include "metricdiff/registry.hpp"
#include "metricdiff/special.hpp"

namespace metricdiff::stattest {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double a : v) s += (a - m) * (a - m);
    return s / (static_cast<double>(v.size()) - 1.0);
}

double tail_p(Tail tail, double cdf, double sf) {
    switch (tail) {
        case Tail::TwoSided: return two_sided_from_tails(cdf, sf);
        case Tail::Greater: return sf;
        case Tail::Less: return cdf;
    }
    return kNaN;
}

std::string tail_name(Tail t) {
    switch (t) {
        case Tail::TwoSided: return "two_sided";
        case Tail::Greater: return "greater";
        case Tail::Less: return "less";
    }
    return "?";
}

ConventionDescriptor make_desc(MetricId id, std::string family,
                               std::map<std::string, ParamValue> params = {}) {
    ConventionDescriptor d;
    d.metric = id;
    d.formula_family = std::move(family);
    d.reporting = ReportingMode::scalar();
    d.params = std::move(params);
    return d;
}

TestResult undefined_result(ConventionDescriptor d, std::string why) {
    TestResult r;
    r.descriptor = std::move(d);
    r.statistic = kNaN;
    r.p = kNaN;
    r.statistic_valid = Validity::Undefined;
    r.p_valid = Validity::Undefined;
    r.note = std::move(why);
    return r;
}

// Deterministic counter-based generator: every draw stream is a pure function
// of (seed, counter), so parallel or reordered evaluation cannot change it.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
    SplitMix64 g{seed ^ (counter * 0xD1342543DE82EF95ull + 0x632BE59BD9B4E019ull)};
    g.next();
    return g.next();
}

std::uint64_t bounded(SplitMix64& g, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // rejection keeps draws unbiased
    for (;;) {
        const std::uint64_t r = g.next();
        if (r >= threshold) return r % n;
    }
}

}  // namespace

SampleGroups::SampleGroups(std::vector<std::vector<double>> gs) : groups(std::move(gs)) {
    if (groups.empty()) throw std::invalid_argument("SampleGroups: no groups");
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("SampleGroups: empty group");
        for (double v : g)
            if (!std::isfinite(v)) throw std::invalid_argument("SampleGroups: non-finite value");
    }
}

std::size_t SampleGroups::total_n() const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
}

Tail tail_from_name(const std::string& name) {
    if (name == "two_sided") return Tail::TwoSided;
    if (name == "greater") return Tail::Greater;
    if (name == "less") return Tail::Less;
    throw std::invalid_argument("unknown tail '" + name + "'");
}

double two_sided_from_tails(double cdf, double sf) {
    return std::min(1.0, 2.0 * std::min(cdf, sf));
}

// --- location tests ----------------------------------------------------------

namespace {

TestResult t_like_result(MetricId id, const std::string& family, Tail tail, double t_stat,
                         double df) {
    auto d = make_desc(id, family, {{"tail", tail_name(tail)}});
    if (!std::isfinite(t_stat)) return undefined_result(std::move(d), "zero variance");
    const double cdf = special::student_t_cdf(t_stat, df);
    const double sf = special::student_t_sf(t_stat, df);
    return make_test_result(std::move(d), t_stat, tail_p(tail, cdf, sf), df);
}

}  // namespace

TestResult t_test_pooled(const std::vector<double>& x, const std::vector<double>& y, Tail tail) {
    const auto n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    if (x.size() < 2 || y.size() < 2)
        throw std::invalid_argument("t_test_pooled: each sample needs n >= 2");
    const double df = n1 + n2 - 2.0;
    const double sp2 = ((n1 - 1.0) * sample_variance(x) + (n2 - 1.0) * sample_variance(y)) / df;
    const double se = std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
    const double t = se > 0.0 ? (mean_of(x) - mean_of(y)) / se
                              : std::numeric_limits<double>::infinity() * 0.0;
    return t_like_result(MetricId::TTestIndependent, "pooled", tail, t, df);
}

TestResult t_test_welch(const std::vector<double>& x, const std::vector<double>& y, Tail tail) {
    const auto n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    if (x.size() < 2 || y.size() < 2)
        throw std::invalid_argument("t_test_welch: each sample needs n >= 2");
    const double v1 = sample_variance(x) / n1, v2 = sample_variance(y) / n2;
    const double se2 = v1 + v2;
    if (se2 <= 0.0)
        return undefined_result(make_desc(MetricId::TTestWelch, "welch",
                                          {{"tail", tail_name(tail)}}),
                                "zero variance");
    const double df = se2 * se2 / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
    const double t = (mean_of(x) - mean_of(y)) / std::sqrt(se2);
    return t_like_result(MetricId::TTestWelch, "welch", tail, t, df);
}

TestResult t_test_paired(const std::vector<double>& x, const std::vector<double>& y, Tail tail) {
    if (x.size() != y.size()) throw std::invalid_argument("t_test_paired: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("t_test_paired: needs n >= 2");
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    const auto n = static_cast<double>(d.size());
    const double sd = std::sqrt(sample_variance(d));
    auto desc = make_desc(MetricId::TTestPaired, "paired", {{"tail", tail_name(tail)}});
    if (sd == 0.0) return undefined_result(std::move(desc), "zero variance of differences");
    const double t = mean_of(d) / (sd / std::sqrt(n));
    return t_like_result(MetricId::TTestPaired, "paired", tail, t, n - 1.0);
}

TestResult z_test(const std::vector<double>& x, const std::vector<double>& y, double sigma,
                  Tail tail) {
    const auto n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    if (x.size() < 2 || y.size() < 2)
        throw std::invalid_argument("z_test: each sample needs n >= 2");
    double s = sigma;
    if (s <= 0.0) {
        const double df = n1 + n2 - 2.0;
        s = std::sqrt(((n1 - 1.0) * sample_variance(x) + (n2 - 1.0) * sample_variance(y)) / df);
    }
    auto d = make_desc(MetricId::ZTest, "known_sigma",
                       {{"sigma", sigma}, {"tail", tail_name(tail)}});
    if (s == 0.0) return undefined_result(std::move(d), "zero deviation");
    const double z = (mean_of(x) - mean_of(y)) / (s * std::sqrt(1.0 / n1 + 1.0 / n2));
    return make_test_result(std::move(d), z,
                            tail_p(tail, special::normal_cdf(z), special::normal_sf(z)));
}

// --- Kolmogorov-Smirnov --------------------------------------------------------

namespace {

// Scaled statistic max |i*n2 - j*n1| over the merged sweep; exact integer.
std::int64_t ks_scaled_statistic(std::vector<double> xs, std::vector<double> ys) {
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const auto n1 = static_cast<std::int64_t>(xs.size());
    const auto n2 = static_cast<std::int64_t>(ys.size());
    std::size_t i = 0, j = 0;
    std::int64_t best = 0;
    while (i < xs.size() || j < ys.size()) {
        const double v = (j >= ys.size() || (i < xs.size() && xs[i] <= ys[j])) ? xs[i] : ys[j];
        while (i < xs.size() && xs[i] == v) ++i;
        while (j < ys.size() && ys[j] == v) ++j;
        best = std::max<std::int64_t>(best, std::llabs(static_cast<std::int64_t>(i) * n2 -
                                                       static_cast<std::int64_t>(j) * n1));
    }
    return best;
}

// Fraction of monotone lattice paths staying strictly inside the band
// |i*n2 - j*n1| < d. 1 minus this is the exact null P(D >= observed) for
// continuous data.
double ks_exact_sf(std::size_t n1, std::size_t n2, std::int64_t d) {
    if (d <= 0) return 1.0;
    std::vector<long double> col(n2 + 1, 0.0L);
    auto inside = [&](std::size_t i, std::size_t j) {
        return std::llabs(static_cast<std::int64_t>(i) * static_cast<std::int64_t>(n2) -
                          static_cast<std::int64_t>(j) * static_cast<std::int64_t>(n1)) < d;
    };
    col[0] = 1.0L;
    for (std::size_t j = 1; j <= n2; ++j) col[j] = inside(0, j) ? col[j - 1] : 0.0L;
    for (std::size_t i = 1; i <= n1; ++i) {
        std::vector<long double> next(n2 + 1, 0.0L);
        next[0] = inside(i, 0) ? col[0] : 0.0L;
        for (std::size_t j = 1; j <= n2; ++j)
            next[j] = inside(i, j) ? col[j] + next[j - 1] : 0.0L;
        col.swap(next);
    }
    long double binom = 1.0L;
    for (std::size_t i = 1; i <= n1; ++i)
        binom = binom * static_cast<long double>(n2 + i) / static_cast<long double>(i);
    const double p = static_cast<double>(1.0L - col[n2] / binom);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TestResult ks_test(const std::vector<double>& x, const std::vector<double>& y,
                   KsPMethod method) {
    if (x.empty() || y.empty()) throw std::invalid_argument("ks_test: empty sample");
    const auto n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    const std::int64_t scaled = ks_scaled_statistic(x, y);
    const double d_stat = static_cast<double>(scaled) / (n1 * n2);

    auto desc = make_desc(MetricId::KsTest, "two_sample_sup",
                          {{"p_method", std::string(method == KsPMethod::Exact ? "exact"
                                                                               : "asymptotic")}});
    double p;
    std::string note;
    if (method == KsPMethod::Exact && x.size() * y.size() <= 10000) {
        p = ks_exact_sf(x.size(), y.size(), scaled);
    } else {
        if (method == KsPMethod::Exact)
            note = "sample too large for exact path counting, asymptotic p used";
        const double en = std::sqrt(n1 * n2 / (n1 + n2));
        p = special::kolmogorov_sf((en + 0.12 + 0.11 / en) * d_stat);
    }
    auto result = make_test_result(std::move(desc), d_stat, p);
    result.note = std::move(note);
    return result;
}

// --- Shapiro-Wilk ---------------------------------------------------------------

namespace {

double poly(const double* coef, int n, double x) {
    double r = 0.0;
    for (int i = n - 1; i >= 0; --i) r = r * x + coef[i];
    return r;
}

}  // namespace

TestResult shapiro_wilk(const std::vector<double>& x) {
    auto desc = make_desc(MetricId::ShapiroWilk, "royston");
    const std::size_t n = x.size();
    if (n < 3 || n > 5000)
        throw std::invalid_argument("shapiro_wilk: n must be within [3, 5000]");
    std::vector<double> s(x);
    std::sort(s.begin(), s.end());
    if (s.front() == s.back()) return undefined_result(std::move(desc), "all values identical");

    const auto an = static_cast<double>(n);
    std::vector<double> m(n);
    double ssumm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = special::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
        ssumm2 += m[i] * m[i];
    }

    std::vector<double> a(n);
    if (n == 3) {
        a[0] = -std::sqrt(0.5);
        a[1] = 0.0;
        a[2] = std::sqrt(0.5);
    } else {
        static const double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
        static const double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
        const double rsn = 1.0 / std::sqrt(an);
        const double norm = std::sqrt(ssumm2);
        const double a_n = m[n - 1] / norm + poly(c1, 6, rsn);
        if (n <= 5) {
            const double phi = (ssumm2 - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * a_n * a_n);
            const double sp = std::sqrt(phi);
            for (std::size_t i = 1; i + 1 < n; ++i) a[i] = m[i] / sp;
            a[n - 1] = a_n;
            a[0] = -a_n;
        } else {
            const double a_n1 = m[n - 2] / norm + poly(c2, 6, rsn);
            const double phi =
                (ssumm2 - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
                (1.0 - 2.0 * a_n * a_n - 2.0 * a_n1 * a_n1);
            const double sp = std::sqrt(phi);
            for (std::size_t i = 2; i + 2 < n; ++i) a[i] = m[i] / sp;
            a[n - 1] = a_n;
            a[n - 2] = a_n1;
            a[0] = -a_n;
            a[1] = -a_n1;
        }
    }

    const double mean = mean_of(s);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += a[i] * s[i];
        den += (s[i] - mean) * (s[i] - mean);
    }
    double w = num * num / den;
    w = std::min(w, 1.0);

    double p;
    if (n == 3) {
        const double stqr = std::asin(std::sqrt(0.75));
        p = (6.0 / M_PI) * (std::asin(std::sqrt(w)) - stqr);
        p = std::clamp(p, 0.0, 1.0);
    } else if (n <= 11) {
        static const double c3[4] = {0.5440, -0.39978, 0.025054, -6.714e-4};
        static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
        const double gamma = -2.273 + 0.459 * an;
        const double one_minus = std::max(1.0 - w, 1e-99);
        const double g = -std::log(std::max(gamma - std::log(one_minus), 1e-99));
        const double mu = poly(c3, 4, an);
        const double sigma = std::exp(poly(c4, 4, an));
        p = special::normal_sf((g - mu) / sigma);
    } else {
        static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
        static const double c6[3] = {-0.4803, -0.082676, 0.0030302};
        const double u = std::log(an);
        const double g = std::log(std::max(1.0 - w, 1e-99));
        const double mu = poly(c5, 4, u);
        const double sigma = std::exp(poly(c6, 3, u));
        p = special::normal_sf((g - mu) / sigma);
    }
    return make_test_result(std::move(desc), w, p);
}

// --- chi-square -------------------------------------------------------------------

TestResult chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& expected) {
    if (observed.size() != expected.size())
        throw std::invalid_argument("chi_square_gof: length mismatch");
    if (observed.size() < 2) throw std::invalid_argument("chi_square_gof: needs >= 2 cells");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0))
            throw std::invalid_argument("chi_square_gof: expected counts must be positive");
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    const double df = static_cast<double>(observed.size()) - 1.0;
    return make_test_result(make_desc(MetricId::ChiSquare, "goodness_of_fit"), stat,
                            special::chi_square_sf(stat, df), df);
}

TestResult chi_square_independence(const std::vector<double>& table, std::size_t rows,
                                   std::size_t cols) {
    if (rows < 2 || cols < 2)
        throw std::invalid_argument("chi_square_independence: needs a 2x2 table or larger");
    if (table.size() != rows * cols)
        throw std::invalid_argument("chi_square_independence: table size mismatch");
    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = table[i * cols + j];
            if (v < 0.0) throw std::invalid_argument("chi_square_independence: negative count");
            row_sum[i] += v;
            col_sum[j] += v;
            total += v;
        }
    auto desc = make_desc(MetricId::ChiSquare, "independence");
    for (double r : row_sum)
        if (r == 0.0) return undefined_result(std::move(desc), "empty row");
    for (double c : col_sum)
        if (c == 0.0) return undefined_result(std::move(desc), "empty column");
    double stat = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double e = row_sum[i] * col_sum[j] / total;
            const double d = table[i * cols + j] - e;
            stat += d * d / e;
        }
    const double df = static_cast<double>(rows - 1) * static_cast<double>(cols - 1);
    return make_test_result(std::move(desc), stat, special::chi_square_sf(stat, df), df);
}

// --- ANOVA -----------------------------------------------------------------------

namespace {

struct AnovaParts {
    double f = kNaN;
    double df1 = 0.0, df2 = 0.0;
    bool defined = false;
    bool infinite = false;
};

AnovaParts anova_parts(const std::vector<std::vector<double>>& groups) {
    AnovaParts out;
    const std::size_t g = groups.size();
    std::size_t total = 0;
    double grand_sum = 0.0;
    for (const auto& grp : groups) {
        total += grp.size();
        for (double v : grp) grand_sum += v;
    }
    if (g < 2 || total <= g) return out;
    const double grand = grand_sum / static_cast<double>(total);
    double ssb = 0.0, ssw = 0.0;
    for (const auto& grp : groups) {
        const double m = mean_of(grp);
        ssb += static_cast<double>(grp.size()) * (m - grand) * (m - grand);
        for (double v : grp) ssw += (v - m) * (v - m);
    }
    out.df1 = static_cast<double>(g - 1);
    out.df2 = static_cast<double>(total - g);
    const double msb = ssb / out.df1;
    const double msw = ssw / out.df2;
    if (msw == 0.0) {
        if (msb == 0.0) return out;  // completely degenerate
        out.infinite = true;
        out.defined = true;
        out.f = std::numeric_limits<double>::infinity();
        return out;
    }
    out.f = msb / msw;
    out.defined = true;
    return out;
}

TestResult f_upper_result(ConventionDescriptor desc, const AnovaParts& parts,
                          const char* degenerate_note) {
    if (!parts.defined) return undefined_result(std::move(desc), degenerate_note);
    const double p = parts.infinite ? 0.0 : special::f_sf(parts.f, parts.df1, parts.df2);
    return make_test_result(std::move(desc), parts.f, p, parts.df1, parts.df2);
}

}  // namespace

TestResult anova(const SampleGroups& s) {
    if (s.g() < 2) throw std::invalid_argument("anova: needs at least two groups");
    if (s.total_n() <= s.g()) throw std::invalid_argument("anova: needs n > g");
    return f_upper_result(make_desc(MetricId::Anova, "one_way_f"), anova_parts(s.groups),
                          "zero dispersion");
}

// --- rank tests ---------------------------------------------------------------------

namespace {

// Sum over tie groups of t^3 - t in a pooled sample.
double tie_term(const std::vector<double>& pooled_sorted) {
    double sum = 0.0;
    std::size_t i = 0;
    while (i < pooled_sorted.size()) {
        std::size_t j = i;
        while (j < pooled_sorted.size() && pooled_sorted[j] == pooled_sorted[i]) ++j;
        const auto t = static_cast<double>(j - i);
        sum += t * t * t - t;
        i = j;
    }
    return sum;
}

bool has_ties(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
}

// Null distribution of U over all C(m+n, m) arrangements, as probabilities.
// Recurrence on the last pooled element: it is either an x (contributing n
// pairs) or a y.
std::vector<double> exact_u_distribution(std::size_t m, std::size_t n) {
    const std::size_t umax = m * n;
    std::vector<std::vector<double>> dp(m + 1, std::vector<double>(umax + 1, 0.0));
    for (std::size_t mm = 0; mm <= m; ++mm) dp[mm][0] = 1.0;  // n = 0 base
    for (std::size_t nn = 1; nn <= n; ++nn) {
        // dp becomes N(mm, nn, u); overwrite in place, ascending mm.
        for (std::size_t mm = 1; mm <= m; ++mm)
            for (std::size_t u = 0; u <= mm * nn; ++u) {
                const double from_x = u >= nn ? dp[mm - 1][u - nn] : 0.0;
                dp[mm][u] = from_x + dp[mm][u];  // dp[mm][u] still holds N(mm, nn-1, u)
            }
    }
    double total = 0.0;
    for (double c : dp[m]) total += c;
    for (double& c : dp[m]) c /= total;
    return dp[m];
}

}  // namespace

TestResult mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y,
                          MwuStatistic statistic, RankPMethod method, bool continuity,
                          Tail tail) {
    if (x.empty() || y.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
    const auto n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    std::vector<double> pooled(x);
    pooled.insert(pooled.end(), y.begin(), y.end());
    const auto ranks = correlate::average_ranks(pooled);
    double r1 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r1 += ranks[i];

    const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    const double u2 = n1 * n2 - u1;
    double stat_value = u1;
    std::string stat_name = "u1";
    if (statistic == MwuStatistic::U2) {
        stat_value = u2;
        stat_name = "u2";
    } else if (statistic == MwuStatistic::RankSumW) {
        stat_value = r1;
        stat_name = "rank_sum_w";
    }

    std::map<std::string, ParamValue> params{
        {"statistic", stat_name},
        {"tail", tail_name(tail)},
        {"p_method", std::string(method == RankPMethod::Exact ? "exact" : "normal")}};
    if (method == RankPMethod::Normal) params["continuity"] = std::int64_t{continuity ? 1 : 0};
    auto desc = make_desc(MetricId::MannWhitneyU, "rank_sum", std::move(params));

    // The p-value is always derived from U1; relabeling the statistic as U2
    // or W shifts the number reported, never the evidence.
    bool exact = method == RankPMethod::Exact;
    std::string note;
    if (exact && has_ties(pooled)) {
        // R's wilcox.test convention: the untied enumeration does not apply,
        // fall back to the tie-corrected normal approximation
        exact = false;
        note = "ties present, exact enumeration replaced by normal approximation";
    } else if (exact && x.size() * y.size() > 10000) {
        exact = false;
        note = "sample too large for exact enumeration, normal approximation used";
    }
    double p;
    if (exact) {
        const auto dist = exact_u_distribution(x.size(), y.size());
        const auto ui = static_cast<std::size_t>(std::llround(u1));
        double cdf = 0.0, sf = 0.0;
        for (std::size_t u = 0; u < dist.size(); ++u) {
            if (u <= ui) cdf += dist[u];
            if (u >= ui) sf += dist[u];
        }
        p = tail_p(tail, cdf, sf);
        p = std::min(p, 1.0);
    } else {
        const double N = n1 + n2;
        std::vector<double> sorted(pooled);
        std::sort(sorted.begin(), sorted.end());
        const double ties = tie_term(sorted);
        const double sigma2 = n1 * n2 / 12.0 * ((N + 1.0) - ties / (N * (N - 1.0)));
        if (sigma2 <= 0.0) return undefined_result(std::move(desc), "all values tied");
        const double sigma = std::sqrt(sigma2);
        const double mu = n1 * n2 / 2.0;
        const double cc = continuity ? 0.5 : 0.0;
        switch (tail) {
            case Tail::TwoSided: {
                const double z = (std::fabs(u1 - mu) - cc) / sigma;
                p = std::min(1.0, 2.0 * special::normal_sf(z));
                break;
            }
            case Tail::Greater:
                p = special::normal_sf((u1 - mu - cc) / sigma);
                break;
            case Tail::Less:
                p = special::normal_cdf((u1 - mu + cc) / sigma);
                break;
            default:
                p = kNaN;
        }
    }
    auto result = make_test_result(std::move(desc), stat_value, p);
    result.note = std::move(note);
    return result;
}

TestResult kruskal_wallis(const SampleGroups& s) {
    const std::size_t g = s.g();
    if (g < 2) throw std::invalid_argument("kruskal_wallis: needs at least two groups");
    std::vector<double> pooled;
    for (const auto& grp : s.groups) pooled.insert(pooled.end(), grp.begin(), grp.end());
    const auto N = static_cast<double>(pooled.size());
    const auto ranks = correlate::average_ranks(pooled);

    auto desc = make_desc(MetricId::KruskalWallis, "tie_corrected_h");
    double h = 0.0;
    std::size_t offset = 0;
    for (const auto& grp : s.groups) {
        double r = 0.0;
        for (std::size_t i = 0; i < grp.size(); ++i) r += ranks[offset + i];
        h += r * r / static_cast<double>(grp.size());
        offset += grp.size();
    }
    h = 12.0 / (N * (N + 1.0)) * h - 3.0 * (N + 1.0);
    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    const double correction = 1.0 - tie_term(sorted) / (N * N * N - N);
    if (correction <= 0.0) return undefined_result(std::move(desc), "all values tied");
    h /= correction;
    const double df = static_cast<double>(g - 1);
    return make_test_result(std::move(desc), h, special::chi_square_sf(h, df), df);
}

TestResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y,
                                WilcoxonStatistic statistic, WilcoxonZeroPolicy zeros,
                                RankPMethod method, Tail tail) {
    if (x.size() != y.size()) throw std::invalid_argument("wilcoxon_signed_rank: length mismatch");
    if (x.empty()) throw std::invalid_argument("wilcoxon_signed_rank: empty sample");
    std::vector<double> d;
    d.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d.push_back(x[i] - y[i]);

    std::size_t n_zero = 0;
    if (zeros == WilcoxonZeroPolicy::Wilcoxon) {
        std::vector<double> nz;
        for (double v : d)
            if (v != 0.0) nz.push_back(v);
        n_zero = 0;
        d = std::move(nz);
    } else {
        for (double v : d)
            if (v == 0.0) ++n_zero;
    }

    auto desc = make_desc(
        MetricId::WilcoxonSignedRank, "signed_rank",
        {{"statistic", std::string(statistic == WilcoxonStatistic::WPlus ? "w_plus" : "w_min")},
         {"tail", tail_name(tail)},
         {"zero_policy", std::string(zeros == WilcoxonZeroPolicy::Wilcoxon ? "wilcoxon" : "pratt")},
         {"p_method", std::string(method == RankPMethod::Exact ? "exact" : "normal")}});
    if (d.empty() || d.size() == n_zero)
        return undefined_result(std::move(desc), "no nonzero differences");

    std::vector<double> abs_d(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) abs_d[i] = std::fabs(d[i]);
    const auto ranks = correlate::average_ranks(abs_d);

    double w_plus = 0.0, w_minus = 0.0;
    std::vector<double> nonzero_ranks;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] > 0.0) w_plus += ranks[i];
        if (d[i] < 0.0) w_minus += ranks[i];
        if (d[i] != 0.0) nonzero_ranks.push_back(ranks[i]);
    }
    const double stat_value =
        statistic == WilcoxonStatistic::WPlus ? w_plus : std::min(w_plus, w_minus);

    bool exact = method == RankPMethod::Exact;
    std::string note;
    if (exact && nonzero_ranks.size() > 20) {
        exact = false;
        note = "more than 20 nonzero differences, normal approximation used";
    }
    double p;
    if (exact) {
        const std::size_t nr = nonzero_ranks.size();
        // Distribution of W+ over all sign flips of the nonzero differences,
        // conditional on the observed ranks (zeros, under Pratt, stay put).
        std::vector<std::int64_t> scaled(nr);
        std::int64_t total_scaled = 0;
        for (std::size_t i = 0; i < nr; ++i) {
            scaled[i] = std::llround(nonzero_ranks[i] * 2.0);  // half-ranks become integers
            total_scaled += scaled[i];
        }
        std::vector<double> dist(total_scaled + 1, 0.0);
        dist[0] = 1.0;
        std::int64_t reach = 0;
        for (std::size_t i = 0; i < nr; ++i) {
            reach += scaled[i];
            for (std::int64_t u = reach; u >= scaled[i]; --u) dist[u] += dist[u - scaled[i]];
        }
        const double total = std::pow(2.0, static_cast<double>(nr));
        const auto wi = static_cast<std::int64_t>(std::llround(w_plus * 2.0));
        double cdf = 0.0, sf = 0.0;
        for (std::int64_t u = 0; u <= total_scaled; ++u) {
            if (u <= wi) cdf += dist[u];
            if (u >= wi) sf += dist[u];
        }
        p = tail_p(tail, cdf / total, sf / total);
        p = std::min(p, 1.0);
    } else {
        const auto nc = static_cast<double>(d.size());
        const auto nz = static_cast<double>(n_zero);
        double mu = nc * (nc + 1.0) / 4.0;
        double var24 = nc * (nc + 1.0) * (2.0 * nc + 1.0);
        if (zeros == WilcoxonZeroPolicy::Pratt) {
            mu -= nz * (nz + 1.0) / 4.0;
            var24 -= nz * (nz + 1.0) * (2.0 * nz + 1.0);
        }
        std::vector<double> sorted(nonzero_ranks);
        std::sort(sorted.begin(), sorted.end());
        var24 -= 0.5 * tie_term(sorted);
        const double sigma = std::sqrt(var24 / 24.0);
        if (sigma == 0.0) return undefined_result(std::move(desc), "zero rank variance");
        const double z = (w_plus - mu) / sigma;
        p = tail_p(tail, special::normal_cdf(z), special::normal_sf(z));
    }
    auto result = make_test_result(std::move(desc), stat_value, p);
    result.note = std::move(note);
    return result;
}

// --- spread tests ---------------------------------------------------------------------

TestResult f_test(const std::vector<double>& x, const std::vector<double>& y, Tail tail) {
    if (x.size() < 2 || y.size() < 2)
        throw std::invalid_argument("f_test: each sample needs n >= 2");
    auto desc = make_desc(MetricId::FTest, "variance_ratio", {{"tail", tail_name(tail)}});
    const double v1 = sample_variance(x), v2 = sample_variance(y);
    if (v2 == 0.0) return undefined_result(std::move(desc), "zero variance in denominator");
    const double f = v1 / v2;
    const double d1 = static_cast<double>(x.size()) - 1.0;
    const double d2 = static_cast<double>(y.size()) - 1.0;
    return make_test_result(std::move(desc), f,
                            tail_p(tail, special::f_cdf(f, d1, d2), special::f_sf(f, d1, d2)),
                            d1, d2);
}

TestResult bartlett(const SampleGroups& s) {
    const std::size_t g = s.g();
    if (g < 2) throw std::invalid_argument("bartlett: needs at least two groups");
    auto desc = make_desc(MetricId::Bartlett, "standard");
    double pooled_num = 0.0;
    double log_sum = 0.0, inv_sum = 0.0;
    const auto N = static_cast<double>(s.total_n());
    for (const auto& grp : s.groups) {
        if (grp.size() < 2)
            throw std::invalid_argument("bartlett: each group needs n >= 2");
        const double v = sample_variance(grp);
        if (v == 0.0) return undefined_result(std::move(desc), "zero variance group");
        const auto ni = static_cast<double>(grp.size());
        pooled_num += (ni - 1.0) * v;
        log_sum += (ni - 1.0) * std::log(v);
        inv_sum += 1.0 / (ni - 1.0);
    }
    const auto dg = static_cast<double>(g);
    const double sp2 = pooled_num / (N - dg);
    const double c = 1.0 + (inv_sum - 1.0 / (N - dg)) / (3.0 * (dg - 1.0));
    const double stat = ((N - dg) * std::log(sp2) - log_sum) / c;
    const double df = dg - 1.0;
    return make_test_result(std::move(desc), stat, special::chi_square_sf(stat, df), df);
}

TestResult levene(const SampleGroups& s, LeveneCenter center, double trim_alpha) {
    const std::size_t g = s.g();
    if (g < 2) throw std::invalid_argument("levene: needs at least two groups");
    if (center == LeveneCenter::Trimmed && !(trim_alpha >= 0.0 && trim_alpha < 0.5))
        throw std::invalid_argument("levene: trim_alpha must be in [0, 0.5)");

    std::string family = center == LeveneCenter::Mean
                             ? "mean_centered"
                             : (center == LeveneCenter::Median ? "median_centered"
                                                               : "trimmed_centered");
    std::map<std::string, ParamValue> params;
    if (center == LeveneCenter::Trimmed) params["trim_alpha"] = trim_alpha;
    auto desc = make_desc(MetricId::Levene, family, std::move(params));

    std::vector<std::vector<double>> z;
    z.reserve(g);
    for (const auto& grp : s.groups) {
        std::vector<double> data(grp);
        if (center == LeveneCenter::Trimmed) {
            std::sort(data.begin(), data.end());
            const auto cut =
                static_cast<std::size_t>(std::floor(trim_alpha * static_cast<double>(data.size())));
            if (data.size() <= 2 * cut)
                throw std::invalid_argument("levene: group too small for the trim");
            data = std::vector<double>(data.begin() + cut, data.end() - cut);
        }
        double c;
        if (center == LeveneCenter::Median) {
            std::vector<double> tmp(data);
            const std::size_t mid = tmp.size() / 2;
            std::nth_element(tmp.begin(), tmp.begin() + mid, tmp.end());
            double hi = tmp[mid];
            c = tmp.size() % 2 == 1
                    ? hi
                    : 0.5 * (hi + *std::max_element(tmp.begin(), tmp.begin() + mid));
        } else {
            c = mean_of(data);
        }
        std::vector<double> dev(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) dev[i] = std::fabs(data[i] - c);
        z.push_back(std::move(dev));
    }
    return f_upper_result(std::move(desc), anova_parts(z), "zero spread dispersion");
}

// --- permutation -----------------------------------------------------------------------

namespace {

double group_stat(const std::vector<double>& v, PermutationStatistic kind) {
    if (kind == PermutationStatistic::MeanDiff) return mean_of(v);
    std::vector<double> tmp(v);
    const std::size_t mid = tmp.size() / 2;
    std::nth_element(tmp.begin(), tmp.begin() + mid, tmp.end());
    double hi = tmp[mid];
    if (tmp.size() % 2 == 1) return hi;
    return 0.5 * (hi + *std::max_element(tmp.begin(), tmp.begin() + mid));
}

double split_stat(const std::vector<double>& pooled, const std::vector<std::size_t>& idx,
                  std::size_t n1, PermutationStatistic kind) {
    std::vector<double> a, b;
    a.reserve(n1);
    b.reserve(pooled.size() - n1);
    std::vector<bool> in_a(pooled.size(), false);
    for (std::size_t i = 0; i < n1; ++i) in_a[idx[i]] = true;
    for (std::size_t i = 0; i < pooled.size(); ++i)
        (in_a[i] ? a : b).push_back(pooled[i]);
    return group_stat(a, kind) - group_stat(b, kind);
}

}  // namespace

TestResult permutation_test(const std::vector<double>& x, const std::vector<double>& y,
                            PermutationStatistic statistic, PermutationMethod method, Tail tail,
                            std::size_t n_resamples, std::uint64_t seed) {
    if (x.empty() || y.empty()) throw std::invalid_argument("permutation_test: empty sample");
    const std::size_t n1 = x.size();
    const std::size_t n = n1 + y.size();
    std::vector<double> pooled(x);
    pooled.insert(pooled.end(), y.begin(), y.end());

    const double t_obs = group_stat(x, statistic) - group_stat(y, statistic);
    const double gamma = 1e-12 * std::max(1.0, std::fabs(t_obs));
    auto counts_as_extreme = [&](double t) {
        switch (tail) {
            case Tail::TwoSided: return std::fabs(t) >= std::fabs(t_obs) - gamma;
            case Tail::Greater: return t >= t_obs - gamma;
            case Tail::Less: return t <= t_obs + gamma;
        }
        return false;
    };

    const std::string fam =
        statistic == PermutationStatistic::MeanDiff ? "mean_diff" : "median_diff";
    std::map<std::string, ParamValue> params{
        {"tail", tail_name(tail)},
        {"method", std::string(method == PermutationMethod::ExactEnumeration ? "exact"
                                                                             : "monte_carlo")}};
    double p;
    if (method == PermutationMethod::ExactEnumeration) {
        double n_splits = 1.0;
        for (std::size_t i = 0; i < n1; ++i)
            n_splits = n_splits * static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (n_splits > 1e6)
            throw std::invalid_argument(
                "permutation_test: exact enumeration refuses more than 1e6 splits");
        // Lexicographic combinations of which pooled indices form group one.
        std::vector<std::size_t> idx(n1);
        std::iota(idx.begin(), idx.end(), 0);
        std::size_t extreme = 0, total = 0;
        for (;;) {
            if (counts_as_extreme(split_stat(pooled, idx, n1, statistic))) ++extreme;
            ++total;
            std::size_t i = n1;
            while (i > 0 && idx[i - 1] == n - n1 + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < n1; ++j) idx[j] = idx[j - 1] + 1;
        }
        p = static_cast<double>(extreme) / static_cast<double>(total);
    } else {
        params["n_resamples"] = static_cast<std::int64_t>(n_resamples);
        if (n_resamples == 0)
            throw std::invalid_argument("permutation_test: n_resamples must be > 0");
        std::size_t extreme = 0;
        std::vector<std::size_t> pool_idx(n);
        for (std::size_t r = 0; r < n_resamples; ++r) {
            SplitMix64 gen{mix_seed(seed, r)};
            std::iota(pool_idx.begin(), pool_idx.end(), 0);
            for (std::size_t t = 0; t < n1; ++t) {
                const std::uint64_t j = t + bounded(gen, n - t);
                std::swap(pool_idx[t], pool_idx[j]);
            }
            if (counts_as_extreme(split_stat(pooled, pool_idx, n1, statistic))) ++extreme;
        }
        // Add-one correction: the observed labeling is itself a resample.
        p = static_cast<double>(extreme + 1) / static_cast<double>(n_resamples + 1);
    }
    auto desc = make_desc(MetricId::PermutationTest, fam, std::move(params));
    return make_test_result(std::move(desc), t_obs, p);
}

}  // namespace metricdiff::stattest

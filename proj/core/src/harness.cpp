#include "metricdiff/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "metricdiff/classify.hpp"
#include "metricdiff/cluster.hpp"
#include "metricdiff/correlate.hpp"
#include "metricdiff/imgqual.hpp"
#include "metricdiff/regress.hpp"
#include "metricdiff/segment.hpp"
#include "metricdiff/stattest.hpp"

namespace metricdiff::harness {
namespace {

// --- descriptor parameter access ---------------------------------------------

std::string str_param(const ConventionDescriptor& d, const std::string& key,
                      std::string fallback) {
    auto it = d.params.find(key);
    if (it == d.params.end()) return fallback;
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
    throw std::invalid_argument("parameter '" + key + "' must be a string");
}

double num_param(const ConventionDescriptor& d, const std::string& key, double fallback) {
    auto it = d.params.find(key);
    if (it == d.params.end()) return fallback;
    if (const auto* v = std::get_if<double>(&it->second)) return *v;
    if (const auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
    throw std::invalid_argument("parameter '" + key + "' must be numeric");
}

std::int64_t int_param(const ConventionDescriptor& d, const std::string& key,
                       std::int64_t fallback) {
    auto it = d.params.find(key);
    if (it == d.params.end()) return fallback;
    if (const auto* i = std::get_if<std::int64_t>(&it->second)) return *i;
    throw std::invalid_argument("parameter '" + key + "' must be an integer");
}

// --- result adapters -----------------------------------------------------------

MetricValue from_scalar(const ScalarResult& r, ConventionDescriptor d) {
    if (!r.value.has_value())
        return MetricValue::undefined(std::move(d), r.note.empty() ? "undefined" : r.note);
    if (std::isnan(*r.value)) return MetricValue::undefined(std::move(d), "result is NaN");
    MetricValue v = r.filled ? MetricValue::scalar_filled(*r.value, std::move(d))
                             : MetricValue::scalar(*r.value, std::move(d));
    v.note = r.note;
    return v;
}

MetricValue from_optional(const std::optional<double>& v, bool filled, ConventionDescriptor d,
                          const std::string& why_absent) {
    ScalarResult r = v.has_value()
                         ? (filled ? ScalarResult::fill(*v, {}) : ScalarResult::ok(*v))
                         : ScalarResult::undefined(why_absent);
    return from_scalar(r, std::move(d));
}

// The computation paths build their own descriptors; the sweep reports under
// the registered one so report rows and registry entries always match.
MetricValue retag(MetricValue v, const ConventionDescriptor& d) {
    v.descriptor = d;
    return v;
}

MetricValue from_test(const TestResult& t, const ConventionDescriptor& d) {
    return retag(d.quantity == Quantity::PValue ? t.p_metric_value() : t.statistic_value(), d);
}

stattest::Tail tail_of(const ConventionDescriptor& d) {
    return stattest::tail_from_name(str_param(d, "tail", "two_sided"));
}

// --- classification -------------------------------------------------------------

LabelSet declared_labels(const Dataset& data) {
    std::set<Label> s(data.y_true.begin(), data.y_true.end());
    s.insert(data.y_pred.begin(), data.y_pred.end());
    // Probability columns imply labels 0..K-1 even if a class never occurs.
    for (std::size_t k = 0; k < data.n_prob_classes; ++k) s.insert(static_cast<Label>(k));
    if (s.empty()) s.insert(0);
    return LabelSet(std::vector<Label>(s.begin(), s.end()));
}

enum class PrfKind { Precision, Recall, F, Jaccard };

MetricValue pick_prf(const classify::PRFReport& rep, PrfKind which,
                     const ConventionDescriptor& d) {
    const auto& per = which == PrfKind::Precision ? rep.precision
                      : which == PrfKind::Recall  ? rep.recall
                      : which == PrfKind::F       ? rep.f
                                                  : rep.jaccard;
    const auto& agg = which == PrfKind::Precision ? rep.precision_agg
                      : which == PrfKind::Recall  ? rep.recall_agg
                      : which == PrfKind::F       ? rep.f_agg
                                                  : rep.jaccard_agg;
    switch (d.reporting.kind) {
        case ReportingModeKind::Micro:
            return from_optional(agg.micro, false, d, "micro aggregate undefined");
        case ReportingModeKind::Macro:
            return from_optional(agg.macro, agg.macro_filled, d,
                                 "macro aggregate undefined (0/0 class present)");
        case ReportingModeKind::Weighted:
            return from_optional(agg.weighted, agg.weighted_filled, d,
                                 "weighted aggregate undefined (0/0 class present)");
        case ReportingModeKind::PerClass:
        case ReportingModeKind::BinaryPositive: {
            const auto k = static_cast<std::size_t>(d.reporting.class_index);
            if (d.reporting.class_index < 0 || k >= per.size())
                return MetricValue::undefined(d, "class index out of range");
            return from_optional(per[k], false, d, "undefined for this class (0/0)");
        }
        case ReportingModeKind::Scalar:
            break;
    }
    return MetricValue::undefined(d, "reporting mode not applicable");
}

MetricValue compute_classification(const Dataset& data, const ConventionDescriptor& d) {
    const LabelSet labels = declared_labels(data);
    const ConfusionMatrix cm = confusion_matrix(data.y_true, data.y_pred, labels);

    switch (d.metric) {
        case MetricId::Accuracy:
            return from_scalar(classify::accuracy(cm), d);
        case MetricId::BalancedAccuracy: {
            using V = classify::BalancedAccuracyVariant;
            if (d.formula_family == "chance_corrected")
                return from_scalar(classify::balanced_accuracy(cm, V::ChanceCorrected), d);
            if (d.reporting.kind == ReportingModeKind::Weighted)
                return from_scalar(classify::balanced_accuracy(cm, V::WeightedRecall), d);
            return from_scalar(classify::balanced_accuracy(cm, V::MacroRecall), d);
        }
        case MetricId::Precision:
        case MetricId::Recall:
        case MetricId::F1:
        case MetricId::FBeta:
        case MetricId::Jaccard: {
            classify::PRFOptions opts;
            opts.beta = d.metric == MetricId::FBeta ? num_param(d, "beta", 1.0) : 1.0;
            const classify::PRFReport rep = classify::prf_report(cm, opts);
            const PrfKind kind = d.metric == MetricId::Precision ? PrfKind::Precision
                                 : d.metric == MetricId::Recall  ? PrfKind::Recall
                                 : d.metric == MetricId::Jaccard ? PrfKind::Jaccard
                                                                 : PrfKind::F;
            return pick_prf(rep, kind, d);
        }
        case MetricId::CohenKappa:
            return from_scalar(classify::cohen_kappa(cm), d);
        case MetricId::Mcc: {
            if (d.formula_family == "generalized")
                return from_scalar(classify::mcc(cm, classify::MccVariant::Generalized), d);
            if (d.reporting.kind == ReportingModeKind::Macro)
                return from_scalar(classify::mcc(cm, classify::MccVariant::OneVsRestMacro), d);
            const auto k = static_cast<std::size_t>(std::max(0, d.reporting.class_index));
            return from_scalar(classify::mcc(cm, classify::MccVariant::BinaryPositive, k), d);
        }
        case MetricId::GMean:
            return from_scalar(classify::g_mean(cm), d);
        case MetricId::LogLoss: {
            if (data.probs.empty())
                return MetricValue::undefined(d, "input has no prob_<k> columns");
            const double eps = num_param(d, "epsilon", 1e-15);
            return MetricValue::scalar(classify::log_loss(data.y_true, data.probs, labels, eps),
                                       d);
        }
        case MetricId::RocAuc: {
            if (data.scores.empty())
                return MetricValue::undefined(d, "input has no score column");
            const auto k = static_cast<std::size_t>(std::max(0, d.reporting.class_index));
            return from_scalar(classify::roc_auc(data.y_true, data.scores, labels.at(k)), d);
        }
        default:
            break;
    }
    return MetricValue::undefined(d, "metric not dispatched for classification");
}

// --- regression ------------------------------------------------------------------

MetricValue compute_regression(const Dataset& data, const ConventionDescriptor& d) {
    const regress::PairedSeries s(data.truth, data.pred);
    switch (d.metric) {
        case MetricId::Mae:
            return MetricValue::scalar(regress::basic_errors(s).mae, d);
        case MetricId::Mse:
            return MetricValue::scalar(regress::basic_errors(s).mse, d);
        case MetricId::Rmse:
            return MetricValue::scalar(regress::basic_errors(s).rmse, d);
        case MetricId::MedianAe:
            return MetricValue::scalar(regress::basic_errors(s).median_ae, d);
        case MetricId::Mape: {
            const std::string pol = str_param(d, "zero_policy", "error");
            const auto policy = pol == "epsilon" ? regress::MapeZeroPolicy::Epsilon
                                : pol == "drop"  ? regress::MapeZeroPolicy::Drop
                                                 : regress::MapeZeroPolicy::Error;
            const auto units = str_param(d, "units", "fraction") == "percent"
                                   ? regress::MapeUnits::Percent
                                   : regress::MapeUnits::Fraction;
            const double eps = num_param(d, "epsilon", 1e-9);
            return MetricValue::scalar(regress::mape(s, policy, units, eps), d);
        }
        case MetricId::Msle:
            return MetricValue::scalar(regress::msle(s), d);
        case MetricId::RSquared: {
            const auto variant = d.formula_family == "squared_pearson"
                                     ? regress::RSquaredVariant::SquaredPearson
                                 : d.formula_family == "adjusted"
                                     ? regress::RSquaredVariant::Adjusted
                                     : regress::RSquaredVariant::CoefficientOfDetermination;
            const auto np = static_cast<std::size_t>(
                std::max<std::int64_t>(1, int_param(d, "n_predictors", 1)));
            return from_scalar(regress::r_squared(s, variant, np), d);
        }
        case MetricId::ExplainedVariance:
            return from_scalar(regress::explained_variance(s), d);
        case MetricId::TweedieDeviance:
            return MetricValue::scalar(regress::tweedie_deviance(s, num_param(d, "power", 0.0)),
                                       d);
        case MetricId::Huber:
            return MetricValue::scalar(regress::huber(s, num_param(d, "delta", 1.0)), d);
        default:
            break;
    }
    return MetricValue::undefined(d, "metric not dispatched for regression");
}

// --- clustering --------------------------------------------------------------------

MetricValue compute_clustering(const Dataset& data, const ConventionDescriptor& d,
                               const RunConfig& cfg) {
    const cluster::ClusteredData cd(data.points, data.dim, data.cluster_labels,
                                    cfg.provided_centers);
    switch (d.metric) {
        case MetricId::Silhouette:
            return from_scalar(cluster::silhouette(cd), d);
        case MetricId::DaviesBouldin:
            return from_scalar(cluster::davies_bouldin(cd), d);
        case MetricId::CalinskiHarabasz:
            return from_scalar(cluster::calinski_harabasz(cd), d);
        case MetricId::Wcss: {
            const auto source = d.formula_family == "provided_centers"
                                    ? cluster::WcssCenters::ProvidedCenters
                                    : cluster::WcssCenters::RecomputedMeans;
            return from_scalar(cluster::wcss(cd, source), d);
        }
        default:
            break;
    }
    return MetricValue::undefined(d, "metric not dispatched for clustering");
}

// --- correlation ---------------------------------------------------------------------

MetricValue compute_correlation(const Dataset& data, const ConventionDescriptor& d) {
    const auto& x = data.x;
    const auto& y = data.y;
    switch (d.metric) {
        case MetricId::Pearson:
            return from_scalar(correlate::pearson(x, y), d);
        case MetricId::Spearman:
            return from_scalar(correlate::spearman(x, y), d);
        case MetricId::KendallTau: {
            const auto variant = d.formula_family == "tau_a" ? correlate::KendallVariant::TauA
                                                             : correlate::KendallVariant::TauB;
            return from_scalar(correlate::kendall_tau(x, y, variant), d);
        }
        case MetricId::MutualInformation: {
            const auto bins =
                static_cast<std::size_t>(std::max<std::int64_t>(0, int_param(d, "bins", 0)));
            return from_scalar(correlate::mutual_information(x, y, bins), d);
        }
        case MetricId::DistanceCorrelation:
            return from_scalar(correlate::distance_correlation(x, y), d);
        case MetricId::BiweightMidcorrelation: {
            const auto centering = d.formula_family == "mean_sd"
                                       ? correlate::BiweightCentering::MeanSd
                                       : correlate::BiweightCentering::MedianMad;
            return from_scalar(
                correlate::biweight_midcorrelation(x, y, centering, num_param(d, "c", 9.0)), d);
        }
        case MetricId::PercentageBend:
            return from_scalar(correlate::percentage_bend(x, y, num_param(d, "beta", 0.2)), d);
        case MetricId::ShepherdPi:
            return from_scalar(
                correlate::shepherd_pi(x, y, num_param(d, "chi2_quantile", 0.975)), d);
        case MetricId::PartialCorrelation:
            return from_scalar(correlate::partial_correlation(x, y, data.covariates), d);
        default:
            break;
    }
    return MetricValue::undefined(d, "metric not dispatched for correlation");
}

// --- hypothesis tests -------------------------------------------------------------------

const std::vector<double>& need_group(const Dataset& data, std::size_t i) {
    if (i >= data.groups.size())
        throw std::invalid_argument("input has " + std::to_string(data.groups.size()) +
                                    " group(s); this test needs at least " +
                                    std::to_string(i + 1));
    return data.groups[i];
}

stattest::SampleGroups all_groups(const Dataset& data) {
    return stattest::SampleGroups(data.groups);
}

MetricValue compute_stattest(const Dataset& data, const ConventionDescriptor& d,
                             const RunConfig& cfg) {
    using namespace stattest;
    const bool want_p = d.quantity == Quantity::PValue;
    switch (d.metric) {
        case MetricId::TTestIndependent:
            return from_test(t_test_pooled(need_group(data, 0), need_group(data, 1), tail_of(d)),
                             d);
        case MetricId::TTestPaired:
            return from_test(t_test_paired(need_group(data, 0), need_group(data, 1), tail_of(d)),
                             d);
        case MetricId::TTestWelch:
            return from_test(t_test_welch(need_group(data, 0), need_group(data, 1), tail_of(d)),
                             d);
        case MetricId::ZTest:
            return from_test(z_test(need_group(data, 0), need_group(data, 1),
                                    num_param(d, "sigma", 0.0), tail_of(d)),
                             d);
        case MetricId::KsTest: {
            // The statistic does not depend on the p method; spare the exact DP.
            const auto method = want_p && str_param(d, "p_method", "asymptotic") == "exact"
                                    ? KsPMethod::Exact
                                    : KsPMethod::Asymptotic;
            return from_test(ks_test(need_group(data, 0), need_group(data, 1), method), d);
        }
        case MetricId::Anova:
            return from_test(anova(all_groups(data)), d);
        case MetricId::KruskalWallis:
            return from_test(kruskal_wallis(all_groups(data)), d);
        case MetricId::MannWhitneyU: {
            const std::string stat = str_param(d, "statistic", "u1");
            const auto statistic = stat == "u2"          ? MwuStatistic::U2
                                   : stat == "rank_sum_w" ? MwuStatistic::RankSumW
                                                          : MwuStatistic::U1;
            const auto method = want_p && str_param(d, "p_method", "normal") == "exact"
                                    ? RankPMethod::Exact
                                    : RankPMethod::Normal;
            const bool continuity = int_param(d, "continuity", 1) != 0;
            return from_test(mann_whitney_u(need_group(data, 0), need_group(data, 1), statistic,
                                            method, continuity, tail_of(d)),
                             d);
        }
        case MetricId::ShapiroWilk:
            return from_test(shapiro_wilk(need_group(data, 0)), d);
        case MetricId::FTest:
            return from_test(f_test(need_group(data, 0), need_group(data, 1), tail_of(d)), d);
        case MetricId::Bartlett:
            return from_test(bartlett(all_groups(data)), d);
        case MetricId::Levene: {
            const auto center = d.formula_family == "mean_centered"      ? LeveneCenter::Mean
                                : d.formula_family == "trimmed_centered" ? LeveneCenter::Trimmed
                                                                         : LeveneCenter::Median;
            return from_test(levene(all_groups(data), center, num_param(d, "trim_alpha", 0.1)),
                             d);
        }
        case MetricId::ChiSquare: {
            if (d.formula_family == "goodness_of_fit")
                return from_test(chi_square_gof(need_group(data, 0), need_group(data, 1)), d);
            const std::size_t rows = data.groups.size();
            if (rows < 2) throw std::invalid_argument("independence table needs >= 2 rows");
            const std::size_t cols = data.groups[0].size();
            std::vector<double> table;
            table.reserve(rows * cols);
            for (const auto& g : data.groups) {
                if (g.size() != cols)
                    throw std::invalid_argument("independence table rows differ in length");
                table.insert(table.end(), g.begin(), g.end());
            }
            return from_test(chi_square_independence(table, rows, cols), d);
        }
        case MetricId::WilcoxonSignedRank: {
            const auto statistic = str_param(d, "statistic", "w_plus") == "w_min"
                                       ? WilcoxonStatistic::WMin
                                       : WilcoxonStatistic::WPlus;
            const auto zeros = str_param(d, "zero_policy", "wilcoxon") == "pratt"
                                   ? WilcoxonZeroPolicy::Pratt
                                   : WilcoxonZeroPolicy::Wilcoxon;
            const auto method = want_p && str_param(d, "p_method", "normal") == "exact"
                                    ? RankPMethod::Exact
                                    : RankPMethod::Normal;
            return from_test(wilcoxon_signed_rank(need_group(data, 0), need_group(data, 1),
                                                  statistic, zeros, method, tail_of(d)),
                             d);
        }
        case MetricId::PermutationTest: {
            const auto statistic = d.formula_family == "median_diff"
                                       ? PermutationStatistic::MedianDiff
                                       : PermutationStatistic::MeanDiff;
            // Statistic-only rows skip resampling: one draw fixes T_obs.
            auto method = PermutationMethod::MonteCarlo;
            std::size_t n_resamples = 1;
            if (want_p) {
                method = str_param(d, "method", "exact") == "monte_carlo"
                             ? PermutationMethod::MonteCarlo
                             : PermutationMethod::ExactEnumeration;
                n_resamples = static_cast<std::size_t>(
                    std::max<std::int64_t>(1, int_param(d, "n_resamples", 10000)));
            }
            return from_test(permutation_test(need_group(data, 0), need_group(data, 1),
                                              statistic, method, tail_of(d), n_resamples,
                                              cfg.seed),
                             d);
        }
        default:
            break;
    }
    return MetricValue::undefined(d, "metric not dispatched for hypothesis tests");
}

// --- segmentation ---------------------------------------------------------------------

ZeroDivPolicy seg_policy(const ConventionDescriptor& d) {
    const std::string p = str_param(d, "empty_policy", "undefined");
    if (p == "zero") return ZeroDivPolicy::Zero;
    if (p == "one") return ZeroDivPolicy::One;
    return ZeroDivPolicy::Undefined;
}

segment::Connectivity seg_conn(const ConventionDescriptor& d) {
    return str_param(d, "connectivity", "face") == "corner" ? segment::Connectivity::Corner
                                                            : segment::Connectivity::Face;
}

MetricValue compute_segmentation(const Dataset& data, const ConventionDescriptor& d) {
    if (!data.mask_ref || !data.mask_pred)
        return MetricValue::undefined(d, "no mask records loaded");
    const segment::Mask& ref = *data.mask_ref;
    const segment::Mask& pred = *data.mask_pred;
    switch (d.metric) {
        case MetricId::SegAccuracy:
            return from_scalar(segment::seg_accuracy(pred, ref), d);
        case MetricId::SegPrecision:
            return from_scalar(segment::seg_precision(pred, ref, d.reporting, seg_policy(d)), d);
        case MetricId::SegRecall:
            return from_scalar(segment::seg_recall(pred, ref, d.reporting, seg_policy(d)), d);
        case MetricId::SegF1:
            return from_scalar(segment::seg_f1(pred, ref, d.reporting, seg_policy(d)), d);
        case MetricId::Dice:
            return from_scalar(segment::dice(pred, ref, d.reporting, seg_policy(d)), d);
        case MetricId::Iou:
            return from_scalar(segment::iou(pred, ref, d.reporting, seg_policy(d)), d);
        case MetricId::MeanIou:
            return from_scalar(segment::mean_iou(pred, ref, seg_policy(d)), d);
        case MetricId::BoundaryF1:
            return from_scalar(
                segment::boundary_f1(pred, ref, num_param(d, "theta", 1.0), seg_conn(d)), d);
        case MetricId::Hausdorff: {
            const std::string dir = str_param(d, "direction", "symmetric_max");
            const auto direction = dir == "ab"           ? segment::HausdorffDirection::AB
                                   : dir == "ba"         ? segment::HausdorffDirection::BA
                                   : dir == "percentile" ? segment::HausdorffDirection::Percentile
                                                         : segment::HausdorffDirection::SymmetricMax;
            const auto points = str_param(d, "point_set", "boundary") == "all_foreground"
                                    ? segment::PointSet::AllForeground
                                    : segment::PointSet::Boundary;
            // A = the prediction, B = the reference, matching the (pred, ref)
            // argument order used everywhere else in this family.
            return from_scalar(segment::hausdorff(pred, ref, direction, num_param(d, "q", 95.0),
                                                  points, seg_conn(d)),
                               d);
        }
        case MetricId::AdaptedRandError:
            return from_scalar(segment::adapted_rand_error(pred, ref), d);
        case MetricId::AdjustedRandIndex:
            return from_scalar(segment::adjusted_rand_index(pred, ref), d);
        case MetricId::VariationOfInformation:
            return from_scalar(segment::variation_of_information(pred, ref), d);
        default:
            break;
    }
    return MetricValue::undefined(d, "metric not dispatched for segmentation");
}

// --- image quality -----------------------------------------------------------------------

imgqual::RangeMode range_of(const ConventionDescriptor& d) {
    const std::string m = str_param(d, "range_mode", "declared");
    if (m == "observed_ref") return imgqual::RangeMode::ObservedRef;
    if (m == "unit") return imgqual::RangeMode::Unit;
    return imgqual::RangeMode::Declared;
}

MetricValue compute_image(const Dataset& data, const ConventionDescriptor& d) {
    if (!data.raster) return MetricValue::undefined(d, "no raster records loaded");
    const imgqual::RasterPair& p = *data.raster;
    switch (d.metric) {
        case MetricId::ImgMae:
            return from_scalar(imgqual::img_mae(p), d);
        case MetricId::ImgMse:
            return from_scalar(imgqual::img_mse(p), d);
        case MetricId::ImgRmse:
            return from_scalar(imgqual::img_rmse(p), d);
        case MetricId::ImgRSquared: {
            const auto variant = d.formula_family == "squared_pearson"
                                     ? regress::RSquaredVariant::SquaredPearson
                                 : d.formula_family == "adjusted"
                                     ? regress::RSquaredVariant::Adjusted
                                     : regress::RSquaredVariant::CoefficientOfDetermination;
            const auto np = static_cast<std::size_t>(
                std::max<std::int64_t>(1, int_param(d, "n_predictors", 1)));
            return from_scalar(imgqual::img_r_squared(p, variant, np), d);
        }
        case MetricId::Psnr:
            return from_scalar(imgqual::psnr(p, range_of(d)), d);
        case MetricId::Ssim: {
            imgqual::SsimParams sp;
            sp.window_kind = d.formula_family == "uniform_window" ? imgqual::SsimWindow::Uniform
                                                                  : imgqual::SsimWindow::Gaussian;
            sp.window = int_param(d, "window", 11);
            sp.sigma = num_param(d, "sigma", 1.5);
            sp.k1 = num_param(d, "k1", 0.01);
            sp.k2 = num_param(d, "k2", 0.03);
            sp.range = imgqual::RangeMode::Declared;
            return from_scalar(imgqual::ssim(p, sp), d);
        }
        default:
            break;
    }
    return MetricValue::undefined(d, "metric not dispatched for image quality");
}

MetricValue compute_one(const Dataset& data, const ConventionDescriptor& d,
                        const RunConfig& cfg) {
    switch (family_of(data.task)) {
        case TaskFamily::Classification: return compute_classification(data, d);
        case TaskFamily::Regression: return compute_regression(data, d);
        case TaskFamily::Clustering: return compute_clustering(data, d, cfg);
        case TaskFamily::Correlation: return compute_correlation(data, d);
        case TaskFamily::StatTest: return compute_stattest(data, d, cfg);
        case TaskFamily::Segmentation: return compute_segmentation(data, d);
        case TaskFamily::ImageQuality: return compute_image(data, d);
    }
    return MetricValue::undefined(d, "unknown task family");
}

void add_note(std::vector<std::string>* notes, const std::string& msg) {
    if (!notes) return;
    if (std::find(notes->begin(), notes->end(), msg) == notes->end()) notes->push_back(msg);
}

bool has_class_axis(const std::vector<ConventionDescriptor>& ds) {
    return std::any_of(ds.begin(), ds.end(), [](const ConventionDescriptor& d) {
        return d.reporting.kind == ReportingModeKind::PerClass ||
               d.reporting.kind == ReportingModeKind::BinaryPositive;
    });
}

std::size_t n_classes_of(const Dataset& data) {
    if (family_of(data.task) == TaskFamily::Classification)
        return declared_labels(data).size();
    return 2;
}

// --- pair classification -------------------------------------------------------------------

const ParamValue* find_param(const ConventionDescriptor& d, const std::string& key) {
    auto it = d.params.find(key);
    return it == d.params.end() ? nullptr : &it->second;
}

int class_rank(Discrepancy c) {
    switch (c) {
        case Discrepancy::BUG: return 0;
        case Discrepancy::ID: return 1;
        case Discrepancy::RD: return 2;
        case Discrepancy::NONE: return 3;
    }
    return 3;
}

}  // namespace

// --- presets -------------------------------------------------------------------------------

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"all", "first_class", "positive_class",
                                                   "averages"};
    return names;
}

std::vector<ConventionDescriptor> select_variants(MetricId id, const VariantContext& ctx,
                                                  const std::string& preset,
                                                  std::vector<std::string>* notes) {
    std::vector<ConventionDescriptor> all = register_variants(id, ctx);
    if (preset.empty() || preset == "all") return all;
    if (std::find(preset_names().begin(), preset_names().end(), preset) == preset_names().end())
        throw std::invalid_argument("unknown variant preset '" + preset +
                                    "' (expected all, first_class, positive_class, averages)");
    // Presets pin the class-reduction axis; metrics without one keep their
    // full variant list.
    if (!has_class_axis(all)) return all;

    if (preset == "first_class") {
        ConventionDescriptor d = all.front();
        d.reporting = ReportingMode::per_class(0);
        validate_descriptor(d);
        return {std::move(d)};
    }
    if (preset == "positive_class") {
        std::vector<ConventionDescriptor> kept;
        for (const auto& d : all)
            if (d.reporting.kind == ReportingModeKind::BinaryPositive) kept.push_back(d);
        if (kept.empty()) {
            ConventionDescriptor d = all.front();
            d.reporting = ReportingMode::binary_positive(1);
            validate_descriptor(d);
            kept.push_back(std::move(d));
        }
        return kept;
    }
    // "averages": macro and weighted reductions. An unqualified "average" in a
    // component's output does not say which one it is; keeping both makes the
    // ambiguity visible instead of hiding it.
    std::vector<ConventionDescriptor> kept;
    for (const auto& d : all)
        if (d.reporting.kind == ReportingModeKind::Macro ||
            d.reporting.kind == ReportingModeKind::Weighted)
            kept.push_back(d);
    if (kept.empty()) return all;
    add_note(notes,
             "preset 'averages': an unqualified average is ambiguous; macro and weighted "
             "reductions are both reported");
    return kept;
}

// --- sweeping ------------------------------------------------------------------------------

std::vector<MetricValue> run_variants(const Dataset& data, MetricId id, const RunConfig& cfg,
                                      std::vector<std::string>* notes) {
    VariantContext ctx;
    ctx.n_classes = n_classes_of(data);
    std::vector<MetricValue> out;
    for (const ConventionDescriptor& d : select_variants(id, ctx, cfg.variants, notes)) {
        try {
            out.push_back(compute_one(data, d, cfg));
        } catch (const std::exception& e) {
            out.push_back(MetricValue::undefined(d, e.what()));
        }
    }
    return out;
}

std::vector<MetricValue> run_all(const Dataset& data, const RunConfig& cfg,
                                 std::vector<std::string>* notes) {
    std::vector<MetricId> ids = cfg.metrics;
    if (ids.empty()) ids = metrics_for_task(family_of(data.task));
    std::vector<MetricValue> out;
    for (MetricId id : ids) {
        if (metric_info(id).task != family_of(data.task))
            throw std::invalid_argument("metric '" + metric_name(id) +
                                        "' does not belong to task '" + task_name(data.task) +
                                        "'");
        auto vs = run_variants(data, id, cfg, notes);
        out.insert(out.end(), std::make_move_iterator(vs.begin()),
                   std::make_move_iterator(vs.end()));
    }
    return out;
}

// --- discrepancy classification ---------------------------------------------------------------

std::string discrepancy_name(Discrepancy d) {
    switch (d) {
        case Discrepancy::BUG: return "BUG";
        case Discrepancy::ID: return "ID";
        case Discrepancy::RD: return "RD";
        case Discrepancy::NONE: return "NONE";
    }
    return "NONE";
}

Discrepancy classify_pair(const MetricValue& a, const MetricValue& b, double tolerance) {
    if (a.descriptor.metric != b.descriptor.metric ||
        a.descriptor.quantity != b.descriptor.quantity)
        throw std::invalid_argument("classify_pair: values are not comparable");
    if (!a.value.has_value() || !b.value.has_value())
        throw std::invalid_argument("classify_pair: both values must carry a number");

    // An out-of-domain number is a defect no matter how close the pair is.
    if (a.validity == Validity::OutOfDomain || b.validity == Validity::OutOfDomain)
        return Discrepancy::BUG;

    const double va = *a.value;
    const double vb = *b.value;
    double delta;
    if (std::isinf(va) && std::isinf(vb) && std::signbit(va) == std::signbit(vb))
        delta = 0.0;
    else
        delta = std::abs(va - vb);
    if (delta <= tolerance) return Discrepancy::NONE;

    if (a.descriptor.formula_family != b.descriptor.formula_family) return Discrepancy::ID;
    // Formula-kind parameters decide ID vs RD; absent keys sit at the catalog
    // default. Reporting-kind parameters and the reporting mode never do.
    for (const ParamSpec& spec : metric_info(a.descriptor.metric).params) {
        if (spec.kind != ParamKind::Formula) continue;
        const ParamValue* pa = find_param(a.descriptor, spec.name);
        const ParamValue* pb = find_param(b.descriptor, spec.name);
        const ParamValue& ra = pa ? *pa : spec.default_value;
        const ParamValue& rb = pb ? *pb : spec.default_value;
        if (!(ra == rb)) return Discrepancy::ID;
    }
    return Discrepancy::RD;
}

std::vector<DiscrepancyRecord> classify_discrepancies(const std::vector<MetricValue>& values,
                                                      double tolerance) {
    std::vector<DiscrepancyRecord> records;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const MetricValue& a = values[i];
        if (!a.value.has_value()) continue;  // Undefined rows pair with nothing
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const MetricValue& b = values[j];
            if (!b.value.has_value()) continue;
            if (a.descriptor.metric != b.descriptor.metric ||
                a.descriptor.quantity != b.descriptor.quantity)
                continue;
            const double tol =
                tolerance >= 0.0 ? tolerance : default_tolerance(a.descriptor.metric);
            const Discrepancy c = classify_pair(a, b, tol);
            if (c == Discrepancy::NONE) continue;

            DiscrepancyRecord rec;
            rec.metric = a.descriptor.metric;
            // Pin the in-pair order by variant name so the report does not
            // depend on how the caller arranged the sweep.
            const MetricValue* lo = &a;
            const MetricValue* hi = &b;
            if (hi->descriptor.variant_name() < lo->descriptor.variant_name())
                std::swap(lo, hi);
            rec.descriptor_a = lo->descriptor;
            rec.descriptor_b = hi->descriptor;
            rec.value_a = *lo->value;
            rec.value_b = *hi->value;
            if (std::isinf(rec.value_a) && std::isinf(rec.value_b) &&
                std::signbit(rec.value_a) == std::signbit(rec.value_b))
                rec.abs_delta = 0.0;
            else
                rec.abs_delta = std::abs(rec.value_a - rec.value_b);
            rec.classification = c;
            records.push_back(std::move(rec));
        }
    }
    std::sort(records.begin(), records.end(),
              [](const DiscrepancyRecord& x, const DiscrepancyRecord& y) {
                  const std::string& mx = metric_name(x.metric);
                  const std::string& my = metric_name(y.metric);
                  if (mx != my) return mx < my;
                  if (x.classification != y.classification)
                      return class_rank(x.classification) < class_rank(y.classification);
                  if (x.abs_delta != y.abs_delta) return x.abs_delta > y.abs_delta;
                  const std::string ax = x.descriptor_a.variant_name();
                  const std::string ay = y.descriptor_a.variant_name();
                  if (ax != ay) return ax < ay;
                  return x.descriptor_b.variant_name() < y.descriptor_b.variant_name();
              });
    return records;
}

int exit_code_for(const std::vector<DiscrepancyRecord>& records) {
    bool any_id = false;
    for (const auto& r : records) {
        if (r.classification == Discrepancy::BUG) return 3;
        if (r.classification == Discrepancy::ID) any_id = true;
    }
    return any_id ? 2 : 0;
}

}  // namespace metricdiff::harness

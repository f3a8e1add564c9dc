#include "metricdiff/registry.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace metricdiff {

namespace {

ParamSpec fparam(std::string name, ParamValue def) {
    return {std::move(name), ParamKind::Formula, std::move(def), {}};
}
ParamSpec fenum(std::string name, std::string def, std::vector<std::string> allowed) {
    return {std::move(name), ParamKind::Formula, ParamValue{std::move(def)}, std::move(allowed)};
}
ParamSpec rparam(std::string name, ParamValue def) {
    return {std::move(name), ParamKind::Reporting, std::move(def), {}};
}
ParamSpec renum(std::string name, std::string def, std::vector<std::string> allowed) {
    return {std::move(name), ParamKind::Reporting, ParamValue{std::move(def)}, std::move(allowed)};
}

std::vector<MetricInfo> build_catalog() {
    using F = TaskFamily;
    std::vector<MetricInfo> c;
    auto add = [&](MetricId id, std::string name, F task, std::vector<std::string> families,
                   std::vector<ParamSpec> params, std::string summary, bool stochastic = false) {
        c.push_back({id, std::move(name), task, std::move(families), std::move(params),
                     stochastic, std::move(summary)});
    };

    // -- classification ------------------------------------------------------
    add(MetricId::Accuracy, "accuracy", F::Classification, {"proportion_correct"}, {},
        "fraction of samples with matching label");
    add(MetricId::BalancedAccuracy, "balanced_accuracy", F::Classification,
        {"recall_mean", "chance_corrected"}, {},
        "mean per-class recall; chance-corrected family rescales against 1/K");
    add(MetricId::Precision, "precision", F::Classification, {"count_ratio"}, {},
        "TP / (TP + FP) under a declared reduction");
    add(MetricId::Recall, "recall", F::Classification, {"count_ratio"}, {},
        "TP / (TP + FN) under a declared reduction");
    add(MetricId::F1, "f1", F::Classification, {"count_ratio"}, {},
        "harmonic mean of precision and recall");
    add(MetricId::FBeta, "f_beta", F::Classification, {"count_ratio"},
        {fparam("beta", 1.0)}, "recall-weighted F measure");
    add(MetricId::Jaccard, "jaccard", F::Classification, {"count_ratio"}, {},
        "TP / (TP + FP + FN)");
    add(MetricId::CohenKappa, "cohen_kappa", F::Classification, {"chance_corrected_agreement"},
        {}, "agreement corrected by the marginal chance rate");
    add(MetricId::Mcc, "mcc", F::Classification, {"binary", "generalized"}, {},
        "Matthews correlation; binary one-vs-rest and generalized multi-class families");
    add(MetricId::GMean, "g_mean", F::Classification, {"recall_geometric_mean"}, {},
        "geometric mean of per-class recalls");
    add(MetricId::LogLoss, "log_loss", F::Classification, {"negative_log_likelihood"},
        {fparam("epsilon", 1e-15)}, "mean negative log of the true-class probability");
    add(MetricId::RocAuc, "roc_auc", F::Classification, {"rank_half_credit"}, {},
        "probability a positive outranks a negative, ties at half credit");

    // -- regression ----------------------------------------------------------
    add(MetricId::Mae, "mae", F::Regression, {"standard"}, {}, "mean absolute error");
    add(MetricId::Mse, "mse", F::Regression, {"standard"}, {}, "mean squared error");
    add(MetricId::Rmse, "rmse", F::Regression, {"standard"}, {}, "root mean squared error");
    add(MetricId::MedianAe, "median_ae", F::Regression, {"standard"}, {},
        "median absolute error");
    add(MetricId::Mape, "mape", F::Regression, {"standard"},
        {renum("units", "fraction", {"fraction", "percent"}),
         fenum("zero_policy", "error", {"error", "epsilon", "drop"}),
         fparam("epsilon", 1e-9)},
        "mean absolute percentage error; unit convention is a reporting axis");
    add(MetricId::Msle, "msle", F::Regression, {"standard"}, {},
        "mean squared log1p error, nonnegative inputs only");
    add(MetricId::RSquared, "r_squared", F::Regression,
        {"coefficient_of_determination", "squared_pearson", "adjusted"},
        {fparam("n_predictors", std::int64_t{1})},
        "three incompatible families share this name in the wild");
    add(MetricId::ExplainedVariance, "explained_variance", F::Regression, {"standard"}, {},
        "1 - Var(residual)/Var(truth), population variances");
    add(MetricId::TweedieDeviance, "tweedie_deviance", F::Regression, {"standard"},
        {fparam("power", 0.0)}, "deviance of the Tweedie family at a given power");
    add(MetricId::Huber, "huber", F::Regression, {"standard"}, {fparam("delta", 1.0)},
        "quadratic near zero, linear in the tails");

    // -- clustering ----------------------------------------------------------
    add(MetricId::Silhouette, "silhouette", F::Clustering, {"euclidean_mean"}, {},
        "mean silhouette width, Euclidean distances, singleton clusters score 0");
    add(MetricId::DaviesBouldin, "davies_bouldin", F::Clustering, {"standard"}, {},
        "mean worst-case cluster similarity ratio");
    add(MetricId::CalinskiHarabasz, "calinski_harabasz", F::Clustering, {"standard"}, {},
        "between/within dispersion ratio");
    add(MetricId::Wcss, "wcss", F::Clustering, {"recomputed_means", "provided_centers"}, {},
        "within-cluster sum of squares; center source is the formula family");

    // -- correlation ---------------------------------------------------------
    add(MetricId::Pearson, "pearson", F::Correlation, {"standard"}, {},
        "linear correlation");
    add(MetricId::Spearman, "spearman", F::Correlation, {"rank_pearson"}, {},
        "Pearson correlation of average ranks");
    add(MetricId::KendallTau, "kendall_tau", F::Correlation, {"tau_b", "tau_a"}, {},
        "concordance correlation; tau-b corrects the denominator for ties");
    add(MetricId::MutualInformation, "mutual_information", F::Correlation,
        {"equal_width_histogram"}, {fparam("bins", std::int64_t{0})},
        "histogram mutual information in nats; bins=0 means ceil(sqrt(n))");
    add(MetricId::DistanceCorrelation, "distance_correlation", F::Correlation,
        {"double_centered"}, {}, "energy distance correlation");
    add(MetricId::BiweightMidcorrelation, "biweight_midcorrelation", F::Correlation,
        {"median_mad", "mean_sd"}, {fparam("c", 9.0)},
        "robust correlation with bisquare weights");
    add(MetricId::PercentageBend, "percentage_bend", F::Correlation, {"wilcox"},
        {fparam("beta", 0.2)}, "robust correlation with a bend at the beta quantile");
    add(MetricId::ShepherdPi, "shepherd_pi", F::Correlation, {"mahalanobis_pruned_spearman"},
        {fparam("chi2_quantile", 0.975)},
        "Spearman correlation after deterministic outlier pruning");
    add(MetricId::PartialCorrelation, "partial_correlation", F::Correlation,
        {"residual_pearson"}, {}, "correlation of least-squares residuals");

    // -- hypothesis tests ----------------------------------------------------
    std::vector<std::string> tails = {"two_sided", "greater", "less"};
    add(MetricId::TTestIndependent, "t_test_independent", F::StatTest, {"pooled"},
        {renum("tail", "two_sided", tails)}, "two-sample t test with pooled variance");
    add(MetricId::TTestPaired, "t_test_paired", F::StatTest, {"paired"},
        {renum("tail", "two_sided", tails)}, "t test on paired differences");
    add(MetricId::TTestWelch, "t_test_welch", F::StatTest, {"welch"},
        {renum("tail", "two_sided", tails)}, "two-sample t test without equal variances");
    add(MetricId::ZTest, "z_test", F::StatTest, {"known_sigma"},
        {renum("tail", "two_sided", tails), fparam("sigma", 0.0)},
        "two-sample z test; sigma=0 borrows the pooled sample deviation");
    add(MetricId::KsTest, "ks_test", F::StatTest, {"two_sample_sup"},
        {fenum("p_method", "asymptotic", {"asymptotic", "exact"})},
        "two-sample Kolmogorov-Smirnov");
    add(MetricId::Anova, "anova", F::StatTest, {"one_way_f"}, {},
        "one-way analysis of variance");
    add(MetricId::KruskalWallis, "kruskal_wallis", F::StatTest, {"tie_corrected_h"}, {},
        "rank analysis of variance with tie correction");
    add(MetricId::MannWhitneyU, "mann_whitney_u", F::StatTest, {"rank_sum"},
        {renum("statistic", "u1", {"u1", "u2", "rank_sum_w"}),
         renum("tail", "two_sided", tails),
         fenum("p_method", "normal", {"normal", "exact"}),
         fparam("continuity", std::int64_t{1})},
        "rank test; the reported statistic is a pure labeling choice");
    add(MetricId::ShapiroWilk, "shapiro_wilk", F::StatTest, {"royston"}, {},
        "normality test, polynomial approximation for 3 <= n <= 5000");
    add(MetricId::FTest, "f_test", F::StatTest, {"variance_ratio"},
        {renum("tail", "two_sided", tails)}, "variance ratio test");
    add(MetricId::Bartlett, "bartlett", F::StatTest, {"standard"}, {},
        "homogeneity of variances, normal-theory version");
    add(MetricId::Levene, "levene", F::StatTest,
        {"mean_centered", "median_centered", "trimmed_centered"},
        {fparam("trim_alpha", 0.1)},
        "spread test via deviations from a group center; the center is the formula");
    add(MetricId::ChiSquare, "chi_square", F::StatTest, {"goodness_of_fit", "independence"},
        {}, "chi-square test on counts");
    add(MetricId::WilcoxonSignedRank, "wilcoxon_signed_rank", F::StatTest, {"signed_rank"},
        {renum("statistic", "w_plus", {"w_plus", "w_min"}),
         renum("tail", "two_sided", tails),
         fenum("zero_policy", "wilcoxon", {"wilcoxon", "pratt"}),
         fenum("p_method", "normal", {"normal", "exact"})},
        "paired rank test; zero handling changes the formula, the statistic label does not");
    add(MetricId::PermutationTest, "permutation_test", F::StatTest,
        {"mean_diff", "median_diff"},
        {renum("tail", "two_sided", tails),
         fenum("method", "exact", {"exact", "monte_carlo"}),
         fparam("n_resamples", std::int64_t{10000})},
        "resampling test; exact enumeration or seeded Monte Carlo", true);

    // -- segmentation --------------------------------------------------------
    std::vector<ParamSpec> empty_pol = {
        fenum("empty_policy", "undefined", {"undefined", "zero", "one"})};
    add(MetricId::SegAccuracy, "seg_accuracy", F::Segmentation, {"proportion_correct"}, {},
        "voxelwise accuracy");
    add(MetricId::SegPrecision, "seg_precision", F::Segmentation, {"count_ratio"}, empty_pol,
        "voxelwise precision under a declared class reduction");
    add(MetricId::SegRecall, "seg_recall", F::Segmentation, {"count_ratio"}, empty_pol,
        "voxelwise recall under a declared class reduction");
    add(MetricId::SegF1, "seg_f1", F::Segmentation, {"count_ratio"}, empty_pol,
        "voxelwise F1 under a declared class reduction");
    add(MetricId::Dice, "dice", F::Segmentation, {"overlap"}, empty_pol,
        "2|A∩B| / (|A|+|B|)");
    add(MetricId::Iou, "iou", F::Segmentation, {"overlap"}, empty_pol,
        "|A∩B| / |A∪B|");
    add(MetricId::MeanIou, "mean_iou", F::Segmentation, {"overlap"}, empty_pol,
        "class-averaged intersection over union");
    add(MetricId::BoundaryF1, "boundary_f1", F::Segmentation, {"boundary_match"},
        {fparam("theta", 1.0), fenum("connectivity", "face", {"face", "corner"})},
        "F1 of boundary points matched within a physical tolerance");
    add(MetricId::Hausdorff, "hausdorff", F::Segmentation, {"min_distance_set"},
        {renum("direction", "symmetric_max", {"ab", "ba", "symmetric_max", "percentile"}),
         rparam("q", 95.0),
         fenum("point_set", "boundary", {"boundary", "all_foreground"}),
         fenum("connectivity", "face", {"face", "corner"})},
        "extreme (or percentile) of the nearest-surface distance multiset");
    add(MetricId::AdaptedRandError, "adapted_rand_error", F::Segmentation,
        {"pair_counting_f"}, {}, "1 - F of pair-counting precision/recall");
    add(MetricId::AdjustedRandIndex, "adjusted_rand_index", F::Segmentation,
        {"pair_counting_adjusted"}, {}, "chance-adjusted Rand index");
    add(MetricId::VariationOfInformation, "variation_of_information", F::Segmentation,
        {"conditional_entropy_sum"}, {}, "H(A|B) + H(B|A) in nats");

    // -- image quality -------------------------------------------------------
    add(MetricId::ImgMae, "img_mae", F::ImageQuality, {"flattened_regression"}, {},
        "mean absolute error over raster elements");
    add(MetricId::ImgMse, "img_mse", F::ImageQuality, {"flattened_regression"}, {},
        "mean squared error over raster elements");
    add(MetricId::ImgRmse, "img_rmse", F::ImageQuality, {"flattened_regression"}, {},
        "root mean squared error over raster elements");
    add(MetricId::ImgRSquared, "img_r_squared", F::ImageQuality,
        {"coefficient_of_determination", "squared_pearson", "adjusted"},
        {fparam("n_predictors", std::int64_t{1})},
        "r_squared families applied to flattened rasters");
    add(MetricId::Psnr, "psnr", F::ImageQuality, {"log_ratio_mse"},
        {renum("range_mode", "declared", {"declared", "observed_ref", "unit"})},
        "10 log10(L^2 / MSE); the dynamic range L is a reporting convention");
    add(MetricId::Ssim, "ssim", F::ImageQuality, {"gaussian_window", "uniform_window"},
        {fparam("window", std::int64_t{11}), fparam("sigma", 1.5),
         fparam("k1", 0.01), fparam("k2", 0.03)},
        "mean structural similarity over valid window positions");

    return c;
}

const std::vector<MetricInfo>& catalog() {
    static const std::vector<MetricInfo> c = build_catalog();
    return c;
}

const std::unordered_map<std::string, MetricId>& name_index() {
    static const std::unordered_map<std::string, MetricId> m = [] {
        std::unordered_map<std::string, MetricId> idx;
        for (const auto& info : catalog()) idx.emplace(info.name, info.id);
        return idx;
    }();
    return m;
}

}  // namespace

std::string task_family_name(TaskFamily t) {
    switch (t) {
        case TaskFamily::Classification: return "classification";
        case TaskFamily::Regression: return "regression";
        case TaskFamily::Clustering: return "clustering";
        case TaskFamily::Correlation: return "correlation";
        case TaskFamily::StatTest: return "stattest";
        case TaskFamily::Segmentation: return "segmentation";
        case TaskFamily::ImageQuality: return "image";
    }
    return "?";
}

const MetricInfo& metric_info(MetricId id) {
    for (const auto& info : catalog())
        if (info.id == id) return info;
    throw std::invalid_argument("metric_info: unknown metric id");
}

std::optional<MetricId> metric_from_name(std::string_view name) {
    auto it = name_index().find(std::string(name));
    if (it == name_index().end()) return std::nullopt;
    return it->second;
}

const std::vector<MetricId>& all_metrics() {
    static const std::vector<MetricId> ids = [] {
        std::vector<MetricId> v;
        for (const auto& info : catalog()) v.push_back(info.id);
        return v;
    }();
    return ids;
}

std::vector<MetricId> metrics_for_task(TaskFamily task) {
    std::vector<MetricId> v;
    for (const auto& info : catalog())
        if (info.task == task) v.push_back(info.id);
    return v;
}

namespace {

ConventionDescriptor base(MetricId id, std::string family, ReportingMode mode,
                          Quantity q = Quantity::Value) {
    ConventionDescriptor d;
    d.metric = id;
    d.formula_family = std::move(family);
    d.reporting = mode;
    d.quantity = q;
    return d;
}

// Classification count-ratio reductions, in the catalog's canonical order.
std::vector<ConventionDescriptor> count_ratio_variants(MetricId id, std::size_t n_classes,
                                                       std::map<std::string, ParamValue> extra) {
    std::vector<ConventionDescriptor> out;
    auto push = [&](ReportingMode m) {
        auto d = base(id, "count_ratio", m);
        d.params = extra;
        out.push_back(std::move(d));
    };
    push(ReportingMode::micro());
    push(ReportingMode::macro());
    push(ReportingMode::weighted());
    for (std::size_t k = 0; k < n_classes; ++k) push(ReportingMode::per_class(static_cast<int>(k)));
    push(ReportingMode::binary_positive(1));
    return out;
}

// Statistic + p descriptors for a single-convention hypothesis test.
void push_test_pair(std::vector<ConventionDescriptor>& out, MetricId id,
                    const std::string& family,
                    std::map<std::string, ParamValue> stat_params = {},
                    std::map<std::string, ParamValue> p_params = {}) {
    auto s = base(id, family, ReportingMode::scalar(), Quantity::Statistic);
    s.params = std::move(stat_params);
    out.push_back(std::move(s));
    auto p = base(id, family, ReportingMode::scalar(), Quantity::PValue);
    p.params = std::move(p_params);
    out.push_back(std::move(p));
}

}  // namespace

std::vector<ConventionDescriptor> register_variants(MetricId id, const VariantContext& ctx) {
    using MV = std::map<std::string, ParamValue>;
    std::vector<ConventionDescriptor> out;
    const std::size_t K = std::max<std::size_t>(ctx.n_classes, 2);

    switch (id) {
        case MetricId::Accuracy:
            out.push_back(base(id, "proportion_correct", ReportingMode::scalar()));
            break;
        case MetricId::BalancedAccuracy:
            out.push_back(base(id, "recall_mean", ReportingMode::macro()));
            out.push_back(base(id, "recall_mean", ReportingMode::weighted()));
            out.push_back(base(id, "chance_corrected", ReportingMode::macro()));
            break;
        case MetricId::Precision:
        case MetricId::Recall:
        case MetricId::F1:
        case MetricId::Jaccard:
            return count_ratio_variants(id, K, {});
        case MetricId::FBeta:
            return count_ratio_variants(id, K, MV{{"beta", 1.0}});
        case MetricId::CohenKappa:
            out.push_back(base(id, "chance_corrected_agreement", ReportingMode::scalar()));
            break;
        case MetricId::Mcc:
            out.push_back(base(id, "binary", ReportingMode::binary_positive(1)));
            out.push_back(base(id, "generalized", ReportingMode::scalar()));
            out.push_back(base(id, "binary", ReportingMode::macro()));
            break;
        case MetricId::GMean:
            out.push_back(base(id, "recall_geometric_mean", ReportingMode::scalar()));
            break;
        case MetricId::LogLoss: {
            auto d = base(id, "negative_log_likelihood", ReportingMode::scalar());
            d.params["epsilon"] = 1e-15;
            out.push_back(std::move(d));
            break;
        }
        case MetricId::RocAuc:
            out.push_back(base(id, "rank_half_credit", ReportingMode::binary_positive(1)));
            break;

        case MetricId::Mae:
        case MetricId::Mse:
        case MetricId::Rmse:
        case MetricId::MedianAe:
        case MetricId::Msle:
        case MetricId::ExplainedVariance:
            out.push_back(base(id, "standard", ReportingMode::scalar()));
            break;
        case MetricId::Mape:
            for (const char* units : {"fraction", "percent"}) {
                auto d = base(id, "standard", ReportingMode::scalar());
                d.params["units"] = std::string(units);
                d.params["zero_policy"] = std::string("error");
                out.push_back(std::move(d));
            }
            break;
        case MetricId::RSquared:
        case MetricId::ImgRSquared: {
            out.push_back(base(id, "coefficient_of_determination", ReportingMode::scalar()));
            out.push_back(base(id, "squared_pearson", ReportingMode::scalar()));
            auto d = base(id, "adjusted", ReportingMode::scalar());
            d.params["n_predictors"] = std::int64_t{1};
            out.push_back(std::move(d));
            break;
        }
        case MetricId::TweedieDeviance: {
            auto d = base(id, "standard", ReportingMode::scalar());
            d.params["power"] = 0.0;
            out.push_back(std::move(d));
            break;
        }
        case MetricId::Huber: {
            auto d = base(id, "standard", ReportingMode::scalar());
            d.params["delta"] = 1.0;
            out.push_back(std::move(d));
            break;
        }

        case MetricId::Silhouette:
            out.push_back(base(id, "euclidean_mean", ReportingMode::scalar()));
            break;
        case MetricId::DaviesBouldin:
        case MetricId::CalinskiHarabasz:
            out.push_back(base(id, "standard", ReportingMode::scalar()));
            break;
        case MetricId::Wcss:
            out.push_back(base(id, "recomputed_means", ReportingMode::scalar()));
            out.push_back(base(id, "provided_centers", ReportingMode::scalar()));
            break;

        case MetricId::Pearson:
            out.push_back(base(id, "standard", ReportingMode::scalar()));
            break;
        case MetricId::Spearman:
            out.push_back(base(id, "rank_pearson", ReportingMode::scalar()));
            break;
        case MetricId::KendallTau:
            out.push_back(base(id, "tau_b", ReportingMode::scalar()));
            out.push_back(base(id, "tau_a", ReportingMode::scalar()));
            break;
        case MetricId::MutualInformation: {
            auto d = base(id, "equal_width_histogram", ReportingMode::scalar());
            d.params["bins"] = std::int64_t{0};
            out.push_back(std::move(d));
            break;
        }
        case MetricId::DistanceCorrelation:
            out.push_back(base(id, "double_centered", ReportingMode::scalar()));
            break;
        case MetricId::BiweightMidcorrelation:
            for (const char* fam : {"median_mad", "mean_sd"}) {
                auto d = base(id, fam, ReportingMode::scalar());
                d.params["c"] = 9.0;
                out.push_back(std::move(d));
            }
            break;
        case MetricId::PercentageBend: {
            auto d = base(id, "wilcox", ReportingMode::scalar());
            d.params["beta"] = 0.2;
            out.push_back(std::move(d));
            break;
        }
        case MetricId::ShepherdPi: {
            auto d = base(id, "mahalanobis_pruned_spearman", ReportingMode::scalar());
            d.params["chi2_quantile"] = 0.975;
            out.push_back(std::move(d));
            break;
        }
        case MetricId::PartialCorrelation:
            out.push_back(base(id, "residual_pearson", ReportingMode::scalar()));
            break;

        case MetricId::TTestIndependent:
            push_test_pair(out, id, "pooled", {}, MV{{"tail", std::string("two_sided")}});
            break;
        case MetricId::TTestPaired:
            push_test_pair(out, id, "paired", {}, MV{{"tail", std::string("two_sided")}});
            break;
        case MetricId::TTestWelch:
            push_test_pair(out, id, "welch", {}, MV{{"tail", std::string("two_sided")}});
            break;
        case MetricId::ZTest:
            push_test_pair(out, id, "known_sigma", MV{{"sigma", 0.0}},
                           MV{{"sigma", 0.0}, {"tail", std::string("two_sided")}});
            break;
        case MetricId::KsTest: {
            auto s = base(id, "two_sample_sup", ReportingMode::scalar(), Quantity::Statistic);
            out.push_back(std::move(s));
            for (const char* method : {"asymptotic", "exact"}) {
                auto p = base(id, "two_sample_sup", ReportingMode::scalar(), Quantity::PValue);
                p.params["p_method"] = std::string(method);
                out.push_back(std::move(p));
            }
            break;
        }
        case MetricId::Anova:
            push_test_pair(out, id, "one_way_f");
            break;
        case MetricId::KruskalWallis:
            push_test_pair(out, id, "tie_corrected_h");
            break;
        case MetricId::MannWhitneyU: {
            for (const char* stat : {"u1", "u2", "rank_sum_w"}) {
                auto s = base(id, "rank_sum", ReportingMode::scalar(), Quantity::Statistic);
                s.params["statistic"] = std::string(stat);
                out.push_back(std::move(s));
            }
            for (const char* method : {"normal", "exact"}) {
                auto p = base(id, "rank_sum", ReportingMode::scalar(), Quantity::PValue);
                p.params["p_method"] = std::string(method);
                p.params["tail"] = std::string("two_sided");
                if (std::string(method) == "normal") p.params["continuity"] = std::int64_t{1};
                out.push_back(std::move(p));
            }
            break;
        }
        case MetricId::ShapiroWilk:
            push_test_pair(out, id, "royston");
            break;
        case MetricId::FTest: {
            auto s = base(id, "variance_ratio", ReportingMode::scalar(), Quantity::Statistic);
            out.push_back(std::move(s));
            for (const char* tail : {"two_sided", "greater"}) {
                auto p = base(id, "variance_ratio", ReportingMode::scalar(), Quantity::PValue);
                p.params["tail"] = std::string(tail);
                out.push_back(std::move(p));
            }
            break;
        }
        case MetricId::Bartlett:
            push_test_pair(out, id, "standard");
            break;
        case MetricId::Levene:
            for (const char* fam : {"mean_centered", "median_centered"}) {
                auto s = base(id, fam, ReportingMode::scalar(), Quantity::Statistic);
                out.push_back(std::move(s));
            }
            for (const char* fam : {"mean_centered", "median_centered"}) {
                auto p = base(id, fam, ReportingMode::scalar(), Quantity::PValue);
                out.push_back(std::move(p));
            }
            break;
        case MetricId::ChiSquare:
            push_test_pair(out, id, "goodness_of_fit");
            push_test_pair(out, id, "independence");
            break;
        case MetricId::WilcoxonSignedRank: {
            for (const char* stat : {"w_plus", "w_min"}) {
                auto s = base(id, "signed_rank", ReportingMode::scalar(), Quantity::Statistic);
                s.params["statistic"] = std::string(stat);
                s.params["zero_policy"] = std::string("wilcoxon");
                out.push_back(std::move(s));
            }
            for (const char* method : {"normal", "exact"}) {
                auto p = base(id, "signed_rank", ReportingMode::scalar(), Quantity::PValue);
                p.params["p_method"] = std::string(method);
                p.params["zero_policy"] = std::string("wilcoxon");
                p.params["tail"] = std::string("two_sided");
                out.push_back(std::move(p));
            }
            break;
        }
        case MetricId::PermutationTest: {
            auto s = base(id, "mean_diff", ReportingMode::scalar(), Quantity::Statistic);
            out.push_back(std::move(s));
            for (const char* method : {"exact", "monte_carlo"}) {
                auto p = base(id, "mean_diff", ReportingMode::scalar(), Quantity::PValue);
                p.params["method"] = std::string(method);
                p.params["tail"] = std::string("two_sided");
                if (std::string(method) == "monte_carlo")
                    p.params["n_resamples"] = std::int64_t{10000};
                out.push_back(std::move(p));
            }
            break;
        }

        case MetricId::SegAccuracy:
            out.push_back(base(id, "proportion_correct", ReportingMode::scalar()));
            break;
        case MetricId::SegPrecision:
        case MetricId::SegRecall:
        case MetricId::SegF1: {
            for (auto mode : {ReportingMode::binary_positive(1), ReportingMode::macro(),
                              ReportingMode::micro()})
                out.push_back(base(id, "count_ratio", mode));
            break;
        }
        case MetricId::Dice:
        case MetricId::Iou: {
            for (auto mode : {ReportingMode::binary_positive(1), ReportingMode::macro(),
                              ReportingMode::micro()})
                out.push_back(base(id, "overlap", mode));
            break;
        }
        case MetricId::MeanIou:
            out.push_back(base(id, "overlap", ReportingMode::macro()));
            break;
        case MetricId::BoundaryF1: {
            auto d = base(id, "boundary_match", ReportingMode::scalar());
            d.params["theta"] = 1.0;
            out.push_back(std::move(d));
            break;
        }
        case MetricId::Hausdorff: {
            for (const char* dir : {"ab", "ba", "symmetric_max"}) {
                auto d = base(id, "min_distance_set", ReportingMode::scalar());
                d.params["direction"] = std::string(dir);
                d.params["point_set"] = std::string("boundary");
                out.push_back(std::move(d));
            }
            auto d = base(id, "min_distance_set", ReportingMode::scalar());
            d.params["direction"] = std::string("percentile");
            d.params["q"] = 95.0;
            d.params["point_set"] = std::string("boundary");
            out.push_back(std::move(d));
            break;
        }
        case MetricId::AdaptedRandError:
            out.push_back(base(id, "pair_counting_f", ReportingMode::scalar()));
            break;
        case MetricId::AdjustedRandIndex:
            out.push_back(base(id, "pair_counting_adjusted", ReportingMode::scalar()));
            break;
        case MetricId::VariationOfInformation:
            out.push_back(base(id, "conditional_entropy_sum", ReportingMode::scalar()));
            break;

        case MetricId::ImgMae:
        case MetricId::ImgMse:
        case MetricId::ImgRmse:
            out.push_back(base(id, "flattened_regression", ReportingMode::scalar()));
            break;
        case MetricId::Psnr:
            for (const char* mode : {"declared", "observed_ref", "unit"}) {
                auto d = base(id, "log_ratio_mse", ReportingMode::scalar());
                d.params["range_mode"] = std::string(mode);
                out.push_back(std::move(d));
            }
            break;
        case MetricId::Ssim: {
            auto g = base(id, "gaussian_window", ReportingMode::scalar());
            g.params["window"] = std::int64_t{11};
            g.params["sigma"] = 1.5;
            out.push_back(std::move(g));
            auto u = base(id, "uniform_window", ReportingMode::scalar());
            u.params["window"] = std::int64_t{7};
            out.push_back(std::move(u));
            break;
        }
    }
    for (auto& d : out) validate_descriptor(d);
    return out;
}

void validate_descriptor(const ConventionDescriptor& d) {
    const MetricInfo& info = metric_info(d.metric);
    if (std::find(info.formula_families.begin(), info.formula_families.end(),
                  d.formula_family) == info.formula_families.end())
        throw std::invalid_argument("descriptor: unknown formula family '" + d.formula_family +
                                    "' for metric " + info.name);
    for (const auto& [key, val] : d.params) {
        const ParamSpec* spec = nullptr;
        for (const auto& p : info.params)
            if (p.name == key) { spec = &p; break; }
        if (!spec)
            throw std::invalid_argument("descriptor: unknown parameter '" + key +
                                        "' for metric " + info.name);
        if (spec->default_value.index() != val.index())
            throw std::invalid_argument("descriptor: parameter '" + key + "' of metric " +
                                        info.name + " has the wrong type");
        if (!spec->allowed.empty()) {
            const auto& s = std::get<std::string>(val);
            if (std::find(spec->allowed.begin(), spec->allowed.end(), s) == spec->allowed.end())
                throw std::invalid_argument("descriptor: parameter '" + key + "' of metric " +
                                            info.name + " has unknown value '" + s + "'");
        }
    }
}

ParamKind param_kind(MetricId id, const std::string& key) {
    const MetricInfo& info = metric_info(id);
    for (const auto& p : info.params)
        if (p.name == key) return p.kind;
    throw std::invalid_argument("param_kind: unknown parameter '" + key + "' for metric " +
                                info.name);
}

double default_tolerance(MetricId id) {
    return metric_info(id).stochastic ? 1e-6 : 1e-9;
}

}  // namespace metricdiff

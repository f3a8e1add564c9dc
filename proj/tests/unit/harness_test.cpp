#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "metricdiff/harness.hpp"

using namespace metricdiff;
using namespace metricdiff::harness;

namespace {

ConventionDescriptor desc(MetricId id, const std::string& family, ReportingMode mode,
                          Quantity q = Quantity::Value,
                          std::map<std::string, ParamValue> params = {}) {
    ConventionDescriptor d;
    d.metric = id;
    d.formula_family = family;
    d.reporting = mode;
    d.quantity = q;
    d.params = std::move(params);
    return d;
}

Dataset classification_data() {
    Dataset d;
    d.task = Task::Classification;
    // the imbalanced 100-sample matrix [[90,0],[9,1]]
    for (int i = 0; i < 90; ++i) {
        d.y_true.push_back(0);
        d.y_pred.push_back(0);
    }
    for (int i = 0; i < 9; ++i) {
        d.y_true.push_back(1);
        d.y_pred.push_back(0);
    }
    d.y_true.push_back(1);
    d.y_pred.push_back(1);
    return d;
}

Dataset regression_affine() {
    Dataset d;
    d.task = Task::Regression;
    d.truth = {1, 2, 3};
    d.pred = {2, 4, 6};
    return d;
}

}  // namespace

TEST_CASE("classify_pair applies the decision ladder in order") {
    auto base = desc(MetricId::Precision, "count_ratio", ReportingMode::micro());
    auto other = desc(MetricId::Precision, "count_ratio", ReportingMode::macro());

    // identical values within tolerance: NONE
    CHECK(classify_pair(MetricValue::scalar(0.5, base), MetricValue::scalar(0.5, other),
                        1e-9) == Discrepancy::NONE);
    // same family, different reporting, visible gap: RD
    CHECK(classify_pair(MetricValue::scalar(0.5, base), MetricValue::scalar(0.6, other),
                        1e-9) == Discrepancy::RD);

    // different formula family: ID
    auto cod = desc(MetricId::RSquared, "coefficient_of_determination",
                    ReportingMode::scalar());
    auto sp = desc(MetricId::RSquared, "squared_pearson", ReportingMode::scalar());
    CHECK(classify_pair(MetricValue::scalar(-6.0, cod), MetricValue::scalar(1.0, sp),
                        1e-9) == Discrepancy::ID);
}

TEST_CASE("out-of-domain values are BUG regardless of agreement") {
    auto d1 = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                   Quantity::PValue);
    auto d2 = d1;
    auto bad_a = MetricValue::p_value(1.51, d1);
    auto bad_b = MetricValue::p_value(1.51, d2);
    // both sides carry the same 1.51: still a BUG, never NONE
    CHECK(classify_pair(bad_a, bad_b, 1e-9) == Discrepancy::BUG);
    CHECK(classify_pair(bad_a, MetricValue::p_value(0.3, d2), 1e-9) == Discrepancy::BUG);
}

TEST_CASE("formula-kind params split RD from ID, reporting-kind params do not") {
    using MV = std::map<std::string, ParamValue>;
    auto u1 = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                   Quantity::Statistic, MV{{"statistic", std::string("u1")}});
    auto w = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                  Quantity::Statistic, MV{{"statistic", std::string("rank_sum_w")}});
    // statistic label is Reporting-kind: RD
    CHECK(classify_pair(MetricValue::scalar(0.0, u1), MetricValue::scalar(3.0, w), 1e-9) ==
          Discrepancy::RD);

    auto p_normal = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                         Quantity::PValue, MV{{"p_method", std::string("normal")}});
    auto p_exact = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                        Quantity::PValue, MV{{"p_method", std::string("exact")}});
    // p_method is Formula-kind: ID
    CHECK(classify_pair(MetricValue::p_value(0.25, p_normal),
                        MetricValue::p_value(0.33, p_exact), 1e-9) == Discrepancy::ID);
}

TEST_CASE("absent formula params resolve to their catalog defaults") {
    using MV = std::map<std::string, ParamValue>;
    // continuity defaults to 1: explicit 1 vs absent is the same formula (RD),
    // explicit 0 vs absent is not (ID)
    auto with_cc = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                        Quantity::PValue, MV{{"continuity", std::int64_t{1}}});
    auto plain = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                      Quantity::PValue);
    auto without_cc = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                           Quantity::PValue, MV{{"continuity", std::int64_t{0}}});

    CHECK(classify_pair(MetricValue::p_value(0.2, with_cc),
                        MetricValue::p_value(0.4, plain), 1e-9) == Discrepancy::RD);
    CHECK(classify_pair(MetricValue::p_value(0.2, without_cc),
                        MetricValue::p_value(0.4, plain), 1e-9) == Discrepancy::ID);
}

TEST_CASE("equal-signed infinities count as zero delta") {
    auto a = desc(MetricId::Psnr, "log_ratio_mse", ReportingMode::scalar());
    auto b = desc(MetricId::Psnr, "log_ratio_mse", ReportingMode::scalar());
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(classify_pair(MetricValue::scalar(inf, a), MetricValue::scalar(inf, b), 1e-9) ==
          Discrepancy::NONE);
    CHECK(classify_pair(MetricValue::scalar(inf, a), MetricValue::scalar(-inf, b), 1e-9) ==
          Discrepancy::RD);
}

TEST_CASE("classify_pair refuses non-comparable inputs") {
    auto value_d = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                        Quantity::Statistic);
    auto p_d = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                    Quantity::PValue);
    CHECK_THROWS_AS(classify_pair(MetricValue::scalar(1.0, value_d),
                                  MetricValue::p_value(0.5, p_d), 1e-9),
                    std::invalid_argument);

    auto other_metric = desc(MetricId::Recall, "count_ratio", ReportingMode::micro());
    auto prec = desc(MetricId::Precision, "count_ratio", ReportingMode::micro());
    CHECK_THROWS_AS(classify_pair(MetricValue::scalar(1.0, prec),
                                  MetricValue::scalar(1.0, other_metric), 1e-9),
                    std::invalid_argument);

    CHECK_THROWS_AS(classify_pair(MetricValue::undefined(prec, "no data"),
                                  MetricValue::scalar(1.0, prec), 1e-9),
                    std::invalid_argument);
}

TEST_CASE("classify_discrepancies pairs only within metric and quantity") {
    auto stat_d = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                       Quantity::Statistic);
    auto p_d = desc(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                    Quantity::PValue);
    auto prec = desc(MetricId::Precision, "count_ratio", ReportingMode::micro());

    std::vector<MetricValue> vals = {
        MetricValue::scalar(4.0, stat_d),
        MetricValue::p_value(0.2, p_d),
        MetricValue::scalar(0.9, prec),
        MetricValue::undefined(prec, "whatever"),
    };
    // no two values share (metric, quantity) with both bearing numbers
    CHECK(classify_discrepancies(vals, 1e-9).empty());
}

TEST_CASE("classify_discrepancies drops NONE and orders records canonically") {
    auto micro = desc(MetricId::Precision, "count_ratio", ReportingMode::micro());
    auto macro = desc(MetricId::Precision, "count_ratio", ReportingMode::macro());
    auto cls1 = desc(MetricId::Precision, "count_ratio", ReportingMode::per_class(1));
    auto pos1 = desc(MetricId::Precision, "count_ratio", ReportingMode::binary_positive(1));

    std::vector<MetricValue> vals = {
        MetricValue::scalar(0.91, micro),
        MetricValue::scalar(0.9545, macro),
        MetricValue::scalar(1.0, cls1),
        MetricValue::scalar(1.0, pos1),  // identical to cls1: the pair is NONE
    };
    auto recs = classify_discrepancies(vals, 1e-9);
    // pairs: micro-macro, micro-cls1, micro-pos1, macro-cls1, macro-pos1 (5 RD)
    REQUIRE(recs.size() == 5);
    for (const auto& r : recs) CHECK(r.classification == Discrepancy::RD);
    // |delta| descending within the same class rank
    for (std::size_t i = 1; i < recs.size(); ++i)
        CHECK(recs[i - 1].abs_delta >= recs[i].abs_delta - 1e-15);

    // input order must not matter
    std::vector<MetricValue> shuffled = {vals[3], vals[1], vals[0], vals[2]};
    auto recs2 = classify_discrepancies(shuffled, 1e-9);
    REQUIRE(recs2.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].descriptor_a == recs2[i].descriptor_a);
        CHECK(recs[i].descriptor_b == recs2[i].descriptor_b);
        CHECK(recs[i].abs_delta == recs2[i].abs_delta);
    }
}

TEST_CASE("exit codes escalate by the worst class present") {
    std::vector<DiscrepancyRecord> none;
    CHECK(exit_code_for(none) == 0);

    DiscrepancyRecord rd;
    rd.classification = Discrepancy::RD;
    DiscrepancyRecord id;
    id.classification = Discrepancy::ID;
    DiscrepancyRecord bug;
    bug.classification = Discrepancy::BUG;

    CHECK(exit_code_for({rd}) == 0);
    CHECK(exit_code_for({rd, id}) == 2);
    CHECK(exit_code_for({rd, id, bug}) == 3);
}

TEST_CASE("run_variants tags failing variants Undefined instead of aborting") {
    Dataset d;
    d.task = Task::StatTest;
    d.group_names = {"g0"};
    d.groups = {{1.0, 2.0, 3.0}};  // a two-sample test cannot run on one group

    RunConfig cfg;
    cfg.task = Task::StatTest;
    auto vals = run_variants(d, MetricId::MannWhitneyU, cfg);
    REQUIRE_FALSE(vals.empty());
    for (const auto& v : vals) {
        CHECK(v.validity == Validity::Undefined);
        CHECK_FALSE(v.note.empty());
    }
}

TEST_CASE("imbalanced precision sweep: distinct values, RD only") {
    RunConfig cfg;
    cfg.task = Task::Classification;
    cfg.metrics = {MetricId::Precision};
    auto vals = run_all(classification_data(), cfg);
    auto recs = classify_discrepancies(vals);

    REQUIRE_FALSE(recs.empty());
    for (const auto& r : recs) {
        CHECK(r.classification == Discrepancy::RD);
        CHECK(metric_name(r.metric) == "precision");
    }

    // at least three distinct numbers answer to "precision" here
    std::vector<double> numbers;
    for (const auto& v : vals)
        if (v.has_scalar()) numbers.push_back(*v.value);
    std::sort(numbers.begin(), numbers.end());
    numbers.erase(std::unique(numbers.begin(), numbers.end(),
                              [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
                  numbers.end());
    CHECK(numbers.size() >= 3);
}

TEST_CASE("affine regression sweep: r_squared families disagree as ID") {
    RunConfig cfg;
    cfg.task = Task::Regression;
    cfg.metrics = {MetricId::RSquared};
    auto vals = run_all(regression_affine(), cfg);
    auto recs = classify_discrepancies(vals);

    REQUIRE_FALSE(recs.empty());
    bool saw_cod_vs_sp = false;
    for (const auto& r : recs) {
        if ((r.descriptor_a.formula_family == "coefficient_of_determination" &&
             r.descriptor_b.formula_family == "squared_pearson") ||
            (r.descriptor_b.formula_family == "coefficient_of_determination" &&
             r.descriptor_a.formula_family == "squared_pearson")) {
            saw_cod_vs_sp = true;
            CHECK(r.classification == Discrepancy::ID);
            CHECK(r.abs_delta == doctest::Approx(7.0).epsilon(1e-12));
        }
    }
    CHECK(saw_cod_vs_sp);
}

TEST_CASE("presets narrow the class axis and fall back gracefully") {
    VariantContext ctx;
    ctx.n_classes = 3;

    auto all = select_variants(MetricId::Precision, ctx, "all", nullptr);
    CHECK(all.size() == register_variants(MetricId::Precision, ctx).size());

    auto first = select_variants(MetricId::Precision, ctx, "first_class", nullptr);
    REQUIRE(first.size() == 1);
    CHECK(first[0].reporting == ReportingMode::per_class(0));

    auto positive = select_variants(MetricId::Precision, ctx, "positive_class", nullptr);
    REQUIRE(positive.size() == 1);
    CHECK(positive[0].reporting == ReportingMode::binary_positive(1));

    std::vector<std::string> notes;
    auto averages = select_variants(MetricId::Precision, ctx, "averages", &notes);
    REQUIRE(averages.size() == 2);
    CHECK(averages[0].reporting == ReportingMode::macro());
    CHECK(averages[1].reporting == ReportingMode::weighted());
    REQUIRE_FALSE(notes.empty());
    CHECK(notes[0].find("ambiguous") != std::string::npos);

    // metrics without a class axis keep their full list under any preset
    auto kappa = select_variants(MetricId::CohenKappa, ctx, "positive_class", nullptr);
    CHECK(kappa.size() == register_variants(MetricId::CohenKappa, ctx).size());

    CHECK_THROWS_AS(select_variants(MetricId::Precision, ctx, "bogus", nullptr),
                    std::invalid_argument);

    for (const auto& name : preset_names()) {
        CHECK_NOTHROW(select_variants(MetricId::Precision, ctx, name, nullptr));
    }
}

TEST_CASE("run_all validates the metric family") {
    RunConfig cfg;
    cfg.task = Task::Classification;
    cfg.metrics = {MetricId::Mae};  // regression metric on a classification task
    CHECK_THROWS_AS(run_all(classification_data(), cfg), std::invalid_argument);
}

TEST_CASE("every swept value reports under a registered descriptor") {
    RunConfig cfg;
    cfg.task = Task::Classification;
    auto vals = run_all(classification_data(), cfg);
    REQUIRE_FALSE(vals.empty());

    VariantContext ctx;
    ctx.n_classes = 2;
    for (const auto& v : vals) {
        auto registered = register_variants(v.descriptor.metric, ctx);
        const bool found = std::any_of(registered.begin(), registered.end(),
                                       [&](const ConventionDescriptor& d) {
                                           return d == v.descriptor;
                                       });
        CHECK_MESSAGE(found, "unregistered descriptor: ",
                      metric_name(v.descriptor.metric), "/", v.descriptor.variant_name());
    }
}

TEST_CASE("discrepancy names render for reports") {
    CHECK(discrepancy_name(Discrepancy::BUG) == "BUG");
    CHECK(discrepancy_name(Discrepancy::ID) == "ID");
    CHECK(discrepancy_name(Discrepancy::RD) == "RD");
    CHECK(discrepancy_name(Discrepancy::NONE) == "NONE");
}

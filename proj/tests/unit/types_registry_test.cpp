#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "metricdiff/registry.hpp"
#include "metricdiff/types.hpp"

using namespace metricdiff;

TEST_CASE("LabelSet keeps declaration order and validates") {
    LabelSet ls({3, 1, 2});
    CHECK(ls.size() == 3);
    CHECK(ls.at(0) == 3);
    CHECK(ls.index_of(2) == 2);
    CHECK(ls.contains(1));
    CHECK_FALSE(ls.contains(7));
    CHECK_THROWS_AS(ls.index_of(7), std::invalid_argument);
    CHECK_THROWS_AS(LabelSet({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(LabelSet({1}), std::invalid_argument);
}

TEST_CASE("confusion_matrix tallies true rows against predicted columns") {
    LabelSet ls({0, 1, 2});
    auto cm = confusion_matrix({0, 1, 2, 2, 1}, {0, 2, 2, 1, 1}, ls);
    // row = true class, col = predicted class
    CHECK(cm.at(0, 0) == 1);
    CHECK(cm.at(1, 1) == 1);
    CHECK(cm.at(1, 2) == 1);
    CHECK(cm.at(2, 1) == 1);
    CHECK(cm.at(2, 2) == 1);
    CHECK(cm.at(0, 1) == 0);
    CHECK(cm.trace() == 3);
    CHECK(cm.total() == 5);
    CHECK(cm.row_sum(1) == 2);
    CHECK(cm.col_sum(1) == 2);
    // one-vs-rest counts for class 1
    CHECK(cm.tp(1) == 1);
    CHECK(cm.fp(1) == 1);
    CHECK(cm.fn(1) == 1);
    CHECK(cm.tn(1) == 2);
}

TEST_CASE("confusion_matrix rejects undeclared labels and bad shapes") {
    LabelSet ls({0, 1});
    CHECK_THROWS_AS(confusion_matrix({0, 2}, {0, 1}, ls), std::invalid_argument);
    CHECK_THROWS_AS(confusion_matrix({0}, {0, 1}, ls), std::invalid_argument);
    CHECK_THROWS_AS(ConfusionMatrix(ls, {1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(ConfusionMatrix(ls, {1, -1, 0, 0}), std::invalid_argument);
}

TEST_CASE("p_value factory flags NaN and out-of-range payloads") {
    ConventionDescriptor d;
    d.metric = MetricId::MannWhitneyU;
    d.formula_family = "rank_sum";

    auto ok = MetricValue::p_value(0.5, d);
    CHECK(ok.validity == Validity::Ok);
    CHECK(ok.descriptor.quantity == Quantity::PValue);
    CHECK(ok.scalar_or_throw() == 0.5);

    auto nan = MetricValue::p_value(std::nan(""), d);
    CHECK(nan.validity == Validity::Undefined);
    CHECK_FALSE(nan.has_scalar());

    auto high = MetricValue::p_value(1.51, d);
    CHECK(high.validity == Validity::OutOfDomain);
    CHECK(high.scalar_or_throw() == 1.51);

    auto low = MetricValue::p_value(-0.1, d);
    CHECK(low.validity == Validity::OutOfDomain);
}

TEST_CASE("make_test_result mirrors the p_value domain rules") {
    ConventionDescriptor d;
    d.metric = MetricId::TTestIndependent;
    d.formula_family = "pooled";

    auto r = make_test_result(d, 2.0, 0.04);
    CHECK(r.statistic_valid == Validity::Ok);
    CHECK(r.p_valid == Validity::Ok);
    CHECK(r.statistic_value().descriptor.quantity == Quantity::Statistic);
    CHECK(r.p_metric_value().descriptor.quantity == Quantity::PValue);

    auto bad_p = make_test_result(d, 2.0, 1.51);
    CHECK(bad_p.p_valid == Validity::OutOfDomain);
    CHECK(bad_p.p_metric_value().validity == Validity::OutOfDomain);

    auto nan_stat = make_test_result(d, std::nan(""), 0.5);
    CHECK(nan_stat.statistic_valid == Validity::Undefined);
    CHECK(nan_stat.statistic_value().validity == Validity::Undefined);
}

TEST_CASE("variant_name renders family, reporting, quantity and params") {
    ConventionDescriptor d;
    d.metric = MetricId::Precision;
    d.formula_family = "count_ratio";
    d.reporting = ReportingMode::macro();
    CHECK(d.variant_name() == "count_ratio[macro]");

    d.reporting = ReportingMode::per_class(2);
    CHECK(d.variant_name() == "count_ratio[class2]");

    ConventionDescriptor t;
    t.metric = MetricId::MannWhitneyU;
    t.formula_family = "rank_sum";
    t.quantity = Quantity::Statistic;
    t.params["statistic"] = std::string("u1");
    CHECK(t.variant_name() == "rank_sum[scalar,statistic,statistic=u1]");

    // params render in key order, deterministically
    ConventionDescriptor s;
    s.metric = MetricId::Ssim;
    s.formula_family = "gaussian_window";
    s.params["window"] = std::int64_t{11};
    s.params["sigma"] = 1.5;
    CHECK(s.variant_name() == "gaussian_window[scalar,sigma=1.5,window=11]");
}

TEST_CASE("catalog names are unique and round-trip through metric_from_name") {
    std::set<std::string> names;
    for (MetricId id : all_metrics()) {
        const auto& info = metric_info(id);
        CHECK(names.insert(info.name).second);
        auto back = metric_from_name(info.name);
        REQUIRE(back.has_value());
        CHECK(*back == id);
        CHECK_FALSE(info.formula_families.empty());
        CHECK_FALSE(info.summary.empty());
    }
    CHECK(all_metrics().size() == 68);
    CHECK_FALSE(metric_from_name("no_such_metric").has_value());
}

TEST_CASE("metrics_for_task partitions the catalog") {
    std::size_t total = 0;
    for (TaskFamily f : {TaskFamily::Classification, TaskFamily::Regression,
                         TaskFamily::Clustering, TaskFamily::Correlation, TaskFamily::StatTest,
                         TaskFamily::Segmentation, TaskFamily::ImageQuality}) {
        auto ms = metrics_for_task(f);
        total += ms.size();
        for (MetricId id : ms) CHECK(metric_info(id).task == f);
    }
    CHECK(total == all_metrics().size());
}

TEST_CASE("register_variants is deterministic and duplicate-free") {
    VariantContext ctx;
    ctx.n_classes = 3;
    for (MetricId id : all_metrics()) {
        auto a = register_variants(id, ctx);
        auto b = register_variants(id, ctx);
        REQUIRE_FALSE(a.empty());
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
        std::set<std::string> seen;
        for (const auto& d : a) {
            CHECK(d.metric == id);
            CHECK(seen.insert(quantity_name(d.quantity) + "/" + d.variant_name()).second);
            CHECK_NOTHROW(validate_descriptor(d));
        }
    }
}

TEST_CASE("count-ratio metrics expand per declared class") {
    VariantContext ctx;
    ctx.n_classes = 4;
    auto vs = register_variants(MetricId::Precision, ctx);
    // micro, macro, weighted, class0..class3, positive1
    REQUIRE(vs.size() == 8);
    CHECK(vs[0].reporting == ReportingMode::micro());
    CHECK(vs[1].reporting == ReportingMode::macro());
    CHECK(vs[2].reporting == ReportingMode::weighted());
    CHECK(vs[3].reporting == ReportingMode::per_class(0));
    CHECK(vs[6].reporting == ReportingMode::per_class(3));
    CHECK(vs[7].reporting == ReportingMode::binary_positive(1));
}

TEST_CASE("hypothesis tests expose statistic and p as separate quantities") {
    auto vs = register_variants(MetricId::MannWhitneyU);
    std::size_t stats = 0, ps = 0;
    for (const auto& d : vs) {
        if (d.quantity == Quantity::Statistic) ++stats;
        if (d.quantity == Quantity::PValue) ++ps;
    }
    CHECK(stats == 3);  // u1, u2, rank_sum_w labels
    CHECK(ps == 2);     // normal and exact p methods
}

TEST_CASE("validate_descriptor rejects out-of-schema conventions") {
    ConventionDescriptor d;
    d.metric = MetricId::Precision;
    d.formula_family = "count_ratio";

    ConventionDescriptor bad_family = d;
    bad_family.formula_family = "harmonic";
    CHECK_THROWS_AS(validate_descriptor(bad_family), std::invalid_argument);

    ConventionDescriptor bad_key = d;
    bad_key.params["window"] = std::int64_t{11};
    CHECK_THROWS_AS(validate_descriptor(bad_key), std::invalid_argument);

    ConventionDescriptor bad_value = d;
    bad_value.metric = MetricId::MannWhitneyU;
    bad_value.formula_family = "rank_sum";
    bad_value.params["statistic"] = std::string("u3");
    CHECK_THROWS_AS(validate_descriptor(bad_value), std::invalid_argument);

    ConventionDescriptor bad_type = bad_value;
    bad_type.params.clear();
    bad_type.params["continuity"] = std::string("yes");
    CHECK_THROWS_AS(validate_descriptor(bad_type), std::invalid_argument);
}

TEST_CASE("param_kind separates formula knobs from reporting knobs") {
    CHECK(param_kind(MetricId::MannWhitneyU, "statistic") == ParamKind::Reporting);
    CHECK(param_kind(MetricId::MannWhitneyU, "tail") == ParamKind::Reporting);
    CHECK(param_kind(MetricId::MannWhitneyU, "p_method") == ParamKind::Formula);
    CHECK(param_kind(MetricId::MannWhitneyU, "continuity") == ParamKind::Formula);
    CHECK(param_kind(MetricId::Mape, "units") == ParamKind::Reporting);
    CHECK(param_kind(MetricId::Mape, "zero_policy") == ParamKind::Formula);
    CHECK(param_kind(MetricId::Psnr, "range_mode") == ParamKind::Reporting);
    CHECK(param_kind(MetricId::Hausdorff, "direction") == ParamKind::Reporting);
    CHECK(param_kind(MetricId::Hausdorff, "point_set") == ParamKind::Formula);
    CHECK(param_kind(MetricId::Ssim, "window") == ParamKind::Formula);
    CHECK_THROWS_AS(param_kind(MetricId::Ssim, "nope"), std::invalid_argument);
}

TEST_CASE("default tolerances are positive and widened for stochastic metrics") {
    for (MetricId id : all_metrics()) CHECK(default_tolerance(id) > 0.0);
    CHECK(default_tolerance(MetricId::PermutationTest) > default_tolerance(MetricId::Mse));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metricdiff/report.hpp"

using namespace metricdiff;
using namespace metricdiff::harness;
using nlohmann::json;

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

DiscrepancyRecord record(MetricId id, const std::string& family, ReportingMode a,
                         ReportingMode b, double va, double vb, Discrepancy cls) {
    DiscrepancyRecord r;
    r.metric = id;
    r.descriptor_a = desc(id, family, a);
    r.descriptor_b = desc(id, family, b);
    r.value_a = va;
    r.value_b = vb;
    r.abs_delta = std::fabs(va - vb);
    r.classification = cls;
    return r;
}

}  // namespace

TEST_CASE("report_format_from_name accepts json and md only") {
    CHECK(report_format_from_name("json") == ReportFormat::Json);
    CHECK(report_format_from_name("md") == ReportFormat::Markdown);
    CHECK_THROWS_AS((void)report_format_from_name("markdown"), std::invalid_argument);
    CHECK_THROWS_AS((void)report_format_from_name(""), std::invalid_argument);
}

TEST_CASE("format_full round-trips through parsing") {
    const double cases[] = {0.0,    1.0,      0.5,         1.0 / 3.0, 0.1,  -0.1,
                            1e300,  1e-300,   0.91,        19.0 / 22.0, 2.5, -123.456,
                            6.02e23, 1.0 + std::numeric_limits<double>::epsilon()};
    for (double v : cases) {
        const std::string s = format_full(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_full(1.0) == "1");
    CHECK(format_full(0.5) == "0.5");
    CHECK(format_full(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_full(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_full(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("format_2dp renders fixed two decimals") {
    CHECK(format_2dp(1.0) == "1.00");
    CHECK(format_2dp(-2.5) == "-2.50");
    CHECK(format_2dp(19.0 / 22.0) == "0.86");
    // 0.125 and 0.375 are exact in binary; ties resolve to the even digit
    CHECK(format_2dp(0.125) == "0.12");
    CHECK(format_2dp(0.375) == "0.38");
    CHECK(format_2dp(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_2dp(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_2dp(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("emit_values json carries one row per value with echo of the config") {
    std::vector<MetricValue> values;
    values.push_back(MetricValue::scalar(
        0.91, desc(MetricId::Precision, "count_ratio", ReportingMode::micro())));
    values.push_back(MetricValue::undefined(
        desc(MetricId::Precision, "count_ratio", ReportingMode::per_class(1)),
        "no predicted positives"));

    ReportOptions opts;
    opts.format = ReportFormat::Json;
    opts.task = "classification";
    opts.seed = 7;
    opts.preset = "all";

    const std::string text = emit_values(values, opts, {"hello"});
    CHECK(text.back() == '\n');
    const json doc = json::parse(text);

    CHECK(doc["report"] == "values");
    CHECK(doc["task"] == "classification");
    CHECK(doc["preset"] == "all");
    CHECK(doc["seed"] == 7);
    CHECK(doc["n_values"] == 2);
    CHECK(doc["notes"].size() == 1);
    CHECK(doc["notes"][0] == "hello");
    REQUIRE(doc["values"].size() == 2);

    const auto& row0 = doc["values"][0];
    CHECK(row0["metric"] == "precision");
    CHECK(row0["variant"] == "count_ratio[micro]");
    CHECK(row0["quantity"] == "value");
    CHECK(row0["value"] == "0.91");
    CHECK(row0["value_2dp"] == "0.91");
    CHECK(row0["validity"] == "ok");
    CHECK(row0["filled"] == false);

    const auto& row1 = doc["values"][1];
    CHECK(row1["variant"] == "count_ratio[class1]");
    CHECK(row1["value"].is_null());
    CHECK(row1["value_2dp"].is_null());
    CHECK(row1["validity"] == "undefined");
    CHECK(row1["note"] == "no predicted positives");

    // identical inputs must yield identical bytes
    CHECK(emit_values(values, opts, {"hello"}) == text);
}

TEST_CASE("emit_values markdown renders an aligned table with dashes for missing values") {
    std::vector<MetricValue> values;
    values.push_back(MetricValue::scalar(
        1.0, desc(MetricId::Precision, "count_ratio", ReportingMode::macro())));
    values.push_back(MetricValue::undefined(
        desc(MetricId::Precision, "count_ratio", ReportingMode::per_class(0)), "empty"));

    ReportOptions opts;
    opts.format = ReportFormat::Markdown;
    opts.task = "classification";
    opts.seed = 3;

    const std::string text = emit_values(values, opts);
    CHECK(text.find("# metric values: classification") == 0);
    CHECK(text.find("seed: 3") != std::string::npos);
    CHECK(text.find("| metric") != std::string::npos);
    CHECK(text.find("count_ratio[macro]") != std::string::npos);
    CHECK(text.find("| -") != std::string::npos);  // missing value renders as a dash
    CHECK(text.find("notes:") == std::string::npos);

    const std::string with_notes = emit_values(values, opts, {"watch out"});
    CHECK(with_notes.find("notes:\n- watch out\n") != std::string::npos);
}

TEST_CASE("emit_report json on an empty record list reads all consistent") {
    ReportOptions opts;
    opts.format = ReportFormat::Json;
    opts.task = "regression";
    opts.seed = 0;

    const std::string text = emit_report({}, opts);
    const json doc = json::parse(text);
    CHECK(doc["report"] == "diff");
    CHECK(doc["task"] == "regression");
    CHECK(doc["tolerance"] == "default");
    CHECK(doc["summary"] == "all consistent");
    CHECK(doc["counts"]["bug"] == 0);
    CHECK(doc["counts"]["id"] == 0);
    CHECK(doc["counts"]["rd"] == 0);
    CHECK(doc["exit_code"] == 0);
    CHECK(doc["rows"].empty());

    opts.tolerance = 0.001;
    const json doc2 = json::parse(emit_report({}, opts));
    CHECK(doc2["tolerance"] == "0.001");
}

TEST_CASE("emit_report json rows mirror the records in order") {
    std::vector<DiscrepancyRecord> records;
    records.push_back(record(MetricId::MannWhitneyU, "rank_sum", ReportingMode::scalar(),
                             ReportingMode::scalar(), 1.51, 0.3, Discrepancy::BUG));
    records.push_back(record(MetricId::Precision, "count_ratio", ReportingMode::micro(),
                             ReportingMode::macro(), 0.91, 19.0 / 22.0 + 0.09090909090909091,
                             Discrepancy::RD));

    ReportOptions opts;
    opts.format = ReportFormat::Json;
    opts.task = "classification";
    opts.seed = 11;
    opts.preset = "averages";

    const std::string text = emit_report(records, opts, {"note-a"});
    const json doc = json::parse(text);
    CHECK(doc["preset"] == "averages");
    CHECK(doc["seed"] == 11);
    CHECK(doc["summary"] == "2 discrepant pair(s): 1 BUG, 0 ID, 1 RD");
    CHECK(doc["counts"]["bug"] == 1);
    CHECK(doc["counts"]["rd"] == 1);
    CHECK(doc["exit_code"] == 3);
    CHECK(doc["notes"][0] == "note-a");
    REQUIRE(doc["rows"].size() == 2);

    const auto& r0 = doc["rows"][0];
    CHECK(r0["metric"] == "mann_whitney_u");
    CHECK(r0["class"] == "BUG");
    CHECK(r0["value_a"] == "1.51");
    CHECK(r0["value_b"] == "0.3");
    CHECK(r0["delta"] == format_full(1.51 - 0.3));
    CHECK(r0["value_a_2dp"] == "1.51");

    const auto& r1 = doc["rows"][1];
    CHECK(r1["metric"] == "precision");
    CHECK(r1["variant_a"] == "count_ratio[micro]");
    CHECK(r1["variant_b"] == "count_ratio[macro]");
    CHECK(r1["class"] == "RD");

    CHECK(emit_report(records, opts, {"note-a"}) == text);
}

TEST_CASE("emit_report markdown renders header, config echo and table") {
    std::vector<DiscrepancyRecord> records;
    records.push_back(record(MetricId::Precision, "count_ratio", ReportingMode::micro(),
                             ReportingMode::macro(), 0.91, 0.9545454545454546,
                             Discrepancy::RD));

    ReportOptions opts;
    opts.format = ReportFormat::Markdown;
    opts.task = "classification";
    opts.tolerance = 1e-9;
    opts.seed = 5;

    const std::string text = emit_report(records, opts);
    CHECK(text.find("# convention diff: classification") == 0);
    CHECK(text.find("tolerance: 1e-09") != std::string::npos);
    CHECK(text.find("seed: 5") != std::string::npos);
    CHECK(text.find("1 discrepant pair(s): 0 BUG, 0 ID, 1 RD") != std::string::npos);
    CHECK(text.find("| metric") != std::string::npos);
    CHECK(text.find("RD") != std::string::npos);
    CHECK(text.find("count_ratio[micro]") != std::string::npos);

    // pipe table rows all share the same width: every line of the table block
    // must start and end with '|'
    bool in_table = false;
    std::size_t expected_len = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.front() == '|') {
            if (!in_table) {
                in_table = true;
                expected_len = line.size();
            }
            CHECK(line.size() == expected_len);
            CHECK(line.back() == '|');
        }
    }
    CHECK(in_table);

    const std::string empty_text = emit_report({}, opts);
    CHECK(empty_text.find("all consistent") != std::string::npos);
    CHECK(empty_text.find('|') == std::string::npos);
}

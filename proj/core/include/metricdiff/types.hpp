#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace metricdiff {

using Label = int;
using LabelVector = std::vector<Label>;
using ScoreVector = std::vector<double>;

// Declared set of class labels. Declaration order is authoritative: it fixes
// the row/column order of every confusion matrix built against this set, so
// "class k" always means "the k-th declared label", not "the k-th label seen".
class LabelSet {
public:
    explicit LabelSet(std::vector<Label> labels);

    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] Label at(std::size_t i) const { return labels_.at(i); }
    [[nodiscard]] std::size_t index_of(Label l) const;
    [[nodiscard]] bool contains(Label l) const noexcept;
    [[nodiscard]] const std::vector<Label>& values() const noexcept { return labels_; }

    bool operator==(const LabelSet& other) const noexcept { return labels_ == other.labels_; }

private:
    std::vector<Label> labels_;
};

// K x K contingency counts. Rows index the true class, columns the predicted
// class, both in declared label order.
class ConfusionMatrix {
public:
    ConfusionMatrix(LabelSet labels, std::vector<std::int64_t> row_major_counts);

    [[nodiscard]] std::size_t k() const noexcept { return labels_.size(); }
    [[nodiscard]] const LabelSet& labels() const noexcept { return labels_; }
    [[nodiscard]] std::int64_t at(std::size_t true_i, std::size_t pred_j) const;

    [[nodiscard]] std::int64_t row_sum(std::size_t i) const;   // support of true class i
    [[nodiscard]] std::int64_t col_sum(std::size_t j) const;   // predicted count of class j
    [[nodiscard]] std::int64_t trace() const;
    [[nodiscard]] std::int64_t total() const;

    // One-vs-rest counts for class k.
    [[nodiscard]] std::int64_t tp(std::size_t k) const { return at(k, k); }
    [[nodiscard]] std::int64_t fp(std::size_t k) const { return col_sum(k) - at(k, k); }
    [[nodiscard]] std::int64_t fn(std::size_t k) const { return row_sum(k) - at(k, k); }
    [[nodiscard]] std::int64_t tn(std::size_t k) const { return total() - row_sum(k) - col_sum(k) + at(k, k); }

private:
    LabelSet labels_;
    std::vector<std::int64_t> counts_;
};

// Builds a confusion matrix from paired label vectors. Every label in either
// vector must be a member of the declared set.
[[nodiscard]] ConfusionMatrix confusion_matrix(const LabelVector& y_true,
                                               const LabelVector& y_pred,
                                               const LabelSet& labels);

// How a per-class family of values is reduced to the reported number.
enum class ReportingModeKind : std::uint8_t {
    Scalar,          // metric has a single value; no reduction axis
    PerClass,        // value of one declared class, no reduction
    Micro,           // pool counts across classes, then compute
    Macro,           // unweighted mean of per-class values
    Weighted,        // support-weighted mean of per-class values
    BinaryPositive,  // collapse to positive-vs-rest, report the positive class
};

struct ReportingMode {
    ReportingModeKind kind = ReportingModeKind::Scalar;
    int class_index = 0;  // meaningful for PerClass / BinaryPositive only

    static ReportingMode scalar() { return {ReportingModeKind::Scalar, 0}; }
    static ReportingMode per_class(int k) { return {ReportingModeKind::PerClass, k}; }
    static ReportingMode micro() { return {ReportingModeKind::Micro, 0}; }
    static ReportingMode macro() { return {ReportingModeKind::Macro, 0}; }
    static ReportingMode weighted() { return {ReportingModeKind::Weighted, 0}; }
    static ReportingMode binary_positive(int k) { return {ReportingModeKind::BinaryPositive, k}; }

    bool operator==(const ReportingMode& o) const noexcept {
        if (kind != o.kind) return false;
        if (kind == ReportingModeKind::PerClass || kind == ReportingModeKind::BinaryPositive)
            return class_index == o.class_index;
        return true;
    }
    [[nodiscard]] std::string name() const;
};

// Fill rule for 0/0-style degenerate denominators in per-class ratios.
enum class ZeroDivPolicy : std::uint8_t {
    Undefined,  // propagate an undefined value (default)
    Zero,       // substitute 0, flag the value as convention-filled
    One,        // substitute 1, flag the value as convention-filled
    Drop,       // omit the class from any aggregate
};

// Which number of a computation a descriptor reports. Most metrics report a
// plain value; hypothesis tests additionally expose their statistic and
// p-value as separately swept quantities, so statistics are only ever
// compared with statistics and p-values with p-values.
enum class Quantity : std::uint8_t { Value, Statistic, PValue };

[[nodiscard]] std::string quantity_name(Quantity q);

using ParamValue = std::variant<std::int64_t, double, std::string>;

[[nodiscard]] std::string param_value_to_string(const ParamValue& v);

enum class MetricId : std::uint16_t;  // full catalog lives in registry.hpp

// A fully pinned computation convention: which metric, which formula family,
// how it is reduced for reporting, and every free parameter. Two values are
// comparable in the harness iff their descriptors share metric and quantity.
struct ConventionDescriptor {
    MetricId metric{};
    std::string formula_family;
    ReportingMode reporting = ReportingMode::scalar();
    Quantity quantity = Quantity::Value;
    std::map<std::string, ParamValue> params;  // ordered: rendering is deterministic

    // Compact stable label, e.g. "count_ratio[macro]" or
    // "rank_sum[scalar,statistic=u1]". Used in reports and error messages.
    [[nodiscard]] std::string variant_name() const;

    bool operator==(const ConventionDescriptor& o) const noexcept {
        return metric == o.metric && formula_family == o.formula_family &&
               reporting == o.reporting && quantity == o.quantity && params == o.params;
    }
};

enum class Validity : std::uint8_t {
    Ok,           // value is meaningful under the declared convention
    OutOfDomain,  // value exists but violates the metric's domain (e.g. p > 1)
    Undefined,    // no value exists; preconditions or domain failed entirely
};

[[nodiscard]] std::string validity_name(Validity v);

// Scalar outcome of a metric operation that can degenerate. `filled` marks
// values that exist only because a documented zero-denominator convention
// substituted one.
struct ScalarResult {
    std::optional<double> value;
    bool filled = false;
    std::string note;

    static ScalarResult ok(double v) { return {v, false, {}}; }
    static ScalarResult fill(double v, std::string why) { return {v, true, std::move(why)}; }
    static ScalarResult undefined(std::string why) { return {std::nullopt, false, std::move(why)}; }
};

// A computed metric value tagged with the convention that produced it.
// Invariants: Undefined carries no numeric payload; a PValue-quantity value
// outside [0,1] is flagged OutOfDomain at construction and cannot be Ok.
struct MetricValue {
    ConventionDescriptor descriptor;
    std::optional<double> value;                   // scalar payload
    std::optional<std::vector<double>> per_class;  // vector payload (PerClass reports)
    Validity validity = Validity::Undefined;
    bool filled = false;  // true when a ZeroDivPolicy substitution produced `value`
    std::string note;     // short diagnostic, set for Undefined/OutOfDomain values

    static MetricValue scalar(double v, ConventionDescriptor d);
    static MetricValue scalar_filled(double v, ConventionDescriptor d);
    static MetricValue p_value(double p, ConventionDescriptor d);
    static MetricValue vector(std::vector<double> v, ConventionDescriptor d);
    static MetricValue undefined(ConventionDescriptor d, std::string why);
    static MetricValue out_of_domain(double v, ConventionDescriptor d, std::string why);

    [[nodiscard]] bool has_scalar() const noexcept { return value.has_value(); }
    [[nodiscard]] double scalar_or_throw() const;
};

// Outcome of a hypothesis test: the statistic, its p-value and any degrees of
// freedom, all under one descriptor. `p_valid` is OutOfDomain when p lies
// outside [0,1]; the harness surfaces that as a BUG, not an exception.
struct TestResult {
    ConventionDescriptor descriptor;
    double statistic = 0.0;
    double p = 0.0;
    std::optional<double> df1;
    std::optional<double> df2;
    Validity statistic_valid = Validity::Ok;
    Validity p_valid = Validity::Ok;
    std::string note;

    [[nodiscard]] MetricValue statistic_value() const;
    [[nodiscard]] MetricValue p_metric_value() const;
};

[[nodiscard]] TestResult make_test_result(ConventionDescriptor d, double statistic, double p,
                                          std::optional<double> df1 = std::nullopt,
                                          std::optional<double> df2 = std::nullopt);

}  // namespace metricdiff

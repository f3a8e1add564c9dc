#include "metricdiff/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "metricdiff/registry.hpp"

namespace metricdiff {

LabelSet::LabelSet(std::vector<Label> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw std::invalid_argument("LabelSet: at least two labels required");
    std::unordered_set<Label> seen;
    for (Label l : labels_) {
        if (!seen.insert(l).second)
            throw std::invalid_argument("LabelSet: duplicate label " + std::to_string(l));
    }
}

std::size_t LabelSet::index_of(Label l) const {
    auto it = std::find(labels_.begin(), labels_.end(), l);
    if (it == labels_.end())
        throw std::invalid_argument("LabelSet: label " + std::to_string(l) + " not declared");
    return static_cast<std::size_t>(it - labels_.begin());
}

bool LabelSet::contains(Label l) const noexcept {
    return std::find(labels_.begin(), labels_.end(), l) != labels_.end();
}

ConfusionMatrix::ConfusionMatrix(LabelSet labels, std::vector<std::int64_t> row_major_counts)
    : labels_(std::move(labels)), counts_(std::move(row_major_counts)) {
    const std::size_t k = labels_.size();
    if (counts_.size() != k * k)
        throw std::invalid_argument("ConfusionMatrix: counts size must be k*k");
    for (std::int64_t c : counts_)
        if (c < 0) throw std::invalid_argument("ConfusionMatrix: negative count");
}

std::int64_t ConfusionMatrix::at(std::size_t i, std::size_t j) const {
    const std::size_t k = labels_.size();
    if (i >= k || j >= k) throw std::out_of_range("ConfusionMatrix: index out of range");
    return counts_[i * k + j];
}

std::int64_t ConfusionMatrix::row_sum(std::size_t i) const {
    const std::size_t k = labels_.size();
    if (i >= k) throw std::out_of_range("ConfusionMatrix: row out of range");
    std::int64_t s = 0;
    for (std::size_t j = 0; j < k; ++j) s += counts_[i * k + j];
    return s;
}

std::int64_t ConfusionMatrix::col_sum(std::size_t j) const {
    const std::size_t k = labels_.size();
    if (j >= k) throw std::out_of_range("ConfusionMatrix: column out of range");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < k; ++i) s += counts_[i * k + j];
    return s;
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) s += at(i, i);
    return s;
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t s = 0;
    for (std::int64_t c : counts_) s += c;
    return s;
}

ConfusionMatrix confusion_matrix(const LabelVector& y_true, const LabelVector& y_pred,
                                 const LabelSet& labels) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("confusion_matrix: length mismatch");
    const std::size_t k = labels.size();
    std::vector<std::int64_t> counts(k * k, 0);
    for (std::size_t n = 0; n < y_true.size(); ++n) {
        const std::size_t i = labels.index_of(y_true[n]);
        const std::size_t j = labels.index_of(y_pred[n]);
        ++counts[i * k + j];
    }
    return {labels, std::move(counts)};
}

std::string ReportingMode::name() const {
    switch (kind) {
        case ReportingModeKind::Scalar: return "scalar";
        case ReportingModeKind::PerClass: return "class" + std::to_string(class_index);
        case ReportingModeKind::Micro: return "micro";
        case ReportingModeKind::Macro: return "macro";
        case ReportingModeKind::Weighted: return "weighted";
        case ReportingModeKind::BinaryPositive: return "positive" + std::to_string(class_index);
    }
    return "?";
}

std::string quantity_name(Quantity q) {
    switch (q) {
        case Quantity::Value: return "value";
        case Quantity::Statistic: return "statistic";
        case Quantity::PValue: return "p";
    }
    return "?";
}

std::string validity_name(Validity v) {
    switch (v) {
        case Validity::Ok: return "ok";
        case Validity::OutOfDomain: return "out_of_domain";
        case Validity::Undefined: return "undefined";
    }
    return "?";
}

std::string param_value_to_string(const ParamValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) {
        std::ostringstream os;
        os << *d;
        return os.str();
    }
    return std::get<std::string>(v);
}

std::string ConventionDescriptor::variant_name() const {
    std::ostringstream os;
    os << formula_family << '[' << reporting.name();
    if (quantity != Quantity::Value) os << ',' << quantity_name(quantity);
    for (const auto& [key, val] : params) os << ',' << key << '=' << param_value_to_string(val);
    os << ']';
    return os.str();
}

MetricValue MetricValue::scalar(double v, ConventionDescriptor d) {
    MetricValue m;
    m.descriptor = std::move(d);
    m.value = v;
    m.validity = Validity::Ok;
    return m;
}

MetricValue MetricValue::scalar_filled(double v, ConventionDescriptor d) {
    MetricValue m = scalar(v, std::move(d));
    m.filled = true;
    return m;
}

MetricValue MetricValue::p_value(double p, ConventionDescriptor d) {
    d.quantity = Quantity::PValue;
    if (std::isnan(p)) return undefined(std::move(d), "p-value is NaN");
    if (!(p >= 0.0 && p <= 1.0))
        return out_of_domain(p, std::move(d), "p-value outside [0,1]");
    return scalar(p, std::move(d));
}

MetricValue MetricValue::vector(std::vector<double> v, ConventionDescriptor d) {
    MetricValue m;
    m.descriptor = std::move(d);
    m.per_class = std::move(v);
    m.validity = Validity::Ok;
    return m;
}

MetricValue MetricValue::undefined(ConventionDescriptor d, std::string why) {
    MetricValue m;
    m.descriptor = std::move(d);
    m.validity = Validity::Undefined;
    m.note = std::move(why);
    return m;
}

MetricValue MetricValue::out_of_domain(double v, ConventionDescriptor d, std::string why) {
    MetricValue m;
    m.descriptor = std::move(d);
    m.value = v;
    m.validity = Validity::OutOfDomain;
    m.note = std::move(why);
    return m;
}

double MetricValue::scalar_or_throw() const {
    if (!value)
        throw std::logic_error("MetricValue: no scalar payload (" +
                               descriptor.variant_name() + ": " + note + ")");
    return *value;
}

MetricValue TestResult::statistic_value() const {
    ConventionDescriptor d = descriptor;
    d.quantity = Quantity::Statistic;
    if (statistic_valid == Validity::Undefined) return MetricValue::undefined(std::move(d), note);
    if (statistic_valid == Validity::OutOfDomain)
        return MetricValue::out_of_domain(statistic, std::move(d), note);
    return MetricValue::scalar(statistic, std::move(d));
}

MetricValue TestResult::p_metric_value() const {
    ConventionDescriptor d = descriptor;
    if (p_valid == Validity::Undefined) {
        d.quantity = Quantity::PValue;
        return MetricValue::undefined(std::move(d), note);
    }
    return MetricValue::p_value(p, std::move(d));
}

TestResult make_test_result(ConventionDescriptor d, double statistic, double p,
                            std::optional<double> df1, std::optional<double> df2) {
    TestResult r;
    r.descriptor = std::move(d);
    r.statistic = statistic;
    r.p = p;
    r.df1 = df1;
    r.df2 = df2;
    if (std::isnan(p))
        r.p_valid = Validity::Undefined;
    else if (!(p >= 0.0 && p <= 1.0))
        r.p_valid = Validity::OutOfDomain;
    if (std::isnan(statistic)) r.statistic_valid = Validity::Undefined;
    return r;
}

}  // namespace metricdiff

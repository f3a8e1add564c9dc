#include "metricdiff/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace metricdiff::harness {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string printf_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::string tolerance_text(double tol) {
    return tol < 0.0 ? std::string("default") : format_full(tol);
}

const char* validity_text(Validity v) {
    switch (v) {
        case Validity::Ok: return "ok";
        case Validity::OutOfDomain: return "out_of_domain";
        case Validity::Undefined: return "undefined";
    }
    return "undefined";
}

// --- value listing -------------------------------------------------------------

ordered_json value_row_json(const MetricValue& v) {
    ordered_json row;
    row["metric"] = metric_name(v.descriptor.metric);
    row["variant"] = v.descriptor.variant_name();
    row["quantity"] = quantity_name(v.descriptor.quantity);
    if (v.value.has_value()) {
        row["value"] = format_full(*v.value);
        row["value_2dp"] = format_2dp(*v.value);
    } else {
        row["value"] = nullptr;
        row["value_2dp"] = nullptr;
    }
    row["validity"] = validity_text(v.validity);
    row["filled"] = v.filled;
    row["note"] = v.note;
    return row;
}

std::string values_json(const std::vector<MetricValue>& values, const ReportOptions& opts,
                        const std::vector<std::string>& notes) {
    ordered_json doc;
    doc["report"] = "values";
    doc["task"] = opts.task;
    doc["preset"] = opts.preset;
    doc["seed"] = opts.seed;
    doc["n_values"] = values.size();
    doc["notes"] = notes;
    doc["values"] = ordered_json::array();
    for (const auto& v : values) doc["values"].push_back(value_row_json(v));
    return doc.dump(2) + "\n";
}

void append_aligned_table(std::string& out, const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return;
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    auto emit_row = [&](const std::vector<std::string>& row) {
        out += '|';
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += ' ';
            out += row[c];
            out.append(width[c] - row[c].size(), ' ');
            out += " |";
        }
        out += '\n';
    };
    emit_row(rows.front());
    out += '|';
    for (std::size_t c = 0; c < width.size(); ++c) {
        out.append(width[c] + 2, '-');
        out += '|';
    }
    out += '\n';
    for (std::size_t r = 1; r < rows.size(); ++r) emit_row(rows[r]);
}

void append_notes(std::string& out, const std::vector<std::string>& notes) {
    if (notes.empty()) return;
    out += "\nnotes:\n";
    for (const auto& n : notes) out += "- " + n + "\n";
}

std::string values_markdown(const std::vector<MetricValue>& values, const ReportOptions& opts,
                            const std::vector<std::string>& notes) {
    std::string out = "# metric values: " + opts.task + "\n\n";
    out += "preset: " + opts.preset + "  seed: " + std::to_string(opts.seed) + "\n\n";
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"metric", "variant", "value", "validity", "value_full", "note"});
    for (const auto& v : values) {
        rows.push_back({metric_name(v.descriptor.metric), v.descriptor.variant_name(),
                        v.value ? format_2dp(*v.value) : "-", validity_text(v.validity),
                        v.value ? format_full(*v.value) : "-", v.note});
    }
    append_aligned_table(out, rows);
    append_notes(out, notes);
    return out;
}

// --- discrepancy report -----------------------------------------------------------

struct Counts {
    std::size_t bug = 0;
    std::size_t id = 0;
    std::size_t rd = 0;
};

Counts count_classes(const std::vector<DiscrepancyRecord>& records) {
    Counts c;
    for (const auto& r : records) {
        if (r.classification == Discrepancy::BUG) ++c.bug;
        else if (r.classification == Discrepancy::ID) ++c.id;
        else if (r.classification == Discrepancy::RD) ++c.rd;
    }
    return c;
}

std::string summary_line(const std::vector<DiscrepancyRecord>& records, const Counts& c) {
    if (records.empty()) return "all consistent";
    return std::to_string(records.size()) + " discrepant pair(s): " + std::to_string(c.bug) +
           " BUG, " + std::to_string(c.id) + " ID, " + std::to_string(c.rd) + " RD";
}

std::string report_json(const std::vector<DiscrepancyRecord>& records,
                        const ReportOptions& opts, const std::vector<std::string>& notes) {
    const Counts c = count_classes(records);
    ordered_json doc;
    doc["report"] = "diff";
    doc["task"] = opts.task;
    doc["preset"] = opts.preset;
    doc["tolerance"] = tolerance_text(opts.tolerance);
    doc["seed"] = opts.seed;
    doc["summary"] = summary_line(records, c);
    doc["counts"] = ordered_json{{"bug", c.bug}, {"id", c.id}, {"rd", c.rd}};
    doc["exit_code"] = exit_code_for(records);
    doc["notes"] = notes;
    doc["rows"] = ordered_json::array();
    for (const auto& r : records) {
        ordered_json row;
        row["metric"] = metric_name(r.metric);
        row["variant_a"] = r.descriptor_a.variant_name();
        row["variant_b"] = r.descriptor_b.variant_name();
        row["value_a"] = format_full(r.value_a);
        row["value_b"] = format_full(r.value_b);
        row["delta"] = format_full(r.abs_delta);
        row["class"] = discrepancy_name(r.classification);
        row["value_a_2dp"] = format_2dp(r.value_a);
        row["value_b_2dp"] = format_2dp(r.value_b);
        row["delta_2dp"] = format_2dp(r.abs_delta);
        doc["rows"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

std::string report_markdown(const std::vector<DiscrepancyRecord>& records,
                            const ReportOptions& opts, const std::vector<std::string>& notes) {
    const Counts c = count_classes(records);
    std::string out = "# convention diff: " + opts.task + "\n\n";
    out += "tolerance: " + tolerance_text(opts.tolerance) +
           "  seed: " + std::to_string(opts.seed) + "  preset: " + opts.preset + "\n\n";
    out += summary_line(records, c) + "\n";
    if (!records.empty()) {
        out += '\n';
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"metric", "variant_a", "variant_b", "value_a", "value_b", "delta",
                        "class", "value_a_full", "value_b_full", "delta_full"});
        for (const auto& r : records) {
            rows.push_back({metric_name(r.metric), r.descriptor_a.variant_name(),
                            r.descriptor_b.variant_name(), format_2dp(r.value_a),
                            format_2dp(r.value_b), format_2dp(r.abs_delta),
                            discrepancy_name(r.classification), format_full(r.value_a),
                            format_full(r.value_b), format_full(r.abs_delta)});
        }
        append_aligned_table(out, rows);
    }
    append_notes(out, notes);
    return out;
}

}  // namespace

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "md") return ReportFormat::Markdown;
    throw std::invalid_argument("unknown report format '" + name + "' (expected json or md)");
}

std::string format_full(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    // Shortest representation that round-trips: try increasing precision.
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return printf_double("%.17g", v);
}

std::string format_2dp(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return printf_double("%.2f", v);
}

std::string emit_values(const std::vector<MetricValue>& values, const ReportOptions& opts,
                        const std::vector<std::string>& notes) {
    return opts.format == ReportFormat::Json ? values_json(values, opts, notes)
                                             : values_markdown(values, opts, notes);
}

std::string emit_report(const std::vector<DiscrepancyRecord>& records,
                        const ReportOptions& opts, const std::vector<std::string>& notes) {
    return opts.format == ReportFormat::Json ? report_json(records, opts, notes)
                                             : report_markdown(records, opts, notes);
}

}  // namespace metricdiff::harness

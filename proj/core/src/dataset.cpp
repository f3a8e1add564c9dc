#include "metricdiff/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace metricdiff::harness {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string trimmed(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && is_space(s[i])) ++i;
    return s.substr(i);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trimmed(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trimmed(cur));
    return out;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) fail(path, line, "trailing characters in number '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(path, line, "not a number: '" + s + "'");
    } catch (const std::out_of_range&) {
        fail(path, line, "number out of range: '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) fail(path, line, "trailing characters in integer '" + s + "'");
        return static_cast<int>(v);
    } catch (const std::invalid_argument&) {
        fail(path, line, "not an integer: '" + s + "'");
    } catch (const std::out_of_range&) {
        fail(path, line, "integer out of range: '" + s + "'");
    }
}

}  // namespace

std::string task_name(Task t) {
    switch (t) {
        case Task::Classification: return "classification";
        case Task::Regression: return "regression";
        case Task::Clustering: return "clustering";
        case Task::Correlation: return "correlation";
        case Task::StatTest: return "stattest";
        case Task::Segmentation2d: return "segmentation2d";
        case Task::Segmentation3d: return "segmentation3d";
        case Task::Image2d: return "image2d";
        case Task::Image3d: return "image3d";
    }
    return "?";
}

Task task_from_name(const std::string& name) {
    for (Task t : {Task::Classification, Task::Regression, Task::Clustering, Task::Correlation,
                   Task::StatTest, Task::Segmentation2d, Task::Segmentation3d, Task::Image2d,
                   Task::Image3d})
        if (task_name(t) == name) return t;
    throw std::invalid_argument("unknown task '" + name + "'");
}

TaskFamily family_of(Task t) {
    switch (t) {
        case Task::Classification: return TaskFamily::Classification;
        case Task::Regression: return TaskFamily::Regression;
        case Task::Clustering: return TaskFamily::Clustering;
        case Task::Correlation: return TaskFamily::Correlation;
        case Task::StatTest: return TaskFamily::StatTest;
        case Task::Segmentation2d:
        case Task::Segmentation3d: return TaskFamily::Segmentation;
        case Task::Image2d:
        case Task::Image3d: return TaskFamily::ImageQuality;
    }
    return TaskFamily::Classification;
}

bool Table::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::size_t Table::column_index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw std::runtime_error(path + ": no column named '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> Table::numeric_column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        out.push_back(parse_double(rows[r][c], path, r + 2));  // +2: header is line 1
    return out;
}

std::vector<int> Table::int_column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<int> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(parse_int(rows[r][c], path, r + 2));
    return out;
}

std::vector<std::string> Table::string_column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[c]);
    return out;
}

Table load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    Table t;
    t.path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trimmed(line).empty()) continue;
        auto fields = split_csv(line);
        if (t.columns.empty()) {
            t.columns = std::move(fields);
            continue;
        }
        if (fields.size() != t.columns.size())
            fail(path, lineno,
                 "expected " + std::to_string(t.columns.size()) + " fields, got " +
                     std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    if (t.columns.empty()) throw std::runtime_error(path + ": empty file");
    if (t.rows.empty()) throw std::runtime_error(path + ": no data rows");
    return t;
}

std::vector<RasterRecord> load_raster_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");

    std::vector<RasterRecord> records;
    std::string line;
    std::size_t lineno = 0;
    std::optional<RasterRecord> current;
    std::size_t expected = 0;

    auto finish = [&] {
        if (!current) return;
        if (current->values.size() != expected)
            fail(path, lineno,
                 "record has " + std::to_string(current->values.size()) + " values, expected " +
                     std::to_string(expected));
        records.push_back(std::move(*current));
        current.reset();
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string body = trimmed(line);
        if (body.empty()) continue;

        if (body.rfind("dims=", 0) == 0) {
            finish();
            RasterRecord r;
            std::istringstream hs(body);
            std::string token;
            while (hs >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos)
                    fail(path, lineno, "malformed header token '" + token + "'");
                const std::string key = token.substr(0, eq);
                const std::string val = token.substr(eq + 1);
                auto parse_list = [&](const std::string& s) {
                    std::vector<double> out;
                    for (const auto& piece : split_csv(s))
                        out.push_back(parse_double(piece, path, lineno));
                    return out;
                };
                if (key == "dims") {
                    r.dims = static_cast<std::size_t>(parse_int(val, path, lineno));
                } else if (key == "shape") {
                    for (double v : parse_list(val)) {
                        if (v < 1.0 || v != std::floor(v))
                            fail(path, lineno, "shape entries must be positive integers");
                        r.shape.push_back(static_cast<std::size_t>(v));
                    }
                } else if (key == "spacing") {
                    r.spacing = parse_list(val);
                } else if (key == "data_range") {
                    r.data_range = parse_double(val, path, lineno);
                } else {
                    fail(path, lineno, "unknown header key '" + key + "'");
                }
            }
            if (r.dims < 1 || r.dims > 3) fail(path, lineno, "dims must be 1, 2 or 3");
            if (r.shape.size() != r.dims)
                fail(path, lineno, "shape arity does not match dims");
            if (r.spacing.empty()) r.spacing.assign(r.dims, 1.0);
            if (r.spacing.size() != r.dims)
                fail(path, lineno, "spacing arity does not match dims");
            expected = 1;
            for (std::size_t s : r.shape) expected *= s;
            r.values.reserve(expected);
            current = std::move(r);
            continue;
        }

        if (!current) fail(path, lineno, "values before the first 'dims=' header");
        std::istringstream vs(body);
        std::string token;
        while (vs >> token) current->values.push_back(parse_double(token, path, lineno));
        if (current->values.size() > expected)
            fail(path, lineno, "record has more values than its shape allows");
    }
    finish();
    if (records.empty()) throw std::runtime_error(path + ": no grid records found");
    return records;
}

segment::Mask to_mask(const RasterRecord& r) {
    std::vector<std::uint8_t> fg;
    fg.reserve(r.values.size());
    for (double v : r.values) {
        if (v != 0.0 && v != 1.0)
            throw std::runtime_error("mask values must be 0 or 1, found " + std::to_string(v));
        fg.push_back(v == 1.0 ? 1 : 0);
    }
    return {r.shape, std::move(fg), r.spacing};
}

imgqual::RasterPair to_raster_pair(const RasterRecord& ref, const RasterRecord& test) {
    if (ref.shape != test.shape)
        throw std::runtime_error("raster records disagree on shape");
    // The pair's declared range comes from the reference record; a test-side
    // declaration must agree rather than silently win.
    if (ref.data_range && test.data_range && *ref.data_range != *test.data_range)
        throw std::runtime_error("raster records declare different data ranges");
    const auto declared = ref.data_range ? ref.data_range : test.data_range;
    return {ref.shape, ref.values, test.values, declared};
}

namespace {

Dataset load_tabular(const std::string& path, Task task, std::string truth_col) {
    const Table t = load_table(path);
    Dataset d;
    d.task = task;

    switch (task) {
        case Task::Classification: {
            if (truth_col.empty()) truth_col = "y_true";
            d.y_true = t.int_column(truth_col);
            d.y_pred = t.int_column("y_pred");
            if (t.has_column("score")) d.scores = t.numeric_column("score");
            std::vector<std::vector<double>> prob_cols;
            for (std::size_t k = 0; t.has_column("prob_" + std::to_string(k)); ++k)
                prob_cols.push_back(t.numeric_column("prob_" + std::to_string(k)));
            if (!prob_cols.empty()) {
                d.n_prob_classes = prob_cols.size();
                d.probs.resize(t.rows.size() * prob_cols.size());
                for (std::size_t i = 0; i < t.rows.size(); ++i)
                    for (std::size_t k = 0; k < prob_cols.size(); ++k)
                        d.probs[i * prob_cols.size() + k] = prob_cols[k][i];
            }
            return d;
        }
        case Task::Regression: {
            if (truth_col.empty()) truth_col = "y_true";
            d.truth = t.numeric_column(truth_col);
            d.pred = t.numeric_column("y_pred");
            return d;
        }
        case Task::Correlation: {
            d.x = t.numeric_column(truth_col.empty() ? "x" : truth_col);
            d.y = t.numeric_column("y");
            for (const auto& col : t.columns)
                if (!col.empty() && col[0] == 'z') d.covariates.push_back(t.numeric_column(col));
            return d;
        }
        case Task::StatTest: {
            if (truth_col.empty()) truth_col = "group";
            const auto keys = t.string_column(truth_col);
            const auto values = t.numeric_column("value");
            std::map<std::string, std::size_t> index;
            for (std::size_t i = 0; i < keys.size(); ++i) {
                auto it = index.find(keys[i]);
                if (it == index.end()) {
                    it = index.emplace(keys[i], d.groups.size()).first;
                    d.group_names.push_back(keys[i]);
                    d.groups.emplace_back();
                }
                d.groups[it->second].push_back(values[i]);
            }
            return d;
        }
        case Task::Clustering: {
            if (truth_col.empty()) truth_col = "label";
            std::vector<std::vector<double>> features;
            for (const auto& col : t.columns)
                if (!col.empty() && col[0] == 'x') features.push_back(t.numeric_column(col));
            if (features.empty())
                throw std::runtime_error(path + ": no feature columns (names starting with 'x')");
            d.dim = features.size();
            d.points.resize(t.rows.size() * d.dim);
            for (std::size_t i = 0; i < t.rows.size(); ++i)
                for (std::size_t f = 0; f < d.dim; ++f) d.points[i * d.dim + f] = features[f][i];
            for (int l : t.int_column(truth_col)) {
                if (l < 0) throw std::runtime_error(path + ": negative cluster label");
                d.cluster_labels.push_back(static_cast<std::size_t>(l));
            }
            return d;
        }
        default:
            throw std::logic_error("load_tabular: not a tabular task");
    }
}

Dataset load_grids(const std::string& path, Task task) {
    const auto records = load_raster_records(path);
    if (records.size() != 2)
        throw std::runtime_error(path + ": expected exactly 2 grid records (reference, then " +
                                 "prediction), found " + std::to_string(records.size()));
    const std::size_t want_dims = (task == Task::Segmentation2d || task == Task::Image2d) ? 2 : 3;
    for (const auto& r : records)
        if (r.dims != want_dims)
            throw std::runtime_error(path + ": task " + task_name(task) + " needs dims=" +
                                     std::to_string(want_dims));

    Dataset d;
    d.task = task;
    if (task == Task::Segmentation2d || task == Task::Segmentation3d) {
        d.mask_ref = to_mask(records[0]);
        d.mask_pred = to_mask(records[1]);
    } else {
        if (!records[0].data_range && !records[1].data_range)
            throw std::runtime_error(path +
                                     ": image tasks require a data_range= declaration; the "
                                     "dynamic range is never inferred");
        d.raster = to_raster_pair(records[0], records[1]);
    }
    return d;
}

}  // namespace

Dataset load_dataset(const std::string& path, Task task, const std::string& truth_col) {
    switch (task) {
        case Task::Classification:
        case Task::Regression:
        case Task::Correlation:
        case Task::StatTest:
        case Task::Clustering:
            return load_tabular(path, task, truth_col);
        default:
            return load_grids(path, task);
    }
}

}  // namespace metricdiff::harness

// Command line front end: sweeps every registered convention of each metric
// over one input file and reports where the conventions disagree.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metricdiff/dataset.hpp"
#include "metricdiff/harness.hpp"
#include "metricdiff/registry.hpp"
#include "metricdiff/report.hpp"

namespace {

using namespace metricdiff;
using namespace metricdiff::harness;

struct CommonArgs {
    std::string task;
    std::string input;
    std::string truth_col;
    std::string variants = "all";
    std::vector<std::string> metrics;
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool out_required) {
    cmd->add_option("--task", a.task, "task name")
        ->required()
        ->check(CLI::IsMember({"classification", "regression", "clustering", "correlation",
                               "stattest", "segmentation2d", "segmentation3d", "image2d",
                               "image3d"}));
    cmd->add_option("--input", a.input, "input data file")->required();
    cmd->add_option("--truth-col", a.truth_col, "ground-truth column name (tabular tasks)");
    cmd->add_option("--variants", a.variants,
                    "variant preset: all, first_class, positive_class, averages");
    cmd->add_option("--metrics", a.metrics, "restrict to these metric names")
        ->delimiter(',');
    auto* out = cmd->add_option("--out", a.out, "output path");
    if (out_required) out->required();
}

std::vector<MetricId> resolve_metrics(const std::vector<std::string>& names) {
    std::vector<MetricId> ids;
    for (const auto& n : names) {
        auto id = metric_from_name(n);
        if (!id) throw std::invalid_argument("unknown metric '" + n + "'");
        ids.push_back(*id);
    }
    return ids;
}

void write_document(const std::string& path, const std::string& doc) {
    if (path.empty()) {
        std::cout << doc;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output path '" + path + "'");
    f << doc;
    if (!f) throw std::runtime_error("failed writing output path '" + path + "'");
}

RunConfig make_config(const CommonArgs& a, Task task, std::uint64_t seed, double tol) {
    RunConfig cfg;
    cfg.task = task;
    cfg.metrics = resolve_metrics(a.metrics);
    cfg.variants = a.variants;
    cfg.tolerance = tol;
    cfg.seed = seed;
    return cfg;
}

int run_compute(const CommonArgs& a, std::uint64_t seed, const std::string& format) {
    const Task task = task_from_name(a.task);
    const Dataset data = load_dataset(a.input, task, a.truth_col);
    const RunConfig cfg = make_config(a, task, seed, -1.0);
    std::vector<std::string> notes;
    const std::vector<MetricValue> values = run_all(data, cfg, &notes);

    ReportOptions opts;
    opts.format = report_format_from_name(format);
    opts.task = a.task;
    opts.seed = seed;
    opts.preset = a.variants;
    write_document(a.out, emit_values(values, opts, notes));
    return 0;
}

int run_diff(const CommonArgs& a, std::uint64_t seed, const std::string& format, double tol) {
    const Task task = task_from_name(a.task);
    const Dataset data = load_dataset(a.input, task, a.truth_col);
    const RunConfig cfg = make_config(a, task, seed, tol);
    std::vector<std::string> notes;
    const std::vector<MetricValue> values = run_all(data, cfg, &notes);
    const std::vector<DiscrepancyRecord> records = classify_discrepancies(values, tol);

    ReportOptions opts;
    opts.format = report_format_from_name(format);
    opts.task = a.task;
    opts.tolerance = tol;
    opts.seed = seed;
    opts.preset = a.variants;
    write_document(a.out, emit_report(records, opts, notes));
    return exit_code_for(records);
}

int run_list(const std::string& task_filter) {
    std::vector<TaskFamily> families;
    if (!task_filter.empty()) families.push_back(family_of(task_from_name(task_filter)));
    for (MetricId id : all_metrics()) {
        const MetricInfo& info = metric_info(id);
        if (!families.empty() && info.task != families.front()) continue;
        const auto n = register_variants(id).size();
        std::cout << info.name << "  [" << task_family_name(info.task) << ", " << n
                  << " variant(s)]\n    " << info.summary << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convention-explicit metric evaluation and differential consistency checks"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for stochastic variants")->default_val("0");

    CommonArgs compute_args;
    std::string compute_format = "json";
    auto* compute = app.add_subcommand("compute", "compute every variant of every metric");
    compute->fallthrough();  // global --seed may follow the subcommand
    add_common(compute, compute_args, /*out_required=*/true);
    compute->add_option("--format", compute_format, "output format: json or md")
        ->check(CLI::IsMember({"json", "md"}));

    CommonArgs diff_args;
    std::string diff_format = "json";
    double tol = -1.0;
    auto* diff = app.add_subcommand("diff", "classify pairwise discrepancies between variants");
    diff->fallthrough();
    add_common(diff, diff_args, /*out_required=*/false);
    diff->add_option("--tol", tol, "absolute comparison tolerance (default: per metric)");
    diff->add_option("--format", diff_format, "output format: json or md")
        ->check(CLI::IsMember({"json", "md"}));

    std::string list_task;
    auto* list = app.add_subcommand("list-metrics", "list the metric catalog");
    list->fallthrough();
    list->add_option("--task", list_task, "restrict to one task");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return run_compute(compute_args, seed, compute_format);
        if (diff->parsed()) return run_diff(diff_args, seed, diff_format, tol);
        return run_list(list_task);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

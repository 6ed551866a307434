#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdvrp/engine.hpp"
#include "mdvrp/instance_io.hpp"

namespace mdvrp {

// A named benchmark collection: where its files live and how to read them.
struct BenchmarkSet {
    std::string name;
    Variant variant = Variant::MDVRP;
    std::filesystem::path instance_dir;
    std::filesystem::path bks;
    std::filesystem::path fleet;  // empty when the file headers are used as-is
    bool relax_fleet = false;
};

// c97, c97t, c01, c01r or l14, resolved against a data directory laid out as
// <data>/<files>/, <data>/bks/<set>.csv and <data>/fleet/<set>.csv.
BenchmarkSet benchmark_set(const std::string& name, const std::filesystem::path& data_dir);

// Instance files of a directory in name order (hidden files skipped).
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir);

Instance load_set_instance(const BenchmarkSet& set, const std::string& instance);

struct InstanceRow {
    std::string name;
    int runs = 0;
    int feasible_runs = 0;
    double best = kInfinity;
    double mean = kInfinity;
    double worst = kInfinity;
    double mean_time = 0.0;
    double mean_time_to_best = 0.0;
    std::optional<double> bks;
    std::optional<double> gap_best;
    std::optional<double> gap_mean;
    std::vector<double> costs;  // per run, +inf for runs without a feasible solution
};

struct BenchSummary {
    double mean_best = 0.0;
    double mean_mean = 0.0;
    double mean_time = 0.0;
    std::optional<double> mean_gap_best;
    std::optional<double> mean_gap_mean;
};

struct BenchReport {
    std::vector<InstanceRow> rows;
    BenchSummary summary() const;
    bool all_feasible() const;
};

// Folds per-run results of one instance into a report row.
InstanceRow make_row(const std::string& name, const std::vector<RunStats>& runs, std::optional<double> bks);

struct BenchJob {
    std::string name;
    Instance instance;
};

using BenchProgress = std::function<void(const std::string& instance, int run, const RunStats& stats)>;

// Runs every job `runs` times with seeds base.seed, base.seed + 1, ...
BenchReport run_benchmark(const std::vector<BenchJob>& jobs, const BksTable& bks, const EngineConfig& base, int runs,
                          const BenchProgress& progress = {});

// Directory form: every file of `instance_dir` parsed as `variant`, with
// optional per-instance fleet overrides.
BenchReport run_benchmark(const std::filesystem::path& instance_dir, Variant variant, const BksTable& bks,
                          const EngineConfig& base, int runs, const std::map<std::string, int>& fleet = {},
                          bool relax_fleet = false, const BenchProgress& progress = {});

void write_report_csv(std::ostream& out, const BenchReport& report);
void print_report(std::ostream& out, const BenchReport& report);

}  // namespace mdvrp

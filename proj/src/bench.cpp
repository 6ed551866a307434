#include "mdvrp/bench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace mdvrp {

BenchmarkSet benchmark_set(const std::string& name, const std::filesystem::path& data_dir) {
    BenchmarkSet s;
    s.name = name;
    s.bks = data_dir / "bks" / (name + ".csv");
    if (name == "c97") {
        s.instance_dir = data_dir / "c97";
        s.fleet = data_dir / "fleet" / "c97.csv";
    } else if (name == "c97t") {
        s.instance_dir = data_dir / "c97";
        s.fleet = data_dir / "fleet" / "c97t.csv";
    } else if (name == "l14") {
        s.instance_dir = data_dir / "c97";
        s.variant = Variant::MDOVRP;
    } else if (name == "c01") {
        s.instance_dir = data_dir / "c01";
        s.variant = Variant::MDVRPTW;
        s.fleet = data_dir / "fleet" / "c01.csv";
    } else if (name == "c01r") {
        s.instance_dir = data_dir / "c01";
        s.variant = Variant::MDVRPTW;
        s.relax_fleet = true;
    } else {
        throw std::invalid_argument("unknown benchmark set '" + name + "' (expected c97, c97t, c01, c01r or l14)");
    }
    return s;
}

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto name = e.path().filename().string();
        if (name.empty() || name[0] == '.') continue;
        out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

Instance load_set_instance(const BenchmarkSet& set, const std::string& instance) {
    ParseOptions opt;
    opt.relax_fleet = set.relax_fleet;
    if (!set.fleet.empty()) {
        const auto table = load_fleet_table(set.fleet);
        if (auto it = table.find(instance); it != table.end()) opt.vehicles_per_depot = it->second;
    }
    return parse_instance(set.instance_dir / instance, set.variant, opt);
}

InstanceRow make_row(const std::string& name, const std::vector<RunStats>& runs, std::optional<double> bks) {
    InstanceRow row;
    row.name = name;
    row.runs = static_cast<int>(runs.size());
    row.bks = bks;
    double sum = 0.0, time = 0.0, ttb = 0.0;
    for (const auto& r : runs) {
        row.costs.push_back(r.feasible ? r.best_cost : kInfinity);
        time += r.wall_time;
        ttb += r.time_to_best;
        if (!r.feasible) continue;
        ++row.feasible_runs;
        sum += r.best_cost;
        row.best = std::min(row.best, r.best_cost);
        row.worst = row.worst == kInfinity ? r.best_cost : std::max(row.worst, r.best_cost);
    }
    if (!runs.empty()) {
        row.mean_time = time / static_cast<double>(runs.size());
        row.mean_time_to_best = ttb / static_cast<double>(runs.size());
    }
    // A run without a feasible solution makes the mean undefined.
    if (row.feasible_runs > 0 && row.feasible_runs == row.runs) row.mean = sum / static_cast<double>(row.runs);
    if (bks && row.best < kInfinity) row.gap_best = gap(row.best, *bks);
    if (bks && row.mean < kInfinity) row.gap_mean = gap(row.mean, *bks);
    return row;
}

BenchSummary BenchReport::summary() const {
    BenchSummary s;
    if (rows.empty()) return s;
    double gb = 0.0, gm = 0.0;
    int nb = 0, nm = 0;
    for (const auto& r : rows) {
        s.mean_best += r.best;
        s.mean_mean += r.mean;
        s.mean_time += r.mean_time;
        if (r.gap_best) {
            gb += *r.gap_best;
            ++nb;
        }
        if (r.gap_mean) {
            gm += *r.gap_mean;
            ++nm;
        }
    }
    const auto n = static_cast<double>(rows.size());
    s.mean_best /= n;
    s.mean_mean /= n;
    s.mean_time /= n;
    if (nb > 0) s.mean_gap_best = gb / nb;
    if (nm > 0) s.mean_gap_mean = gm / nm;
    return s;
}

bool BenchReport::all_feasible() const {
    return std::all_of(rows.begin(), rows.end(), [](const InstanceRow& r) { return r.feasible_runs == r.runs; });
}

BenchReport run_benchmark(const std::vector<BenchJob>& jobs, const BksTable& bks, const EngineConfig& base, int runs,
                          const BenchProgress& progress) {
    if (runs < 1) throw std::invalid_argument("runs must be at least 1");
    BenchReport report;
    for (const auto& job : jobs) {
        std::vector<RunStats> results;
        for (int i = 0; i < runs; ++i) {
            EngineConfig cfg = base;
            cfg.seed = base.seed + static_cast<std::uint64_t>(i);
            results.push_back(run(job.instance, cfg));
            if (progress) progress(job.name, i, results.back());
        }
        std::optional<double> ref;
        if (auto it = bks.find(job.name); it != bks.end()) ref = it->second.cost;
        report.rows.push_back(make_row(job.name, results, ref));
    }
    return report;
}

BenchReport run_benchmark(const std::filesystem::path& instance_dir, Variant variant, const BksTable& bks,
                          const EngineConfig& base, int runs, const std::map<std::string, int>& fleet,
                          bool relax_fleet, const BenchProgress& progress) {
    std::vector<BenchJob> jobs;
    for (const auto& path : list_instances(instance_dir)) {
        const auto name = path.filename().string();
        ParseOptions opt;
        opt.relax_fleet = relax_fleet;
        if (auto it = fleet.find(name); it != fleet.end()) opt.vehicles_per_depot = it->second;
        jobs.push_back(BenchJob{name, parse_instance(path, variant, opt)});
    }
    return run_benchmark(jobs, bks, base, runs, progress);
}

namespace {

std::string cell(double v) { return v < kInfinity ? fmt::format("{:.2f}", v) : ""; }
std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : ""; }
std::string shown(double v) { return v < kInfinity ? fmt::format("{:.2f}", v) : "-"; }
std::string shown(const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : "-"; }

}  // namespace

void write_report_csv(std::ostream& out, const BenchReport& report) {
    out << "instance,runs,feasible_runs,best,mean,worst,bks,gap_best,gap_mean,mean_time,mean_time_to_best\n";
    for (const auto& r : report.rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{:.2f},{:.2f}\n", r.name, r.runs, r.feasible_runs, cell(r.best),
                           cell(r.mean), cell(r.worst), cell(r.bks), cell(r.gap_best), cell(r.gap_mean), r.mean_time,
                           r.mean_time_to_best);
    }
    const auto s = report.summary();
    out << fmt::format("Mean,,,{},{},,,{},{},{:.2f},\n", cell(s.mean_best), cell(s.mean_mean), cell(s.mean_gap_best),
                       cell(s.mean_gap_mean), s.mean_time);
}

void print_report(std::ostream& out, const BenchReport& report) {
    out << fmt::format("{:<10} {:>5} {:>10} {:>10} {:>10} {:>8} {:>8} {:>9}\n", "instance", "runs", "best", "mean",
                       "bks", "gap_b%", "gap_m%", "time_s");
    for (const auto& r : report.rows) {
        out << fmt::format("{:<10} {:>5} {:>10} {:>10} {:>10} {:>8} {:>8} {:>9.1f}\n", r.name,
                           fmt::format("{}/{}", r.feasible_runs, r.runs), shown(r.best), shown(r.mean), shown(r.bks),
                           shown(r.gap_best), shown(r.gap_mean), r.mean_time);
    }
    const auto s = report.summary();
    out << fmt::format("{:<10} {:>5} {:>10} {:>10} {:>10} {:>8} {:>8} {:>9.1f}\n", "Mean", "", shown(s.mean_best),
                       shown(s.mean_mean), "", shown(s.mean_gap_best), shown(s.mean_gap_mean), s.mean_time);
}

}  // namespace mdvrp

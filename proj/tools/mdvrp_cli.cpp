#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "mdvrp/bench.hpp"

using namespace mdvrp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;

struct EngineFlags {
    EngineConfig cfg;
    std::string multi_move = "on";
    double time_limit = -1.0;
};

void add_engine_flags(CLI::App* app, EngineFlags& f) {
    app->add_option("--seed", f.cfg.seed, "random seed (bench: first seed)")->capture_default_str();
    app->add_option("--time-limit", f.time_limit, "seconds per run (default unlimited)");
    app->add_option("--generations", f.cfg.max_generations, "maximum generations")->capture_default_str();
    app->add_option("--patience", f.cfg.patience, "generations without improvement")->capture_default_str();
    app->add_option("--pop-size", f.cfg.mu, "population size")->capture_default_str();
    app->add_option("--granularity", f.cfg.theta, "neighbors per node")->capture_default_str();
    app->add_option("--depth", f.cfg.depth, "local search applications")->capture_default_str();
    app->add_option("--kappa", f.cfg.kappa, "penalty adaptation rate")->capture_default_str();
    app->add_option("--xi", f.cfg.xi, "diversity weight in biased fitness")->capture_default_str();
    app->add_option("--multi-move", f.multi_move, "apply follower moves")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app->add_option("--workers", f.cfg.workers, "threads for move evaluation")->capture_default_str();
}

EngineConfig finish(const EngineFlags& f) {
    EngineConfig cfg = f.cfg;
    cfg.multi_move = f.multi_move == "on";
    if (f.time_limit >= 0.0) cfg.time_limit = f.time_limit;
    cfg.validate();
    return cfg;
}

void print_solution(const Solution& sol, const Instance& inst, const RunStats& st) {
    const auto rep = check_feasible(sol, inst);
    fmt::print("instance {} ({})\n", inst.name(), to_string(inst.variant()));
    if (st.feasible)
        fmt::print("best {:.2f} in {:.1f} s (found at {:.1f} s), {} generations, {} routes\n", st.best_cost,
                   st.wall_time, st.time_to_best, st.generations, sol.routes.size());
    else
        fmt::print("no feasible solution after {} generations ({:.1f} s); best penalized {:.2f}\n", st.generations,
                   st.wall_time, st.best_eval.penalized);
    fmt::print("check: {}\n", rep.all_ok() ? "feasible" : "infeasible");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-depot vehicle routing solver"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "solve one instance");
    std::string instance_path, variant_name = "mdvrp", out_path;
    std::optional<int> vehicles;
    bool relax = false, quiet = false;
    EngineFlags solve_flags;
    solve->add_option("--instance", instance_path, "instance file")->required();
    solve->add_option("--variant", variant_name, "mdvrp, mdvrptw or mdovrp")
        ->check(CLI::IsMember({"mdvrp", "mdvrptw", "mdovrp"}))
        ->capture_default_str();
    solve->add_option("--out", out_path, "write the best solution here");
    solve->add_option("--vehicles", vehicles, "vehicles per depot, overrides the file header");
    solve->add_flag("--relax-fleet", relax, "ignore vehicle limits");
    solve->add_flag("--quiet", quiet, "no progress output");
    add_engine_flags(solve, solve_flags);

    auto* bench = app.add_subcommand("bench", "run a benchmark directory");
    std::string dir, bench_variant = "mdvrp", bks_path, report_path, fleet_path, set_name, data_dir = MDVRP_DATA_DIR;
    std::vector<std::string> only;
    int runs = 10;
    bool bench_relax = false;
    EngineFlags bench_flags;
    bench->add_option("--set", set_name, "named set: c97, c97t, c01, c01r or l14 (fills dir, variant, bks, fleet)");
    bench->add_option("--data", data_dir, "data directory for --set")->capture_default_str();
    bench->add_option("--dir", dir, "instance directory");
    bench->add_option("--variant", bench_variant, "mdvrp, mdvrptw or mdovrp")
        ->check(CLI::IsMember({"mdvrp", "mdvrptw", "mdovrp"}))
        ->capture_default_str();
    bench->add_option("--bks", bks_path, "best-known values CSV");
    bench->add_option("--fleet", fleet_path, "vehicles-per-depot CSV");
    bench->add_flag("--relax-fleet", bench_relax, "ignore vehicle limits");
    bench->add_option("--instances", only, "restrict to these instance names");
    bench->add_option("--runs", runs, "runs per instance")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--report", report_path, "write the report CSV here");
    add_engine_flags(bench, bench_flags);

    CLI11_PARSE(app, argc, argv);

    if (*solve) {
        std::optional<Instance> loaded;
        EngineConfig cfg;
        try {
            cfg = finish(solve_flags);
            ParseOptions opt;
            opt.vehicles_per_depot = vehicles;
            opt.relax_fleet = relax;
            loaded.emplace(parse_instance(instance_path, parse_variant(variant_name), opt));
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitParse;
        }
        const Instance& inst = *loaded;
        ProgressCallback progress;
        if (!quiet) {
            double last = kInfinity;
            progress = [last](int gen, const RunStats& s) mutable {
                if (s.best_cost < last) {
                    last = s.best_cost;
                    std::cerr << fmt::format("gen {:>6}  best {:.2f}\n", gen, s.best_cost);
                }
            };
        }
        const RunStats st = run(inst, cfg, progress);
        print_solution(st.best, inst, st);
        if (!out_path.empty()) write_solution(std::filesystem::path(out_path), st.best, inst);
        return st.feasible ? kExitOk : kExitInfeasible;
    }

    std::vector<BenchJob> jobs;
    BksTable bks;
    EngineConfig cfg;
    try {
        cfg = finish(bench_flags);
        BenchmarkSet set;
        if (!set_name.empty()) {
            set = benchmark_set(set_name, data_dir);
        } else {
            set.variant = parse_variant(bench_variant);
            set.relax_fleet = bench_relax;
        }
        if (!dir.empty()) set.instance_dir = dir;
        if (!bks_path.empty()) set.bks = bks_path;
        if (!fleet_path.empty()) set.fleet = fleet_path;
        if (set.instance_dir.empty()) throw std::invalid_argument("bench needs --dir or --set");
        if (!set.bks.empty() && std::filesystem::exists(set.bks)) bks = load_bks(set.bks);
        else if (!bks_path.empty()) throw std::runtime_error("cannot open " + bks_path);
        for (const auto& path : list_instances(set.instance_dir)) {
            const auto name = path.filename().string();
            if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
            jobs.push_back(BenchJob{name, load_set_instance(set, name)});
        }
        if (jobs.empty()) throw std::runtime_error("no instances selected");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }

    const auto report = run_benchmark(jobs, bks, cfg, runs, [](const std::string& name, int r, const RunStats& s) {
        std::cerr << fmt::format("{} run {}: {} ({:.1f} s)\n", name, r + 1,
                                 s.feasible ? fmt::format("{:.2f}", s.best_cost) : std::string("infeasible"),
                                 s.wall_time);
    });
    print_report(std::cout, report);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "error: cannot write " << report_path << '\n';
            return kExitParse;
        }
        write_report_csv(out, report);
    }
    return report.all_feasible() ? kExitOk : kExitInfeasible;
}

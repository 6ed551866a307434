#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mdvrp/instance.hpp"
#include "mdvrp/solution.hpp"

namespace mdvrp::testing {

using Rng = std::mt19937_64;

struct RandomInstanceOptions {
    Variant variant = Variant::MDVRP;
    int customers = 10;
    int depots = 2;
    int vehicles = kUnlimitedFleet;
    double capacity = kInfinity;
    double max_duration = kInfinity;
    double side = 100.0;       // coordinates drawn in [0, side]^2
    double max_demand = 10.0;
    double max_service = 0.0;
    double horizon = 1000.0;   // depot window end for MDVRPTW
    double window_width = 200.0;
};

Instance random_instance(Rng& rng, const RandomInstanceOptions& opt, const std::string& name = "random");

// Customers split into random routes with random depots. With `mixed_depots`
// the arrival depot is drawn independently of the departure depot.
Solution random_solution(const Instance& inst, Rng& rng, bool mixed_depots = false, int max_routes = 0);

// Same, but a random subset of customers is left out.
Solution random_partial_solution(const Instance& inst, Rng& rng, double keep = 0.7);

std::filesystem::path data_file(const std::string& relative);

// Small hand-made instance: depots and customers on given coordinates.
struct PointSpec {
    double x = 0.0;
    double y = 0.0;
    double demand = 0.0;
    double service = 0.0;
    double ready = 0.0;
    double due = kInfinity;
};
Instance make_instance(Variant v, const std::vector<PointSpec>& depots, const std::vector<PointSpec>& customers,
                       FleetSpec fleet = {}, const std::string& name = "toy");

// Open-route crossover toy: one depot, customers 1..10 (id = label), a main
// parent and two donors.
struct CrossoverToy {
    Instance inst;
    Solution main, p2, p3;
};
CrossoverToy crossover_toy();

// True when every customer appears exactly once and nothing else is routed.
bool covers_exactly(const Solution& s, const Instance& inst);

}  // namespace mdvrp::testing

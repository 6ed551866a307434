#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdvrp/instance.hpp"

namespace mdvrp {

// A vehicle tour. `arrive_depot` is ignored for open-route instances.
// Departure and arrival depots may differ during search; the difference is
// penalized, never forbidden.
struct Route {
    int depart_depot = 0;
    int arrive_depot = 0;
    std::vector<int> customers;

    bool empty() const { return customers.empty(); }
    friend bool operator==(const Route&, const Route&) = default;
};

struct SolutionMeta {
    int generation = 0;
    std::uint64_t lineage = 0;
};

struct Solution {
    std::vector<Route> routes;
    SolutionMeta meta;

    void drop_empty_routes();
    int customer_count() const;
};

// Node sequence actually driven: departure depot, customers, and the arrival
// depot unless routes are open.
std::vector<int> driven_sequence(const Route& route, const Instance& inst);

double route_distance(const Route& route, const Instance& inst);
double objective(const Solution& sol, const Instance& inst);

// Canonical form used for set comparisons: routes sorted lexicographically.
std::vector<Route> canonical_routes(const Solution& sol, const Instance& inst);

// Forward schedule of a node sequence with wait-if-early and lateness
// clamped to the window end (time warp).
struct Schedule {
    double duration = 0.0;   // travel + service + waiting
    double time_warp = 0.0;  // sum of max(arrival - due, 0)
    double finish = 0.0;
};

Schedule simulate_schedule(std::span<const int> seq, const Instance& inst, double start);

// Brute-force characterisation of a sequence over all service-start times at
// its first node: minimum time warp, then minimum duration, and the interval
// [earliest, latest] of start times achieving both.
struct ScheduleProfile {
    double dist = 0.0;
    double load = 0.0;
    double duration = 0.0;
    double earliest = 0.0;
    double latest = 0.0;
    double time_warp = 0.0;
};

ScheduleProfile profile_schedule(std::span<const int> seq, const Instance& inst);

struct FeasibilityReport {
    bool structural_ok = true;  // every id valid, every depot slot holds a depot
    std::string structural_error;

    int missing_customers = 0;
    int duplicated_customers = 0;
    int capacity_violations = 0;
    double capacity_excess = 0.0;
    int duration_violations = 0;
    double duration_excess = 0.0;
    int time_window_violations = 0;
    double time_warp = 0.0;
    int closure_violations = 0;
    int fleet_violations = 0;
    int fleet_excess = 0;

    bool coverage_ok() const { return missing_customers == 0 && duplicated_customers == 0; }
    bool all_ok() const {
        return structural_ok && coverage_ok() && capacity_violations == 0 &&
               duration_violations == 0 && time_window_violations == 0 &&
               closure_violations == 0 && fleet_violations == 0;
    }
};

// Ground-truth check by direct simulation. `require_coverage` selects between
// final-solution semantics (every customer exactly once) and search semantics
// (at most once).
FeasibilityReport check_feasible(const Solution& sol, const Instance& inst, bool require_coverage = true);

}  // namespace mdvrp

#pragma once

#include <array>
#include <span>
#include <vector>

#include "mdvrp/instance.hpp"
#include "mdvrp/seq_attr.hpp"
#include "mdvrp/solution.hpp"

namespace mdvrp {

// Gamma converts time-window lateness into distance units; Theta normalises
// the capacity, duration and depot terms.
struct ScalingConstants {
    double gamma = 1.0;
    double theta = 1.0;
};

ScalingConstants scaling_constants(const Instance& inst);

inline constexpr int kNumPenalties = 4;
enum PenaltyIndex : int { kTimeWindow = 0, kCapacity = 1, kDuration = 2, kDepot = 3 };

struct PenaltyState {
    std::array<double, kNumPenalties> lambda{1.0, 1.0, 1.0, 1.0};
    double kappa = 0.5;
    double lambda_min = 0.01;
    double lambda_max = 10000.0;
};

// Per-index multiplicative update: violated terms grow by 1/kappa, satisfied
// ones shrink by kappa; results are clamped to [lambda_min, lambda_max].
PenaltyState adapt_penalties(PenaltyState state, const std::array<bool, kNumPenalties>& violated);

// D, V1..V4 and F of a solution, or differences thereof.
struct EvalBreakdown {
    double distance = 0.0;
    std::array<double, kNumPenalties> violation{0.0, 0.0, 0.0, 0.0};
    double penalized = 0.0;

    bool feasible(double eps = 1e-9) const;
    std::array<bool, kNumPenalties> violated(double eps = 1e-9) const;
};

// Route-local contributions before Theta/Gamma scaling, and the route's
// departure depot for the fleet term.
struct RouteTerms {
    double distance = 0.0;
    double time_warp = 0.0;
    double capacity_ratio = 0.0;  // max(load - Q, 0) / Q
    double duration_ratio = 0.0;  // max(T - D, 0) / D
    int closure = 0;
    int depot = -1;  // -1 when the route is empty and contributes nothing
};

// `attr` covers the driven sequence; `customers` is the customer count.
RouteTerms route_terms(const SeqAttr& attr, int customers, const Instance& inst);

// Scales accumulated route terms plus the fleet overflow into a breakdown.
EvalBreakdown combine_terms(double distance, double time_warp, double capacity_ratio, double duration_ratio,
                            int closure, int fleet_excess, const PenaltyState& pen, const ScalingConstants& k,
                            const Instance& inst);

// Fleet overflow from per-depot route counts; 0 when the fleet is unlimited.
int fleet_excess(std::span<const int> routes_per_depot, const Instance& inst);

double penalized_value(double distance, const std::array<double, kNumPenalties>& violation, const PenaltyState& pen);

SeqAttr route_attr(const Route& route, const Instance& inst);

EvalBreakdown evaluate(const Solution& sol, const PenaltyState& pen, const ScalingConstants& k, const Instance& inst);

}  // namespace mdvrp

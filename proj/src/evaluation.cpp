#include "mdvrp/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace mdvrp {

ScalingConstants scaling_constants(const Instance& inst) {
    double sum_c = 0.0;
    double sum_t = 0.0;
    double max_c = -kInfinity;
    double min_c = kInfinity;
    const int n = inst.num_nodes();
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            sum_c += inst.dist(u, v);
            sum_t += inst.time(u, v);
            max_c = std::max(max_c, inst.dist(u, v));
            min_c = std::min(min_c, inst.dist(u, v));
        }
    }
    if (!(sum_c > 0.0) || !(sum_t > 0.0)) throw InstanceError("degenerate instance: all arcs have zero length");
    return {sum_c / sum_t, 2.0 * max_c - min_c};
}

PenaltyState adapt_penalties(PenaltyState state, const std::array<bool, kNumPenalties>& violated) {
    for (int i = 0; i < kNumPenalties; ++i) {
        double& l = state.lambda[static_cast<std::size_t>(i)];
        l = violated[static_cast<std::size_t>(i)] ? l / state.kappa : l * state.kappa;
        l = std::clamp(l, state.lambda_min, state.lambda_max);
    }
    return state;
}

bool EvalBreakdown::feasible(double eps) const {
    return std::all_of(violation.begin(), violation.end(), [eps](double v) { return v <= eps; });
}

std::array<bool, kNumPenalties> EvalBreakdown::violated(double eps) const {
    std::array<bool, kNumPenalties> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = violation[i] > eps;
    return out;
}

RouteTerms route_terms(const SeqAttr& attr, int customers, const Instance& inst) {
    RouteTerms t;
    if (customers == 0 || attr.empty()) return t;
    t.distance = attr.dist;
    t.time_warp = attr.time_warp;
    t.capacity_ratio = std::max(attr.load - inst.capacity(), 0.0) / inst.capacity();
    if (!inst.unlimited_duration()) t.duration_ratio = std::max(attr.duration - inst.max_duration(), 0.0) / inst.max_duration();
    if (!inst.open_routes() && attr.first != attr.last) t.closure = 1;
    t.depot = attr.first;
    return t;
}

int fleet_excess(std::span<const int> routes_per_depot, const Instance& inst) {
    if (inst.unlimited_fleet()) return 0;
    int excess = 0;
    for (int c : routes_per_depot) excess += std::max(c - inst.fleet_per_depot(), 0);
    return excess;
}

double penalized_value(double distance, const std::array<double, kNumPenalties>& violation, const PenaltyState& pen) {
    double f = distance;
    for (std::size_t i = 0; i < violation.size(); ++i) f += pen.lambda[i] * violation[i];
    return f;
}

EvalBreakdown combine_terms(double distance, double time_warp, double capacity_ratio, double duration_ratio,
                            int closure, int fleet_excess_count, const PenaltyState& pen,
                            const ScalingConstants& k, const Instance& inst) {
    EvalBreakdown b;
    b.distance = distance;
    b.violation[kTimeWindow] = inst.has_time_windows() ? k.gamma * time_warp : 0.0;
    b.violation[kCapacity] = k.theta * capacity_ratio;
    b.violation[kDuration] = k.theta * duration_ratio;
    b.violation[kDepot] = k.theta * static_cast<double>(closure + fleet_excess_count);
    b.penalized = penalized_value(b.distance, b.violation, pen);
    return b;
}

SeqAttr route_attr(const Route& route, const Instance& inst) {
    return fold_attr(driven_sequence(route, inst), inst);
}

EvalBreakdown evaluate(const Solution& sol, const PenaltyState& pen, const ScalingConstants& k, const Instance& inst) {
    double dist = 0.0, tw = 0.0, cap = 0.0, dur = 0.0;
    int closure = 0;
    std::vector<int> per_depot(static_cast<std::size_t>(inst.num_depots()), 0);
    for (const auto& r : sol.routes) {
        const RouteTerms t = route_terms(route_attr(r, inst), static_cast<int>(r.customers.size()), inst);
        if (t.depot < 0) continue;
        dist += t.distance;
        tw += t.time_warp;
        cap += t.capacity_ratio;
        dur += t.duration_ratio;
        closure += t.closure;
        ++per_depot[static_cast<std::size_t>(t.depot)];
    }
    return combine_terms(dist, tw, cap, dur, closure, fleet_excess(per_depot, inst), pen, k, inst);
}

}  // namespace mdvrp

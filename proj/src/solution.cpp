#include "mdvrp/solution.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mdvrp {

void Solution::drop_empty_routes() {
    std::erase_if(routes, [](const Route& r) { return r.empty(); });
}

int Solution::customer_count() const {
    int n = 0;
    for (const auto& r : routes) n += static_cast<int>(r.customers.size());
    return n;
}

std::vector<int> driven_sequence(const Route& route, const Instance& inst) {
    std::vector<int> seq;
    seq.reserve(route.customers.size() + 2);
    seq.push_back(route.depart_depot);
    seq.insert(seq.end(), route.customers.begin(), route.customers.end());
    if (!inst.open_routes()) seq.push_back(route.arrive_depot);
    return seq;
}

double route_distance(const Route& route, const Instance& inst) {
    double d = 0.0;
    int prev = route.depart_depot;
    for (int c : route.customers) {
        d += inst.dist(prev, c);
        prev = c;
    }
    if (!inst.open_routes()) d += inst.dist(prev, route.arrive_depot);
    return d;
}

double objective(const Solution& sol, const Instance& inst) {
    double total = 0.0;
    for (const auto& r : sol.routes) total += route_distance(r, inst);
    return total;
}

std::vector<Route> canonical_routes(const Solution& sol, const Instance& inst) {
    std::vector<Route> out;
    for (const auto& r : sol.routes) {
        if (r.empty()) continue;
        Route c = r;
        if (inst.open_routes()) c.arrive_depot = c.depart_depot;
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Route& a, const Route& b) {
        if (a.depart_depot != b.depart_depot) return a.depart_depot < b.depart_depot;
        if (a.arrive_depot != b.arrive_depot) return a.arrive_depot < b.arrive_depot;
        return a.customers < b.customers;
    });
    return out;
}

Schedule simulate_schedule(std::span<const int> seq, const Instance& inst, double start) {
    Schedule s;
    if (seq.empty()) return s;
    double clock = start;
    int prev = -1;
    for (int id : seq) {
        const Node& n = inst.node(id);
        if (prev >= 0) {
            clock += inst.time(prev, id);
            s.duration += inst.time(prev, id);
        }
        if (clock < n.ready) {
            s.duration += n.ready - clock;
            clock = n.ready;
        } else if (clock > n.due) {
            s.time_warp += clock - n.due;
            clock = n.due;
        }
        clock += n.service;
        s.duration += n.service;
        prev = id;
    }
    s.finish = clock;
    return s;
}

ScheduleProfile profile_schedule(std::span<const int> seq, const Instance& inst) {
    ScheduleProfile p;
    if (seq.empty()) return p;
    int prev = -1;
    for (int id : seq) {
        if (prev >= 0) p.dist += inst.dist(prev, id);
        p.load += inst.node(id).demand;
        prev = id;
    }

    // Service-start times at the first node where some node's arrival crosses
    // one of its window bounds, assuming no earlier clamp.
    std::vector<double> cand;
    double offset = 0.0;
    prev = -1;
    for (int id : seq) {
        if (prev >= 0) offset += inst.node(prev).service + inst.time(prev, id);
        const Node& n = inst.node(id);
        if (std::isfinite(n.ready)) cand.push_back(n.ready - offset);
        if (std::isfinite(n.due)) cand.push_back(n.due - offset);
        prev = id;
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::vector<double> probes = cand;
    for (std::size_t i = 0; i + 1 < cand.size(); ++i) probes.push_back(0.5 * (cand[i] + cand[i + 1]));
    const double beyond = cand.back() + 1.0 + std::abs(cand.back());
    probes.push_back(cand.front() - 1.0 - std::abs(cand.front()));
    probes.push_back(beyond);
    std::sort(probes.begin(), probes.end());

    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a) + std::abs(b)); };

    double best_tw = kInfinity;
    for (double t : probes) best_tw = std::min(best_tw, simulate_schedule(seq, inst, t).time_warp);
    double best_dur = kInfinity;
    for (double t : probes) {
        const Schedule s = simulate_schedule(seq, inst, t);
        if (close(s.time_warp, best_tw)) best_dur = std::min(best_dur, s.duration);
    }
    double earliest = kInfinity;
    double latest = -kInfinity;
    for (double t : probes) {
        const Schedule s = simulate_schedule(seq, inst, t);
        if (close(s.time_warp, best_tw) && close(s.duration, best_dur)) {
            earliest = std::min(earliest, t);
            latest = std::max(latest, t);
        }
    }
    if (latest == beyond) latest = kInfinity;
    p.time_warp = best_tw;
    p.duration = best_dur;
    p.earliest = earliest;
    p.latest = latest;
    return p;
}

FeasibilityReport check_feasible(const Solution& sol, const Instance& inst, bool require_coverage) {
    FeasibilityReport rep;
    std::vector<int> seen(static_cast<std::size_t>(inst.num_nodes()), 0);
    std::map<int, int> per_depot;

    for (const auto& r : sol.routes) {
        if (r.empty()) continue;
        const bool depots_ok = inst.is_depot(r.depart_depot) && (inst.open_routes() || inst.is_depot(r.arrive_depot));
        bool ids_ok = depots_ok;
        for (int c : r.customers) ids_ok = ids_ok && inst.is_customer(c);
        if (!ids_ok) {
            rep.structural_ok = false;
            rep.structural_error = "route references an unknown or misplaced node id";
            continue;
        }
        for (int c : r.customers) ++seen[static_cast<std::size_t>(c)];
        ++per_depot[r.depart_depot];

        const auto seq = driven_sequence(r, inst);
        double load = 0.0;
        for (int c : r.customers) load += inst.node(c).demand;
        if (load > inst.capacity() + 1e-9) {
            ++rep.capacity_violations;
            rep.capacity_excess += load - inst.capacity();
        }

        const Schedule fwd = simulate_schedule(seq, inst, inst.node(r.depart_depot).ready);
        if (fwd.time_warp > 1e-9) {
            ++rep.time_window_violations;
            rep.time_warp += fwd.time_warp;
        }
        if (!inst.unlimited_duration()) {
            const double dur = inst.has_time_windows() ? profile_schedule(seq, inst).duration : fwd.duration;
            if (dur > inst.max_duration() + 1e-9) {
                ++rep.duration_violations;
                rep.duration_excess += dur - inst.max_duration();
            }
        }
        if (!inst.open_routes() && r.depart_depot != r.arrive_depot) ++rep.closure_violations;
    }

    for (int c = inst.first_customer(); c < inst.num_nodes(); ++c) {
        const int k = seen[static_cast<std::size_t>(c)];
        if (k == 0 && require_coverage) ++rep.missing_customers;
        if (k > 1) rep.duplicated_customers += k - 1;
    }
    if (!inst.unlimited_fleet()) {
        for (const auto& [depot, count] : per_depot) {
            if (count > inst.fleet_per_depot()) {
                ++rep.fleet_violations;
                rep.fleet_excess += count - inst.fleet_per_depot();
            }
        }
    }
    return rep;
}

}  // namespace mdvrp

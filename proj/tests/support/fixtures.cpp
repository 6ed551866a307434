#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace mdvrp::testing {

Instance random_instance(Rng& rng, const RandomInstanceOptions& opt, const std::string& name) {
    std::uniform_real_distribution<double> coord(0.0, opt.side);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Node> depots, customers;
    for (int d = 0; d < opt.depots; ++d) {
        Node n;
        n.label = opt.customers + d + 1;
        n.x = coord(rng);
        n.y = coord(rng);
        if (opt.variant == Variant::MDVRPTW) n.due = opt.horizon;
        depots.push_back(n);
    }
    for (int c = 0; c < opt.customers; ++c) {
        Node n;
        n.label = c + 1;
        n.x = coord(rng);
        n.y = coord(rng);
        n.demand = std::floor(1.0 + unit(rng) * opt.max_demand);
        n.service = std::floor(unit(rng) * opt.max_service);
        if (opt.variant == Variant::MDVRPTW) {
            const double mid = 50.0 + unit(rng) * (opt.horizon - 150.0);
            const double half = 0.5 * opt.window_width * (0.2 + unit(rng));
            n.ready = std::max(0.0, std::floor(mid - half));
            n.due = std::floor(mid + half);
        }
        customers.push_back(n);
    }
    FleetSpec fleet{opt.vehicles, opt.capacity, opt.max_duration};
    return Instance(opt.variant, name, std::move(depots), std::move(customers), fleet);
}

Solution random_solution(const Instance& inst, Rng& rng, bool mixed_depots, int max_routes) {
    std::vector<int> order;
    for (int c = inst.first_customer(); c < inst.num_nodes(); ++c) order.push_back(c);
    std::shuffle(order.begin(), order.end(), rng);
    const int n = static_cast<int>(order.size());
    if (max_routes <= 0) max_routes = std::max(1, n / 3);
    std::uniform_int_distribution<int> routes_dist(1, std::min(max_routes, n));
    const int k = routes_dist(rng);
    std::vector<int> cuts(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n - 1; ++i) cuts[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(static_cast<std::size_t>(k - 1));
    cuts.push_back(0);
    cuts.push_back(n);
    std::sort(cuts.begin(), cuts.end());

    std::uniform_int_distribution<int> depot(0, inst.num_depots() - 1);
    Solution sol;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Route r;
        r.depart_depot = depot(rng);
        r.arrive_depot = mixed_depots && !inst.open_routes() ? depot(rng) : r.depart_depot;
        r.customers.assign(order.begin() + cuts[i], order.begin() + cuts[i + 1]);
        sol.routes.push_back(std::move(r));
    }
    return sol;
}

Solution random_partial_solution(const Instance& inst, Rng& rng, double keep) {
    Solution sol = random_solution(inst, rng);
    std::bernoulli_distribution stay(keep);
    for (auto& r : sol.routes) {
        std::vector<int> kept;
        for (int c : r.customers)
            if (stay(rng)) kept.push_back(c);
        r.customers = kept;
    }
    sol.drop_empty_routes();
    return sol;
}

std::filesystem::path data_file(const std::string& relative) { return std::filesystem::path(MDVRP_DATA_DIR) / relative; }

Instance make_instance(Variant v, const std::vector<PointSpec>& depots, const std::vector<PointSpec>& customers,
                       FleetSpec fleet, const std::string& name) {
    auto to_nodes = [](const std::vector<PointSpec>& pts, int first_label) {
        std::vector<Node> out;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Node n;
            n.label = first_label + static_cast<int>(i);
            n.x = pts[i].x;
            n.y = pts[i].y;
            n.demand = pts[i].demand;
            n.service = pts[i].service;
            n.ready = pts[i].ready;
            n.due = pts[i].due;
            out.push_back(n);
        }
        return out;
    };
    const int nc = static_cast<int>(customers.size());
    return Instance(v, name, to_nodes(depots, nc + 1), to_nodes(customers, 1), fleet);
}

CrossoverToy crossover_toy() {
    std::vector<PointSpec> cs;
    for (int i = 1; i <= 10; ++i) cs.push_back(PointSpec{10.0 * i, 5.0 * (i % 3), 1});
    CrossoverToy w{make_instance(Variant::MDOVRP, {PointSpec{50, -20}}, cs), {}, {}, {}};
    w.main.routes = {Route{0, 0, {7, 8}}, Route{0, 0, {1, 2, 3}}, Route{0, 0, {4, 5, 6}}, Route{0, 0, {9, 10}}};
    w.p2.routes = {Route{0, 0, {8, 2, 5}}, Route{0, 0, {1, 3}}, Route{0, 0, {4, 6}}, Route{0, 0, {7}}, Route{0, 0, {9, 10}}};
    w.p3.routes = {Route{0, 0, {10, 9}}, Route{0, 0, {1, 2, 3}}, Route{0, 0, {4, 5, 6}}, Route{0, 0, {7, 8}}};
    return w;
}

bool covers_exactly(const Solution& s, const Instance& inst) {
    std::vector<int> seen(static_cast<std::size_t>(inst.num_nodes()), 0);
    for (const auto& r : s.routes)
        for (int c : r.customers) {
            if (c < 0 || c >= inst.num_nodes() || !inst.is_customer(c)) return false;
            ++seen[static_cast<std::size_t>(c)];
        }
    for (int c = inst.first_customer(); c < inst.num_nodes(); ++c)
        if (seen[static_cast<std::size_t>(c)] != 1) return false;
    return true;
}

}  // namespace mdvrp::testing

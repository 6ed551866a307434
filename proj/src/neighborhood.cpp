#include "mdvrp/neighborhood.hpp"

#include <algorithm>
#include <stdexcept>

namespace mdvrp {

double correlation(int i, int j, const ScalingConstants& k, const NeighborConfig& cfg, const Instance& inst) {
    const Node& a = inst.node(i);
    const Node& b = inst.node(j);
    const double t = inst.time(i, j);
    const double early = std::max(b.ready - a.due - a.service - t, 0.0);
    const double late = std::max(a.due + a.service + t - b.due, 0.0);
    // Infinite horizons give inf - inf; such pairs carry no window information.
    const double e = early == early ? early : 0.0;
    const double l = late == late ? late : 0.0;
    return inst.dist(i, j) + k.gamma * (cfg.alpha * e + cfg.beta * l);
}

bool arc_allowed(int i, int j, const Instance& inst) {
    if (i == j) return false;
    if (inst.is_depot(i) || inst.is_depot(j)) return true;
    const Node& a = inst.node(i);
    return a.ready + a.service + inst.time(i, j) <= inst.node(j).due;
}

NeighborLists::NeighborLists(const Instance& inst, const NeighborConfig& cfg, const ScalingConstants& k)
    : n_(static_cast<std::size_t>(inst.num_nodes())),
      lists_(n_),
      mask_(n_ * n_, 0),
      listed_(n_ * n_, 0) {
    if (cfg.theta < 1) throw std::invalid_argument("granularity must be at least 1");
    const int n = inst.num_nodes();
    std::vector<std::pair<double, int>> scored;
    for (int i = 0; i < n; ++i) {
        scored.clear();
        for (int j = 0; j < n; ++j) {
            if (!arc_allowed(i, j, inst)) continue;
            mask_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)] = 1;
            scored.emplace_back(correlation(i, j, k, cfg, inst), j);
        }
        // Pairs compare by score, then by smaller id.
        std::sort(scored.begin(), scored.end());
        const auto keep = std::min<std::size_t>(static_cast<std::size_t>(cfg.theta), scored.size());
        auto& list = lists_[static_cast<std::size_t>(i)];
        list.reserve(keep);
        for (std::size_t r = 0; r < keep; ++r) {
            list.push_back(scored[r].second);
            listed_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(scored[r].second)] = 1;
        }
    }
}

bool NeighborLists::listed(int i, int j) const {
    return listed_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)] != 0;
}

}  // namespace mdvrp

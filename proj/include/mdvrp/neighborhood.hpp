#pragma once

#include <span>
#include <vector>

#include "mdvrp/evaluation.hpp"
#include "mdvrp/instance.hpp"

namespace mdvrp {

struct NeighborConfig {
    int theta = 50;
    double alpha = 1.0;   // early-arrival weight
    double beta = 10.0;   // late-arrival weight
};

// Correlation of visiting j right after i; lower means more related. Not symmetric.
double correlation(int i, int j, const ScalingConstants& k, const NeighborConfig& cfg, const Instance& inst);

// Time-window pruning predicate: false when j cannot be reached from i before
// j closes even when leaving i as early as possible. Arcs touching a depot
// are always kept.
bool arc_allowed(int i, int j, const Instance& inst);

// Granular candidate lists. Every node (depots included) may appear as a
// target; operators that only pair customers skip depot entries.
class NeighborLists {
public:
    NeighborLists() = default;
    NeighborLists(const Instance& inst, const NeighborConfig& cfg, const ScalingConstants& k);

    std::span<const int> of(int node) const { return lists_[static_cast<std::size_t>(node)]; }
    bool allowed(int i, int j) const { return mask_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)] != 0; }
    bool listed(int i, int j) const;
    int size() const { return static_cast<int>(n_); }

private:
    std::size_t n_ = 0;
    std::vector<std::vector<int>> lists_;
    std::vector<unsigned char> mask_;
    std::vector<unsigned char> listed_;
};

}  // namespace mdvrp

#include "mdvrp/population.hpp"

#include <algorithm>
#include <numeric>

#include "mdvrp/genetic.hpp"

namespace mdvrp {

std::vector<std::uint64_t> solution_edges(const Solution& sol, const Instance& inst) {
    std::vector<std::uint64_t> e;
    for (const auto& r : sol.routes)
        for (auto k : route_edges(r, inst)) e.push_back(k);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

double edge_distance(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    const std::size_t denom = std::max(a.size(), b.size());
    if (denom == 0) return 0.0;
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return 100.0 * (1.0 - static_cast<double>(common) / static_cast<double>(denom));
}

double solution_distance(const Solution& a, const Solution& b, const Instance& inst) {
    return edge_distance(solution_edges(a, inst), solution_edges(b, inst));
}

std::vector<double> biased_fitness(const std::vector<double>& value, const std::vector<double>& diversity, double xi) {
    const std::size_t n = value.size();
    std::vector<std::size_t> by_value(n), by_div(n);
    std::iota(by_value.begin(), by_value.end(), 0);
    std::iota(by_div.begin(), by_div.end(), 0);
    std::stable_sort(by_value.begin(), by_value.end(), [&](auto a, auto b) { return value[a] < value[b]; });
    std::stable_sort(by_div.begin(), by_div.end(), [&](auto a, auto b) { return diversity[a] > diversity[b]; });
    std::vector<double> rank_f(n), rank_d(n);
    for (std::size_t r = 0; r < n; ++r) {
        rank_f[by_value[r]] = static_cast<double>(r);
        rank_d[by_div[r]] = static_cast<double>(r);
    }
    const double size = static_cast<double>(n);
    std::vector<double> chi(n);
    for (std::size_t i = 0; i < n; ++i) chi[i] = (size - rank_f[i]) / size + xi * (size - rank_d[i]) / size;
    return chi;
}

Population::Population(const Instance& inst, int mu, double xi) : inst_(&inst), mu_(mu), xi_(xi) {}

void Population::add(Solution sol, const EvalBreakdown& eval) {
    Member m;
    m.edges = solution_edges(sol, *inst_);
    m.sol = std::move(sol);
    m.eval = eval;
    m.birth = next_birth_++;
    std::vector<double> row;
    row.reserve(members_.size() + 1);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const double d = edge_distance(members_[i].edges, m.edges);
        dist_[i].push_back(d);
        row.push_back(d);
    }
    row.push_back(0.0);
    dist_.push_back(std::move(row));
    members_.push_back(std::move(m));
}

double Population::diversity(int i) const {
    std::vector<double> d;
    for (int j = 0; j < size(); ++j)
        if (j != i) d.push_back(dist_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    if (d.empty()) return 0.0;
    const auto k = std::min<std::size_t>(kNearestForDiversity, d.size());
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    return std::accumulate(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), 0.0) / static_cast<double>(k);
}

std::vector<double> Population::biased_fitness(const PenaltyState& pen) const {
    std::vector<double> value, div;
    for (int i = 0; i < size(); ++i) {
        const auto& m = members_[static_cast<std::size_t>(i)];
        value.push_back(penalized_value(m.eval.distance, m.eval.violation, pen));
        div.push_back(diversity(i));
    }
    return mdvrp::biased_fitness(value, div, xi_);
}

int Population::select_survivors(const PenaltyState& pen) {
    int removed = 0;
    while (size() > mu_) {
        const auto chi = biased_fitness(pen);
        std::size_t worst = 0;
        for (std::size_t i = 1; i < chi.size(); ++i) {
            if (chi[i] < chi[worst] || (chi[i] == chi[worst] && members_[i].birth < members_[worst].birth)) worst = i;
        }
        members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(worst));
        dist_.erase(dist_.begin() + static_cast<std::ptrdiff_t>(worst));
        for (auto& row : dist_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(worst));
        ++removed;
    }
    return removed;
}

}  // namespace mdvrp

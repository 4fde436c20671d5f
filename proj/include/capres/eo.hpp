#pragma once

// tau-EO for resonance-constrained capacitor placement.
//
// Each step ranks buses by the loss of the subnetwork they feed, picks one with
// a power law over ranks, builds its neighbourhood (remove / resize / install /
// shift to parent / shift to a child), discards any neighbour that puts a
// capacitor into resonance, and moves to a neighbour drawn from an exponential
// law over cost ranks. Moves are accepted unconditionally; the best solution
// seen is kept separately.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "capres/catalog.hpp"
#include "capres/costmodel.hpp"
#include "capres/netmodel.hpp"
#include "capres/placement.hpp"
#include "capres/powerflow.hpp"
#include "capres/resonance.hpp"

namespace capres {

using Rng = std::mt19937_64;

struct TracePoint {
    std::size_t fe = 0;
    double cost = 0.0;

    bool operator==(const TracePoint&) const = default;
};

struct RunResult {
    Placement best_placement;
    double best_cost = 0.0;    // U$ per year
    double best_savings = 0.0; // U$ per year versus no capacitors
    std::size_t fe_used = 0;
    std::vector<TracePoint> cost_trace; // improvements only, starts at fe = 0

    bool operator==(const RunResult&) const = default;
};

/// Called once per objective evaluation with the candidate and its cost.
using EvaluationObserver = std::function<void(const Placement&, double)>;

// ---------------------------------------------------------------------------
// Rank sampling
// ---------------------------------------------------------------------------

/// Draws a rank in 1..n with probability proportional to weight(k).
class RankSampler {
public:
    template <class Weight>
    RankSampler(std::size_t n, Weight weight) {
        if (n == 0)
            throw InvalidArgument("rank sampler needs n >= 1");
        cdf_.resize(n);
        double acc = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            acc += weight(static_cast<double>(k));
            cdf_[k - 1] = acc;
        }
        if (!(acc > 0.0) || !std::isfinite(acc))
            throw InvalidArgument("rank weights must have a positive finite sum");
    }

    std::size_t size() const { return cdf_.size(); }

    double probability(std::size_t k) const {
        const double prev = k > 1 ? cdf_[k - 2] : 0.0;
        return (cdf_[k - 1] - prev) / cdf_.back();
    }

    std::size_t operator()(Rng& rng) const {
        std::uniform_real_distribution<double> u(0.0, cdf_.back());
        const double x = u(rng);
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
        if (it == cdf_.end())
            --it;
        return static_cast<std::size_t>(it - cdf_.begin()) + 1;
    }

private:
    std::vector<double> cdf_;
};

/// P(k) proportional to k^-tau.
inline RankSampler power_law_sampler(std::size_t n, double tau) {
    if (!(tau >= 0.0))
        throw InvalidArgument("tau must be >= 0");
    return RankSampler(n, [tau](double k) { return std::pow(k, -tau); });
}

/// P(k) proportional to exp(-mu k); shifted by one rank so large n cannot underflow rank 1.
inline RankSampler exponential_sampler(std::size_t n, double mu) {
    if (!(mu > 0.0))
        throw InvalidArgument("mu must be > 0");
    return RankSampler(n, [mu](double k) { return std::exp(-mu * (k - 1.0)); });
}

inline std::size_t sample_rank_power(std::size_t n, double tau, Rng& rng) { return power_law_sampler(n, tau)(rng); }

inline std::size_t sample_rank_exp(std::size_t n, double mu, Rng& rng) { return exponential_sampler(n, mu)(rng); }

// ---------------------------------------------------------------------------
// Fitness and neighbourhood
// ---------------------------------------------------------------------------

/// Per-bus fitness: loss of the subnetwork rooted at each bus (kW). Used for ranking only.
inline std::vector<double> node_fitness(const Network& net, const FlowState& flow) {
    return subtree_losses(net, flow);
}

enum class MoveKind { remove, increase, decrease, install, shift_to_parent, shift_to_child };

struct Move {
    MoveKind kind;
    Placement result;
    /// Bus that holds a new or resized capacitor after the move; none for pure removals.
    std::optional<BusId> receiver;
};

/// The raw move set at `bus` without any resonance filter. No-op moves and
/// duplicates are dropped; moves onto a forbidden root are never produced.
/// When the slot is empty exactly one random draw is consumed.
inline std::vector<Move> neighbourhood_moves(const Network& net, const Placement& s, BusId bus,
                                             const CapacitorCatalog& catalog, Rng& rng, bool allow_root) {
    std::vector<Move> moves;
    auto add = [&](MoveKind kind, Placement p, std::optional<BusId> receiver) {
        if (p == s)
            return;
        for (const auto& m : moves)
            if (m.result == p)
                return;
        if (!allow_root && p[Network::root] != 0)
            return;
        moves.push_back({kind, std::move(p), receiver});
    };

    const int max_slot = static_cast<int>(catalog.type_count());
    const int cur = s[bus];
    if (cur != 0) {
        Placement removed = s;
        removed.set(bus, 0);
        add(MoveKind::remove, removed, std::nullopt);

        Placement up = s;
        up.set(bus, std::min(cur + 1, max_slot));
        add(MoveKind::increase, up, bus);

        Placement down = s;
        const int lower = std::max(cur - 1, 0);
        down.set(bus, lower);
        add(MoveKind::decrease, down, lower ? std::optional<BusId>(bus) : std::nullopt);

        if (auto par = net.parent(bus)) {
            Placement shifted = removed;
            shifted.set(*par, cur);
            add(MoveKind::shift_to_parent, shifted, *par);
        }
        for (BusId child : net.children(bus)) {
            Placement shifted = removed;
            shifted.set(child, cur);
            add(MoveKind::shift_to_child, shifted, child);
        }
    } else {
        std::uniform_int_distribution<int> pick(1, max_slot);
        Placement installed = s;
        installed.set(bus, pick(rng));
        add(MoveKind::install, installed, bus);
    }
    return moves;
}

struct Neighbourhood {
    std::vector<Placement> candidates;
    std::vector<MoveKind> kinds;
    std::size_t resonance_checks = 0;

    bool empty() const { return candidates.empty(); }
    std::size_t size() const { return candidates.size(); }
};

/// Resonance-feasible neighbours of `s` obtained by perturbing `bus`. Only the
/// bus receiving a capacitor is checked, since feasibility of one bus does not
/// depend on the rest of the placement. Infeasible moves are discarded.
inline Neighbourhood generate_neighbors(const Network& net, const Placement& s, BusId bus,
                                        const CapacitorCatalog& catalog, const ResonancePolicy& policy, Rng& rng,
                                        bool allow_root = false) {
    Neighbourhood out;
    for (auto& m : neighbourhood_moves(net, s, bus, catalog, rng, allow_root)) {
        if (m.receiver) {
            ++out.resonance_checks;
            if (!bus_feasible(net, *m.receiver, m.result[*m.receiver], catalog, policy, allow_root))
                continue;
        }
        out.candidates.push_back(std::move(m.result));
        out.kinds.push_back(m.kind);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

struct EoConfig {
    double tau = 2.0;
    double mu = 0.5;
    std::size_t fe_budget = 50000;
    std::uint64_t seed = 1;
    bool allow_root_placement = false;
    ResonancePolicy resonance;
    /// Consecutive steps with no feasible neighbour before the run gives up.
    std::size_t max_stall_steps = 10000;
    EvaluationObserver observer;

    void validate() const {
        if (!(tau >= 0.0))
            throw InvalidArgument("tau must be >= 0");
        if (!(mu > 0.0))
            throw InvalidArgument("mu must be > 0");
        if (fe_budget < 1)
            throw InvalidArgument("fe_budget must be >= 1");
        resonance.validate();
    }
};

inline RunResult run_eo(const Network& net, const CapacitorCatalog& catalog, const EconomicParams& econ,
                        const EoConfig& config) {
    config.validate();
    econ.validate();

    Rng rng(config.seed);
    const std::size_t n = net.bus_count();

    std::vector<BusId> variables;
    for (BusId b = 0; b < n; ++b)
        if (b != Network::root || config.allow_root_placement)
            variables.push_back(b);

    Placement current(n);
    const double empty_cost = total_annual_cost(net, current, catalog, econ);

    RunResult result;
    result.best_placement = current;
    result.best_cost = empty_cost;
    result.cost_trace.push_back({0, empty_cost});
    if (variables.empty())
        return result;

    const RankSampler bus_sampler = power_law_sampler(variables.size(), config.tau);
    std::map<std::size_t, RankSampler> neighbour_samplers;
    auto neighbour_sampler = [&](std::size_t count) -> const RankSampler& {
        auto it = neighbour_samplers.find(count);
        if (it == neighbour_samplers.end())
            it = neighbour_samplers.emplace(count, exponential_sampler(count, config.mu)).first;
        return it->second;
    };

    std::vector<BusId> ranked = variables;
    std::vector<double> costs;
    std::vector<std::size_t> by_cost;
    std::size_t stall = 0;

    while (result.fe_used < config.fe_budget) {
        // Rank 1 is the bus feeding the largest loss.
        const auto fitness = node_fitness(net, solve_flows(net, current, catalog));
        ranked = variables;
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](BusId a, BusId b) { return fitness[a] > fitness[b]; });

        Neighbourhood hood;
        for (std::size_t attempt = 0; attempt <= n && hood.empty(); ++attempt) {
            const BusId bus = ranked[bus_sampler(rng) - 1];
            hood = generate_neighbors(net, current, bus, catalog, config.resonance, rng,
                                      config.allow_root_placement);
        }
        if (hood.empty()) {
            if (++stall >= config.max_stall_steps)
                break;
            continue;
        }
        stall = 0;

        const std::size_t affordable = std::min(hood.size(), config.fe_budget - result.fe_used);
        costs.assign(affordable, 0.0);
        for (std::size_t i = 0; i < affordable; ++i) {
            costs[i] = total_annual_cost(net, hood.candidates[i], catalog, econ);
            ++result.fe_used;
            if (config.observer)
                config.observer(hood.candidates[i], costs[i]);
        }
        by_cost.resize(affordable);
        std::iota(by_cost.begin(), by_cost.end(), std::size_t{0});
        std::stable_sort(by_cost.begin(), by_cost.end(), [&](auto a, auto b) { return costs[a] < costs[b]; });

        const std::size_t chosen = by_cost[neighbour_sampler(affordable)(rng) - 1];
        current = std::move(hood.candidates[chosen]);
        if (costs[chosen] < result.best_cost) {
            result.best_cost = costs[chosen];
            result.best_placement = current;
            result.cost_trace.push_back({result.fe_used, result.best_cost});
        }
    }

    result.best_savings = empty_cost - result.best_cost;
    return result;
}

} // namespace capres

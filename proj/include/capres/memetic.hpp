#pragma once

// Resonance-unaware memetic baseline and the post-optimisation repairs applied
// to its result.
//
// Population: 13 individuals on a ternary tree of depth 2 (index 0 is the
// root, children of i are 3i+1..3i+3). Every generation runs
// floor(rate_cross * 13) uniform crossovers between a random node and its
// parent, mutates each offspring gene with probability p_mut, lets the
// offspring replace the node when it is cheaper, restores the "parent is no
// worse than child" ordering, and finally hill-climbs the root with the EO move
// set (first improvement, no resonance filter).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capres/costmodel.hpp"
#include "capres/eo.hpp"
#include "capres/resonance.hpp"

namespace capres {

struct MaConfig {
    static constexpr std::size_t population_size = 13;

    double rate_cross = 1.5;
    double p_mut = 0.1;
    std::size_t fe_budget = 50000;
    std::uint64_t seed = 1;
    /// Evaluations the root hill-climb may spend per generation.
    std::size_t local_search_moves = 100;
    bool allow_root_placement = false;
    EvaluationObserver observer;
    /// Called after every generation with the population costs in tree order.
    std::function<void(std::span<const double>)> generation_observer;

    void validate() const {
        if (!(rate_cross >= 0.0))
            throw InvalidArgument("rate_cross must be >= 0");
        if (!(p_mut >= 0.0 && p_mut <= 1.0))
            throw InvalidArgument("p_mut must lie in [0, 1]");
        if (fe_budget < 1)
            throw InvalidArgument("fe_budget must be >= 1");
    }
};

namespace detail {

inline constexpr std::size_t ma_parent(std::size_t i) { return (i - 1) / 3; }

class MaRun {
public:
    MaRun(const Network& net, const CapacitorCatalog& catalog, const EconomicParams& econ, const MaConfig& cfg)
        : net_(net), catalog_(catalog), econ_(econ), cfg_(cfg), rng_(cfg.seed) {}

    RunResult run() {
        // The best individual is tracked over evaluated individuals only; the
        // empty placement is the savings baseline, not a member of the population.
        result_.best_placement = Placement(net_.bus_count());
        empty_cost_ = total_annual_cost(net_, result_.best_placement, catalog_, econ_);
        result_.best_cost = std::numeric_limits<double>::infinity();

        initialise();
        if (pop_.size() == MaConfig::population_size) {
            order_hierarchy();
            while (budget_left()) {
                const std::size_t before = result_.fe_used;
                generation();
                if (cfg_.generation_observer) {
                    std::vector<double> costs;
                    for (const auto& ind : pop_)
                        costs.push_back(ind.cost);
                    cfg_.generation_observer(costs);
                }
                if (result_.fe_used == before)
                    break; // operators switched off; nothing can change any more
            }
        }
        result_.best_savings = empty_cost_ - result_.best_cost;
        return result_;
    }

private:
    struct Individual {
        Placement genes;
        double cost;
    };

    bool budget_left() const { return result_.fe_used < cfg_.fe_budget; }

    double evaluate(const Placement& p) {
        const double c = total_annual_cost(net_, p, catalog_, econ_);
        ++result_.fe_used;
        if (cfg_.observer)
            cfg_.observer(p, c);
        if (c < result_.best_cost) {
            result_.best_cost = c;
            result_.best_placement = p;
            result_.cost_trace.push_back({result_.fe_used, c});
        }
        return c;
    }

    int random_gene() {
        std::uniform_int_distribution<int> g(0, static_cast<int>(catalog_.type_count()));
        return g(rng_);
    }

    bool mutable_bus(BusId b) const { return b != Network::root || cfg_.allow_root_placement; }

    void initialise() {
        for (std::size_t i = 0; i < MaConfig::population_size && budget_left(); ++i) {
            Placement p(net_.bus_count());
            for (BusId b = 0; b < p.size(); ++b)
                if (mutable_bus(b))
                    p.set(b, random_gene());
            const double c = evaluate(p);
            pop_.push_back({std::move(p), c});
        }
    }

    void order_hierarchy() {
        std::stable_sort(pop_.begin(), pop_.end(), [](const auto& a, const auto& b) { return a.cost < b.cost; });
    }

    // Bubble better children upwards until every parent is no worse than its children.
    void restore_hierarchy() {
        bool swapped = true;
        while (swapped) {
            swapped = false;
            for (std::size_t j = 1; j < pop_.size(); ++j) {
                auto& parent = pop_[ma_parent(j)];
                if (pop_[j].cost < parent.cost) {
                    std::swap(pop_[j], parent);
                    swapped = true;
                }
            }
        }
    }

    void generation() {
        const auto crossovers = static_cast<std::size_t>(cfg_.rate_cross * MaConfig::population_size);
        std::uniform_int_distribution<std::size_t> pick_node(1, MaConfig::population_size - 1);
        std::bernoulli_distribution coin(0.5);
        std::bernoulli_distribution mutate(cfg_.p_mut);

        for (std::size_t c = 0; c < crossovers && budget_left(); ++c) {
            const std::size_t child = pick_node(rng_);
            const Placement& a = pop_[ma_parent(child)].genes;
            const Placement& b = pop_[child].genes;
            Placement offspring(net_.bus_count());
            for (BusId g = 0; g < offspring.size(); ++g) {
                offspring.set(g, coin(rng_) ? a[g] : b[g]);
                if (mutable_bus(g) && mutate(rng_))
                    offspring.set(g, random_gene());
            }
            const double cost = evaluate(offspring);
            if (cost < pop_[child].cost)
                pop_[child] = {std::move(offspring), cost};
        }
        restore_hierarchy();
        local_search();
    }

    void local_search() {
        std::size_t spent = 0;
        std::vector<BusId> buses;
        for (BusId b = 0; b < net_.bus_count(); ++b)
            if (mutable_bus(b))
                buses.push_back(b);

        bool improved = true;
        while (improved && spent < cfg_.local_search_moves && budget_left()) {
            improved = false;
            std::shuffle(buses.begin(), buses.end(), rng_);
            for (BusId bus : buses) {
                auto& root = pop_.front();
                for (auto& m : neighbourhood_moves(net_, root.genes, bus, catalog_, rng_, cfg_.allow_root_placement)) {
                    if (spent >= cfg_.local_search_moves || !budget_left())
                        return;
                    const double cost = evaluate(m.result);
                    ++spent;
                    if (cost < root.cost) {
                        root = {std::move(m.result), cost};
                        improved = true;
                        break;
                    }
                }
                if (improved)
                    break;
            }
        }
    }

    const Network& net_;
    const CapacitorCatalog& catalog_;
    const EconomicParams& econ_;
    const MaConfig& cfg_;
    Rng rng_;
    std::vector<Individual> pop_;
    RunResult result_;
    double empty_cost_ = 0.0;
};

} // namespace detail

/// Evolves placements minimising annual cost with no resonance constraint.
/// Every objective evaluation counts against fe_budget.
inline RunResult run_ma(const Network& net, const CapacitorCatalog& catalog, const EconomicParams& econ,
                        const MaConfig& config) {
    config.validate();
    econ.validate();
    return detail::MaRun(net, catalog, econ, config).run();
}

enum class RepairStrategy {
    remove,          // STRTG1
    shift_to_parent, // STRTG2
    shift_to_child,  // STRTG3: first child in bus-id order
};

inline std::string to_string(RepairStrategy s) {
    switch (s) {
    case RepairStrategy::remove:
        return "strtg1";
    case RepairStrategy::shift_to_parent:
        return "strtg2";
    case RepairStrategy::shift_to_child:
        return "strtg3";
    }
    return "?";
}

/// Applies one repair pass to the violating capacitors of `s` in increasing
/// bus id. A capacitor with nowhere to go (no parent, forbidden root, leaf)
/// stays where it is; a shifted capacitor overwrites whatever sits at its
/// destination. Returns nullopt when the result still violates resonance.
inline std::optional<Placement> repair(const Network& net, const Placement& s, RepairStrategy strategy,
                                       const CapacitorCatalog& catalog, const ResonancePolicy& policy,
                                       bool allow_root = false) {
    const auto report = placement_feasible(net, s, catalog, policy, allow_root);
    if (report.feasible)
        return s;

    Placement out = s;
    for (BusId v : report.violators) {
        const int slot = out[v];
        if (slot == 0)
            continue;
        std::optional<BusId> dest;
        switch (strategy) {
        case RepairStrategy::remove:
            break;
        case RepairStrategy::shift_to_parent:
            dest = net.parent(v);
            break;
        case RepairStrategy::shift_to_child:
            if (auto kids = net.children(v); !kids.empty())
                dest = kids.front();
            break;
        }
        if (strategy == RepairStrategy::remove) {
            out.set(v, 0);
            continue;
        }
        if (!dest || (*dest == Network::root && !allow_root))
            continue;
        out.set(v, 0);
        out.set(*dest, slot);
    }

    if (!placement_feasible(net, out, catalog, policy, allow_root))
        return std::nullopt;
    return out;
}

} // namespace capres

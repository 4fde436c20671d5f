#pragma once

#include <cmath>
#include <cstddef>

#include "capres/catalog.hpp"
#include "capres/netmodel.hpp"
#include "capres/placement.hpp"
#include "capres/powerflow.hpp"

namespace capres {

struct EconomicParams {
    double interest_rate = 0.12;
    int horizon_years = 5;
    double energy_price = 100.0; // U$ per MWh

    void validate() const {
        if (!(interest_rate > 0.0))
            throw InvalidArgument("interest_rate must be > 0");
        if (horizon_years < 1)
            throw InvalidArgument("horizon_years must be >= 1");
        if (!(energy_price > 0.0))
            throw InvalidArgument("energy_price must be > 0");
    }
};

/// Capital recovery factor i / (1 - (1 + i)^-k).
inline double amortization_factor(const EconomicParams& econ) {
    econ.validate();
    const double i = econ.interest_rate;
    return i / (1.0 - 1.0 / std::pow(1.0 + i, econ.horizon_years));
}

/// Annualised cost of one capacitor in `slot` (0 = none), U$ per year.
inline double amortized_cost(const CapacitorCatalog& catalog, const EconomicParams& econ, int slot) {
    if (slot == 0)
        return 0.0;
    return amortization_factor(econ) * catalog.cost_usd(slot);
}

/// Hours per year over 1000, turning kW x U$/MWh into U$/year.
inline constexpr double annual_energy_factor = 8.76;

inline double loss_cost(double total_loss_kw, const EconomicParams& econ) {
    return annual_energy_factor * econ.energy_price * total_loss_kw;
}

inline double capacitor_cost(const Placement& placement, const CapacitorCatalog& catalog,
                             const EconomicParams& econ) {
    const double factor = amortization_factor(econ);
    double sum = 0.0;
    for (BusId b = 0; b < placement.size(); ++b)
        if (placement[b])
            sum += factor * catalog.cost_usd(placement[b]);
    return sum;
}

/// Annual loss cost plus amortised equipment cost, U$ per year.
inline double total_annual_cost(const Network& net, const Placement& placement, const CapacitorCatalog& catalog,
                                const EconomicParams& econ) {
    const FlowState flow = solve_flows(net, placement, catalog);
    return loss_cost(flow.total_loss_kw, econ) + capacitor_cost(placement, catalog, econ);
}

/// Cost of the uncompensated network minus cost with `placement`. Signed.
inline double annual_savings(const Network& net, const Placement& placement, const CapacitorCatalog& catalog,
                             const EconomicParams& econ) {
    return total_annual_cost(net, Placement(net.bus_count()), catalog, econ) -
           total_annual_cost(net, placement, catalog, econ);
}

} // namespace capres

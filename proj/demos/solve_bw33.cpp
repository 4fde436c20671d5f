// Solves the 33-bus feeder with EO at a few energy prices and prints where the
// capacitors go.

#include <cstdio>

#include "capres/capres.hpp"

int main() {
    const auto net = capres::load_network_file(CAPRES_DATA_DIR "/bw33.csv");
    const auto catalog = capres::CapacitorCatalog::table_one();

    for (double price : {50.0, 100.0, 150.0}) {
        capres::EconomicParams econ;
        econ.energy_price = price;
        capres::EoConfig cfg;
        cfg.fe_budget = 20000;
        cfg.seed = 7;
        const auto r = capres::run_eo(net, catalog, econ, cfg);
        const auto flow = capres::solve_flows(net, r.best_placement, catalog);
        std::printf("price %5.0f U$/MWh: savings %10.2f U$/yr, losses %6.2f kW, %zu capacitors:", price,
                    r.best_savings, flow.total_loss_kw, r.best_placement.installed_count());
        for (capres::BusId b = 0; b < r.best_placement.size(); ++b)
            if (r.best_placement[b])
                std::printf(" %zu:%g", b, catalog.size_kvar(r.best_placement[b]));
        std::printf("\n");
    }
}

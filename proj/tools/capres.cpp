// capres: solve, sweep and check resonance-constrained capacitor placements.
//
//   capres solve --network data/bw33.csv --algo eo --price 100
//   capres sweep --spec experiment.cfg --out results --quick
//   capres check --network data/bw33.csv --placement mine.csv
//
// Exit status: 0 success, 1 error, 2 infeasible placement (check only).

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "capres/capres.hpp"

namespace {

struct CommonOptions {
    std::string network;
    std::string catalog;
    double price = 100.0;
    double price_scale = 1.0;
    std::string resonance_mode = "round";
    double fundamental_hz = 60.0;
    double band_hz = 10.0;
    bool allow_root = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--network", network, "Network CSV file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--catalog", catalog, "Capacitor catalog CSV (type,size_kvar,cost_usd)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--price", price, "Energy price, U$/MWh")->capture_default_str();
        cmd->add_option("--price-scale", price_scale, "Multiplier on capacitor prices")->capture_default_str();
        cmd->add_option("--resonance-mode", resonance_mode, "round | band")
            ->check(CLI::IsMember({"round", "band"}))
            ->capture_default_str();
        cmd->add_option("--fundamental-hz", fundamental_hz)->capture_default_str();
        cmd->add_option("--band-hz", band_hz)->capture_default_str();
        cmd->add_flag("--allow-root", allow_root, "Allow a capacitor at the substation bus");
    }

    capres::CapacitorCatalog load_catalog() const {
        auto c = catalog.empty() ? capres::CapacitorCatalog::table_one() : capres::load_catalog_file(catalog);
        return c.with_price_scale(price_scale);
    }

    capres::ResonancePolicy policy() const {
        capres::ResonancePolicy p;
        p.mode = capres::parse_resonance_mode(resonance_mode);
        p.fundamental_hz = fundamental_hz;
        p.band_hz = band_hz;
        return p;
    }
};

void print_placement(const capres::Placement& p, const capres::CapacitorCatalog& catalog) {
    for (capres::BusId b = 0; b < p.size(); ++b)
        if (p[b])
            std::cout << "  bus " << std::setw(3) << b << "  type " << catalog.row(p[b]).type_id << "  "
                      << catalog.size_kvar(p[b]) << " kvar\n";
}

int run_solve(const CommonOptions& common, const std::string& algo, std::uint64_t seed, std::size_t fe_budget,
              double tau, double mu, const std::string& out_path) {
    const auto net = capres::load_network_file(common.network);
    const auto catalog = common.load_catalog();
    capres::SolverSettings s;
    s.algorithm = capres::parse_algorithm(algo);
    s.econ.energy_price = common.price;
    s.resonance = common.policy();
    s.fe_budget = fe_budget;
    s.seed = seed;
    s.allow_root = common.allow_root;
    s.tau = tau;
    s.mu = mu;

    const auto o = capres::solve(net, catalog, s);
    std::cout << std::fixed << std::setprecision(2);
    std::cout << "algorithm:      " << algo << "\n"
              << "seed:           " << seed << "\n"
              << "fe_used:        " << o.raw.fe_used << "\n"
              << "solver cost:    " << o.raw.best_cost << " U$/yr\n";
    if (!o.feasible()) {
        std::cout << "result:         infeasible after repair (dropped)\n";
        print_placement(o.raw.best_placement, catalog);
        return 0;
    }
    const auto flow = capres::solve_flows(net, *o.final, catalog);
    std::cout << "annual cost:    " << o.cost << " U$/yr\n"
              << "annual savings: " << o.savings << " U$/yr\n"
              << "losses:         " << flow.total_loss_kw << " kW\n"
              << "capacitors:     " << o.final->installed_count() << "\n";
    print_placement(*o.final, catalog);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out)
            throw capres::Error("cannot write '" + out_path + "'");
        capres::write_placement(out, *o.final, catalog);
    }
    return 0;
}

int run_check(const CommonOptions& common, const std::string& placement_path) {
    const auto net = capres::load_network_file(common.network);
    const auto catalog = common.load_catalog();
    std::ifstream in(placement_path);
    if (!in)
        throw capres::Error("cannot open placement file '" + placement_path + "'");
    const auto placement = capres::load_placement(in, net, catalog);
    capres::EconomicParams econ;
    econ.energy_price = common.price;

    const auto report = capres::placement_feasible(net, placement, catalog, common.policy(), common.allow_root);
    const auto flow = capres::solve_flows(net, placement, catalog);
    std::cout << std::fixed << std::setprecision(2);
    std::cout << "capacitors:     " << placement.installed_count() << "\n"
              << "losses:         " << flow.total_loss_kw << " kW\n"
              << "annual cost:    " << capres::total_annual_cost(net, placement, catalog, econ) << " U$/yr\n"
              << "annual savings: " << capres::annual_savings(net, placement, catalog, econ) << " U$/yr\n"
              << "feasible:       " << (report.feasible ? "yes" : "no") << "\n";
    for (auto b : report.violators) {
        const double scc = capres::short_circuit_power(net, b);
        const double qc = catalog.size_kvar(placement[b]) * 1e3;
        std::cout << "  violation at bus " << b << ": h = " << std::setprecision(3)
                  << capres::harmonic_order(scc, qc) << ", f_p = "
                  << capres::resonance_frequency(scc, qc, common.policy()) << " Hz\n"
                  << std::setprecision(2);
    }
    return report.feasible ? 0 : 2;
}

int run_sweep(const std::string& spec_path, const std::string& out_dir, bool quick, bool full, unsigned jobs) {
    auto spec = capres::load_experiment_spec(spec_path);
    if (quick)
        capres::apply_profile(spec, capres::Profile::quick);
    if (full)
        capres::apply_profile(spec, capres::Profile::full);
    if (!out_dir.empty())
        spec.output = out_dir;
    if (jobs)
        spec.jobs = jobs;
    const auto report = capres::run_sweep(spec);
    capres::write_reports(report, spec.output);
    std::cout << "wrote " << report.records.size() << " runs to " << (spec.output / "sweep.csv").string() << " and "
              << (spec.output / "summary.csv").string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance-constrained capacitor placement on radial feeders"};
    app.require_subcommand(1);

    CommonOptions solve_opts;
    std::string algo = "eo";
    std::uint64_t seed = 1;
    std::size_t fe_budget = 50000;
    double tau = 2.0, mu = 0.5;
    std::string placement_out;
    auto* solve = app.add_subcommand("solve", "Run one solver on a network");
    solve_opts.attach(solve);
    solve->add_option("--algo", algo, "eo | ma+strtg1 | ma+strtg2 | ma+strtg3")->capture_default_str();
    solve->add_option("--seed", seed)->capture_default_str();
    solve->add_option("--fe-budget", fe_budget, "Objective evaluation budget")->capture_default_str();
    solve->add_option("--tau", tau, "Power-law exponent for bus selection")->capture_default_str();
    solve->add_option("--mu", mu, "Exponential rate for neighbour selection")->capture_default_str();
    solve->add_option("--output", placement_out, "Write the final placement as bus,type CSV");

    std::string spec_path, out_dir;
    bool quick = false, full = false;
    unsigned jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "Run the multi-seed price sweeps and write CSV reports");
    sweep->add_option("--spec", spec_path, "Experiment config (key = value)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_dir, "Output directory (overrides the config)");
    auto* q = sweep->add_flag("--quick", quick, "10,000 evaluations, 10 runs");
    auto* f = sweep->add_flag("--full", full, "50,000 evaluations, 30 runs");
    q->excludes(f);
    sweep->add_option("--jobs", jobs, "Worker threads (default: all cores)");

    CommonOptions check_opts;
    std::string placement_path;
    auto* check = app.add_subcommand("check", "Feasibility and cost report for a placement file");
    check_opts.attach(check);
    check->add_option("--placement", placement_path, "Placement CSV (bus,type)")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1; // --help exits 0, bad usage is an error
    }

    try {
        if (*solve)
            return run_solve(solve_opts, algo, seed, fe_budget, tau, mu, placement_out);
        if (*sweep)
            return run_sweep(spec_path, out_dir, quick, full, jobs);
        if (*check)
            return run_check(check_opts, placement_path);
    } catch (const std::exception& e) {
        std::cerr << "capres: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

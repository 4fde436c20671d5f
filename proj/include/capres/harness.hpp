#pragma once

// Experiment protocol: seeded multi-run sweeps over energy price and capacitor
// price scale, feasibility-aware statistics, and plot-ready CSV output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "capres/catalog.hpp"
#include "capres/costmodel.hpp"
#include "capres/detail/text.hpp"
#include "capres/eo.hpp"
#include "capres/memetic.hpp"
#include "capres/netmodel.hpp"
#include "capres/resonance.hpp"
#include "capres/stats.hpp"

namespace capres {

enum class Algorithm { eo, ma_strtg1, ma_strtg2, ma_strtg3 };

inline std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::eo:
        return "eo";
    case Algorithm::ma_strtg1:
        return "ma+strtg1";
    case Algorithm::ma_strtg2:
        return "ma+strtg2";
    case Algorithm::ma_strtg3:
        return "ma+strtg3";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
    for (auto a : {Algorithm::eo, Algorithm::ma_strtg1, Algorithm::ma_strtg2, Algorithm::ma_strtg3})
        if (s == to_string(a))
            return a;
    throw InvalidArgument("unknown algorithm '" + std::string(s) + "' (eo, ma+strtg1, ma+strtg2, ma+strtg3)");
}

inline RepairStrategy repair_for(Algorithm a) {
    switch (a) {
    case Algorithm::ma_strtg1:
        return RepairStrategy::remove;
    case Algorithm::ma_strtg2:
        return RepairStrategy::shift_to_parent;
    case Algorithm::ma_strtg3:
        return RepairStrategy::shift_to_child;
    case Algorithm::eo:
        break;
    }
    throw InvalidArgument("eo has no repair strategy");
}

/// Everything one seeded solver run needs besides the network and catalog.
struct SolverSettings {
    Algorithm algorithm = Algorithm::eo;
    EconomicParams econ;
    ResonancePolicy resonance;
    std::size_t fe_budget = 50000;
    std::uint64_t seed = 1;
    bool allow_root = false;
    double tau = 2.0;
    double mu = 0.5;
    double rate_cross = 1.5;
    double p_mut = 0.1;
    std::size_t local_search_moves = 100;
};

struct SolveOutcome {
    RunResult raw;                  // solver output before any repair
    std::optional<Placement> final; // nullopt when a repair left violations
    double savings = 0.0;           // of `final`; meaningless when infeasible
    double cost = 0.0;

    bool feasible() const { return final.has_value(); }
};

inline SolveOutcome solve(const Network& net, const CapacitorCatalog& catalog, const SolverSettings& s) {
    SolveOutcome out;
    if (s.algorithm == Algorithm::eo) {
        EoConfig cfg;
        cfg.tau = s.tau;
        cfg.mu = s.mu;
        cfg.fe_budget = s.fe_budget;
        cfg.seed = s.seed;
        cfg.allow_root_placement = s.allow_root;
        cfg.resonance = s.resonance;
        out.raw = run_eo(net, catalog, s.econ, cfg);
        if (placement_feasible(net, out.raw.best_placement, catalog, s.resonance, s.allow_root))
            out.final = out.raw.best_placement;
    } else {
        MaConfig cfg;
        cfg.rate_cross = s.rate_cross;
        cfg.p_mut = s.p_mut;
        cfg.fe_budget = s.fe_budget;
        cfg.seed = s.seed;
        cfg.local_search_moves = s.local_search_moves;
        cfg.allow_root_placement = s.allow_root;
        out.raw = run_ma(net, catalog, s.econ, cfg);
        out.final = repair(net, out.raw.best_placement, repair_for(s.algorithm), catalog, s.resonance, s.allow_root);
    }
    if (out.final) {
        out.cost = total_annual_cost(net, *out.final, catalog, s.econ);
        out.savings = annual_savings(net, *out.final, catalog, s.econ);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Placement files: `bus,type` rows, type is a catalog type id, unlisted buses empty.
// ---------------------------------------------------------------------------

inline Placement load_placement(std::istream& in, const Network& net, const CapacitorCatalog& catalog) {
    Placement p(net.bus_count());
    std::string line;
    std::size_t row = 0;
    bool have_header = false;
    std::size_t c_bus = 0, c_type = 0, width = 0;
    while (std::getline(in, line)) {
        ++row;
        auto text = detail::trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        if (!have_header) {
            detail::Header h(text);
            c_bus = h.require("bus", row);
            c_type = h.require("type", row);
            width = h.size();
            have_header = true;
            continue;
        }
        auto f = detail::split(text);
        if (f.size() != width)
            throw ParseError(row, "wrong field count");
        auto bus = detail::parse_int(f[c_bus], row, "bus");
        auto type = detail::parse_int(f[c_type], row, "type");
        if (bus < 0 || static_cast<std::size_t>(bus) >= net.bus_count())
            throw ParseError(row, "unknown bus " + std::to_string(bus));
        int slot = 0;
        for (std::size_t k = 1; k <= catalog.type_count(); ++k)
            if (catalog.row(static_cast<int>(k)).type_id == type)
                slot = static_cast<int>(k);
        if (type != 0 && slot == 0)
            throw ParseError(row, "type " + std::to_string(type) + " is not in the catalog");
        p.set(static_cast<BusId>(bus), slot);
    }
    return p;
}

inline void write_placement(std::ostream& out, const Placement& p, const CapacitorCatalog& catalog) {
    out << "bus,type\n";
    for (BusId b = 0; b < p.size(); ++b)
        if (p[b])
            out << b << ',' << catalog.row(p[b]).type_id << '\n';
}

// ---------------------------------------------------------------------------
// Experiment specification
// ---------------------------------------------------------------------------

enum class GridParam { energy_price, price_scale };

inline std::string to_string(GridParam g) { return g == GridParam::energy_price ? "energy_price" : "price_scale"; }

struct ExperimentSpec {
    std::filesystem::path network;
    std::optional<std::filesystem::path> catalog;
    std::vector<Algorithm> algorithms{Algorithm::eo, Algorithm::ma_strtg1, Algorithm::ma_strtg2,
                                      Algorithm::ma_strtg3};
    std::vector<double> price_grid{50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150};
    std::vector<double> price_scale_grid{0.8, 0.9, 1.0, 1.1, 1.2};
    double base_price = 100.0; // energy price used by the price-scale sweep
    std::size_t runs = 30;
    std::size_t fe_budget = 50000;
    std::uint64_t base_seed = 1;
    ResonancePolicy resonance;
    bool allow_root = false;
    double tau = 2.0;
    double mu = 0.5;
    std::filesystem::path output = "sweep_out";
    unsigned jobs = 0; // 0 = hardware concurrency

    void validate() const {
        if (runs < 1)
            throw InvalidArgument("runs must be >= 1");
        if (price_grid.empty() || price_scale_grid.empty())
            throw InvalidArgument("price grids must not be empty");
        if (algorithms.empty())
            throw InvalidArgument("no algorithms selected");
        if (fe_budget < 1)
            throw InvalidArgument("fe_budget must be >= 1");
        resonance.validate();
    }
};

enum class Profile { quick, full };

inline void apply_profile(ExperimentSpec& spec, Profile p) {
    spec.fe_budget = p == Profile::quick ? 10000 : 50000;
    spec.runs = p == Profile::quick ? 10 : 30;
}

namespace detail {

// "a,b,c" or an inclusive range "start:stop:step".
inline std::vector<double> parse_grid(std::string_view v, std::size_t row) {
    std::vector<double> out;
    if (v.find(':') != std::string_view::npos) {
        auto parts = split(v, ':');
        if (parts.size() != 3)
            throw ParseError(row, "range must be start:stop:step");
        const double start = parse_double(parts[0], row, "range start");
        const double stop = parse_double(parts[1], row, "range stop");
        const double step = parse_double(parts[2], row, "range step");
        if (!(step > 0.0) || stop < start)
            throw ParseError(row, "range needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
        return out;
    }
    for (auto f : split(v))
        if (!f.empty())
            out.push_back(parse_double(f, row, "grid value"));
    return out;
}

inline bool parse_bool(std::string_view v, std::size_t row) {
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ParseError(row, "expected a boolean, got '" + std::string(v) + "'");
}

} // namespace detail

/// Parses `key = value` lines; `#` starts a comment. Relative paths are
/// resolved against `base_dir`.
inline ExperimentSpec parse_experiment_spec(std::istream& in, const std::filesystem::path& base_dir = {}) {
    ExperimentSpec spec;
    auto resolve = [&](std::string_view v) {
        std::filesystem::path p{std::string(v)};
        return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    };
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        auto text = detail::trim(std::string_view(line).substr(0, line.find('#')));
        if (text.empty())
            continue;
        auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(row, "expected key = value");
        auto key = detail::trim(text.substr(0, eq));
        auto val = detail::trim(text.substr(eq + 1));
        if (key == "network")
            spec.network = resolve(val);
        else if (key == "catalog")
            spec.catalog = resolve(val);
        else if (key == "algorithms") {
            spec.algorithms.clear();
            for (auto a : detail::split(val))
                spec.algorithms.push_back(parse_algorithm(a));
        } else if (key == "prices")
            spec.price_grid = detail::parse_grid(val, row);
        else if (key == "price_scales")
            spec.price_scale_grid = detail::parse_grid(val, row);
        else if (key == "base_price")
            spec.base_price = detail::parse_double(val, row, key);
        else if (key == "runs")
            spec.runs = static_cast<std::size_t>(detail::parse_int(val, row, key));
        else if (key == "fe_budget")
            spec.fe_budget = static_cast<std::size_t>(detail::parse_int(val, row, key));
        else if (key == "base_seed")
            spec.base_seed = static_cast<std::uint64_t>(detail::parse_int(val, row, key));
        else if (key == "resonance_mode")
            spec.resonance.mode = parse_resonance_mode(val);
        else if (key == "fundamental_hz")
            spec.resonance.fundamental_hz = detail::parse_double(val, row, key);
        else if (key == "band_hz")
            spec.resonance.band_hz = detail::parse_double(val, row, key);
        else if (key == "allow_root")
            spec.allow_root = detail::parse_bool(val, row);
        else if (key == "tau")
            spec.tau = detail::parse_double(val, row, key);
        else if (key == "mu")
            spec.mu = detail::parse_double(val, row, key);
        else if (key == "output")
            spec.output = resolve(val);
        else if (key == "jobs")
            spec.jobs = static_cast<unsigned>(detail::parse_int(val, row, key));
        else
            throw ParseError(row, "unknown key '" + std::string(key) + "'");
    }
    if (spec.network.empty())
        throw ParseError(0, "experiment config needs 'network = <file>'");
    spec.validate();
    return spec;
}

inline ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open experiment config '" + path.string() + "'");
    return parse_experiment_spec(in, path.parent_path());
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

struct CellKey {
    GridParam param;
    double value;
    Algorithm algorithm;

    auto operator<=>(const CellKey&) const = default;
};

struct RunRecord {
    CellKey cell;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    bool feasible = false;
    double savings = 0.0;
    std::size_t fe_used = 0;
    Placement placement; // final (repaired) placement; raw solver output when infeasible
};

struct CellSummary {
    CellKey cell;
    std::size_t runs = 0;
    std::size_t feasible_runs = 0;
    std::optional<double> mean_savings; // absent when no run was feasible
    std::optional<double> std_savings;
    std::optional<double> p_value_vs_eo;
    std::optional<TypeCount> capacitors; // total installed count
    std::vector<TypeCount> per_type;     // empty when no run was feasible
};

struct SweepReport {
    std::vector<int> type_ids; // catalog type ids, in slot order
    std::vector<RunRecord> records;
    std::vector<CellSummary> cells;
};

/// Runs one (grid point, algorithm, run) cell. The seed depends only on the run index.
inline RunRecord run_cell(const Network& net, const CapacitorCatalog& base_catalog, const ExperimentSpec& spec,
                          const CellKey& cell, std::size_t run) {
    SolverSettings s;
    s.algorithm = cell.algorithm;
    s.econ.energy_price = cell.param == GridParam::energy_price ? cell.value : spec.base_price;
    const CapacitorCatalog catalog =
        cell.param == GridParam::price_scale ? base_catalog.with_price_scale(cell.value) : base_catalog;
    s.resonance = spec.resonance;
    s.fe_budget = spec.fe_budget;
    s.seed = spec.base_seed + run;
    s.allow_root = spec.allow_root;
    s.tau = spec.tau;
    s.mu = spec.mu;

    const SolveOutcome o = solve(net, catalog, s);
    RunRecord r;
    r.cell = cell;
    r.run = run;
    r.seed = s.seed;
    r.feasible = o.feasible();
    r.savings = o.savings;
    r.fe_used = o.raw.fe_used;
    r.placement = o.final ? *o.final : o.raw.best_placement;
    return r;
}

inline std::vector<CellSummary> summarise(const std::vector<RunRecord>& records, std::size_t type_count) {
    std::map<CellKey, std::vector<const RunRecord*>> by_cell;
    for (const auto& r : records)
        by_cell[r.cell].push_back(&r);

    auto feasible_savings = [](const std::vector<const RunRecord*>& rs) {
        std::vector<double> xs;
        for (auto* r : rs)
            if (r->feasible)
                xs.push_back(r->savings);
        return xs;
    };

    std::vector<CellSummary> out;
    for (const auto& [key, rs] : by_cell) {
        CellSummary c;
        c.cell = key;
        c.runs = rs.size();
        const auto xs = feasible_savings(rs);
        c.feasible_runs = xs.size();
        if (!xs.empty()) {
            c.mean_savings = mean(xs);
            c.std_savings = sample_stddev(xs);
            std::vector<Placement> ps;
            std::vector<double> totals;
            for (auto* r : rs)
                if (r->feasible) {
                    ps.push_back(r->placement);
                    totals.push_back(static_cast<double>(r->placement.installed_count()));
                }
            c.per_type = census(ps, type_count);
            c.capacitors = TypeCount{mean(totals), sample_stddev(totals)};
        }
        if (key.algorithm != Algorithm::eo) {
            auto eo = by_cell.find(CellKey{key.param, key.value, Algorithm::eo});
            if (eo != by_cell.end()) {
                const auto ys = feasible_savings(eo->second);
                if (xs.size() >= 2 && ys.size() >= 2)
                    c.p_value_vs_eo = welch_t_test(ys, xs);
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline SweepReport run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const Network net = load_network_file(spec.network.string());
    const CapacitorCatalog catalog =
        spec.catalog ? load_catalog_file(spec.catalog->string()) : CapacitorCatalog::table_one();

    struct Job {
        CellKey cell;
        std::size_t run;
    };
    std::vector<Job> jobs;
    auto add_grid = [&](GridParam param, const std::vector<double>& grid) {
        for (double v : grid)
            for (Algorithm a : spec.algorithms)
                for (std::size_t run = 0; run < spec.runs; ++run)
                    jobs.push_back({{param, v, a}, run});
    };
    add_grid(GridParam::energy_price, spec.price_grid);
    add_grid(GridParam::price_scale, spec.price_scale_grid);

    SweepReport report;
    for (const auto& row : catalog.rows())
        report.type_ids.push_back(row.type_id);
    report.records.resize(jobs.size());

    // Each job owns its RNG and output slot, so results do not depend on scheduling.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size() && !failed; i = next++) {
            try {
                report.records[i] = run_cell(net, catalog, spec, jobs[i].cell, jobs[i].run);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
            }
        }
    };
    unsigned threads = spec.jobs ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t)
            pool.emplace_back(worker);
        worker();
    }
    if (failure)
        std::rethrow_exception(failure);

    report.cells = summarise(report.records, catalog.type_count());
    return report;
}

namespace detail {

inline std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

} // namespace detail

/// Long format, one row per run. Savings are blank for infeasible runs.
inline void write_sweep_csv(std::ostream& out, const SweepReport& report) {
    out << "algorithm,grid_param,value,run,seed,savings,feasible,fe_used\n";
    for (const auto& r : report.records)
        out << to_string(r.cell.algorithm) << ',' << to_string(r.cell.param) << ','
            << detail::format_double(r.cell.value) << ',' << r.run << ',' << r.seed << ','
            << (r.feasible ? detail::format_double(r.savings) : std::string{}) << ',' << (r.feasible ? 1 : 0) << ','
            << r.fe_used << '\n';
}

/// One row per (algorithm, grid point). Statistics cover feasible runs only;
/// cells with no feasible run have blank statistics.
inline void write_summary_csv(std::ostream& out, const SweepReport& report) {
    out << "algorithm,grid_param,value,runs,feasible_runs,mean_savings,std_savings,p_value_vs_eo,"
           "mean_capacitors,std_capacitors";
    for (int id : report.type_ids)
        out << ",type" << id << "_mean,type" << id << "_std";
    out << '\n';
    for (const auto& c : report.cells) {
        out << to_string(c.cell.algorithm) << ',' << to_string(c.cell.param) << ','
            << detail::format_double(c.cell.value) << ',' << c.runs << ',' << c.feasible_runs << ','
            << detail::opt(c.mean_savings) << ',' << detail::opt(c.std_savings) << ','
            << detail::opt(c.p_value_vs_eo) << ',';
        if (c.capacitors)
            out << detail::format_double(c.capacitors->mean) << ',' << detail::format_double(c.capacitors->stddev);
        else
            out << ',';
        for (std::size_t t = 0; t < report.type_ids.size(); ++t) {
            if (c.per_type.empty())
                out << ",,";
            else
                out << ',' << detail::format_double(c.per_type[t].mean) << ','
                    << detail::format_double(c.per_type[t].stddev);
        }
        out << '\n';
    }
}

inline void write_reports(const SweepReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream sweep(dir / "sweep.csv");
    std::ofstream summary(dir / "summary.csv");
    if (!sweep || !summary)
        throw Error("cannot write reports into '" + dir.string() + "'");
    write_sweep_csv(sweep, report);
    write_summary_csv(summary, report);
}

} // namespace capres

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "support.hpp"

using namespace capres;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const auto table = CapacitorCatalog::table_one();

// 0 -> 1 -> 2 -> {3, 4, 5}; every bus has a huge measured S_cc so band mode
// never bites.
Network fan() {
    return test::parse("# v_nom_kv=12.66\nfrom,to,r_ohm,x_ohm,p_kw,q_kvar,open,scc_va\n"
                       "0,1,0.1,0.1,100,50,0,1e12\n"
                       "1,2,0.1,0.1,100,50,0,1e12\n"
                       "2,3,0.1,0.1,100,50,0,1e12\n"
                       "2,4,0.1,0.1,100,50,0,1e12\n"
                       "2,5,0.1,0.1,100,50,0,1e12\n");
}

ResonancePolicy band() {
    ResonancePolicy p;
    p.mode = ResonanceMode::band_check;
    return p;
}

std::size_t count_kind(const Neighbourhood& h, MoveKind k) {
    return static_cast<std::size_t>(std::count(h.kinds.begin(), h.kinds.end(), k));
}

} // namespace

TEST_CASE("power-law rank sampler") {
    auto uniform = power_law_sampler(10, 0.0);
    for (std::size_t k = 1; k <= 10; ++k)
        CHECK_THAT(uniform.probability(k), WithinAbs(0.1, 1e-15));

    auto greedy = power_law_sampler(10, 1e6);
    CHECK_THAT(greedy.probability(1), WithinAbs(1.0, 1e-12));
    Rng rng(3);
    for (int i = 0; i < 1000; ++i)
        CHECK(sample_rank_power(10, 1e6, rng) == 1);

    auto tau2 = power_law_sampler(10, 2.0);
    double z = 0;
    for (int k = 1; k <= 10; ++k)
        z += 1.0 / (k * k);
    CHECK_THAT(tau2.probability(3), WithinRel(1.0 / 9 / z, 1e-12));
    CHECK_THROWS_AS(power_law_sampler(0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(power_law_sampler(5, -1.0), InvalidArgument);
}

TEST_CASE("exponential rank sampler") {
    Rng rng(4);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_rank_exp(1, 0.5, rng) == 1);
    CHECK_THAT(exponential_sampler(2, 0.5).probability(1), WithinRel(0.6224593312018546, 1e-12));
    CHECK_THROWS_AS(exponential_sampler(3, 0.0), InvalidArgument);

    // Very long neighbour lists stay well defined.
    auto long_list = exponential_sampler(5000, 0.5);
    CHECK(long_list.probability(1) > 0.39);
}

TEST_CASE("samplers agree with their pmfs to three sigma per bin") {
    Rng rng(11);
    const int draws = 200000;
    for (auto sampler : {power_law_sampler(10, 2.0), exponential_sampler(10, 0.5)}) {
        std::vector<int> hits(11, 0);
        for (int i = 0; i < draws; ++i)
            ++hits[sampler(rng)];
        for (std::size_t k = 1; k <= 10; ++k) {
            const double p = sampler.probability(k);
            const double sd = std::sqrt(draws * p * (1 - p));
            CHECK(std::abs(hits[k] - draws * p) <= 3 * sd + 1);
        }
    }
}

TEST_CASE("node fitness") {
    auto zero = Network::build({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 0.3, 0.2}, {0, 2, 0.4, 0.1}}, 11.0);
    for (double l : node_fitness(zero, solve_flows(zero, Placement(3), table)))
        CHECK(l == 0.0);

    const auto& net = test::bw33();
    const auto flow = solve_flows(net, Placement(33), table);
    const auto fit = node_fitness(net, flow);
    for (BusId b = 0; b < 33; ++b) {
        double sum = 0;
        for (BusId d : subtree(net, b))
            if (d != Network::root)
                sum += flow.branch_loss_kw[net.incoming_branch(d)];
        CHECK_THAT(fit[b], WithinRel(sum, 1e-12));
    }
    CHECK_THAT(fit[5], WithinRel(76.05924881890944, 1e-12));
}

TEST_CASE("empty slot yields at most one install") {
    Rng rng(1);
    auto net = fan();
    for (int i = 0; i < 50; ++i) {
        auto h = generate_neighbors(net, Placement(6), 3, table, band(), rng);
        REQUIRE(h.size() == 1);
        CHECK(h.kinds[0] == MoveKind::install);
        CHECK(h.candidates[0][3] >= 1);
        CHECK(h.candidates[0][3] <= 6);
    }
}

TEST_CASE("occupied slot gives the 4 + k maximum") {
    Rng rng(1);
    auto net = fan();
    Placement s(6);
    s.set(2, 3);
    auto h = generate_neighbors(net, s, 2, table, band(), rng);
    CHECK(h.size() == 4 + 3);
    CHECK(count_kind(h, MoveKind::shift_to_child) == 3);
    CHECK(count_kind(h, MoveKind::shift_to_parent) == 1);
}

TEST_CASE("no-op and duplicate moves are dropped") {
    Rng rng(1);
    auto net = fan();
    Placement top(6);
    top.set(2, 6);
    auto h = generate_neighbors(net, top, 2, table, band(), rng);
    CHECK(count_kind(h, MoveKind::increase) == 0);
    CHECK(h.size() == 3 + 3);

    Placement bottom(6);
    bottom.set(2, 1);
    auto g = generate_neighbors(net, bottom, 2, table, band(), rng);
    CHECK(count_kind(g, MoveKind::decrease) == 0);
    CHECK(count_kind(g, MoveKind::remove) == 1);
    CHECK(g.size() == 3 + 3);

    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            CHECK(g.candidates[i] != g.candidates[j]);
}

TEST_CASE("shift onto the forbidden root is never generated") {
    Rng rng(1);
    auto net = fan();
    Placement s(6);
    s.set(1, 2);
    auto h = generate_neighbors(net, s, 1, table, band(), rng);
    CHECK(count_kind(h, MoveKind::shift_to_parent) == 0);
    auto with_root = generate_neighbors(net, s, 1, table, band(), rng, true);
    CHECK(count_kind(with_root, MoveKind::shift_to_parent) == 1);
}

TEST_CASE("shift to a resonant parent is excluded") {
    // Parent bus 1 resonates at exactly the third harmonic with a type-2 bank.
    const double q2 = table.size_kvar(2) * 1e3;
    auto net = test::parse("# v_nom_kv=12.66\nfrom,to,r_ohm,x_ohm,p_kw,q_kvar,open,scc_va\n"
                           "0,1,0.1,0.1,100,50,0," + std::to_string(9 * q2) + "\n"
                           "1,2,0.1,0.1,100,50,0,1e12\n"
                           "2,3,0.1,0.1,100,50,0,1e12\n");
    Placement s(4);
    s.set(2, 2);
    for (auto mode : {ResonanceMode::round_check, ResonanceMode::band_check}) {
        ResonancePolicy p;
        p.mode = mode;
        Rng rng(1);
        auto h = generate_neighbors(net, s, 2, table, p, rng);
        CHECK(count_kind(h, MoveKind::shift_to_parent) == 0);
        if (mode == ResonanceMode::band_check) {
            CHECK(count_kind(h, MoveKind::shift_to_child) == 1);
            CHECK(h.size() == 4);
        }
        for (const auto& c : h.candidates)
            CHECK(placement_feasible(net, c, table, p).feasible);
    }
}

TEST_CASE("EO counts every neighbour evaluation") {
    const auto& net = test::bw33();
    EoConfig cfg;
    cfg.fe_budget = 3000;
    cfg.seed = 9;
    std::size_t seen = 0;
    double best_seen = 1e300;
    cfg.observer = [&](const Placement&, double c) {
        ++seen;
        best_seen = std::min(best_seen, c);
    };
    auto r = run_eo(net, table, {}, cfg);
    CHECK(r.fe_used == 3000);
    CHECK(seen == r.fe_used);
    CHECK(r.best_cost == best_seen);
    CHECK_THAT(r.best_cost, WithinRel(total_annual_cost(net, r.best_placement, table, {}), 1e-12));
    CHECK(r.best_savings > 0.0);
    CHECK(placement_feasible(net, r.best_placement, table, cfg.resonance).feasible);

    REQUIRE_FALSE(r.cost_trace.empty());
    CHECK(r.cost_trace.front().fe == 0);
    for (std::size_t i = 1; i < r.cost_trace.size(); ++i) {
        CHECK(r.cost_trace[i].cost < r.cost_trace[i - 1].cost);
        CHECK(r.cost_trace[i].fe > r.cost_trace[i - 1].fe);
    }
    CHECK(r.cost_trace.back().cost == r.best_cost);
}

TEST_CASE("EO is deterministic per seed") {
    EoConfig cfg;
    cfg.fe_budget = 2000;
    cfg.seed = 42;
    auto a = run_eo(test::bw33(), table, {}, cfg);
    auto b = run_eo(test::bw33(), table, {}, cfg);
    CHECK(a == b);
    cfg.seed = 43;
    CHECK_FALSE(run_eo(test::bw33(), table, {}, cfg) == a);
}

TEST_CASE("EO with a budget of one evaluation") {
    const auto& net = test::bw33();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        EoConfig cfg;
        cfg.fe_budget = 1;
        cfg.seed = seed;
        std::vector<Placement> evaluated;
        cfg.observer = [&](const Placement& p, double) { evaluated.push_back(p); };
        auto r = run_eo(net, table, {}, cfg);
        CHECK(r.fe_used == 1);
        REQUIRE(evaluated.size() == 1);
        CHECK((r.best_placement == Placement(33) || r.best_placement == evaluated[0]));
        CHECK(r.best_placement.installed_count() <= 1);
    }
}

TEST_CASE("EO never leaves the feasible region") {
    const auto& net = test::bw33();
    for (auto mode : {ResonanceMode::round_check, ResonanceMode::band_check}) {
        EoConfig cfg;
        cfg.fe_budget = 4000;
        cfg.resonance.mode = mode;
        std::size_t infeasible = 0;
        cfg.observer = [&](const Placement& p, double) {
            if (!placement_feasible(net, p, table, cfg.resonance).feasible)
                ++infeasible;
        };
        run_eo(net, table, {}, cfg);
        CHECK(infeasible == 0);
    }
}

TEST_CASE("EO on a network with nothing to place") {
    // Single-bus network: no variables once the root is excluded.
    auto lone = Network::build({{0, 0, 0}}, {}, 12.66);
    auto r = run_eo(lone, table, {}, EoConfig{});
    CHECK(r.fe_used == 0);
    CHECK(r.best_cost == 0.0);
}

TEST_CASE("EO stops when no bus admits a feasible move") {
    // One-size catalog whose only bank sits on the third harmonic at the only bus.
    CapacitorCatalog one({{1, 100, 1000}});
    auto net = test::parse("# v_nom_kv=12.66\nfrom,to,r_ohm,x_ohm,p_kw,q_kvar,open,scc_va\n"
                           "0,1,0.1,0.1,100,50,0,900000\n");
    EoConfig cfg;
    cfg.fe_budget = 100;
    cfg.max_stall_steps = 5;
    auto r = run_eo(net, one, {}, cfg);
    CHECK(r.fe_used == 0);
    CHECK(r.best_placement == Placement(2));
}

TEST_CASE("EO config validation") {
    EoConfig cfg;
    cfg.tau = -1;
    CHECK_THROWS_AS(run_eo(test::two_bus(), table, {}, cfg), InvalidArgument);
    cfg = {};
    cfg.mu = 0;
    CHECK_THROWS_AS(run_eo(test::two_bus(), table, {}, cfg), InvalidArgument);
    cfg = {};
    cfg.fe_budget = 0;
    CHECK_THROWS_AS(run_eo(test::two_bus(), table, {}, cfg), InvalidArgument);
}

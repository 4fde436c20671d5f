#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace capres;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const auto table = CapacitorCatalog::table_one();

ResonancePolicy policy(ResonanceMode m, double f1 = 60.0) {
    ResonancePolicy p;
    p.mode = m;
    p.fundamental_hz = f1;
    return p;
}

const auto round_mode = policy(ResonanceMode::round_check);
const auto band_mode = policy(ResonanceMode::band_check);

} // namespace

TEST_CASE("harmonic order") {
    CHECK(harmonic_order(16e5, 1e5) == 4.0);
    CHECK(harmonic_order(9e5, 1e5) == 3.0);
    CHECK_THAT(harmonic_order(2.4e6, 3.0e5), WithinRel(std::sqrt(8.0), 1e-15));
    CHECK_THROWS_AS(harmonic_order(0, 1), InvalidArgument);
    CHECK_THROWS_AS(harmonic_order(1, -1), InvalidArgument);
}

TEST_CASE("resonance frequency") {
    CHECK(resonance_frequency(16, 1, round_mode) == 240.0);
    CHECK_THAT(resonance_frequency(2.4e6, 3.0e5, round_mode), WithinAbs(169.7056, 1e-4));
    CHECK(resonance_frequency(9, 1, policy(ResonanceMode::round_check, 50.0)) == 150.0);

    auto bad = round_mode;
    bad.fundamental_hz = 0;
    CHECK_THROWS_AS(resonance_frequency(9, 1, bad), InvalidArgument);
    bad = band_mode;
    bad.band_hz = -1;
    CHECK_THROWS_AS(check_feasible(9, 1, bad), InvalidArgument);
}

TEST_CASE("check_feasible in both modes") {
    CHECK(check_feasible(16, 1, round_mode));
    CHECK(check_feasible(16, 1, band_mode));
    CHECK_FALSE(check_feasible(9, 1, round_mode));
    CHECK_FALSE(check_feasible(9, 1, band_mode));
    CHECK_FALSE(check_feasible(8.41, 1, round_mode));
    CHECK_FALSE(check_feasible(8.41, 1, band_mode));
    // h = 2.62: the modes disagree
    CHECK_FALSE(check_feasible(6.8644, 1, round_mode));
    CHECK(check_feasible(6.8644, 1, band_mode));
    // h = 2.5 rounds away from zero to 3
    CHECK_FALSE(check_feasible(6.25, 1, round_mode));
    // band edges are inclusive: 170 Hz and 190 Hz
    CHECK_FALSE(check_feasible((170.0 / 60) * (170.0 / 60), 1, band_mode));
    CHECK(check_feasible((169.9 / 60) * (169.9 / 60), 1, band_mode));
    // ninth harmonic is not screened in band mode
    CHECK(check_feasible(81, 1, band_mode));
    CHECK_FALSE(check_feasible(81, 1, round_mode));
}

TEST_CASE("round mode: threshold between odd and even orders sits at half-integers") {
    // Feasibility flips at h = n + 0.5. Scale invariance: only the ratio matters.
    for (int n = 1; n <= 9; ++n) {
        const double lo = (n + 0.5 - 1e-9) * (n + 0.5 - 1e-9);
        const double hi = (n + 0.5 + 1e-9) * (n + 0.5 + 1e-9);
        for (double qc : {1.0, 150e3, 1.2e6}) {
            CHECK(check_feasible(lo * qc, qc, round_mode) == (n % 2 == 0));
            CHECK(check_feasible(hi * qc, qc, round_mode) == (n % 2 == 1));
        }
    }
}

TEST_CASE("placement feasibility") {
    const auto& net = test::bw33();
    auto empty = placement_feasible(net, Placement(33), table, round_mode);
    CHECK(empty.feasible);
    CHECK(empty.violators.empty());

    auto eng = test::parse("# v_nom_kv=12.66\nfrom,to,r_ohm,x_ohm,p_kw,q_kvar,open,scc_va\n"
                           "0,1,0.1,0.1,10,10,0,1350000\n1,2,0.1,0.1,10,10,0,2400000\n");
    auto r = placement_feasible(eng, Placement{0, 1, 1}, table, round_mode);
    CHECK_FALSE(r.feasible);
    CHECK(r.violators == std::vector<BusId>{1});
    // 2.4e6 / 150e3 = 16: bus 2 is fine
    CHECK(bus_feasible(eng, 2, 1, table, round_mode, false));
    CHECK(bus_feasible(eng, 1, 0, table, round_mode, false));
}

TEST_CASE("root placement rules") {
    const auto& net = test::bw33();
    Placement at_root(33);
    at_root.set(0, 2);
    CHECK_THROWS_AS(placement_feasible(net, at_root, table, round_mode), InvalidArgument);
    CHECK(placement_feasible(net, at_root, table, round_mode, true).feasible);
    CHECK_FALSE(bus_feasible(net, 0, 2, table, round_mode, false));
}

TEST_CASE("mode names") {
    CHECK(parse_resonance_mode("round") == ResonanceMode::round_check);
    CHECK(parse_resonance_mode("band") == ResonanceMode::band_check);
    CHECK(to_string(ResonanceMode::band_check) == "band");
    CHECK_THROWS_AS(parse_resonance_mode("odd"), InvalidArgument);
}

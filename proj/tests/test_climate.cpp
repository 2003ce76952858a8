#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "uscghg/climate.hpp"

using namespace uscghg;

namespace {

EmissionsPath zero_emissions(const YearGrid& grid) {
    EmissionsPath e;
    e.grid = grid;
    e.co2.assign(static_cast<size_t>(grid.size()), 0.0);
    e.ch4.assign(static_cast<size_t>(grid.size()), 0.0);
    e.n2o.assign(static_cast<size_t>(grid.size()), 0.0);
    return e;
}

}  // namespace

TEST_CASE("zero emissions from an equilibrated state stay at the initial anomaly", "[climate]") {
    const ClimateParamSet p;
    const GmstPath g = run_emulator(zero_emissions(YearGrid{2020, 2120}), p);
    for (double a : g.anomaly) CHECK(a == 0.0);
}

TEST_CASE("fixed forcing approaches the closed-form two-box equilibrium", "[climate]") {
    // Hold concentration at doubling by injecting the equivalent burden once
    // into the non-decaying pool and shutting off decay everywhere.
    ClimateParamSet p;
    p.pool_fractions = {1.0, 0.0, 0.0, 0.0};
    p.pool_timescales = {std::numeric_limits<double>::infinity(), 394.4, 36.54, 4.304};
    p.cap_deep = 30.0;  // fast enough to equilibrate within the test horizon

    const YearGrid grid{2020, 2520};
    EmissionsPath e = zero_emissions(grid);
    e.co2[0] = kCo2PreindustrialPpm * kGtCo2PerPpm;  // doubles the concentration, forever

    const GmstPath g = run_emulator(e, p);
    // closed form: at equilibrium both boxes sit at F2x / lambda
    const double expected = p.f2x / p.thermal_feedback;
    CHECK(g.anomaly.back() == Catch::Approx(expected).epsilon(0.01));
}

TEST_CASE("historical warm-up reproduces the 2011-2020 anomaly anchor", "[climate]") {
    const ClimateParamSet central;
    const WarmupResult w = warm_up(central);
    // projection year 2020 under the central path completes the window
    SynthTargets targets;
    const EmissionsPath ref = central_emissions(targets);
    const GmstPath g = run_emulator(ref, central, w.state, nullptr, nullptr, w.ref_anomaly);
    const double mean_2011_2020 =
        (w.recent_mean * 9.0 + g.anomaly[0]) / 10.0;  // 2011..2019 from warm-up, plus 2020
    CHECK(mean_2011_2020 == Catch::Approx(1.16).margin(0.05));
}

TEST_CASE("pulse application is exact and isolated", "[climate]") {
    const YearGrid grid{2020, 2040};
    EmissionsPath e = zero_emissions(grid);
    for (auto& v : e.co2) v = 10.0;
    for (auto& v : e.ch4) v = 300.0;
    for (auto& v : e.n2o) v = 9.0;

    SECTION("CO2 pulse adds exactly its size in the pulse year") {
        const EmissionsPath pulsed = apply_pulse(e, PulseSpec{PulseSpec::Gas::CO2, 2030, 1.0});
        for (int i = 0; i < grid.size(); ++i) {
            const size_t k = static_cast<size_t>(i);
            if (grid.year_at(i) == 2030)
                CHECK(pulsed.co2[k] == 11.0);
            else
                CHECK(pulsed.co2[k] == e.co2[k]);
        }
    }
    SECTION("zero-size pulse is rejected") {
        CHECK_THROWS_AS(apply_pulse(e, PulseSpec{PulseSpec::Gas::CO2, 2030, 0.0}), ValidationError);
    }
    SECTION("off-grid year is rejected") {
        CHECK_THROWS_AS(apply_pulse(e, PulseSpec{PulseSpec::Gas::CO2, 2050, 1.0}), ValidationError);
    }
    SECTION("CH4 pulse leaves the other gases bit-identical") {
        const EmissionsPath pulsed = apply_pulse(e, PulseSpec{PulseSpec::Gas::CH4, 2025, 10.0});
        CHECK(pulsed.co2 == e.co2);
        CHECK(pulsed.n2o == e.n2o);
        CHECK(pulsed.ch4 != e.ch4);
    }
}

TEST_CASE("marginal CO2 pulses scale linearly within one percent", "[climate]") {
    const ClimateParamSet p;
    const WarmupResult w = warm_up(p);
    SynthTargets targets;
    const EmissionsPath base = central_emissions(targets);
    const GmstPath g0 = run_emulator(base, p, w.state);
    const GmstPath g1 =
        run_emulator(apply_pulse(base, PulseSpec{PulseSpec::Gas::CO2, 2030, 1.0}), p, w.state);
    const GmstPath gh =
        run_emulator(apply_pulse(base, PulseSpec{PulseSpec::Gas::CO2, 2030, 0.5}), p, w.state);

    double d1 = 0.0, dh = 0.0;
    for (size_t i = 0; i < g0.anomaly.size(); ++i) {
        d1 += g1.anomaly[i] - g0.anomaly[i];
        dh += gh.anomaly[i] - g0.anomaly[i];
    }
    REQUIRE(d1 > 0.0);
    CHECK(2.0 * dh == Catch::Approx(d1).epsilon(0.01));
}

TEST_CASE("carbon pools conserve mass against closed-form decay", "[climate]") {
    // single finite pool: the stock after n years of one pulse must equal
    // E * exp(-n / tau) exactly as integrated
    ClimateParamSet p;
    p.pool_fractions = {0.0, 1.0, 0.0, 0.0};
    p.pool_timescales = {std::numeric_limits<double>::infinity(), 100.0, 36.54, 4.304};

    const YearGrid grid{2020, 2120};
    EmissionsPath e = zero_emissions(grid);
    e.co2[0] = 50.0;

    std::vector<double> stock;
    run_emulator(e, p, ClimateState{}, nullptr, [&](int, const ClimateState& s) {
        double total = 0.0;
        for (double pool : s.pools_gtco2) total += pool;
        stock.push_back(total);
    });
    for (size_t n = 0; n < stock.size(); ++n) {
        const double expected = 50.0 * std::exp(-static_cast<double>(n) / 100.0);
        CHECK(stock[n] == Catch::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("cumulative emissions minus decayed mass equals the stored burden", "[climate]") {
    const ClimateParamSet p;
    const YearGrid grid{2020, 2320};
    EmissionsPath e = zero_emissions(grid);
    for (int i = 0; i < grid.size(); ++i) e.co2[static_cast<size_t>(i)] = 8.0 + 0.05 * i;

    // independent bookkeeping replay of the same decay schedule
    std::array<double, 4> pools{0, 0, 0, 0};
    double cumulative = 0.0;
    double decayed = 0.0;
    std::vector<double> emulator_burden;
    run_emulator(e, p, ClimateState{}, nullptr, [&](int, const ClimateState& s) {
        double total = 0.0;
        for (double pool : s.pools_gtco2) total += pool;
        emulator_burden.push_back(total);
    });
    for (int i = 0; i < grid.size(); ++i) {
        const double emit = e.co2[static_cast<size_t>(i)];
        cumulative += emit;
        for (int k = 0; k < 4; ++k) {
            const double tau = p.pool_timescales[static_cast<size_t>(k)];
            const double keep = std::isinf(tau) ? 1.0 : std::exp(-1.0 / tau);
            decayed += pools[static_cast<size_t>(k)] * (1.0 - keep);
            pools[static_cast<size_t>(k)] =
                pools[static_cast<size_t>(k)] * keep + p.pool_fractions[static_cast<size_t>(k)] * emit;
        }
        const double expected = cumulative - decayed;
        CHECK(emulator_burden[static_cast<size_t>(i)] ==
              Catch::Approx(expected).epsilon(1e-9).margin(1e-9));
    }
}

TEST_CASE("adding nonnegative emissions never cools any year", "[climate]") {
    const ClimateParamSet p;
    Rng rng(2024);
    const YearGrid grid{2020, 2120};
    for (int rep = 0; rep < 10; ++rep) {
        EmissionsPath a = zero_emissions(grid);
        EmissionsPath b = zero_emissions(grid);
        for (int i = 0; i < grid.size(); ++i) {
            const size_t k = static_cast<size_t>(i);
            a.co2[k] = 20.0 * rng.uniform();
            a.ch4[k] = 400.0 * rng.uniform();
            a.n2o[k] = 12.0 * rng.uniform();
            b.co2[k] = a.co2[k] + 5.0 * rng.uniform();
            b.ch4[k] = a.ch4[k] + 50.0 * rng.uniform();
            b.n2o[k] = a.n2o[k] + 2.0 * rng.uniform();
        }
        const GmstPath ga = run_emulator(a, p);
        const GmstPath gb = run_emulator(b, p);
        for (size_t i = 0; i < ga.anomaly.size(); ++i) CHECK(gb.anomaly[i] >= ga.anomaly[i]);
    }
}

TEST_CASE("emergent warmth orders and ties deterministically", "[climate]") {
    SynthTargets targets;
    const EmissionsPath ref = central_emissions(targets);

    SECTION("larger thermal feedback means strictly cooler 2100") {
        ClimateParamSet a;
        ClimateParamSet b;
        b.thermal_feedback = a.thermal_feedback * 1.5;
        CHECK(emergent_warmth(b, ref) < emergent_warmth(a, ref));
    }
    SECTION("identical parameter sets give identical warmth") {
        ClimateParamSet a;
        ClimateParamSet b;
        CHECK(emergent_warmth(a, ref) == emergent_warmth(b, ref));
    }
}

TEST_CASE("sampled parameter ensemble is finite, valid and reproducible", "[climate]") {
    ClimateSamplingConfig cfg;
    cfg.n_sets = 100;
    const auto sets = sample_param_sets(11, cfg);
    REQUIRE(sets.size() == 100);
    for (const auto& p : sets) REQUIRE_NOTHROW(p.validate());
    const auto again = sample_param_sets(11, cfg);
    for (size_t i = 0; i < sets.size(); ++i) {
        CHECK(sets[i].f2x == again[i].f2x);
        CHECK(sets[i].thermal_feedback == again[i].thermal_feedback);
    }
}

TEST_CASE("parameter ensemble csv round-trips", "[climate]") {
    ClimateSamplingConfig cfg;
    cfg.n_sets = 5;
    const auto sets = sample_param_sets(3, cfg);
    const std::string path =
        (std::filesystem::temp_directory_path() / "uscghg_params.csv").string();
    write_param_sets(sets, path);
    const auto back = load_param_sets(path);
    REQUIRE(back.size() == sets.size());
    for (size_t i = 0; i < sets.size(); ++i) {
        CHECK(back[i].f2x == sets[i].f2x);
        CHECK(back[i].thermal_feedback == sets[i].thermal_feedback);
        CHECK(back[i].pool_timescales[1] == sets[i].pool_timescales[1]);
        CHECK(std::isinf(back[i].pool_timescales[0]));
    }
    std::remove(path.c_str());
}

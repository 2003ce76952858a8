#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>

#include "uscghg/patterns.hpp"
#include "uscghg/rng.hpp"

using namespace uscghg;

TEST_CASE("weighted sums reproduce the published table values", "[patterns]") {
    const EnsembleMeans means;
    const auto gcms = default_gcm_patterns();
    auto find = [&](const std::string& name) {
        for (const auto& g : gcms)
            if (g.name == name) return g;
        FAIL("missing " + name);
        return gcms[0];
    };
    CHECK(weighted_sum(find("NorESM2-LM"), means) == Catch::Approx(1.43).margin(0.02));
    CHECK(weighted_sum(find("GFDL-ESM4"), means) == Catch::Approx(1.50).margin(0.03));
    CHECK(weighted_sum(find("MPI-ESM1-2-HR"), means) == Catch::Approx(1.62).margin(0.03));
    CHECK(weighted_sum(find("EC-Earth3-Veg"), means) == Catch::Approx(2.45).margin(0.03));
}

TEST_CASE("weighted sum normalization identity", "[patterns]") {
    const EnsembleMeans means{2.0, 3.78};
    GcmPattern g{"X", means.mean_tcr, means.mean_ecs, 1.0, 0.0};
    CHECK(weighted_sum(g, means) == Catch::Approx(2.0).margin(1e-12));
    CHECK_THROWS_AS(weighted_sum(g, EnsembleMeans{0.0, 3.78}), ConfigError);
}

TEST_CASE("rank order is invariant to 25 percent mean perturbations", "[patterns]") {
    const auto gcms = default_gcm_patterns();
    const std::vector<std::string> expected{"NorESM2-LM", "GFDL-ESM4", "MPI-ESM1-2-HR",
                                            "EC-Earth3-Veg"};
    for (double f_tcr : {0.75, 1.0, 1.25}) {
        for (double f_ecs : {0.75, 1.0, 1.25}) {
            const EnsembleMeans means{2.0 * f_tcr, 3.78 * f_ecs};
            std::vector<std::pair<double, std::string>> scored;
            for (const auto& g : gcms) scored.push_back({weighted_sum(g, means), g.name});
            std::sort(scored.begin(), scored.end());
            for (size_t i = 0; i < expected.size(); ++i) CHECK(scored[i].second == expected[i]);
        }
    }
}

TEST_CASE("pairing splits 2237 sets into 560/559/559/559", "[patterns]") {
    std::vector<std::pair<long, double>> warmths;
    Rng rng(7);
    for (long i = 0; i < 2237; ++i) warmths.push_back({i, 2.0 + rng.uniform()});
    const PairingTable t = build_pairing(warmths, default_gcm_patterns());
    REQUIRE(t.group_sizes.size() == 4);
    CHECK(t.group_sizes[0] == 560);  // coolest group takes the remainder
    CHECK(t.group_sizes[1] == 559);
    CHECK(t.group_sizes[2] == 559);
    CHECK(t.group_sizes[3] == 559);
    CHECK(t.assignments.size() == 2237);
}

TEST_CASE("even split assigns the hottest sets the hottest model", "[patterns]") {
    std::vector<std::pair<long, double>> warmths;
    for (long i = 0; i < 8; ++i) warmths.push_back({i, 1.0 + 0.1 * static_cast<double>(i)});
    const PairingTable t = build_pairing(warmths, default_gcm_patterns());
    for (long s : t.group_sizes) CHECK(s == 2);
    CHECK(t.gcm_for(6) == "EC-Earth3-Veg");
    CHECK(t.gcm_for(7) == "EC-Earth3-Veg");
    CHECK(t.gcm_for(0) == "NorESM2-LM");
}

TEST_CASE("remainder goes to the coolest group", "[patterns]") {
    std::vector<std::pair<long, double>> warmths;
    for (long i = 0; i < 5; ++i) warmths.push_back({i, 1.0 + 0.1 * static_cast<double>(i)});
    const PairingTable t = build_pairing(warmths, default_gcm_patterns());
    CHECK(t.group_sizes[0] == 2);
    CHECK(t.group_sizes[1] == 1);
    CHECK(t.group_sizes[2] == 1);
    CHECK(t.group_sizes[3] == 1);
}

TEST_CASE("pairing is a bijection and order-insensitive", "[patterns]") {
    std::vector<std::pair<long, double>> warmths;
    Rng rng(99);
    for (long i = 0; i < 101; ++i) warmths.push_back({i, 1.5 + rng.uniform()});
    const PairingTable a = build_pairing(warmths, default_gcm_patterns());

    std::vector<std::pair<long, double>> shuffled = warmths;
    std::mt19937 mt(4);
    std::shuffle(shuffled.begin(), shuffled.end(), mt);
    const PairingTable b = build_pairing(shuffled, default_gcm_patterns());

    REQUIRE(a.assignments.size() == 101);
    CHECK(a.assignments == b.assignments);

    // monotone warmth -> rank mapping
    const std::vector<std::string> rank_names{"NorESM2-LM", "GFDL-ESM4", "MPI-ESM1-2-HR",
                                              "EC-Earth3-Veg"};
    auto rank_of = [&](const std::string& name) {
        for (size_t r = 0; r < rank_names.size(); ++r)
            if (rank_names[r] == name) return static_cast<int>(r);
        return -1;
    };
    std::vector<std::pair<double, long>> by_warmth;
    for (const auto& [id, w] : warmths) by_warmth.push_back({w, id});
    std::sort(by_warmth.begin(), by_warmth.end());
    int prev_rank = 0;
    for (const auto& [w, id] : by_warmth) {
        const int r = rank_of(a.gcm_for(id));
        CHECK(r >= prev_rank);
        prev_rank = r;
    }
}

TEST_CASE("pairing rejects empty inputs", "[patterns]") {
    CHECK_THROWS_AS(build_pairing({}, default_gcm_patterns()), ValidationError);
    CHECK_THROWS_AS(build_pairing({{0, 1.0}}, {}), ValidationError);
}

TEST_CASE("downscale identities", "[patterns]") {
    GmstPath g;
    g.grid = YearGrid{2020, 2024};
    g.ref_anomaly = 0.6;

    SECTION("anomaly pinned at the window mean returns the baseline level") {
        g.anomaly = {0.6, 0.6, 0.6, 0.6, 0.6};
        GcmPattern p{"X", 1.5, 3.0, 1.45, 0.0};
        const UsTempPath us = downscale(g, p);
        for (double v : us.level) CHECK(v == Catch::Approx(13.62).margin(1e-12));
    }
    SECTION("slope one and zero intercept reproduce the GMST anomaly") {
        g.anomaly = {0.6, 0.9, 1.3, 1.8, 2.4};
        GcmPattern p{"X", 1.5, 3.0, 1.0, 0.0};
        const UsTempPath us = downscale(g, p, 0.0);
        for (size_t i = 0; i < us.level.size(); ++i)
            CHECK(us.level[i] == Catch::Approx(g.anomaly[i] - 0.6).margin(1e-12));
    }
    SECTION("downscale is affine in the anomaly") {
        g.anomaly = {0.7, 1.1, 1.6, 2.2, 2.9};
        GcmPattern p{"X", 1.5, 3.0, 1.37, 0.2};
        GmstPath zero = g;
        zero.anomaly.assign(5, 0.0);
        zero.ref_anomaly = 0.0;
        GmstPath scaled = g;
        for (auto& a : scaled.anomaly) a *= 2.0;
        scaled.ref_anomaly = 0.0;
        GmstPath unscaled = g;
        unscaled.ref_anomaly = 0.0;
        const UsTempPath us0 = downscale(zero, p);
        const UsTempPath us1 = downscale(unscaled, p);
        const UsTempPath us2 = downscale(scaled, p);
        for (size_t i = 0; i < us1.level.size(); ++i)
            CHECK(us2.level[i] - us0.level[i] ==
                  Catch::Approx(2.0 * (us1.level[i] - us0.level[i])).margin(1e-10));
    }
}

TEST_CASE("pattern csv and pairing export round-trip", "[patterns]") {
    namespace fs = std::filesystem;
    const std::string gcm_path = (fs::temp_directory_path() / "uscghg_gcms.csv").string();
    {
        csv::Writer w(gcm_path);
        w.row({"name", "tcr", "ecs", "slope", "intercept"});
        w.row({"A", "1.5", "3.0", "1.4", "0.05"});
        w.row({"B", "2.0", "4.0", "1.5", "-0.05"});
    }
    const auto gcms = load_gcm_patterns(gcm_path);
    REQUIRE(gcms.size() == 2);
    CHECK(gcms[1].intercept == -0.05);
    std::remove(gcm_path.c_str());

    const PairingTable t = build_pairing({{0, 1.0}, {1, 2.0}}, gcms);
    const std::string pair_path = (fs::temp_directory_path() / "uscghg_pairing.csv").string();
    write_pairing(t, pair_path);
    const csv::Table tab = csv::read_file(pair_path);
    REQUIRE(tab.rows.size() == 2);
    CHECK(tab.header[0] == "param_id");
    std::remove(pair_path.c_str());
}

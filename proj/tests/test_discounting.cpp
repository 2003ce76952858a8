#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uscghg/discounting.hpp"
#include "uscghg/rng.hpp"
#include "uscghg/scenario.hpp"

using namespace uscghg;

TEST_CASE("ramsey rate arithmetic", "[discounting]") {
    SECTION("published parameter point") {
        const RamseyParams p{0.0041, 1.02, 0.0};
        const auto r = ramsey_rate({0.0157}, p);
        CHECK(r[0] == Catch::Approx(0.0041 + 1.02 * 0.0157).margin(1e-15));
        CHECK(r[0] == Catch::Approx(0.020114).margin(1e-9));
    }
    SECTION("zero growth returns rho") {
        const RamseyParams p{0.0041, 1.02, 0.0};
        for (double r : ramsey_rate({0.0, 0.0, 0.0}, p)) CHECK(r == 0.0041);
    }
}

TEST_CASE("two-good reductions", "[discounting]") {
    SECTION("no nonmarket drag makes B12 equal B13") {
        RamseyParams p{0.004, 1.3, 0.0};
        const GrowthDecomposition d{0.015, 0.002, 0.0};
        CHECK(two_good_rate(d, p, TwoGoodMode::B12) == two_good_rate(d, p, TwoGoodMode::B13));
    }
    SECTION("alpha = eta/(eta-1) collapses B10 to B12 over random draws") {
        Rng rng(9);
        for (int i = 0; i < 10000; ++i) {
            RamseyParams p;
            p.rho = 0.01 * rng.uniform();
            p.eta = 0.3 + 2.0 * rng.uniform();
            if (std::abs(p.eta - 1.0) < 0.05) continue;
            p.alpha = p.eta / (p.eta - 1.0);
            const GrowthDecomposition d{0.03 * rng.uniform(), 0.01 * rng.uniform(),
                                        0.01 * rng.uniform()};
            const double b10 = two_good_rate(d, p, TwoGoodMode::B10);
            const double b12 = two_good_rate(d, p, TwoGoodMode::B12);
            CHECK(b10 == Catch::Approx(b12).margin(1e-12));
        }
    }
    SECTION("alpha = 0 collapses B10 to B13") {
        Rng rng(10);
        for (int i = 0; i < 10000; ++i) {
            RamseyParams p;
            p.rho = 0.01 * rng.uniform();
            p.eta = 0.3 + 2.0 * rng.uniform();
            p.alpha = 0.0;
            const GrowthDecomposition d{0.03 * rng.uniform(), 0.01 * rng.uniform(),
                                        0.01 * rng.uniform()};
            CHECK(two_good_rate(d, p, TwoGoodMode::B10) ==
                  Catch::Approx(two_good_rate(d, p, TwoGoodMode::B13)).margin(1e-12));
        }
    }
    SECTION("B12 with eta = 1 signals the convention conflict") {
        RamseyParams p{0.004, 1.0, 0.0};
        const GrowthDecomposition d{0.015, 0.001, 0.001};
        try {
            two_good_rate(d, p, TwoGoodMode::B12);
            FAIL("expected config error");
        } catch (const ConfigError& err) {
            CHECK(std::string(err.what()).find("B13") != std::string::npos);
        }
    }
}

TEST_CASE("marginal willingness to pay", "[discounting]") {
    CHECK(mwtp_nonmarket(2.0, 1.0, 0.5) == 1.0);
    CHECK(mwtp_nonmarket(5.0, 2.0, 0.0) == 0.0);
    CHECK(mwtp_nonmarket(10.0, 5.0, 0.3) == mwtp_nonmarket(20.0, 10.0, 0.3));
    CHECK_THROWS_AS(mwtp_nonmarket(1.0, 0.0, 0.5), ValidationError);
}

TEST_CASE("discount factors", "[discounting]") {
    SECTION("zero rates give unit factors") {
        for (double f : discount_factors(std::vector<double>(5, 0.0))) CHECK(f == 1.0);
    }
    SECTION("constant two percent over ten years") {
        const auto df = discount_factors(std::vector<double>(10, 0.02));
        CHECK(df[10] == Catch::Approx(std::exp(-0.2)).margin(1e-12));
        CHECK(df[10] == Catch::Approx(0.818731).margin(1e-6));
    }
    SECTION("mixed-sign rates stay positive and factors start at one") {
        const auto df = discount_factors({0.02, -0.05, 0.01, -0.02});
        CHECK(df[0] == 1.0);
        for (double f : df) CHECK(f > 0.0);
    }
    SECTION("concatenation property") {
        const std::vector<double> rates{0.01, 0.02, 0.015, 0.03, 0.02};
        const auto df = discount_factors(rates);
        const auto head = discount_factors({0.01, 0.02});
        const auto tail = discount_factors({0.015, 0.03, 0.02});
        CHECK(df[5] == Catch::Approx(head[2] * tail[3]).margin(1e-15));
    }
}

TEST_CASE("certainty-equivalent rate", "[discounting]") {
    SECTION("single trial with constant rate returns that rate") {
        const auto df = discount_factors(std::vector<double>(20, 0.025));
        const auto r = certainty_equivalent_rate({df});
        for (double v : r) CHECK(v == Catch::Approx(0.025).margin(1e-12));
    }
    SECTION("two heterogeneous trials decline toward the lower rate") {
        const auto df1 = discount_factors(std::vector<double>(300, 0.01));
        const auto df3 = discount_factors(std::vector<double>(300, 0.03));
        const auto r = certainty_equivalent_rate({df1, df3});
        // numeric Jensen oracle at selected horizons
        for (int t : {10, 100, 300}) {
            const double expect =
                -std::log(0.5 * (std::exp(-0.01 * t) + std::exp(-0.03 * t))) / t;
            CHECK(r[static_cast<size_t>(t - 1)] == Catch::Approx(expect).margin(1e-12));
        }
        for (size_t i = 1; i < r.size(); ++i) CHECK(r[i] < r[i - 1]);
        CHECK(r.back() > 0.01);
        // Jensen: strictly below the cross-trial mean rate
        for (double v : r) CHECK(v < 0.02);
    }
    SECTION("identical trials collapse to the common average rate") {
        const std::vector<double> rates{0.01, 0.03, 0.02, 0.025};
        const auto df = discount_factors(rates);
        const auto r = certainty_equivalent_rate({df, df, df});
        double acc = 0.0;
        for (size_t t = 0; t < rates.size(); ++t) {
            acc += rates[t];
            CHECK(r[t] == Catch::Approx(acc / static_cast<double>(t + 1)).margin(1e-12));
        }
    }
}

TEST_CASE("calibration on the synthetic ensemble lands near the published point",
          "[discounting][slow]") {
    const ScenarioEnsemble e = synth_ensemble(2000, 42, SynthTargets{});
    std::vector<std::vector<double>> growth;
    for (const auto& t : e.trials) growth.push_back(growth_path(t));
    const CalibrationResult r = calibrate(growth, CalibrationTargets{});
    CHECK(r.params.rho >= 0.002);
    CHECK(r.params.rho <= 0.007);
    CHECK(r.params.eta >= 0.9);
    CHECK(r.params.eta <= 1.2);
    CHECK(std::abs(r.near_residual) < 1e-8);
    CHECK(std::abs(r.far_residual) < 1e-8);

    SECTION("re-running is bit-identical") {
        const CalibrationResult r2 = calibrate(growth, CalibrationTargets{});
        CHECK(r2.params.rho == r.params.rho);
        CHECK(r2.params.eta == r.params.eta);
    }

    SECTION("perturbing either parameter breaks a condition") {
        detail::CeCurve curve{&growth, 200};
        const auto [near_g, far_g] = curve(r.params.eta);
        CHECK(std::abs((r.params.rho + 1e-4 + near_g) - 0.02) > 1e-8);
        const auto [near_g2, far_g2] = curve(r.params.eta + 1e-4);
        const bool near_broken = std::abs((r.params.rho + near_g2) - 0.02) > 1e-8;
        const bool far_broken =
            std::abs((r.params.rho + far_g2) - CalibrationTargets{}.far_rate) > 1e-8;
        CHECK((near_broken || far_broken));
    }
}

TEST_CASE("degenerate flat ensemble returns the configured-eta branch", "[discounting]") {
    std::vector<std::vector<double>> growth(3, std::vector<double>(250, 0.01559));
    const CalibrationResult r = calibrate(growth, CalibrationTargets{});
    CHECK(r.params.eta == Catch::Approx(1.02));
    CHECK(r.params.rho + r.params.eta * 0.01559 == Catch::Approx(0.02).margin(1e-10));
}

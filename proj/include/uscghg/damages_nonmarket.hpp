#pragma once

#include <cmath>
#include <vector>

#include "uscghg/climate.hpp"
#include "uscghg/common.hpp"
#include "uscghg/config.hpp"
#include "uscghg/patterns.hpp"
#include "uscghg/quantile.hpp"
#include "uscghg/scenario.hpp"

namespace uscghg {

struct VslParams {
    double base_vsl = 10.05e6;  // 2020USD in 2020
    double elasticity = 1.0;    // unit income elasticity
    double base_income = 63500.0;

    void validate() const {
        if (!(base_vsl > 0)) throw ConfigError("VSL must be positive");
        if (elasticity < 0) throw ConfigError("VSL elasticity must be >= 0");
        if (!(base_income > 0)) throw ConfigError("VSL base income must be positive");
    }
};

inline double vsl_at(double income, const VslParams& p) {
    if (!(income > 0)) throw ValidationError("vsl_at: income must be positive");
    return p.base_vsl * std::pow(income / p.base_income, p.elasticity);
}

enum class IncomeMode { Exogenous, NetOfMacro };

// Temperature-mortality response: excess deaths per capita as a function of
// U.S. temperature anomaly above the damage baseline. Zero at zero anomaly.
struct MortalityResponse {
    PiecewiseLinear per_capita{{-3.0, 0.0, 1.0, 2.0, 3.0, 5.0},
                               {1.0e-5, 0.0, 2.6e-5, 7.0e-5, 1.35e-4, 3.1e-4}};
    double t_base = kUsBaselineTempC;

    double operator()(double us_temp) const { return per_capita(us_temp - t_base); }
};

struct NonmarketSeries {
    YearGrid grid;
    std::vector<double> damages_usd;  // per year, 2020USD
};

// Heat- and cold-related mortality monetized at the income-adjusted VSL. In
// net-of-macro mode the VSL income path is exogenous income minus macro GDP
// losses.
inline NonmarketSeries mortality_damages(const UsTempPath& us_temp, const TrialScenario& scenario,
                                         const MortalityResponse& resp, const VslParams& vsl,
                                         IncomeMode mode,
                                         const std::vector<double>* macro_loss_frac = nullptr) {
    vsl.validate();
    if (!(us_temp.grid == scenario.grid))
        throw ValidationError("mortality_damages: grid mismatch");
    if (mode == IncomeMode::NetOfMacro && macro_loss_frac == nullptr)
        throw ValidationError("mortality_damages: net-of-macro mode needs the macro loss path");
    NonmarketSeries out;
    out.grid = scenario.grid;
    out.damages_usd.resize(us_temp.level.size());
    for (size_t i = 0; i < us_temp.level.size(); ++i) {
        const double deaths = resp(us_temp.level[i]) * scenario.population[i];
        double income = scenario.income_per_capita(static_cast<int>(i));
        if (mode == IncomeMode::NetOfMacro)
            income *= std::max(1e-9, 1.0 - (*macro_loss_frac)[i]);
        out.damages_usd[i] = deaths * vsl_at(income, vsl);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Wildfire-smoke mortality: a no-intercept quantile-slope model of excess
// mortality per capita per degC of GMST change above the 2011-2020 baseline,
// with the rate frozen at its 2055 level thereafter.

struct WildfireParams {
    Dist slope_dist{Dist::Family::Triangular, {2.70e-5, 4.03e-5, 5.36e-5}};
    double baseline_rate = 6.74e-5;       // deaths per person per year in 2011-2020
    double baseline_anomaly = 1.16;       // mean GMST anomaly 2011-2020, degC
    double ref_population = 351764939.0;
    int cap_year = 2055;
    bool use_scenario_population = true;  // false pins deaths to ref_population

    void validate(const YearGrid& grid) const {
        if (!grid.contains(cap_year)) throw ConfigError("wildfire cap year off-grid");
    }
};

inline std::vector<double> wildfire_deaths(const GmstPath& gmst, const std::vector<double>& pop,
                                           const WildfireParams& w, double slope) {
    if (slope < 0.0) throw ValidationError("wildfire slope must be >= 0");
    if (pop.size() != gmst.anomaly.size()) throw ValidationError("wildfire_deaths: size mismatch");
    w.validate(gmst.grid);
    const size_t cap_idx = static_cast<size_t>(gmst.grid.index(w.cap_year));
    std::vector<double> deaths(gmst.anomaly.size());
    double rate = 0.0;
    for (size_t i = 0; i < gmst.anomaly.size(); ++i) {
        if (i <= cap_idx)
            rate = slope * std::max(0.0, gmst.anomaly[i] - w.baseline_anomaly);
        const double people = w.use_scenario_population ? pop[i] : w.ref_population;
        deaths[i] = rate * people;
    }
    return deaths;
}

inline NonmarketSeries wildfire_damages(const GmstPath& gmst, const TrialScenario& scenario,
                                        const WildfireParams& w, double slope,
                                        const VslParams& vsl, IncomeMode mode,
                                        const std::vector<double>* macro_loss_frac = nullptr) {
    const std::vector<double> deaths = wildfire_deaths(gmst, scenario.population, w, slope);
    NonmarketSeries out;
    out.grid = scenario.grid;
    out.damages_usd.resize(deaths.size());
    for (size_t i = 0; i < deaths.size(); ++i) {
        double income = scenario.income_per_capita(static_cast<int>(i));
        if (mode == IncomeMode::NetOfMacro && macro_loss_frac)
            income *= std::max(1e-9, 1.0 - (*macro_loss_frac)[i]);
        out.damages_usd[i] = deaths[i] * vsl_at(income, vsl);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Biodiversity nonuse value: a species-loss function of GMST change combined
// with a log WTP function of the lost share, scaled by income and population.

struct BiodiversityParams {
    double species_loss_coeff = 0.004;  // lost fraction per (degC anomaly)^2
    double wtp_loss_scale = 0.05;       // reference lost share in the WTP curve
    double wtp_per_capita0 = 20.0;      // 2020USD per person at the reference share
    double income_elasticity = 1.0;

    double species_loss(double anomaly) const {
        return std::min(1.0, species_loss_coeff * std::max(0.0, anomaly) * std::max(0.0, anomaly));
    }
};

inline NonmarketSeries biodiversity_wtp(const GmstPath& gmst, const TrialScenario& scenario,
                                        const BiodiversityParams& p, double base_income) {
    if (gmst.anomaly.size() != scenario.population.size())
        throw ValidationError("biodiversity_wtp: size mismatch");
    NonmarketSeries out;
    out.grid = scenario.grid;
    out.damages_usd.resize(gmst.anomaly.size());
    for (size_t i = 0; i < gmst.anomaly.size(); ++i) {
        const double lost = p.species_loss(gmst.anomaly[i]);
        const double income = scenario.income_per_capita(static_cast<int>(i));
        const double wtp_pc = p.wtp_per_capita0 * std::log1p(lost / p.wtp_loss_scale) *
                              std::pow(income / base_income, p.income_elasticity);
        out.damages_usd[i] = wtp_pc * scenario.population[i];
    }
    return out;
}

}  // namespace uscghg

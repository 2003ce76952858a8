#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "uscghg/common.hpp"
#include "uscghg/config.hpp"
#include "uscghg/csv.hpp"
#include "uscghg/rng.hpp"
#include "uscghg/scenario.hpp"

namespace uscghg {

// Unit conversions shared by the carbon accounting.
inline constexpr double kGtCo2PerPpm = 7.7823;   // 2.124 GtC/ppm * 44.01/12.011
inline constexpr double kMtCh4PerPpb = 2.75;
inline constexpr double kMtN2oPerPpb = 7.81;
inline constexpr double kCo2PreindustrialPpm = 278.0;

// One emulator parameterization: 4-pool linear carbon cycle, logarithmic CO2
// forcing, fixed-efficiency CH4/N2O forcing with single decay timescales, and
// a two-box energy balance. TCR and ECS are emergent, not inputs.
struct ClimateParamSet {
    long id = 0;
    std::array<double, 4> pool_fractions{0.2173, 0.2240, 0.2824, 0.2763};
    std::array<double, 4> pool_timescales{std::numeric_limits<double>::infinity(), 394.4, 36.54,
                                          4.304};
    double f2x = 3.71;        // W/m2 per CO2 doubling
    double ch4_eff = 3.63e-4; // W/m2 per ppb
    double n2o_eff = 3.00e-3; // W/m2 per ppb
    double ch4_tau = 9.3;     // years
    double n2o_tau = 121.0;
    double cap_surface = 8.0;   // W yr m-2 K-1
    double cap_deep = 90.0;
    double thermal_feedback = 1.3;  // W/m2/K
    double ocean_exchange = 0.7;    // W/m2/K

    void validate() const {
        double fsum = 0.0;
        for (double f : pool_fractions) {
            if (f < 0.0) throw ConfigError("climate params: pool fraction < 0");
            fsum += f;
        }
        if (std::abs(fsum - 1.0) > 1e-12)
            throw ConfigError("climate params: pool fractions must sum to 1 (got " +
                              std::to_string(fsum) + ")");
        for (double tau : pool_timescales)
            if (!(tau >= 1.0)) throw ConfigError("climate params: pool timescales must be >= 1 year");
        if (!(f2x > 0)) throw ConfigError("climate params: f2x must be positive");
        if (!(ch4_tau >= 1.0 && n2o_tau >= 1.0))
            throw ConfigError("climate params: gas lifetimes must be >= 1 year");
        if (!(cap_surface > 0 && cap_deep > 0))
            throw ConfigError("climate params: heat capacities must be positive");
        if (!(thermal_feedback > 0)) throw ConfigError("climate params: thermal feedback must be positive");
        if (!(ocean_exchange > 0)) throw ConfigError("climate params: ocean exchange must be positive");
    }
};

struct GmstPath {
    YearGrid grid;
    std::vector<double> anomaly;  // degC above pre-industrial
    double ref_anomaly = 0.0;     // mean anomaly over the 1980-2010-equivalent window
};

struct PulseSpec {
    enum class Gas { CO2, CH4, N2O };
    Gas gas = Gas::CO2;
    int year = 2030;
    double size = 1.0;  // GtCO2 for CO2, Mt for CH4/N2O
};

struct EmissionsPath {
    YearGrid grid;
    std::vector<double> co2;  // GtCO2 per year
    std::vector<double> ch4;  // MtCH4 per year
    std::vector<double> n2o;  // MtN2O per year
};

inline EmissionsPath emissions_of(const TrialScenario& t) {
    return EmissionsPath{t.grid, t.emissions_co2, t.emissions_ch4, t.emissions_n2o};
}

inline EmissionsPath central_emissions(const SynthTargets& targets) {
    EmissionsPath e;
    e.grid = targets.grid;
    for (int i = 0; i < targets.grid.size(); ++i) {
        const int year = targets.grid.year_at(i);
        e.co2.push_back(target_emissions(targets.co2_knot_years, targets.co2_knots, year));
        e.ch4.push_back(target_emissions(targets.ch4_knot_years, targets.ch4_knots, year));
        e.n2o.push_back(target_emissions(targets.n2o_knot_years, targets.n2o_knots, year));
    }
    return e;
}

inline EmissionsPath apply_pulse(const EmissionsPath& emissions, const PulseSpec& pulse) {
    if (!(pulse.size > 0.0)) throw ValidationError("pulse size must be positive");
    if (!emissions.grid.contains(pulse.year))
        throw ValidationError("pulse year " + std::to_string(pulse.year) + " is off-grid");
    EmissionsPath out = emissions;
    const size_t i = static_cast<size_t>(emissions.grid.index(pulse.year));
    switch (pulse.gas) {
        case PulseSpec::Gas::CO2: out.co2[i] += pulse.size; break;
        case PulseSpec::Gas::CH4: out.ch4[i] += pulse.size; break;
        case PulseSpec::Gas::N2O: out.n2o[i] += pulse.size; break;
    }
    return out;
}

// Integrator state carried across years (and across the warm-up boundary).
struct ClimateState {
    std::array<double, 4> pools_gtco2{0.0, 0.0, 0.0, 0.0};
    double ch4_anom_ppb = 0.0;
    double n2o_anom_ppb = 0.0;
    double temp_surface = 0.0;
    double temp_deep = 0.0;
    double pending_co2 = 0.0;  // feedback output awaiting next-year injection
    double pending_ch4 = 0.0;
};

struct FeedbackFlows {
    double co2_gt = 0.0;
    double ch4_mt = 0.0;
};

// Called once per simulated year with that year's GMST anomaly; the returned
// flows are added to emissions in the following year.
using FeedbackHook = std::function<FeedbackFlows(int year, double gmst_anomaly)>;

// Optional per-year observer used by diagnostics and the conservation tests.
using StateProbe = std::function<void(int year, const ClimateState&)>;

inline GmstPath run_emulator(const EmissionsPath& emissions, const ClimateParamSet& p,
                             ClimateState state = {}, const FeedbackHook& hook = nullptr,
                             const StateProbe& probe = nullptr, double ref_anomaly = 0.0) {
    p.validate();
    GmstPath out;
    out.grid = emissions.grid;
    out.ref_anomaly = ref_anomaly;
    out.anomaly.resize(static_cast<size_t>(emissions.grid.size()));

    std::array<double, 4> decay;
    for (int k = 0; k < 4; ++k)
        decay[static_cast<size_t>(k)] =
            std::isinf(p.pool_timescales[static_cast<size_t>(k)])
                ? 1.0
                : std::exp(-1.0 / p.pool_timescales[static_cast<size_t>(k)]);
    const double ch4_decay = std::exp(-1.0 / p.ch4_tau);
    const double n2o_decay = std::exp(-1.0 / p.n2o_tau);
    const double f_log = p.f2x / std::log(2.0);

    for (int i = 0; i < emissions.grid.size(); ++i) {
        const int year = emissions.grid.year_at(i);
        const size_t k = static_cast<size_t>(i);

        const double e_co2 = emissions.co2[k] + state.pending_co2;
        const double e_ch4 = emissions.ch4[k] + state.pending_ch4;
        const double e_n2o = emissions.n2o[k];
        state.pending_co2 = 0.0;
        state.pending_ch4 = 0.0;

        for (int q = 0; q < 4; ++q) {
            auto& pool = state.pools_gtco2[static_cast<size_t>(q)];
            pool = pool * decay[static_cast<size_t>(q)] + p.pool_fractions[static_cast<size_t>(q)] * e_co2;
        }
        state.ch4_anom_ppb = state.ch4_anom_ppb * ch4_decay + e_ch4 / kMtCh4PerPpb;
        state.n2o_anom_ppb = state.n2o_anom_ppb * n2o_decay + e_n2o / kMtN2oPerPpb;

        double burden = 0.0;
        for (double pool : state.pools_gtco2) burden += pool;
        const double co2_ppm = kCo2PreindustrialPpm + burden / kGtCo2PerPpm;
        if (!(co2_ppm > 0.0))
            throw NumericalError("CO2 concentration non-positive in year " + std::to_string(year));

        const double forcing = f_log * std::log(co2_ppm / kCo2PreindustrialPpm) +
                               p.ch4_eff * state.ch4_anom_ppb + p.n2o_eff * state.n2o_anom_ppb;

        const double t1 = state.temp_surface;
        const double t2 = state.temp_deep;
        state.temp_surface +=
            (forcing - p.thermal_feedback * t1 - p.ocean_exchange * (t1 - t2)) / p.cap_surface;
        state.temp_deep += p.ocean_exchange * (t1 - t2) / p.cap_deep;

        if (!std::isfinite(state.temp_surface) || !std::isfinite(state.temp_deep))
            throw NumericalError("non-finite temperature state in year " + std::to_string(year));

        out.anomaly[k] = state.temp_surface;

        if (hook) {
            const FeedbackFlows flows = hook(year, state.temp_surface);
            if (flows.co2_gt < 0.0 || flows.ch4_mt < 0.0)
                throw NumericalError("negative feedback flow in year " + std::to_string(year));
            state.pending_co2 = flows.co2_gt;
            state.pending_ch4 = flows.ch4_mt;
        }
        if (probe) probe(year, state);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Historical warm-up. Parametric logistic reconstructions of anthropogenic
// emissions from 1765 bring the state to 2020; the 1980-2010 window mean from
// the same integration anchors the downscaling patterns.

struct HistoricalConfig {
    int start_year = 1765;
    int end_year = 2019;
    double co2_amp = 38.0;     // GtCO2/yr asymptote
    double co2_center = 1985.0;
    double co2_width = 26.0;
    double ch4_amp = 420.0;    // MtCH4/yr asymptote
    double ch4_center = 1985.0;
    double ch4_width = 28.0;
    double n2o_amp = 11.0;     // MtN2O/yr asymptote
    double n2o_center = 1990.0;
    double n2o_width = 35.0;
    int ref_window_start = 1980;
    int ref_window_end = 2010;
};

inline EmissionsPath historical_emissions(const HistoricalConfig& h) {
    EmissionsPath e;
    e.grid = YearGrid{h.start_year, h.end_year};
    auto logistic = [](double y, double amp, double center, double width) {
        return amp / (1.0 + std::exp(-(y - center) / width));
    };
    for (int i = 0; i < e.grid.size(); ++i) {
        const double y = static_cast<double>(e.grid.year_at(i));
        e.co2.push_back(logistic(y, h.co2_amp, h.co2_center, h.co2_width));
        e.ch4.push_back(logistic(y, h.ch4_amp, h.ch4_center, h.ch4_width));
        e.n2o.push_back(logistic(y, h.n2o_amp, h.n2o_center, h.n2o_width));
    }
    return e;
}

struct WarmupResult {
    ClimateState state;        // state handed to the 2020 projection
    double ref_anomaly = 0.0;  // mean anomaly over the reference window
    double recent_mean = 0.0;  // mean anomaly 2011..end_year
};

inline WarmupResult warm_up(const ClimateParamSet& p, const HistoricalConfig& h = {}) {
    const EmissionsPath hist = historical_emissions(h);
    double ref_sum = 0.0;
    int ref_n = 0;
    double recent_sum = 0.0;
    int recent_n = 0;
    ClimateState final_state;
    GmstPath path = run_emulator(hist, p, ClimateState{}, nullptr,
                                 [&](int year, const ClimateState& s) {
                                     if (year >= h.ref_window_start && year <= h.ref_window_end) {
                                         ref_sum += s.temp_surface;
                                         ++ref_n;
                                     }
                                     if (year >= 2011) {
                                         recent_sum += s.temp_surface;
                                         ++recent_n;
                                     }
                                     final_state = s;
                                 });
    WarmupResult r;
    r.state = final_state;
    r.ref_anomaly = ref_n > 0 ? ref_sum / ref_n : 0.0;
    r.recent_mean = recent_n > 0 ? recent_sum / recent_n : 0.0;
    return r;
}

// Scalar used for hotness ranking: GMST anomaly in 2100 under a fixed
// reference emissions path.
inline double emergent_warmth(const ClimateParamSet& p, const EmissionsPath& reference,
                              const HistoricalConfig& hist = {}) {
    const WarmupResult w = warm_up(p, hist);
    const GmstPath g = run_emulator(reference, p, w.state, nullptr, nullptr, w.ref_anomaly);
    return g.anomaly[static_cast<size_t>(g.grid.index(2100))];
}

// ---------------------------------------------------------------------------
// Parameter ensemble: sampled from configured distributions, or loaded from
// the documented CSV schema.

struct ClimateSamplingConfig {
    long n_sets = 2237;
    Dist f2x{Dist::Family::Normal, {3.71, 0.23}};
    Dist thermal_feedback{Dist::Family::LogNormal, {0.262364, 0.25}};  // median 1.30
    Dist cap_surface{Dist::Family::TruncNormal, {8.0, 1.0}};
    Dist cap_deep{Dist::Family::TruncNormal, {90.0, 20.0}};
    Dist ocean_exchange{Dist::Family::TruncNormal, {0.7, 0.12}};
    Dist carbon_speed{Dist::Family::LogNormal, {0.0, 0.15}};  // scales finite pool timescales
    Dist ch4_eff{Dist::Family::Normal, {3.63e-4, 2.0e-5}};
    Dist n2o_eff{Dist::Family::Normal, {3.00e-3, 2.0e-4}};
};

inline std::vector<ClimateParamSet> sample_param_sets(uint64_t seed,
                                                      const ClimateSamplingConfig& cfg = {}) {
    if (cfg.n_sets < 1) throw ConfigError("climate sampling: n_sets must be >= 1");
    std::vector<ClimateParamSet> sets;
    sets.reserve(static_cast<size_t>(cfg.n_sets));
    for (long id = 0; id < cfg.n_sets; ++id) {
        Rng rng(seed, static_cast<uint64_t>(id), "climate:params");
        ClimateParamSet p;
        p.id = id;
        p.f2x = std::max(1.0, cfg.f2x.sample(rng));
        p.thermal_feedback = std::max(0.4, cfg.thermal_feedback.sample(rng));
        p.cap_surface = std::max(3.0, cfg.cap_surface.sample(rng));
        p.cap_deep = std::max(20.0, cfg.cap_deep.sample(rng));
        p.ocean_exchange = std::max(0.2, cfg.ocean_exchange.sample(rng));
        const double speed = cfg.carbon_speed.sample(rng);
        for (int k = 1; k < 4; ++k)
            p.pool_timescales[static_cast<size_t>(k)] =
                std::max(1.0, p.pool_timescales[static_cast<size_t>(k)] * speed);
        p.ch4_eff = std::max(1e-5, cfg.ch4_eff.sample(rng));
        p.n2o_eff = std::max(1e-4, cfg.n2o_eff.sample(rng));
        p.validate();
        sets.push_back(p);
    }
    return sets;
}

inline void write_param_sets(const std::vector<ClimateParamSet>& sets, const std::string& path) {
    csv::Writer w(path);
    w.row({"id", "f2x", "tf", "cap1", "cap2", "ox", "a1", "a2", "a3", "a4", "tau1", "tau2", "tau3",
           "tau4", "ch4_eff", "n2o_eff", "ch4_tau", "n2o_tau"});
    for (const auto& p : sets) {
        std::vector<std::string> row{std::to_string(p.id), csv::format_double(p.f2x),
                                     csv::format_double(p.thermal_feedback),
                                     csv::format_double(p.cap_surface),
                                     csv::format_double(p.cap_deep),
                                     csv::format_double(p.ocean_exchange)};
        for (double a : p.pool_fractions) row.push_back(csv::format_double(a));
        for (double tau : p.pool_timescales)
            row.push_back(std::isinf(tau) ? "inf" : csv::format_double(tau));
        row.push_back(csv::format_double(p.ch4_eff));
        row.push_back(csv::format_double(p.n2o_eff));
        row.push_back(csv::format_double(p.ch4_tau));
        row.push_back(csv::format_double(p.n2o_tau));
        w.row(row);
    }
}

inline std::vector<ClimateParamSet> load_param_sets(const std::string& path) {
    const csv::Table tab = csv::read_file(path);
    const std::vector<std::string> cols{"id",   "f2x",  "tf",   "cap1", "cap2", "ox",
                                        "a1",   "a2",   "a3",   "a4",   "tau1", "tau2",
                                        "tau3", "tau4", "ch4_eff", "n2o_eff", "ch4_tau", "n2o_tau"};
    std::vector<int> idx;
    for (const auto& c : cols) idx.push_back(tab.require_column(c));
    std::vector<ClimateParamSet> sets;
    for (size_t r = 0; r < tab.rows.size(); ++r) {
        const auto& row = tab.rows[r];
        const std::string ctx = path + " row " + std::to_string(r + 2);
        auto num = [&](int c) -> double {
            const std::string& s = row[static_cast<size_t>(idx[static_cast<size_t>(c)])];
            if (s == "inf") return std::numeric_limits<double>::infinity();
            return csv::parse_double(s, ctx);
        };
        ClimateParamSet p;
        p.id = csv::parse_long(row[static_cast<size_t>(idx[0])], ctx);
        p.f2x = num(1);
        p.thermal_feedback = num(2);
        p.cap_surface = num(3);
        p.cap_deep = num(4);
        p.ocean_exchange = num(5);
        for (int k = 0; k < 4; ++k) p.pool_fractions[static_cast<size_t>(k)] = num(6 + k);
        for (int k = 0; k < 4; ++k) p.pool_timescales[static_cast<size_t>(k)] = num(10 + k);
        p.ch4_eff = num(14);
        p.n2o_eff = num(15);
        p.ch4_tau = num(16);
        p.n2o_tau = num(17);
        p.validate();
        sets.push_back(p);
    }
    if (sets.empty()) throw ValidationError(path + ": no parameter sets");
    return sets;
}

}  // namespace uscghg

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "uscghg/common.hpp"
#include "uscghg/config.hpp"
#include "uscghg/patterns.hpp"
#include "uscghg/quantile.hpp"
#include "uscghg/scenario.hpp"

namespace uscghg {

enum class Study {
    Burke2015,
    Kalkuhl2020,
    Newell2021,
    Acevedo2020,
    Kahn2021,
    Casey2023,
    Harding2023,
    Nath2024,
};

enum class MacroFamily {
    PermanentGrowth,   // growth wedge accumulates forever
    LevelQuadratic,    // pure contemporaneous level effect
    LevelInteracted,   // level effect split over a one-year lag
    FiniteImpulse,     // per-horizon weights, zero beyond the last horizon
    ArdlAdaptation,    // driver is deviation from a trailing moving average
    TfpSolow,          // shocks hit TFP, output responds through capital
    Convergence,       // log-GDP gap decays geometrically
    StateDependentCRR, // marginal effect scaled by a mean-temperature response curve
};

inline MacroFamily family_of(Study s) {
    switch (s) {
        case Study::Burke2015: return MacroFamily::PermanentGrowth;
        case Study::Kalkuhl2020: return MacroFamily::LevelInteracted;
        case Study::Newell2021: return MacroFamily::LevelQuadratic;
        case Study::Acevedo2020: return MacroFamily::FiniteImpulse;
        case Study::Kahn2021: return MacroFamily::ArdlAdaptation;
        case Study::Casey2023: return MacroFamily::TfpSolow;
        case Study::Harding2023: return MacroFamily::Convergence;
        case Study::Nath2024: return MacroFamily::StateDependentCRR;
    }
    throw ConfigError("unknown study");
}

inline std::string study_name(Study s) {
    switch (s) {
        case Study::Burke2015: return "burke2015";
        case Study::Kalkuhl2020: return "kalkuhl2020";
        case Study::Newell2021: return "newell2021";
        case Study::Acevedo2020: return "acevedo2020";
        case Study::Kahn2021: return "kahn2021";
        case Study::Casey2023: return "casey2023";
        case Study::Harding2023: return "harding2023";
        case Study::Nath2024: return "nath2024";
    }
    throw ConfigError("unknown study");
}

inline Study study_from_name(const std::string& name) {
    static const std::map<std::string, Study> lut{
        {"burke2015", Study::Burke2015},   {"kalkuhl2020", Study::Kalkuhl2020},
        {"newell2021", Study::Newell2021}, {"acevedo2020", Study::Acevedo2020},
        {"kahn2021", Study::Kahn2021},     {"casey2023", Study::Casey2023},
        {"harding2023", Study::Harding2023}, {"nath2024", Study::Nath2024}};
    auto it = lut.find(name);
    if (it == lut.end()) throw ConfigError("unknown study '" + name + "'");
    return it->second;
}

inline std::vector<Study> all_studies() {
    return {Study::Burke2015, Study::Kalkuhl2020, Study::Newell2021, Study::Acevedo2020,
            Study::Kahn2021,  Study::Casey2023,   Study::Harding2023, Study::Nath2024};
}

// A damage-family identifier and its coefficient payload. The per-year wedge
// is w(T) - w(t_base) with w(T) = beta1*T + beta2*T^2; each family decides how
// wedges accumulate into the log-GDP gap.
struct MacroSpec {
    Study study = Study::Newell2021;
    MacroFamily family = MacroFamily::LevelQuadratic;
    double t_base = kUsBaselineTempC;

    double beta1 = 0.0127;
    double beta2 = -4.871e-4;
    double beta1_se = 0.0;  // optional, for impulse-response ribbons
    double beta2_se = 0.0;

    // LevelInteracted
    double impact_share = 0.5;  // contemporaneous share, remainder after one year

    // FiniteImpulse
    std::vector<double> fir_weights{0.30, 0.20, 0.15, 0.10, 0.10, 0.075, 0.05, 0.025};
    bool fir_on_innovations = false;

    // ArdlAdaptation
    int ma_window = 30;
    double ar_phi = 0.25;
    double driver_beta0 = -3.5e-3;  // growth effect per degC deviation
    double driver_beta1 = 0.0;
    double cf_trend = 0.025;  // degC/yr counterfactual warming continuation

    // TfpSolow
    double carry_over = 0.19;
    double cap_share = 0.30;
    double savings = 0.21;
    double depreciation = 0.10;

    // Convergence / StateDependentCRR
    double gap_lambda = 0.81;
    PiecewiseLinear crr_curve{{8.0, 12.0, 14.0, 16.0, 20.0}, {0.2, 0.7, 1.2, 1.6, 2.0}};
    int crr_window = 30;

    // slope of the pre-2020 temperature history used to seed trailing windows
    double hist_trend = 0.025;

    bool has_quadratic_payload() const { return family != MacroFamily::ArdlAdaptation; }

    void validate() const {
        if (family != family_of(study))
            throw ConfigError("study '" + study_name(study) + "' requires family " +
                              std::to_string(static_cast<int>(family_of(study))));
        if (has_quadratic_payload() && beta2 >= 0.0)
            throw ConfigError("quadratic payload requires beta2 < 0 (study " + study_name(study) +
                              ")");
        if (family == MacroFamily::ArdlAdaptation && ma_window < 1)
            throw ConfigError("ArdlAdaptation requires m >= 1");
        if (family == MacroFamily::TfpSolow) {
            if (!(carry_over >= 0.0 && carry_over < 1.0))
                throw ConfigError("TfpSolow carry-over must be in [0,1)");
            if (!(cap_share > 0.0 && cap_share < 1.0))
                throw ConfigError("TfpSolow capital share must be in (0,1)");
            if (!(savings > 0.0 && savings < 1.0) || !(depreciation > 0.0 && depreciation <= 1.0))
                throw ConfigError("TfpSolow savings/depreciation out of range");
        }
        if ((family == MacroFamily::Convergence || family == MacroFamily::StateDependentCRR) &&
            !(gap_lambda >= 0.0 && gap_lambda < 1.0))
            throw ConfigError("carry-over lambda must be in [0,1)");
        if (family == MacroFamily::StateDependentCRR && !crr_curve.monotone_nondecreasing())
            throw ConfigError("CRR curve must be monotone nondecreasing");
        if (family == MacroFamily::FiniteImpulse && fir_weights.empty())
            throw ConfigError("FiniteImpulse requires at least one weight");
        if (family == MacroFamily::ArdlAdaptation && !(ar_phi >= 0.0 && ar_phi < 1.0))
            throw ConfigError("ArdlAdaptation AR coefficient must be in [0,1)");
    }

    double wedge(double temp) const {
        return beta1 * (temp - t_base) + beta2 * (temp * temp - t_base * t_base);
    }
};

struct DamagePath {
    YearGrid grid;
    std::vector<double> loss_frac;  // positive = loss relative to no climate change
};

// Quadratic optimum T* = -beta1 / (2 beta2).
inline double optimum_of(const MacroSpec& spec) {
    if (!spec.has_quadratic_payload())
        throw ConfigError("study " + study_name(spec.study) + " has no quadratic marginal structure");
    if (spec.beta2 >= 0.0)
        throw ConfigError("no interior optimum: beta2 must be negative");
    return -spec.beta1 / (2.0 * spec.beta2);
}

namespace detail {

// Log-GDP gap of the climate path relative to the family's counterfactual.
// `temps` are U.S. temperature levels; history before the first entry is a
// linear extrapolation at `hist_trend` degC/yr.
inline std::vector<double> log_gap_path(const MacroSpec& spec, const std::vector<double>& temps,
                                        double hist_trend) {
    const size_t n = temps.size();
    std::vector<double> gap(n, 0.0);
    auto temp_at = [&](long i) -> double {
        if (i >= 0) return temps[static_cast<size_t>(std::min<long>(i, static_cast<long>(n) - 1))];
        return temps[0] + hist_trend * static_cast<double>(i);
    };

    switch (spec.family) {
        case MacroFamily::PermanentGrowth: {
            double g = 0.0;
            for (size_t t = 0; t < n; ++t) {
                g += spec.wedge(temps[t]);
                gap[t] = g;
            }
            break;
        }
        case MacroFamily::LevelQuadratic: {
            for (size_t t = 0; t < n; ++t) gap[t] = spec.wedge(temps[t]);
            break;
        }
        case MacroFamily::LevelInteracted: {
            for (size_t t = 0; t < n; ++t)
                gap[t] = spec.impact_share * spec.wedge(temps[t]) +
                         (1.0 - spec.impact_share) * spec.wedge(temp_at(static_cast<long>(t) - 1));
            break;
        }
        case MacroFamily::FiniteImpulse: {
            for (size_t t = 0; t < n; ++t) {
                double g = 0.0;
                for (size_t h = 0; h < spec.fir_weights.size(); ++h) {
                    const long s = static_cast<long>(t) - static_cast<long>(h);
                    double v = spec.wedge(temp_at(s));
                    if (spec.fir_on_innovations) v -= spec.wedge(temp_at(s - 1));
                    g += spec.fir_weights[h] * v;
                }
                gap[t] = g;
            }
            break;
        }
        case MacroFamily::ArdlAdaptation: {
            double w = 0.0;
            double g = 0.0;
            double d_prev = 0.0;
            for (size_t t = 0; t < n; ++t) {
                double ma = 0.0;
                for (int j = 1; j <= spec.ma_window; ++j)
                    ma += temp_at(static_cast<long>(t) - j);
                ma /= static_cast<double>(spec.ma_window);
                const double d = temps[t] - ma;
                w = spec.ar_phi * w + spec.driver_beta0 * d + spec.driver_beta1 * d_prev;
                d_prev = d;
                g += w;
                gap[t] = g;
            }
            break;
        }
        case MacroFamily::TfpSolow: {
            // Solow economy normalized by its no-shock steady state: c is
            // capital relative to k*, so zero wedge is an exact fixed point.
            // K' = sY + (1-d)K with sY*/K* = d gives c' = d c^a e^{(1-a)A} + (1-d)c.
            const double alpha = spec.cap_share;
            const double delta = spec.depreciation;
            double a = 0.0;  // log TFP gap
            double c = 1.0;  // capital relative to steady state
            for (size_t t = 0; t < n; ++t) {
                a = spec.carry_over * a + spec.wedge(temps[t]);
                gap[t] = alpha * std::log(c) + (1.0 - alpha) * a;
                c = delta * std::pow(c, alpha) * std::exp((1.0 - alpha) * a) + (1.0 - delta) * c;
            }
            break;
        }
        case MacroFamily::Convergence: {
            double g = 0.0;
            for (size_t t = 0; t < n; ++t) {
                g = spec.gap_lambda * g + spec.wedge(temps[t]);
                gap[t] = g;
            }
            break;
        }
        case MacroFamily::StateDependentCRR: {
            double g = 0.0;
            for (size_t t = 0; t < n; ++t) {
                double ma = 0.0;
                for (int j = 1; j <= spec.crr_window; ++j)
                    ma += temp_at(static_cast<long>(t) - j);
                ma /= static_cast<double>(spec.crr_window);
                g = spec.gap_lambda * g + spec.crr_curve(ma) * spec.wedge(temps[t]);
                gap[t] = g;
            }
            break;
        }
    }
    return gap;
}

}  // namespace detail

inline DamagePath run_damage(const MacroSpec& spec, const UsTempPath& us_temp,
                             const TrialScenario& scenario) {
    spec.validate();
    if (!(us_temp.grid == scenario.grid))
        throw ValidationError("run_damage: temperature and scenario grids differ");

    std::vector<double> gap = detail::log_gap_path(spec, us_temp.level, spec.hist_trend);

    if (spec.family == MacroFamily::ArdlAdaptation) {
        // losses are measured against a continuation of the historic warming
        // trend rather than a frozen climate
        std::vector<double> cf(us_temp.level.size());
        for (size_t t = 0; t < cf.size(); ++t)
            cf[t] = us_temp.level[0] + spec.cf_trend * static_cast<double>(t);
        const std::vector<double> gap_cf = detail::log_gap_path(spec, cf, spec.cf_trend);
        for (size_t t = 0; t < gap.size(); ++t) gap[t] -= gap_cf[t];
    }

    DamagePath out;
    out.grid = us_temp.grid;
    out.loss_frac.resize(gap.size());
    for (size_t t = 0; t < gap.size(); ++t) {
        const double loss = 1.0 - std::exp(gap[t]);
        if (!std::isfinite(loss))
            throw NumericalError("non-finite damage at year " +
                                 std::to_string(out.grid.year_at(static_cast<int>(t))));
        out.loss_frac[t] = loss;
    }
    return out;
}

// Cumulative log-GDP response to a +1 degC shock in year 0 that is reversed in
// year 1, relative to a flat path at t_eval.
inline std::vector<double> impulse_response(const MacroSpec& spec, double t_eval, int horizon) {
    spec.validate();
    if (horizon < 1) throw ValidationError("impulse_response: horizon must be >= 1");
    const size_t n = static_cast<size_t>(horizon + 1);
    std::vector<double> base(n, t_eval);
    std::vector<double> shocked(n, t_eval);
    shocked[0] = t_eval + 1.0;
    const std::vector<double> g_base = detail::log_gap_path(spec, base, 0.0);
    const std::vector<double> g_shock = detail::log_gap_path(spec, shocked, 0.0);
    std::vector<double> response(n);
    for (size_t h = 0; h < n; ++h) response[h] = g_shock[h] - g_base[h];
    return response;
}

inline constexpr double kIrfEvalTempC = 16.3;  // projected U.S. mean temperature in 2100

struct DamageSurfaceFit {
    QuadraticFit mean;
    QuadraticFit q05;
    QuadraticFit q95;
};

// Quadratic summaries of the per-trial 2100 loss cloud: OLS mean curve plus
// pinball-loss quantile curves at the 5th and 95th percentiles.
inline DamageSurfaceFit fit_damage_surface(const std::vector<double>& temps_2100,
                                           const std::vector<double>& losses_2100) {
    if (temps_2100.size() != losses_2100.size()) throw FitError("fit_damage_surface: size mismatch");
    if (temps_2100.size() < 50) throw FitError("fit_damage_surface: need >= 50 points");
    DamageSurfaceFit fit;
    fit.mean = fit_quadratic_ols(temps_2100, losses_2100);
    fit.q05 = fit_quadratic_quantile(temps_2100, losses_2100, 0.05);
    fit.q95 = fit_quadratic_quantile(temps_2100, losses_2100, 0.95);
    return fit;
}

// ---------------------------------------------------------------------------
// Payloads. Coefficients are transcribed from the cited specifications or
// calibrated to the published end-of-century loss levels; quadratic optima
// are pinned exactly. Each can be overridden by a per-study key-value file.

inline MacroSpec default_macro_spec(Study study) {
    MacroSpec s;
    s.study = study;
    s.family = family_of(study);
    switch (study) {
        case Study::Burke2015:
            s.beta1 = 0.0127;
            s.beta2 = -4.871e-4;
            break;
        case Study::Newell2021:
            s.beta1 = 0.0127;
            s.beta2 = -4.871e-4;
            break;
        case Study::Kalkuhl2020:
            s.beta2 = -6.86e-4;
            s.beta1 = -2.0 * s.beta2 * 5.4;  // optimum exactly 5.4 degC
            s.impact_share = 0.5;
            break;
        case Study::Acevedo2020:
            s.beta2 = -4.79e-4;
            s.beta1 = -2.0 * s.beta2 * 13.0;  // optimum exactly 13 degC
            s.fir_weights = {0.30, 0.20, 0.15, 0.10, 0.10, 0.075, 0.05, 0.025};
            break;
        case Study::Kahn2021:
            s.ma_window = 30;
            s.ar_phi = 0.25;
            s.driver_beta0 = -3.5e-3;
            s.cf_trend = 0.025;
            break;
        case Study::Casey2023:
            s.carry_over = 0.19;
            s.beta2 = -5.41e-4;
            s.beta1 = -2.0 * s.beta2 * 13.1;
            break;
        case Study::Harding2023:
            s.gap_lambda = 0.81;
            s.beta2 = -2.23e-4;
            s.beta1 = -2.0 * s.beta2 * 13.2;  // optimum exactly 13.2 degC
            break;
        case Study::Nath2024:
            s.gap_lambda = 0.85;
            s.beta2 = -3.70e-4;
            s.beta1 = -2.0 * s.beta2 * 13.0;  // optimum exactly 13.0 degC
            s.crr_window = 30;
            break;
    }
    s.validate();
    return s;
}

inline MacroSpec load_macro_spec(const KeyValues& kv) {
    const std::string study_key = kv.get_string("study.name", "");
    if (study_key.empty()) throw ConfigError(kv.origin() + ": missing study.name");
    MacroSpec s = default_macro_spec(study_from_name(study_key));
    const std::set<std::string> known{
        "study.name",        "study.t_base",       "study.beta1",       "study.beta2",
        "study.beta1_se",    "study.beta2_se",     "study.impact_share", "study.fir_weights",
        "study.fir_on_innovations", "study.ma_window", "study.ar_phi",  "study.driver_beta0",
        "study.driver_beta1", "study.cf_trend",    "study.carry_over",  "study.cap_share",
        "study.savings",     "study.depreciation", "study.gap_lambda",  "study.crr_temps",
        "study.crr_values",  "study.crr_window",   "study.hist_trend"};
    const auto unknown = kv.unknown_keys(known);
    if (!unknown.empty()) throw ConfigError(unknown);
    s.t_base = kv.get_double("study.t_base", s.t_base);
    s.beta1 = kv.get_double("study.beta1", s.beta1);
    s.beta2 = kv.get_double("study.beta2", s.beta2);
    s.beta1_se = kv.get_double("study.beta1_se", s.beta1_se);
    s.beta2_se = kv.get_double("study.beta2_se", s.beta2_se);
    s.impact_share = kv.get_double("study.impact_share", s.impact_share);
    s.fir_weights = kv.get_list("study.fir_weights", s.fir_weights);
    s.fir_on_innovations = kv.get_bool("study.fir_on_innovations", s.fir_on_innovations);
    s.ma_window = static_cast<int>(kv.get_long("study.ma_window", s.ma_window));
    s.ar_phi = kv.get_double("study.ar_phi", s.ar_phi);
    s.driver_beta0 = kv.get_double("study.driver_beta0", s.driver_beta0);
    s.driver_beta1 = kv.get_double("study.driver_beta1", s.driver_beta1);
    s.cf_trend = kv.get_double("study.cf_trend", s.cf_trend);
    s.carry_over = kv.get_double("study.carry_over", s.carry_over);
    s.cap_share = kv.get_double("study.cap_share", s.cap_share);
    s.savings = kv.get_double("study.savings", s.savings);
    s.depreciation = kv.get_double("study.depreciation", s.depreciation);
    s.gap_lambda = kv.get_double("study.gap_lambda", s.gap_lambda);
    s.crr_curve.xs = kv.get_list("study.crr_temps", s.crr_curve.xs);
    s.crr_curve.ys = kv.get_list("study.crr_values", s.crr_curve.ys);
    s.crr_window = static_cast<int>(kv.get_long("study.crr_window", s.crr_window));
    s.hist_trend = kv.get_double("study.hist_trend", s.hist_trend);
    s.validate();
    return s;
}

}  // namespace uscghg

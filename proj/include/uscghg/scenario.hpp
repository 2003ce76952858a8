#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "uscghg/common.hpp"
#include "uscghg/csv.hpp"
#include "uscghg/rng.hpp"

namespace uscghg {

// One joint draw of annual U.S. population and GDP with global emissions,
// 2020-2300. Units are fixed: persons, 2020USD, GtCO2, MtCH4, MtN2O.
struct TrialScenario {
    long trial_id = 0;
    YearGrid grid;
    std::vector<double> population;
    std::vector<double> gdp;
    std::vector<double> emissions_co2;
    std::vector<double> emissions_ch4;
    std::vector<double> emissions_n2o;

    void validate() const {
        const size_t n = static_cast<size_t>(grid.size());
        auto check = [&](const std::vector<double>& v, const char* name) {
            if (v.size() != n)
                throw ValidationError("trial " + std::to_string(trial_id) + ": series '" + name +
                                      "' has " + std::to_string(v.size()) + " entries, grid has " +
                                      std::to_string(n));
            for (size_t i = 0; i < n; ++i) {
                if (!(v[i] > 0.0) || !std::isfinite(v[i]))
                    throw ValidationError("trial " + std::to_string(trial_id) + ", year " +
                                          std::to_string(grid.year_at(static_cast<int>(i))) +
                                          ": non-positive value in '" + std::string(name) + "'");
            }
        };
        check(population, "pop");
        check(gdp, "gdp");
        check(emissions_co2, "co2");
        check(emissions_ch4, "ch4");
        check(emissions_n2o, "n2o");
    }

    double income_per_capita(int idx) const {
        return gdp[static_cast<size_t>(idx)] / population[static_cast<size_t>(idx)];
    }
};

struct ScenarioEnsemble {
    std::vector<TrialScenario> trials;
    std::string source_label;
    uint64_t checksum = 0;

    const YearGrid& grid() const {
        if (trials.empty()) throw ValidationError("empty ensemble");
        return trials.front().grid;
    }

    void validate() const {
        if (trials.empty()) throw ValidationError("ensemble has no trials");
        const YearGrid& g = trials.front().grid;
        for (size_t i = 0; i < trials.size(); ++i) {
            if (trials[i].trial_id != static_cast<long>(i))
                throw ValidationError("trial ids must be 0..N-1 in order; slot " +
                                      std::to_string(i) + " holds id " +
                                      std::to_string(trials[i].trial_id));
            if (!(trials[i].grid == g))
                throw ValidationError("trial " + std::to_string(i) + " has a different year grid");
            trials[i].validate();
        }
    }
};

// Per-capita income growth rates: g_t = pc_t / pc_{t-1} - 1, length = years - 1.
inline std::vector<double> growth_path(const TrialScenario& t) {
    std::vector<double> g;
    g.reserve(static_cast<size_t>(t.grid.size() - 1));
    for (int i = 1; i < t.grid.size(); ++i)
        g.push_back(t.income_per_capita(i) / t.income_per_capita(i - 1) - 1.0);
    return g;
}

// ---------------------------------------------------------------------------
// CSV loader / writer. Schema: trial,year,pop,gdp,co2,ch4,n2o (one row per
// trial-year, '.' decimal separator).

inline void write_ensemble(const ScenarioEnsemble& e, const std::string& path) {
    csv::Writer w(path);
    w.row({"trial", "year", "pop", "gdp", "co2", "ch4", "n2o"});
    for (const auto& t : e.trials) {
        for (int i = 0; i < t.grid.size(); ++i) {
            const size_t k = static_cast<size_t>(i);
            w.row({std::to_string(t.trial_id), std::to_string(t.grid.year_at(i)),
                   csv::format_double(t.population[k]), csv::format_double(t.gdp[k]),
                   csv::format_double(t.emissions_co2[k]), csv::format_double(t.emissions_ch4[k]),
                   csv::format_double(t.emissions_n2o[k])});
        }
    }
}

inline ScenarioEnsemble load_ensemble(const std::string& path) {
    const csv::Table tab = csv::read_file(path);
    const int c_trial = tab.require_column("trial");
    const int c_year = tab.require_column("year");
    const int c_pop = tab.require_column("pop");
    const int c_gdp = tab.require_column("gdp");
    const int c_co2 = tab.require_column("co2");
    const int c_ch4 = tab.require_column("ch4");
    const int c_n2o = tab.require_column("n2o");

    ScenarioEnsemble e;
    e.source_label = path;
    long cur_trial = -1;
    int expect_year = 0;
    for (size_t r = 0; r < tab.rows.size(); ++r) {
        const auto& row = tab.rows[r];
        const std::string ctx = path + " row " + std::to_string(r + 2);
        const long trial = csv::parse_long(row[static_cast<size_t>(c_trial)], ctx);
        const long year = csv::parse_long(row[static_cast<size_t>(c_year)], ctx);
        if (trial != cur_trial) {
            if (trial != cur_trial + 1)
                throw ValidationError(ctx + ": trial ids must be contiguous starting at 0 (got " +
                                      std::to_string(trial) + " after " +
                                      std::to_string(cur_trial) + ")");
            if (e.trials.size() >= 2 &&
                e.trials.back().population.size() != e.trials.front().population.size())
                throw ValidationError(path + ": trial " + std::to_string(cur_trial) +
                                      " ends at year " + std::to_string(expect_year - 1) +
                                      ", expected " +
                                      std::to_string(e.trials.front().grid.start +
                                                     static_cast<int>(
                                                         e.trials.front().population.size()) -
                                                     1));
            cur_trial = trial;
            TrialScenario t;
            t.trial_id = trial;
            t.grid = e.trials.empty() ? YearGrid{static_cast<int>(year), static_cast<int>(year)}
                                      : e.trials.front().grid;
            if (!e.trials.empty() && year != e.trials.front().grid.start)
                throw ValidationError(ctx + ": trial " + std::to_string(trial) +
                                      " starts at year " + std::to_string(year) +
                                      ", expected " + std::to_string(e.trials.front().grid.start));
            e.trials.push_back(std::move(t));
            expect_year = static_cast<int>(year);
        }
        if (year != expect_year)
            throw ValidationError(path + ": trial " + std::to_string(trial) +
                                  " missing year " + std::to_string(expect_year) +
                                  " (found " + std::to_string(year) + ")");
        ++expect_year;
        TrialScenario& t = e.trials.back();
        auto cell = [&](int col, const char* name) {
            const double v =
                csv::parse_double(row[static_cast<size_t>(col)], ctx + " column " + name);
            if (!(v > 0.0) || !std::isfinite(v))
                throw ValidationError("non-positive " + std::string(name) + " at (trial " +
                                      std::to_string(trial) + ", year " + std::to_string(year) +
                                      ")");
            return v;
        };
        t.population.push_back(cell(c_pop, "pop"));
        t.gdp.push_back(cell(c_gdp, "gdp"));
        t.emissions_co2.push_back(cell(c_co2, "co2"));
        t.emissions_ch4.push_back(cell(c_ch4, "ch4"));
        t.emissions_n2o.push_back(cell(c_n2o, "n2o"));
    }
    if (e.trials.empty()) throw ValidationError(path + ": no data rows");
    if (e.trials.size() >= 2 &&
        e.trials.back().population.size() != e.trials.front().population.size())
        throw ValidationError(path + ": trial " + std::to_string(cur_trial) + " ends at year " +
                              std::to_string(expect_year - 1) + ", expected " +
                              std::to_string(e.trials.front().grid.start +
                                             static_cast<int>(e.trials.front().population.size()) -
                                             1));
    // fix up first trial's grid end, then stamp it on everyone
    YearGrid g{e.trials.front().grid.start,
               e.trials.front().grid.start + static_cast<int>(e.trials.front().population.size()) - 1};
    for (auto& t : e.trials) t.grid = g;
    uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto& t : e.trials)
        h = fnv1a64(std::to_string(t.trial_id) + ":" + std::to_string(t.population.size()), h);
    e.checksum = h;
    e.validate();
    return e;
}

// ---------------------------------------------------------------------------
// Synthetic ensemble. The deterministic target paths reproduce the published
// summary statistics (population peaking at 392M in 2150 and easing below
// 370M by 2300; mean per-capita growth 1.7% in 2021, 1.5% through 2100,
// leveling at 1.0% after 2200). Per-trial paths are mean-reverting
// log-deviations around the targets; emissions noise is correlated with
// growth noise.

struct SynthTargets {
    YearGrid grid{2020, 2300};

    double pop_start = 331.0e6;
    double pop_peak = 392.0e6;
    int pop_peak_year = 2150;
    double pop_end = 366.0e6;

    double g0 = 0.017;       // per-capita growth in 2021
    double g_mid = 0.015;    // plateau reached by 2030, held to 2100
    double g_late = 0.010;   // level after 2200
    int g_mid_year = 2030;
    int g_decline_start = 2100;
    int g_late_year = 2200;

    double income0 = 63500.0;  // 2020 per-capita GDP, 2020USD

    // noise controls
    double pop_sd = 0.05;           // stationary sd of log population deviation
    double pop_phi = 0.985;
    double growth_sd = 0.009;       // stationary sd of annual growth deviation
    double growth_phi = 0.85;
    double growth_trend_sd = 0.0028;  // permanent per-trial growth offset
    double emis_sd = 0.15;          // stationary sd of log emissions factor
    double emis_phi = 0.95;
    double emis_growth_corr = 0.6;  // correlation with growth innovations

    // central global emissions path knots (year -> level)
    std::vector<double> co2_knot_years{2020, 2030, 2060, 2100, 2150, 2300};
    std::vector<double> co2_knots{39.5, 42.5, 37.0, 24.0, 11.0, 5.0};
    std::vector<double> ch4_knot_years{2020, 2050, 2100, 2300};
    std::vector<double> ch4_knots{375.0, 360.0, 290.0, 240.0};
    std::vector<double> n2o_knot_years{2020, 2100, 2300};
    std::vector<double> n2o_knots{10.0, 8.8, 7.0};

    void validate() const {
        if (pop_peak_year <= grid.start)
            throw ConfigError("synth targets: population peak year precedes grid start");
        if (!(pop_peak > 0 && pop_start > 0 && pop_end > 0))
            throw ConfigError("synth targets: populations must be positive");
        if (!(income0 > 0)) throw ConfigError("synth targets: income0 must be positive");
        if (!(grid.end > pop_peak_year)) throw ConfigError("synth targets: grid ends before peak");
    }
};

namespace detail {

// smooth S-curve between (x0,y0) and (x1,y1); flat at both ends
inline double cos_ramp(double x, double x0, double x1, double y0, double y1) {
    if (x <= x0) return y0;
    if (x >= x1) return y1;
    const double u = (x - x0) / (x1 - x0);
    const double w = 0.5 - 0.5 * std::cos(3.14159265358979323846 * u);
    return y0 + w * (y1 - y0);
}

}  // namespace detail

inline double target_population(const SynthTargets& t, int year) {
    if (year <= t.pop_peak_year)
        return detail::cos_ramp(year, t.grid.start, t.pop_peak_year, t.pop_start, t.pop_peak);
    return detail::cos_ramp(year, t.pop_peak_year, t.grid.end, t.pop_peak, t.pop_end);
}

inline double target_growth(const SynthTargets& t, int year) {
    if (year <= t.g_mid_year) return detail::cos_ramp(year, t.grid.start + 1, t.g_mid_year, t.g0, t.g_mid);
    if (year <= t.g_decline_start) return t.g_mid;
    return detail::cos_ramp(year, t.g_decline_start, t.g_late_year, t.g_mid, t.g_late);
}

inline double target_emissions(const std::vector<double>& knot_years,
                               const std::vector<double>& knots, int year) {
    PiecewiseLinear pl{knot_years, knots};
    return pl(static_cast<double>(year));
}

inline ScenarioEnsemble synth_ensemble(long n_trials, uint64_t seed, const SynthTargets& targets) {
    if (n_trials < 1) throw ConfigError("synth_ensemble: n_trials must be >= 1");
    targets.validate();
    const YearGrid grid = targets.grid;
    const int ny = grid.size();

    ScenarioEnsemble e;
    e.source_label = "synthetic(seed=" + std::to_string(seed) + ")";
    e.trials.reserve(static_cast<size_t>(n_trials));

    for (long id = 0; id < n_trials; ++id) {
        Rng rp(seed, static_cast<uint64_t>(id), "scenario:pop");
        Rng rg(seed, static_cast<uint64_t>(id), "scenario:growth");
        Rng re(seed, static_cast<uint64_t>(id), "scenario:emissions");

        TrialScenario t;
        t.trial_id = id;
        t.grid = grid;
        t.population.resize(static_cast<size_t>(ny));
        t.gdp.resize(static_cast<size_t>(ny));
        t.emissions_co2.resize(static_cast<size_t>(ny));
        t.emissions_ch4.resize(static_cast<size_t>(ny));
        t.emissions_n2o.resize(static_cast<size_t>(ny));

        // population: AR(1) log deviation, variance-corrected so the
        // cross-trial mean equals the target path exactly in expectation
        double xp = 0.0;
        double var_xp = 0.0;
        const double sp = targets.pop_sd;
        const double php = targets.pop_phi;
        const double innov_p = sp * std::sqrt(std::max(0.0, 1.0 - php * php));
        for (int i = 0; i < ny; ++i) {
            if (i > 0) {
                xp = php * xp + innov_p * rp.normal();
                var_xp = php * php * var_xp + innov_p * innov_p;
            }
            t.population[static_cast<size_t>(i)] =
                target_population(targets, grid.year_at(i)) * std::exp(xp - 0.5 * var_xp);
        }

        // per-capita growth: permanent trial offset + AR(1) deviation
        const double mu = targets.growth_trend_sd * rg.normal();
        double xg = 0.0;
        const double sg = targets.growth_sd;
        const double phg = targets.growth_phi;
        const double innov_g = sg * std::sqrt(std::max(0.0, 1.0 - phg * phg));
        double pc = targets.income0;
        t.gdp[0] = pc * t.population[0];
        std::vector<double> g_innovations(static_cast<size_t>(ny), 0.0);
        for (int i = 1; i < ny; ++i) {
            const double eps = rg.normal();
            g_innovations[static_cast<size_t>(i)] = eps;
            xg = phg * xg + innov_g * eps;
            const double g = target_growth(targets, grid.year_at(i)) + mu + xg;
            pc *= 1.0 + g;
            if (!(pc > 0.0))
                throw NumericalError("synthetic income non-positive at trial " +
                                     std::to_string(id) + ", year " +
                                     std::to_string(grid.year_at(i)));
            t.gdp[static_cast<size_t>(i)] = pc * t.population[static_cast<size_t>(i)];
        }

        // emissions: central path times a mean-one lognormal factor whose
        // innovations share a component with the growth innovations
        double xe = 0.0;
        double var_xe = 0.0;
        const double se = targets.emis_sd;
        const double phe = targets.emis_phi;
        const double innov_e = se * std::sqrt(std::max(0.0, 1.0 - phe * phe));
        const double c = targets.emis_growth_corr;
        const double c_ind = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int i = 0; i < ny; ++i) {
            if (i > 0) {
                const double eps = c * g_innovations[static_cast<size_t>(i)] + c_ind * re.normal();
                xe = phe * xe + innov_e * eps;
                var_xe = phe * phe * var_xe + innov_e * innov_e;
            }
            const double f = std::exp(xe - 0.5 * var_xe);
            const int year = grid.year_at(i);
            t.emissions_co2[static_cast<size_t>(i)] =
                f * target_emissions(targets.co2_knot_years, targets.co2_knots, year);
            t.emissions_ch4[static_cast<size_t>(i)] =
                f * target_emissions(targets.ch4_knot_years, targets.ch4_knots, year);
            t.emissions_n2o[static_cast<size_t>(i)] =
                f * target_emissions(targets.n2o_knot_years, targets.n2o_knots, year);
        }

        e.trials.push_back(std::move(t));
    }
    e.checksum = seed;
    return e;
}

}  // namespace uscghg

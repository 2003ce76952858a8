#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "uscghg/climate.hpp"
#include "uscghg/common.hpp"
#include "uscghg/csv.hpp"

namespace uscghg {

// Downscaling pattern for one GCM: U.S. mean surface temperature responds
// affinely to the GMST anomaly measured against the 1980-2010 window.
struct GcmPattern {
    std::string name;
    double tcr = 0.0;       // degC
    double ecs = 0.0;       // degC
    double slope = 1.0;     // degC US per degC GMST anomaly
    double intercept = 0.0; // degC offset

    void validate() const {
        if (!(tcr > 0 && ecs > 0)) throw ConfigError("gcm pattern '" + name + "': tcr, ecs must be > 0");
        if (!(slope > 0)) throw ConfigError("gcm pattern '" + name + "': slope must be > 0");
    }
};

// The four CONUS models evaluated for the U.S. minimum set, with TCR/ECS from
// the CMIP6 assessment they were ranked under. Slopes are the fitted CONUS
// amplification of GMST anomalies.
inline std::vector<GcmPattern> default_gcm_patterns() {
    return {
        {"NorESM2-LM", 1.48, 2.60, 1.37, 0.0},
        {"GFDL-ESM4", 1.61, 2.62, 1.43, 0.0},
        {"MPI-ESM1-2-HR", 1.65, 2.97, 1.50, 0.0},
        {"EC-Earth3-Veg", 2.61, 4.30, 1.58, 0.0},
    };
}

// Evaluated-ensemble means used to normalize the hotness index. These are the
// means of the full 18-model evaluated set, not of the 4-model subset.
struct EnsembleMeans {
    double mean_tcr = 2.00;
    double mean_ecs = 3.78;
};

inline double weighted_sum(const GcmPattern& g, const EnsembleMeans& means) {
    if (!(means.mean_tcr > 0 && means.mean_ecs > 0))
        throw ConfigError("ensemble means must be positive");
    return g.tcr / means.mean_tcr + g.ecs / means.mean_ecs;
}

struct PairingTable {
    std::map<long, std::string> assignments;  // param-set id -> gcm name
    std::vector<long> group_sizes;            // coolest group first

    const std::string& gcm_for(long param_id) const {
        auto it = assignments.find(param_id);
        if (it == assignments.end())
            throw ValidationError("param set " + std::to_string(param_id) + " has no paired GCM");
        return it->second;
    }
};

// Sorts parameter sets by 2100 warmth (ties broken by id), splits them into
// |gcms| contiguous groups with any remainder going to the coolest groups,
// and assigns group k the GCM of weighted-sum rank k.
inline PairingTable build_pairing(const std::vector<std::pair<long, double>>& warmths,
                                  std::vector<GcmPattern> gcms,
                                  const EnsembleMeans& means = {}) {
    if (warmths.empty() || gcms.empty())
        throw ValidationError("build_pairing: warmths and gcms must be non-empty");
    for (const auto& [id, w] : warmths)
        if (!std::isfinite(w))
            throw ValidationError("build_pairing: non-finite warmth for param set " +
                                  std::to_string(id));

    std::sort(gcms.begin(), gcms.end(), [&](const GcmPattern& a, const GcmPattern& b) {
        const double wa = weighted_sum(a, means);
        const double wb = weighted_sum(b, means);
        if (wa != wb) return wa < wb;
        return a.name < b.name;
    });

    std::vector<std::pair<long, double>> order = warmths;
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });

    const long n = static_cast<long>(order.size());
    const long groups = static_cast<long>(gcms.size());
    const long base = n / groups;
    const long remainder = n % groups;

    PairingTable table;
    table.group_sizes.resize(static_cast<size_t>(groups));
    long cursor = 0;
    for (long g = 0; g < groups; ++g) {
        const long size = base + (g < remainder ? 1 : 0);  // extras to the coolest groups
        table.group_sizes[static_cast<size_t>(g)] = size;
        for (long i = 0; i < size; ++i) {
            table.assignments[order[static_cast<size_t>(cursor)].first] =
                gcms[static_cast<size_t>(g)].name;
            ++cursor;
        }
    }
    return table;
}

struct UsTempPath {
    YearGrid grid;
    std::vector<double> level;  // degC, population-weighted U.S. mean surface temperature
};

inline constexpr double kUsBaselineTempC = 13.62;  // 1980-2010 U.S. mean

inline UsTempPath downscale(const GmstPath& g, const GcmPattern& pattern,
                            double us_baseline = kUsBaselineTempC) {
    pattern.validate();
    UsTempPath out;
    out.grid = g.grid;
    out.level.reserve(g.anomaly.size());
    for (double a : g.anomaly) {
        const double level = us_baseline + pattern.intercept + pattern.slope * (a - g.ref_anomaly);
        if (!std::isfinite(level)) throw NumericalError("non-finite downscaled temperature");
        out.level.push_back(level);
    }
    return out;
}

// Offline validation harness: mean absolute error of the patterned series
// against an observed U.S. temperature record on the same grid.
inline double pattern_mae(const GmstPath& observed_gmst, const std::vector<double>& observed_us,
                          const GcmPattern& pattern, double us_baseline = kUsBaselineTempC) {
    if (observed_us.size() != observed_gmst.anomaly.size())
        throw ValidationError("pattern_mae: series length mismatch");
    const UsTempPath modeled = downscale(observed_gmst, pattern, us_baseline);
    double err = 0.0;
    for (size_t i = 0; i < observed_us.size(); ++i)
        err += std::abs(modeled.level[i] - observed_us[i]);
    return err / static_cast<double>(observed_us.size());
}

inline void write_pairing(const PairingTable& table, const std::string& path) {
    csv::Writer w(path);
    w.row({"param_id", "gcm"});
    for (const auto& [id, gcm] : table.assignments) w.row({std::to_string(id), gcm});
}

inline std::vector<GcmPattern> load_gcm_patterns(const std::string& path) {
    const csv::Table tab = csv::read_file(path);
    const int c_name = tab.require_column("name");
    const int c_tcr = tab.require_column("tcr");
    const int c_ecs = tab.require_column("ecs");
    const int c_slope = tab.require_column("slope");
    const int c_int = tab.require_column("intercept");
    std::vector<GcmPattern> out;
    for (size_t r = 0; r < tab.rows.size(); ++r) {
        const auto& row = tab.rows[r];
        const std::string ctx = path + " row " + std::to_string(r + 2);
        GcmPattern g;
        g.name = row[static_cast<size_t>(c_name)];
        g.tcr = csv::parse_double(row[static_cast<size_t>(c_tcr)], ctx);
        g.ecs = csv::parse_double(row[static_cast<size_t>(c_ecs)], ctx);
        g.slope = csv::parse_double(row[static_cast<size_t>(c_slope)], ctx);
        g.intercept = csv::parse_double(row[static_cast<size_t>(c_int)], ctx);
        g.validate();
        out.push_back(g);
    }
    if (out.empty()) throw ValidationError(path + ": no patterns");
    return out;
}

}  // namespace uscghg

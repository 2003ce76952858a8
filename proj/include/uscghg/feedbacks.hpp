#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "uscghg/climate.hpp"
#include "uscghg/common.hpp"
#include "uscghg/config.hpp"
#include "uscghg/rng.hpp"

namespace uscghg {

// Trigger hazard: probability per year that dieback begins, linear in GMST
// above a threshold, clamped to [0, 1]. The linear-above-threshold form is a
// provisional stand-in; see config docs.
struct HazardParams {
    double slope = 0.0025;  // probability per year per degC above threshold
    double threshold = 0.5; // degC anomaly

    double operator()(double gmst) const {
        if (slope < 0.0) throw ConfigError("hazard slope must be >= 0");
        const double h = slope * std::max(0.0, gmst - threshold);
        return std::min(1.0, std::max(0.0, h));
    }
};

struct AmazonState {
    bool triggered = false;
    std::optional<int> trigger_year;
    double duration = 50.0;   // years, drawn from triangular(10, 50, 250)
    double released = 0.0;    // cumulative GtCO2
    double budget = 183.0;    // total GtCO2
    HazardParams hazard;
};

// One annual step. When untriggered, the dieback starts iff the uniform draw
// falls below the hazard. Once running, the budget is released evenly over
// the sampled duration; the final year emits the exact remainder so the
// cumulative release equals the budget.
inline double amazon_step(AmazonState& s, int year, double gmst, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("amazon_step: uniform draw outside [0,1]");
    if (!s.triggered) {
        if (u < s.hazard(gmst)) {
            s.triggered = true;
            s.trigger_year = year;
        } else {
            return 0.0;
        }
    }
    if (s.released >= s.budget) return 0.0;
    const double rate = s.budget / s.duration;
    const double emit = std::min(rate, s.budget - s.released);
    s.released += emit;
    return emit;
}

// Three-reservoir permafrost carbon store. Thaw moves frozen carbon out at a
// rate proportional to warming; a passive share is locked away and the rest
// decomposes into CO2 and CH4. All stocks are GtC.
struct PermafrostParams {
    double frozen_stock0 = 1035.0;  // GtC initially frozen
    double thaw_rate = 5.0e-4;      // per year per degC
    double decomp_rate = 0.02;      // per year
    double ch4_fraction = 0.023;    // carbon share decomposing to CH4
    double passive_fraction = 0.40; // thawed share routed to the passive pool
};

struct PermafrostState {
    PermafrostParams params;
    double frozen = 1035.0;
    double thawed_active = 0.0;
    double passive = 0.0;
    double cumulative_emitted_c = 0.0;
};

struct PermafrostFlows {
    double co2_gt = 0.0;  // GtCO2
    double ch4_mt = 0.0;  // MtCH4
};

inline constexpr double kGtCo2PerGtC = 44.0095 / 12.011;
inline constexpr double kGtCh4PerGtC = 16.0425 / 12.011;

inline PermafrostFlows permafrost_step(PermafrostState& s, double gmst) {
    const PermafrostParams& p = s.params;
    const double thaw = std::min(1.0, p.thaw_rate * std::max(0.0, gmst)) * s.frozen;
    s.frozen -= thaw;
    s.passive += p.passive_fraction * thaw;
    s.thawed_active += (1.0 - p.passive_fraction) * thaw;

    const double decomposed = std::min(1.0, p.decomp_rate) * s.thawed_active;
    s.thawed_active -= decomposed;
    s.cumulative_emitted_c += decomposed;

    PermafrostFlows flows;
    const double ch4_c = p.ch4_fraction * decomposed;
    flows.co2_gt = (decomposed - ch4_c) * kGtCo2PerGtC;
    flows.ch4_mt = ch4_c * kGtCh4PerGtC * 1000.0;
    return flows;
}

struct FeedbackConfig {
    bool amazon_enabled = true;
    bool permafrost_enabled = true;
    HazardParams hazard;
    double amazon_budget = 183.0;  // GtCO2
    Dist amazon_duration{Dist::Family::Triangular, {10.0, 50.0, 250.0}};
    Dist pf_frozen_stock{Dist::Family::TruncNormal, {1035.0, 150.0}};
    Dist pf_thaw_rate{Dist::Family::TruncNormal, {5.0e-4, 2.0e-4}};
    Dist pf_decomp_rate{Dist::Family::TruncNormal, {0.02, 0.005}};
    Dist pf_ch4_fraction{Dist::Family::TruncNormal, {0.023, 0.006}};
    Dist pf_passive_fraction{Dist::Family::TruncNormal, {0.40, 0.10}};
};

inline std::pair<AmazonState, PermafrostState> sample_feedback_states(uint64_t seed, long trial_id,
                                                                      const FeedbackConfig& cfg) {
    Rng rng(seed, static_cast<uint64_t>(trial_id), "feedback:sample");
    AmazonState amazon;
    amazon.hazard = cfg.hazard;
    amazon.budget = cfg.amazon_budget;
    amazon.duration = cfg.amazon_duration.sample(rng);

    PermafrostState pf;
    pf.params.frozen_stock0 = cfg.pf_frozen_stock.sample(rng);
    pf.params.thaw_rate = cfg.pf_thaw_rate.sample(rng);
    pf.params.decomp_rate = cfg.pf_decomp_rate.sample(rng);
    pf.params.ch4_fraction = std::min(1.0, cfg.pf_ch4_fraction.sample(rng));
    pf.params.passive_fraction = std::min(1.0, cfg.pf_passive_fraction.sample(rng));
    pf.frozen = pf.params.frozen_stock0;
    return {amazon, pf};
}

// Everything random a trial's feedbacks need, drawn once so the baseline and
// pulse runs consume identical draws (common random numbers).
struct FeedbackDraws {
    AmazonState amazon0;
    PermafrostState permafrost0;
    std::vector<double> amazon_uniforms;  // one per projection year
    bool amazon_enabled = true;
    bool permafrost_enabled = true;
};

inline FeedbackDraws draw_feedbacks(uint64_t seed, long trial_id, const FeedbackConfig& cfg,
                                    const YearGrid& grid) {
    FeedbackDraws d;
    auto [amazon, pf] = sample_feedback_states(seed, trial_id, cfg);
    d.amazon0 = amazon;
    d.permafrost0 = pf;
    d.amazon_enabled = cfg.amazon_enabled;
    d.permafrost_enabled = cfg.permafrost_enabled;
    Rng u(seed, static_cast<uint64_t>(trial_id), "feedback:amazon_u");
    d.amazon_uniforms.resize(static_cast<size_t>(grid.size()));
    for (auto& x : d.amazon_uniforms) x = u.uniform();
    return d;
}

// Per-run feedback state machine; construct one per emulator run from the
// shared draws.
class FeedbackRunner {
public:
    FeedbackRunner(const FeedbackDraws& draws, const YearGrid& grid)
        : draws_(&draws), grid_(grid), amazon_(draws.amazon0), permafrost_(draws.permafrost0) {}

    FeedbackFlows operator()(int year, double gmst) {
        FeedbackFlows flows;
        if (draws_->amazon_enabled) {
            const double u = draws_->amazon_uniforms[static_cast<size_t>(grid_.index(year))];
            flows.co2_gt += amazon_step(amazon_, year, gmst, u);
        }
        if (draws_->permafrost_enabled) {
            const PermafrostFlows pf = permafrost_step(permafrost_, gmst);
            flows.co2_gt += pf.co2_gt;
            flows.ch4_mt += pf.ch4_mt;
        }
        return flows;
    }

    const AmazonState& amazon() const { return amazon_; }
    const PermafrostState& permafrost() const { return permafrost_; }

private:
    const FeedbackDraws* draws_;
    YearGrid grid_;
    AmazonState amazon_;
    PermafrostState permafrost_;
};

}  // namespace uscghg

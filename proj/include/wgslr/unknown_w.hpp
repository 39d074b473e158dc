#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "wgslr/evidence.hpp"
#include "wgslr/rng.hpp"
#include "wgslr/scaled_beta.hpp"

namespace wgslr {

enum class WoEMethod { known, plugin, integrate_mc, integrate_quad, profile };

std::string_view to_string(WoEMethod m) noexcept;
WoEMethod parse_woe_method(std::string_view s);

struct WoEResult {
    double woe = 0.0;
    WoEMethod method = WoEMethod::known;
    /// Maximising w_t under H1 / H2 (profile only).
    std::optional<double> w_hat_h1;
    std::optional<double> w_hat_h2;
    /// Standard error of the Monte Carlo mean (integrate-mc only).
    std::optional<double> mc_std_error;
    /// Per-marker contributions in marker order; they sum to `woe`.
    std::vector<double> marker_contributions;
};

inline constexpr std::size_t kDefaultMcSamples = 1000;
inline constexpr double kDefaultQuadTolerance = 1e-8;

WoEResult woe_known_result(const CaseData& evidence, ErrorProb w_t, ErrorProb w_r);

/// Trace error probability set to the reference one.
WoEResult woe_plugin(const CaseData& evidence, ErrorProb w_r);

/// Monte Carlo prior-predictive WoE: sum_j E[log10 P(E_j|H1,w_t)] - E[log10 P(E_j|H2,w_t)]
/// with one set of prior draws shared by every marker and both hypotheses.
WoEResult woe_integrate_mc(const CaseData& evidence, const ScaledBeta& prior, ErrorProb w_r,
                           std::size_t n_samples, Rng& rng);

/// Distinct priors per hypothesis; each term gets its own draws.
WoEResult woe_integrate_mc(const CaseData& evidence, const ScaledBeta& prior_h1, const ScaledBeta& prior_h2,
                           ErrorProb w_r, std::size_t n_samples, Rng& rng);

/// Same expectation by adaptive quadrature per marker, absolute error target
/// `tol` per marker and hypothesis. Throws NumericError naming the marker on
/// failure.
WoEResult woe_integrate_quad(const CaseData& evidence, const ScaledBeta& prior, ErrorProb w_r,
                             double tol = kDefaultQuadTolerance);
WoEResult woe_integrate_quad(const CaseData& evidence, const ScaledBeta& prior_h1, const ScaledBeta& prior_h2,
                             ErrorProb w_r, double tol = kDefaultQuadTolerance);

/// Profile likelihood: each hypothesis takes its own maximising w_t in
/// [lower, upper]. An upper bound of 1/2 is searched up to the largest
/// double below it.
WoEResult woe_profile(const CaseData& evidence, ErrorProb w_r, double lower = 0.0, double upper = 0.5);

/// max over w_t in [lower, upper] of log10 P(E | h, w_t, w_r).
struct ProfileMaximum {
    double w_hat;
    double log10_likelihood;
};
ProfileMaximum profile_maximum(const CaseData& evidence, Hypothesis h, ErrorProb w_r, double lower = 0.0,
                               double upper = 0.5);

} // namespace wgslr

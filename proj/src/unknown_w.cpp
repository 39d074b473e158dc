#include "wgslr/unknown_w.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "patterns.hpp"
#include "wgslr/errors.hpp"
#include "wgslr/optimize.hpp"

namespace wgslr {

using detail::CasePatterns;
using detail::MarkerPattern;

std::string_view to_string(WoEMethod m) noexcept {
    switch (m) {
    case WoEMethod::known: return "known";
    case WoEMethod::plugin: return "plug-in";
    case WoEMethod::integrate_mc: return "integrate-mc";
    case WoEMethod::integrate_quad: return "integrate-quad";
    case WoEMethod::profile: return "profile";
    }
    return "?";
}

WoEMethod parse_woe_method(std::string_view s) {
    for (auto m : {WoEMethod::known, WoEMethod::plugin, WoEMethod::integrate_mc, WoEMethod::integrate_quad,
                   WoEMethod::profile}) {
        if (to_string(m) == s) return m;
    }
    throw DomainError("unknown WoE method '" + std::string(s) + "'");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Expands per-pattern (H1 term, H2 term) into per-marker contributions and
// sums them in marker order.
void fill_from_patterns(WoEResult& out, const CasePatterns& cp, const std::vector<double>& h1,
                        const std::vector<double>& h2) {
    out.marker_contributions.clear();
    out.marker_contributions.reserve(cp.marker_pattern.size());
    double total = 0.0;
    for (std::size_t k : cp.marker_pattern) {
        const double c = h1[k] - h2[k];
        out.marker_contributions.push_back(c);
        total += c;
    }
    out.woe = total;
}

double sample_sd(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0));
}

bool all_finite(const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

struct DrawSums {
    std::vector<double> pattern_mean;  // mean over draws of log10 P(pattern | h)
    std::vector<double> case_level;    // per draw: sum_k count_k log10 P(pattern_k | h)
};

DrawSums accumulate(const CasePatterns& cp, Hypothesis h, const std::vector<double>& draws,
                    const ErrorChannel& r) {
    DrawSums out{std::vector<double>(cp.patterns.size(), 0.0), {}};
    out.case_level.reserve(draws.size());
    for (double w : draws) {
        const ErrorChannel t(ErrorProb{w});
        double level = 0.0;
        for (std::size_t k = 0; k < cp.patterns.size(); ++k) {
            const double l = detail::log10_prob(h, cp.patterns[k], t, r);
            out.pattern_mean[k] += l;
            level += cp.patterns[k].count * l;
        }
        out.case_level.push_back(level);
    }
    const double s = static_cast<double>(draws.size());
    for (double& v : out.pattern_mean) v /= s;
    return out;
}

void check_samples(std::size_t n_samples) {
    if (n_samples < 2) throw DomainError("Monte Carlo integration needs at least 2 samples");
}

// Integral of log10 P(pattern | h, w_t) against the prior density, computed on
// the unit-interval variable u = 2 w_t with the beta density, split at the
// mode and at prior quantiles so concentrated priors are resolved.
// Integrates over the prior's probability scale, p = F(u), so the density
// drops out and endpoint singularities of the beta density vanish. Quantiles
// are cached because every pattern visits the same abscissas.
class PriorQuadrature {
  public:
    PriorQuadrature(const ScaledBeta& prior, double tol) : prior_(prior), tol_(tol) {}

    /// Returns false when the error estimate exceeds the tolerance.
    bool integrate(const MarkerPattern& pt, Hypothesis h, const ErrorChannel& r, double& value) const {
        auto f = [&](double p) {
            const ErrorChannel t = detail::channel_clamped(0.5 * unit_quantile(p));
            return detail::log10_prob(h, pt, t, r);
        };
        double err = 0.0;
        double l1 = 0.0;
        try {
            value = integrator_.integrate(f, 0.0, 1.0, std::min(1e-10, tol_), &err, &l1);
        } catch (const std::exception&) {
            return false;
        }
        return std::isfinite(value) && err <= tol_;
    }

  private:
    double unit_quantile(double p) const {
        if (auto it = quantiles_.find(p); it != quantiles_.end()) return it->second;
        const double u = boost::math::ibeta_inv(prior_.alpha(), prior_.beta(), p);
        quantiles_.emplace(p, u);
        return u;
    }

    ScaledBeta prior_;
    double tol_;
    mutable std::unordered_map<double, double> quantiles_;
    mutable boost::math::quadrature::tanh_sinh<double> integrator_{15};
};

std::vector<double> quad_terms(const CaseData& evidence, const CasePatterns& cp, Hypothesis h,
                               const ScaledBeta& prior, const ErrorChannel& r, double tol) {
    const PriorQuadrature quad(prior, tol);
    std::vector<double> out(cp.patterns.size());
    for (std::size_t k = 0; k < cp.patterns.size(); ++k) {
        if (!quad.integrate(cp.patterns[k], h, r, out[k])) {
            std::size_t j = 0;
            while (cp.marker_pattern[j] != k) ++j;
            throw NumericError("quadrature did not converge under " + std::string(to_string(h)) +
                               " at marker " + evidence.label(j));
        }
    }
    return out;
}

void check_profile_bounds(double lower, double upper) {
    if (!(lower >= 0.0 && lower <= upper && upper <= 0.5)) {
        throw DomainError("profile bounds must satisfy 0 <= lower <= upper <= 1/2");
    }
}

} // namespace

WoEResult woe_known_result(const CaseData& evidence, ErrorProb w_t, ErrorProb w_r) {
    WoEResult out;
    out.method = WoEMethod::known;
    out.marker_contributions = marker_log10_lr(evidence, w_t, w_r);
    double total = 0.0;
    for (double v : out.marker_contributions) {
        if (v == kNegInf) {
            total = kNegInf;
            break;
        }
        total += v;
    }
    out.woe = total;
    return out;
}

WoEResult woe_plugin(const CaseData& evidence, ErrorProb w_r) {
    WoEResult out = woe_known_result(evidence, w_r, w_r);
    out.method = WoEMethod::plugin;
    return out;
}

WoEResult woe_integrate_mc(const CaseData& evidence, const ScaledBeta& prior, ErrorProb w_r,
                           std::size_t n_samples, Rng& rng) {
    check_samples(n_samples);
    const auto cp = detail::compress(evidence);
    const ErrorChannel r(w_r);
    const auto draws = prior.sample(rng, n_samples);
    const auto s1 = accumulate(cp, Hypothesis::H1, draws, r);
    const auto s2 = accumulate(cp, Hypothesis::H2, draws, r);

    WoEResult out;
    out.method = WoEMethod::integrate_mc;
    fill_from_patterns(out, cp, s1.pattern_mean, s2.pattern_mean);

    std::vector<double> diff(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) diff[s] = s1.case_level[s] - s2.case_level[s];
    out.mc_std_error = all_finite(diff) ? sample_sd(diff) / std::sqrt(static_cast<double>(n_samples))
                                        : std::numeric_limits<double>::infinity();
    return out;
}

WoEResult woe_integrate_mc(const CaseData& evidence, const ScaledBeta& prior_h1, const ScaledBeta& prior_h2,
                           ErrorProb w_r, std::size_t n_samples, Rng& rng) {
    check_samples(n_samples);
    const auto cp = detail::compress(evidence);
    const ErrorChannel r(w_r);
    const auto draws1 = prior_h1.sample(rng, n_samples);
    const auto draws2 = prior_h2.sample(rng, n_samples);
    const auto s1 = accumulate(cp, Hypothesis::H1, draws1, r);
    const auto s2 = accumulate(cp, Hypothesis::H2, draws2, r);

    WoEResult out;
    out.method = WoEMethod::integrate_mc;
    fill_from_patterns(out, cp, s1.pattern_mean, s2.pattern_mean);
    if (all_finite(s1.case_level) && all_finite(s2.case_level)) {
        const double sd1 = sample_sd(s1.case_level);
        const double sd2 = sample_sd(s2.case_level);
        out.mc_std_error = std::sqrt((sd1 * sd1 + sd2 * sd2) / static_cast<double>(n_samples));
    } else {
        out.mc_std_error = std::numeric_limits<double>::infinity();
    }
    return out;
}

WoEResult woe_integrate_quad(const CaseData& evidence, const ScaledBeta& prior, ErrorProb w_r, double tol) {
    return woe_integrate_quad(evidence, prior, prior, w_r, tol);
}

WoEResult woe_integrate_quad(const CaseData& evidence, const ScaledBeta& prior_h1, const ScaledBeta& prior_h2,
                             ErrorProb w_r, double tol) {
    if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    const auto cp = detail::compress(evidence);
    const ErrorChannel r(w_r);
    const auto h1 = quad_terms(evidence, cp, Hypothesis::H1, prior_h1, r, 0.5 * tol);
    const auto h2 = quad_terms(evidence, cp, Hypothesis::H2, prior_h2, r, 0.5 * tol);
    WoEResult out;
    out.method = WoEMethod::integrate_quad;
    fill_from_patterns(out, cp, h1, h2);
    return out;
}

ProfileMaximum profile_maximum(const CaseData& evidence, Hypothesis h, ErrorProb w_r, double lower,
                               double upper) {
    check_profile_bounds(lower, upper);
    const auto cp = detail::compress(evidence);
    const ErrorChannel r(w_r);
    const double hi = std::min(upper, std::nextafter(0.5, 0.0));
    const double lo = std::min(lower, hi);
    auto objective = [&](double w) {
        return detail::log10_likelihood(cp, h, detail::channel_clamped(w), r);
    };
    const ScalarMaximum best = maximize_bounded(objective, lo, hi);
    return {best.x, best.value};
}

WoEResult woe_profile(const CaseData& evidence, ErrorProb w_r, double lower, double upper) {
    const auto m1 = profile_maximum(evidence, Hypothesis::H1, w_r, lower, upper);
    const auto m2 = profile_maximum(evidence, Hypothesis::H2, w_r, lower, upper);

    const auto cp = detail::compress(evidence);
    const ErrorChannel r(w_r);
    const ErrorChannel t1 = detail::channel_clamped(m1.w_hat);
    const ErrorChannel t2 = detail::channel_clamped(m2.w_hat);
    std::vector<double> h1(cp.patterns.size());
    std::vector<double> h2(cp.patterns.size());
    for (std::size_t k = 0; k < cp.patterns.size(); ++k) {
        h1[k] = detail::log10_prob(Hypothesis::H1, cp.patterns[k], t1, r);
        h2[k] = detail::log10_prob(Hypothesis::H2, cp.patterns[k], t2, r);
    }

    WoEResult out;
    out.method = WoEMethod::profile;
    out.w_hat_h1 = m1.w_hat;
    out.w_hat_h2 = m2.w_hat;
    fill_from_patterns(out, cp, h1, h2);
    // The reported WoE is the difference of the two maxima themselves.
    out.woe = m1.log10_likelihood - m2.log10_likelihood;
    return out;
}

} // namespace wgslr

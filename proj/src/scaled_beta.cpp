#include "wgslr/scaled_beta.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/random/gamma_distribution.hpp>

#include "wgslr/errors.hpp"

namespace wgslr {

ScaledBeta::ScaledBeta(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0 && beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw DomainError("beta shape parameters must be positive and finite");
    }
}

ScaledBeta ScaledBeta::from_moments(double mean, double variance) {
    if (!(mean > 0.0 && mean < 0.5)) {
        throw DomainError("prior mean must lie in (0, 1/2)");
    }
    if (!(variance > 0.0)) {
        throw DomainError("prior variance must be positive");
    }
    // Moments of the unit-interval variable U = 2W.
    const double m = 2.0 * mean;
    const double s2 = 4.0 * variance;
    const double bound = m * (1.0 - m);
    if (!(s2 < bound)) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "prior variance " << variance << " too large for mean " << mean << "; must be below "
            << bound / 4.0;
        throw DomainError(msg.str());
    }
    const double nu = bound / s2 - 1.0;
    return ScaledBeta(m * nu, (1.0 - m) * nu);
}

double ScaledBeta::mean() const noexcept { return 0.5 * alpha_ / (alpha_ + beta_); }

double ScaledBeta::variance() const noexcept {
    const double s = alpha_ + beta_;
    return 0.25 * alpha_ * beta_ / (s * s * (s + 1.0));
}

double ScaledBeta::mode() const noexcept {
    if (alpha_ <= 1.0 && beta_ <= 1.0) {
        return alpha_ < beta_ ? 0.0 : (alpha_ > beta_ ? 0.5 : 0.25);
    }
    if (alpha_ <= 1.0) return 0.0;
    if (beta_ <= 1.0) return 0.5;
    return 0.5 * (alpha_ - 1.0) / (alpha_ + beta_ - 2.0);
}

double ScaledBeta::pdf(double w) const {
    if (!(w >= 0.0 && w <= 0.5)) return 0.0;
    const double u = 2.0 * w;
    if (u == 0.0 || u == 1.0) {
        const double shape = u == 0.0 ? alpha_ : beta_;
        if (shape < 1.0) return std::numeric_limits<double>::infinity();
        if (shape > 1.0) return 0.0;
        const double other = u == 0.0 ? beta_ : alpha_;
        // Beta(1, b) density at its endpoint is b.
        return 2.0 * other;
    }
    return 2.0 * boost::math::ibeta_derivative(alpha_, beta_, u);
}

double ScaledBeta::cdf(double w) const {
    if (w <= 0.0) return 0.0;
    if (w >= 0.5) return 1.0;
    return boost::math::ibeta(alpha_, beta_, 2.0 * w);
}

double ScaledBeta::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("quantile probability must lie in (0, 1)");
    }
    return 0.5 * boost::math::ibeta_inv(alpha_, beta_, p);
}

double ScaledBeta::sample(Rng& rng) const {
    // Gamma ratio; boost's gamma sampler covers shapes below one. Draws that
    // round onto the boundary are rejected to keep the support open.
    boost::random::gamma_distribution<double> ga(alpha_);
    boost::random::gamma_distribution<double> gb(beta_);
    for (;;) {
        const double x = ga(rng);
        const double y = gb(rng);
        const double u = x / (x + y);
        if (u > 0.0 && u < 1.0) return 0.5 * u;
    }
}

std::vector<double> ScaledBeta::sample(Rng& rng, std::size_t n) const {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample(rng));
    return out;
}

} // namespace wgslr

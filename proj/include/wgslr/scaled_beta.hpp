#pragma once

#include <cstddef>
#include <vector>

#include "wgslr/rng.hpp"

namespace wgslr {

/// Beta(alpha, beta) distribution rescaled to the support (0, 1/2):
/// W = U / 2 with U ~ Beta(alpha, beta).
class ScaledBeta {
  public:
    ScaledBeta(double alpha, double beta);

    /// Shapes from the mean and variance on (0, 1/2). Throws DomainError
    /// when the variance is too large for the mean.
    static ScaledBeta from_moments(double mean, double variance);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double mean() const noexcept;
    double variance() const noexcept;
    /// Mode on (0, 1/2), or the boundary it sits on for shapes <= 1.
    double mode() const noexcept;

    /// Density on (0, 1/2). Endpoint values follow the beta limits, so a
    /// shape below one yields +inf at the corresponding endpoint.
    double pdf(double w) const;
    double cdf(double w) const;
    double quantile(double p) const;

    double sample(Rng& rng) const;
    std::vector<double> sample(Rng& rng, std::size_t n) const;

  private:
    double alpha_;
    double beta_;
};

} // namespace wgslr

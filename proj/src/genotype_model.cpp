#include "wgslr/genotype_model.hpp"

#include <cmath>
#include <string>

#include "wgslr/errors.hpp"

namespace wgslr {

Genotype::Genotype(int dosage) : dosage_(dosage) {
    if (dosage < 0 || dosage > 2) {
        throw DomainError("genotype dosage must be 0, 1 or 2, got " + std::to_string(dosage));
    }
}

GenotypePriors::GenotypePriors(double p0, double p1, double p2) : p_{p0, p1, p2} {
    for (double p : p_) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw DomainError("genotype probabilities must lie in [0, 1]");
        }
    }
    if (std::abs(p0 + p1 + p2 - 1.0) > 1e-12) {
        throw DomainError("genotype probabilities must sum to 1");
    }
}

GenotypePriors hwe_priors(double q) {
    if (!(q > 0.0 && q <= 1.0)) {
        throw DomainError("allele frequency must lie in (0, 1], got " + std::to_string(q));
    }
    const double r = 1.0 - q;
    return GenotypePriors(q * q, 2.0 * q * r, r * r);
}

ErrorProb::ErrorProb(double w) : w_(w) {
    if (!(w >= 0.0 && w < 0.5)) {
        throw DomainError("error probability must lie in [0, 1/2), got " + std::to_string(w));
    }
}

ErrorChannel::ErrorChannel(ErrorProb w) : w_(w.value()) {
    const double e = w_;
    const double k = 1.0 - e;
    const double both = k * k;
    const double one = e * k;
    const double two = e * e;
    t_ = {{{both, 2.0 * one, two}, {one, both + two, one}, {two, 2.0 * one, both}}};
}

ErrorChannel error_channel(ErrorProb w) { return ErrorChannel(w); }

double observed_marginal(int x, const GenotypePriors& priors, const ErrorChannel& channel) noexcept {
    const auto& p = priors.probs();
    return p[0] * channel(0, x) + p[1] * channel(1, x) + p[2] * channel(2, x);
}

} // namespace wgslr

#pragma once

// Markers that share (x_t, x_r, priors) have identical likelihoods; every
// case-level sum runs over these distinct patterns weighted by multiplicity.

#include <cmath>
#include <cstddef>
#include <vector>

#include "wgslr/evidence.hpp"

namespace wgslr::detail {

struct MarkerPattern {
    int a;
    int b;
    GenotypePriors priors;
    double count;
};

struct CasePatterns {
    std::vector<MarkerPattern> patterns;       // order of first appearance
    std::vector<std::size_t> marker_pattern;   // marker index -> pattern index
};

CasePatterns compress(const CaseData& evidence);

inline double prob_h1(const MarkerPattern& pt, const ErrorChannel& t, const ErrorChannel& r) noexcept {
    const auto& p = pt.priors.probs();
    return p[0] * t(0, pt.a) * r(0, pt.b) + p[1] * t(1, pt.a) * r(1, pt.b) + p[2] * t(2, pt.a) * r(2, pt.b);
}

inline double prob_h2(const MarkerPattern& pt, const ErrorChannel& t, const ErrorChannel& r) noexcept {
    return observed_marginal(pt.a, pt.priors, t) * observed_marginal(pt.b, pt.priors, r);
}

inline double log10_prob(Hypothesis h, const MarkerPattern& pt, const ErrorChannel& t,
                         const ErrorChannel& r) noexcept {
    return std::log10(h == Hypothesis::H1 ? prob_h1(pt, t, r) : prob_h2(pt, t, r));
}

/// sum over patterns of count * log10 P(pattern | h); -inf when any term is zero.
double log10_likelihood(const CasePatterns& cp, Hypothesis h, const ErrorChannel& t, const ErrorChannel& r);

/// Channel for a w that may sit at the 1/2 limit (search endpoints).
ErrorChannel channel_clamped(double w);

} // namespace wgslr::detail

#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "wgslr/genotype_model.hpp"

namespace wgslr {

/// Duplicate-sample genotype pair counts n[a][b] sharing one set of priors.
class PairCountTable {
  public:
    using Counts = std::array<std::array<std::uint64_t, 3>, 3>;

    PairCountTable(const Counts& counts, const GenotypePriors& priors);

    std::uint64_t operator()(int a, int b) const {
        return n_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    const Counts& counts() const noexcept { return n_; }
    std::uint64_t total() const noexcept;
    const GenotypePriors& priors() const noexcept { return priors_; }

  private:
    Counts n_;
    GenotypePriors priors_;
};

/// Both samples from one donor, both with error probability w.
double pair_prob_same_source(Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w);

/// Natural-log likelihood of the table at w.
double pair_log_likelihood(const PairCountTable& table, double w);

struct WEstimate {
    double w_hat;
    double log_likelihood;
    /// True when the maximum sits on the search boundary (w = 0 or just below 1/2).
    bool boundary;
};

/// Throws DomainError for an all-zero table.
WEstimate estimate_w_mle(const PairCountTable& table);

struct DuplicateObservation {
    Genotype a;
    Genotype b;
    GenotypePriors priors;
};

/// Throws DomainError for an empty list.
WEstimate estimate_w_mle_per_marker(std::span<const DuplicateObservation> observations);

} // namespace wgslr

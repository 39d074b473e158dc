#pragma once

#include <array>
#include <compare>

namespace wgslr {

/// Number of alternate alleles at a biallelic SNP.
class Genotype {
  public:
    explicit Genotype(int dosage);

    int dosage() const noexcept { return dosage_; }
    Genotype relabeled() const noexcept { return Genotype(2 - dosage_); }

    auto operator<=>(const Genotype&) const = default;

  private:
    int dosage_;
};

/// Population genotype probabilities (p0, p1, p2).
class GenotypePriors {
  public:
    GenotypePriors(double p0, double p1, double p2);

    double operator[](int dosage) const { return p_.at(static_cast<std::size_t>(dosage)); }
    double operator[](Genotype g) const { return p_[static_cast<std::size_t>(g.dosage())]; }
    const std::array<double, 3>& probs() const noexcept { return p_; }

    /// Swap allele labels: (p0, p1, p2) -> (p2, p1, p0).
    GenotypePriors relabeled() const { return GenotypePriors(p_[2], p_[1], p_[0]); }

    bool operator==(const GenotypePriors&) const = default;

  private:
    std::array<double, 3> p_;
};

/// Hardy-Weinberg genotype priors (q^2, 2q(1-q), (1-q)^2); q in (0, 1].
GenotypePriors hwe_priors(double q);

/// Per-allele genotyping error probability, w in [0, 1/2).
class ErrorProb {
  public:
    explicit ErrorProb(double w);

    double value() const noexcept { return w_; }

  private:
    double w_;
};

/// T(w)[z][x] = P(observed x | true z) when each of the two allele calls
/// flips independently with probability w.
class ErrorChannel {
  public:
    explicit ErrorChannel(ErrorProb w);

    double operator()(int z, int x) const noexcept {
        return t_[static_cast<std::size_t>(z)][static_cast<std::size_t>(x)];
    }
    const std::array<double, 3>& row(int z) const noexcept { return t_[static_cast<std::size_t>(z)]; }
    double w() const noexcept { return w_; }

  private:
    double w_;
    std::array<std::array<double, 3>, 3> t_;
};

ErrorChannel error_channel(ErrorProb w);

/// P(X = x) = sum_z p_z T[z][x].
double observed_marginal(int x, const GenotypePriors& priors, const ErrorChannel& channel) noexcept;

} // namespace wgslr

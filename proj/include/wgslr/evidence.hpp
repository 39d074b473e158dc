#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wgslr/genotype_model.hpp"

namespace wgslr {

/// H1: trace and reference share a donor. H2: two unrelated donors.
enum class Hypothesis { H1, H2 };

std::string_view to_string(Hypothesis h) noexcept;
Hypothesis parse_hypothesis(std::string_view s);

struct MarkerObservation {
    Genotype x_t;
    Genotype x_r;
    GenotypePriors priors;
};

/// Evidence E = (E_1, ..., E_m) over independent markers.
class CaseData {
  public:
    explicit CaseData(std::vector<MarkerObservation> markers, std::vector<std::string> ids = {});

    const std::vector<MarkerObservation>& markers() const noexcept { return markers_; }
    const MarkerObservation& operator[](std::size_t j) const { return markers_[j]; }
    std::size_t size() const noexcept { return markers_.size(); }
    bool has_ids() const noexcept { return !ids_.empty(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    /// Marker label; 1-based position when the case carries no ids.
    std::string label(std::size_t j) const;

  private:
    std::vector<MarkerObservation> markers_;
    std::vector<std::string> ids_;
};

/// sum_z p_z T(w_t)[z][a] T(w_r)[z][b]
double joint_prob_h1(Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w_t, ErrorProb w_r);

/// P(X_t = a) P(X_r = b) for independent donors.
double joint_prob_h2(Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w_t, ErrorProb w_r);

double joint_prob(Hypothesis h, Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w_t,
                  ErrorProb w_r);

/// Throws DegenerateInputError when the H2 probability is zero.
double lr(Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w_t, ErrorProb w_r);

/// Per-marker log10 LR in marker order; -inf for an excluded marker.
std::vector<double> marker_log10_lr(const CaseData& evidence, ErrorProb w_t, ErrorProb w_r);

/// sum_j log10 LR_j, accumulated in log space. Returns -inf when any marker
/// is an exclusion; throws DegenerateInputError when any LR is undefined.
double woe_known(const CaseData& evidence, ErrorProb w_t, ErrorProb w_r);

/// sum_j log10 P(E_j | h, w_t, w_r).
double log10_likelihood(const CaseData& evidence, Hypothesis h, ErrorProb w_t, ErrorProb w_r);

} // namespace wgslr

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wgslr/estimation.hpp"
#include "wgslr/evidence.hpp"
#include "wgslr/rng.hpp"
#include "wgslr/scaled_beta.hpp"

namespace wgslr {

CaseData simulate_case(Hypothesis h, std::size_t m, const GenotypePriors& priors, ErrorProb w_t, ErrorProb w_r,
                       Rng& rng);

/// Duplicate pairs from one donor with a fresh w ~ prior drawn per site.
PairCountTable simulate_overdispersed_table(std::size_t n_sites, const ScaledBeta& prior,
                                            const GenotypePriors& priors, Rng& rng);

/// Duplicate pairs with one fixed w for every site.
PairCountTable simulate_fixed_table(std::size_t n_sites, ErrorProb w, const GenotypePriors& priors, Rng& rng);

enum class StudyMethod { true_w, plug_in, integrate_mc, integrate_quad, profile };

std::string_view to_string(StudyMethod m) noexcept;
StudyMethod parse_study_method(std::string_view s);
inline bool uses_prior(StudyMethod m) noexcept {
    return m == StudyMethod::integrate_mc || m == StudyMethod::integrate_quad;
}

struct NamedPrior {
    std::string id;
    ScaledBeta dist;
};

struct StudyConfig {
    std::vector<double> q_values;
    std::vector<double> w_t_values;
    double w_r = 1e-4;
    std::vector<std::size_t> marker_counts;
    std::size_t replicates = 1;
    std::vector<StudyMethod> methods;
    std::vector<NamedPrior> priors;
    std::size_t mc_samples = 1000;
    double quad_tol = 1e-8;
    double profile_lower = 0.0;
    double profile_upper = 0.5;
    std::uint64_t master_seed = 1;

    /// Throws DomainError describing the first violated constraint.
    void validate() const;
};

struct StudyRecord {
    Hypothesis hypothesis = Hypothesis::H1;
    StudyMethod method = StudyMethod::true_w;
    std::string prior_id;
    std::size_t m = 0;
    double q = 0.0;
    double w_t_true = 0.0;
    std::size_t replicate = 0;
    double woe = 0.0;
    std::optional<double> w_hat_h1;
    std::optional<double> w_hat_h2;

    bool operator==(const StudyRecord&) const = default;
};

/// Summary of one (hypothesis, method, prior, m, q, w_t) cell.
struct SummaryRow {
    Hypothesis hypothesis = Hypothesis::H1;
    StudyMethod method = StudyMethod::true_w;
    std::string prior_id;
    std::size_t m = 0;
    double q = 0.0;
    double w_t_true = 0.0;
    std::size_t n = 0;
    double mean_woe = 0.0;
    double min_woe = 0.0;
    double max_woe = 0.0;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    std::size_t n_zero = 0;
    /// H1: woe <= 0; H2: woe >= 0.
    std::size_t n_wrong_sign = 0;

    bool operator==(const SummaryRow&) const = default;
};

struct WoEStudyResult {
    std::vector<StudyRecord> records;
    std::vector<SummaryRow> summary;
};

/// Called after each completed (cell, replicate) unit.
using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Failure of one method on one replicate; the message names the cell.
class StudyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

WoEStudyResult run_woe_study(const StudyConfig& config, const ProgressFn& progress = {});

/// Cells in order of first appearance.
std::vector<SummaryRow> summarize(std::span<const StudyRecord> records);

struct OverdispersionConfig {
    std::vector<double> q_values;
    std::vector<NamedPrior> priors;
    std::vector<std::size_t> table_sizes;
    std::size_t replicates = 1;
    std::uint64_t master_seed = 1;

    void validate() const;
};

struct OverdispersionRecord {
    double q = 0.0;
    std::string prior_id;
    std::size_t n_sites = 0;
    std::size_t replicate = 0;
    double w_hat = 0.0;
    double log_likelihood = 0.0;
    bool boundary = false;

    bool operator==(const OverdispersionRecord&) const = default;
};

std::vector<OverdispersionRecord> run_overdispersion_study(const OverdispersionConfig& config,
                                                           const ProgressFn& progress = {});

/// Empirical cross-entropy in bits at prior odds 1:
/// 1/2 mean_H1 log2(1 + 10^-woe) + 1/2 mean_H2 log2(1 + 10^woe).
/// Infinite WoE values map to their limits, so the result may be +inf.
double compute_ece(std::span<const double> woe_h1, std::span<const double> woe_h2);

struct CellKey {
    StudyMethod method = StudyMethod::true_w;
    std::string prior_id;
    std::size_t m = 0;
    double q = 0.0;
    double w_t_true = 0.0;

    bool operator==(const CellKey&) const = default;
};

std::string describe(const CellKey& key);

struct EceRow {
    CellKey cell;
    std::size_t n_h1 = 0;
    std::size_t n_h2 = 0;
    double ece = 0.0;
};

/// One ECE per cell; throws DomainError naming a cell that lacks either hypothesis.
std::vector<EceRow> ece_by_cell(std::span<const StudyRecord> records);

struct SignErrorRow {
    CellKey cell;
    std::size_t n = 0;
    std::size_t n_wrong = 0;
    double wrong_fraction = 0.0;
};

/// Fraction of wrong-sign WoE per cell, pooling both hypotheses. WoE exactly
/// zero counts as wrong under either hypothesis.
std::vector<SignErrorRow> summarize_sign_errors(std::span<const StudyRecord> records);

} // namespace wgslr

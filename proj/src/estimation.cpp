#include "wgslr/estimation.hpp"

#include <cmath>
#include <vector>

#include "wgslr/errors.hpp"
#include "wgslr/optimize.hpp"

namespace wgslr {

PairCountTable::PairCountTable(const Counts& counts, const GenotypePriors& priors)
    : n_(counts), priors_(priors) {}

std::uint64_t PairCountTable::total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& row : n_)
        for (auto c : row) sum += c;
    return sum;
}

namespace {

double same_source(int a, int b, const GenotypePriors& priors, const ErrorChannel& t) noexcept {
    return priors[0] * t(0, a) * t(0, b) + priors[1] * t(1, a) * t(1, b) + priors[2] * t(2, a) * t(2, b);
}

const double kUpper = std::nextafter(0.5, 0.0);

WEstimate maximize(const std::function<double(double)>& loglik) {
    const ScalarMaximum best = maximize_bounded(loglik, 0.0, kUpper);
    WEstimate est{best.x, best.value, false};
    // Snap to the boundary when the optimiser lands within tolerance of it
    // without improving on the boundary value.
    const double at_zero = loglik(0.0);
    if (at_zero >= est.log_likelihood) {
        est = {0.0, at_zero, true};
    }
    if (est.w_hat >= kUpper - 1e-9) est.boundary = true;
    return est;
}

} // namespace

double pair_prob_same_source(Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w) {
    return same_source(a.dosage(), b.dosage(), priors, ErrorChannel(w));
}

double pair_log_likelihood(const PairCountTable& table, double w) {
    const ErrorChannel t(ErrorProb{std::min(w, kUpper)});
    double total = 0.0;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const auto n = table(a, b);
            if (n == 0) continue;
            total += static_cast<double>(n) * std::log(same_source(a, b, table.priors(), t));
        }
    }
    return total;
}

WEstimate estimate_w_mle(const PairCountTable& table) {
    if (table.total() == 0) throw DomainError("pair count table is empty");
    return maximize([&](double w) { return pair_log_likelihood(table, w); });
}

WEstimate estimate_w_mle_per_marker(std::span<const DuplicateObservation> observations) {
    if (observations.empty()) throw DomainError("no duplicate observations");
    return maximize([&](double w) {
        const ErrorChannel t(ErrorProb{std::min(w, kUpper)});
        double total = 0.0;
        for (const auto& obs : observations) {
            total += std::log(same_source(obs.a.dosage(), obs.b.dosage(), obs.priors, t));
        }
        return total;
    });
}

} // namespace wgslr

#include "wgslr/evidence.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "patterns.hpp"
#include "wgslr/errors.hpp"

namespace wgslr {

std::string_view to_string(Hypothesis h) noexcept { return h == Hypothesis::H1 ? "H1" : "H2"; }

Hypothesis parse_hypothesis(std::string_view s) {
    if (s == "H1") return Hypothesis::H1;
    if (s == "H2") return Hypothesis::H2;
    throw DomainError("unknown hypothesis '" + std::string(s) + "'");
}

CaseData::CaseData(std::vector<MarkerObservation> markers, std::vector<std::string> ids)
    : markers_(std::move(markers)), ids_(std::move(ids)) {
    if (markers_.empty()) {
        throw DomainError("case must contain at least one marker");
    }
    if (!ids_.empty()) {
        if (ids_.size() != markers_.size()) {
            throw DomainError("marker id count does not match marker count");
        }
        std::set<std::string> seen;
        for (const auto& id : ids_) {
            if (!seen.insert(id).second) throw DomainError("duplicate marker id '" + id + "'");
        }
    }
}

std::string CaseData::label(std::size_t j) const {
    return ids_.empty() ? std::to_string(j + 1) : ids_[j];
}

namespace detail {

CasePatterns compress(const CaseData& evidence) {
    CasePatterns cp;
    cp.marker_pattern.reserve(evidence.size());
    std::map<std::tuple<int, int, double, double, double>, std::size_t> index;
    for (const auto& mk : evidence.markers()) {
        const auto& p = mk.priors.probs();
        auto key = std::make_tuple(mk.x_t.dosage(), mk.x_r.dosage(), p[0], p[1], p[2]);
        auto [it, inserted] = index.try_emplace(key, cp.patterns.size());
        if (inserted) {
            cp.patterns.push_back({mk.x_t.dosage(), mk.x_r.dosage(), mk.priors, 0.0});
        }
        cp.patterns[it->second].count += 1.0;
        cp.marker_pattern.push_back(it->second);
    }
    return cp;
}

double log10_likelihood(const CasePatterns& cp, Hypothesis h, const ErrorChannel& t, const ErrorChannel& r) {
    double total = 0.0;
    for (const auto& pt : cp.patterns) {
        total += pt.count * log10_prob(h, pt, t, r);
    }
    return total;
}

ErrorChannel channel_clamped(double w) {
    return ErrorChannel(ErrorProb(std::min(w, std::nextafter(0.5, 0.0))));
}

} // namespace detail

double joint_prob_h1(Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w_t, ErrorProb w_r) {
    const ErrorChannel t(w_t);
    const ErrorChannel r(w_r);
    double total = 0.0;
    for (int z = 0; z < 3; ++z) {
        total += priors[z] * t(z, a.dosage()) * r(z, b.dosage());
    }
    return total;
}

double joint_prob_h2(Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w_t, ErrorProb w_r) {
    return observed_marginal(a.dosage(), priors, ErrorChannel(w_t)) *
           observed_marginal(b.dosage(), priors, ErrorChannel(w_r));
}

double joint_prob(Hypothesis h, Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w_t,
                  ErrorProb w_r) {
    return h == Hypothesis::H1 ? joint_prob_h1(a, b, priors, w_t, w_r) : joint_prob_h2(a, b, priors, w_t, w_r);
}

double lr(Genotype a, Genotype b, const GenotypePriors& priors, ErrorProb w_t, ErrorProb w_r) {
    const double den = joint_prob_h2(a, b, priors, w_t, w_r);
    if (!(den > 0.0)) {
        throw DegenerateInputError("likelihood ratio undefined: P(x_t=" + std::to_string(a.dosage()) +
                                   ", x_r=" + std::to_string(b.dosage()) + " | H2) = 0");
    }
    return joint_prob_h1(a, b, priors, w_t, w_r) / den;
}

std::vector<double> marker_log10_lr(const CaseData& evidence, ErrorProb w_t, ErrorProb w_r) {
    const auto cp = detail::compress(evidence);
    const ErrorChannel t(w_t);
    const ErrorChannel r(w_r);
    std::vector<double> per_pattern(cp.patterns.size());
    for (std::size_t k = 0; k < cp.patterns.size(); ++k) {
        const auto& pt = cp.patterns[k];
        const double den = detail::prob_h2(pt, t, r);
        if (!(den > 0.0)) {
            std::size_t j = 0;
            while (cp.marker_pattern[j] != k) ++j;
            throw DegenerateInputError("likelihood ratio undefined at marker " + evidence.label(j) +
                                       ": P(E | H2) = 0");
        }
        const double num = detail::prob_h1(pt, t, r);
        per_pattern[k] = num > 0.0 ? std::log10(num) - std::log10(den)
                                   : -std::numeric_limits<double>::infinity();
    }
    std::vector<double> out;
    out.reserve(evidence.size());
    for (std::size_t k : cp.marker_pattern) out.push_back(per_pattern[k]);
    return out;
}

double woe_known(const CaseData& evidence, ErrorProb w_t, ErrorProb w_r) {
    double total = 0.0;
    for (double v : marker_log10_lr(evidence, w_t, w_r)) {
        if (v == -std::numeric_limits<double>::infinity()) return v;
        total += v;
    }
    return total;
}

double log10_likelihood(const CaseData& evidence, Hypothesis h, ErrorProb w_t, ErrorProb w_r) {
    return detail::log10_likelihood(detail::compress(evidence), h, ErrorChannel(w_t), ErrorChannel(w_r));
}

} // namespace wgslr

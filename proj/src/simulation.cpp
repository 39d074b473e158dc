#include "wgslr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "wgslr/errors.hpp"
#include "wgslr/unknown_w.hpp"

namespace wgslr {

CaseData simulate_case(Hypothesis h, std::size_t m, const GenotypePriors& priors, ErrorProb w_t, ErrorProb w_r,
                       Rng& rng) {
    if (m == 0) throw DomainError("case must have at least one marker");
    const ErrorChannel t(w_t);
    const ErrorChannel r(w_r);
    const double* p = priors.probs().data();
    std::vector<MarkerObservation> markers;
    markers.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const int z_t = draw_category(p, rng);
        const int z_r = h == Hypothesis::H1 ? z_t : draw_category(p, rng);
        const int x_t = draw_category(t.row(z_t).data(), rng);
        const int x_r = draw_category(r.row(z_r).data(), rng);
        markers.push_back({Genotype(x_t), Genotype(x_r), priors});
    }
    return CaseData(std::move(markers));
}

namespace {

template <class ChannelFor>
PairCountTable simulate_table(std::size_t n_sites, const GenotypePriors& priors, Rng& rng, ChannelFor channel_for) {
    PairCountTable::Counts counts{};
    const double* p = priors.probs().data();
    for (std::size_t i = 0; i < n_sites; ++i) {
        const ErrorChannel t = channel_for(rng);
        const int z = draw_category(p, rng);
        const int a = draw_category(t.row(z).data(), rng);
        const int b = draw_category(t.row(z).data(), rng);
        ++counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    return PairCountTable(counts, priors);
}

} // namespace

PairCountTable simulate_overdispersed_table(std::size_t n_sites, const ScaledBeta& prior,
                                            const GenotypePriors& priors, Rng& rng) {
    if (n_sites == 0) throw DomainError("table needs at least one site");
    return simulate_table(n_sites, priors, rng, [&](Rng& g) { return ErrorChannel(ErrorProb{prior.sample(g)}); });
}

PairCountTable simulate_fixed_table(std::size_t n_sites, ErrorProb w, const GenotypePriors& priors, Rng& rng) {
    if (n_sites == 0) throw DomainError("table needs at least one site");
    const ErrorChannel fixed(w);
    return simulate_table(n_sites, priors, rng, [&](Rng&) { return fixed; });
}

std::string_view to_string(StudyMethod m) noexcept {
    switch (m) {
    case StudyMethod::true_w: return "true-w";
    case StudyMethod::plug_in: return "plug-in";
    case StudyMethod::integrate_mc: return "integrate-mc";
    case StudyMethod::integrate_quad: return "integrate-quad";
    case StudyMethod::profile: return "profile";
    }
    return "?";
}

StudyMethod parse_study_method(std::string_view s) {
    for (auto m : {StudyMethod::true_w, StudyMethod::plug_in, StudyMethod::integrate_mc,
                   StudyMethod::integrate_quad, StudyMethod::profile}) {
        if (to_string(m) == s) return m;
    }
    throw DomainError("unknown study method '" + std::string(s) + "'");
}

void StudyConfig::validate() const {
    if (q_values.empty()) throw DomainError("q_values must be nonempty");
    if (w_t_values.empty()) throw DomainError("w_t_values must be nonempty");
    if (marker_counts.empty()) throw DomainError("marker_counts must be nonempty");
    if (methods.empty()) throw DomainError("methods must be nonempty");
    if (replicates < 1) throw DomainError("replicates must be at least 1");
    for (double q : q_values) hwe_priors(q);
    for (double w : w_t_values) ErrorProb{w};
    ErrorProb{w_r};
    for (auto m : marker_counts) {
        if (m < 1) throw DomainError("marker counts must be at least 1");
    }
    const bool needs_prior = std::any_of(methods.begin(), methods.end(), uses_prior);
    if (needs_prior && priors.empty()) throw DomainError("integration methods need at least one prior");
    std::vector<std::string> ids;
    for (const auto& p : priors) {
        if (p.id.empty()) throw DomainError("prior ids must be nonempty");
        if (std::find(ids.begin(), ids.end(), p.id) != ids.end()) throw DomainError("duplicate prior id " + p.id);
        ids.push_back(p.id);
    }
    if (mc_samples < 2) throw DomainError("mc_samples must be at least 2");
    if (!(quad_tol > 0.0)) throw DomainError("quad_tol must be positive");
    if (!(profile_lower >= 0.0 && profile_lower <= profile_upper && profile_upper <= 0.5)) {
        throw DomainError("profile bounds must satisfy 0 <= lower <= upper <= 1/2");
    }
}

namespace {

std::string cell_text(Hypothesis h, double q, double w_t, std::size_t m, std::size_t rep) {
    std::ostringstream os;
    os.precision(10);
    os << "hypothesis=" << to_string(h) << " q=" << q << " w_t=" << w_t << " m=" << m << " replicate=" << rep;
    return os.str();
}

} // namespace

WoEStudyResult run_woe_study(const StudyConfig& config, const ProgressFn& progress) {
    config.validate();
    WoEStudyResult out;
    const ErrorProb w_r{config.w_r};
    const std::size_t total_units =
        config.q_values.size() * config.w_t_values.size() * config.marker_counts.size() * config.replicates;
    std::size_t done = 0;

    for (std::size_t qi = 0; qi < config.q_values.size(); ++qi) {
        const double q = config.q_values[qi];
        const GenotypePriors priors = hwe_priors(q);
        for (std::size_t wi = 0; wi < config.w_t_values.size(); ++wi) {
            const ErrorProb w_t{config.w_t_values[wi]};
            for (std::size_t mi = 0; mi < config.marker_counts.size(); ++mi) {
                const std::size_t m = config.marker_counts[mi];
                for (std::size_t rep = 0; rep < config.replicates; ++rep) {
                    for (Hypothesis h : {Hypothesis::H1, Hypothesis::H2}) {
                        const std::uint64_t hk = h == Hypothesis::H1 ? 1 : 2;
                        Rng case_rng = make_stream(config.master_seed, {qi, wi, mi, rep, hk, 0});
                        const CaseData evidence = simulate_case(h, m, priors, w_t, w_r, case_rng);

                        StudyRecord base;
                        base.hypothesis = h;
                        base.m = m;
                        base.q = q;
                        base.w_t_true = w_t.value();
                        base.replicate = rep;

                        try {
                            for (StudyMethod method : config.methods) {
                                base.method = method;
                                if (!uses_prior(method)) {
                                    StudyRecord rec = base;
                                    if (method == StudyMethod::true_w) {
                                        rec.woe = woe_known(evidence, w_t, w_r);
                                    } else if (method == StudyMethod::plug_in) {
                                        rec.woe = woe_plugin(evidence, w_r).woe;
                                    } else {
                                        const auto res =
                                            woe_profile(evidence, w_r, config.profile_lower, config.profile_upper);
                                        rec.woe = res.woe;
                                        rec.w_hat_h1 = res.w_hat_h1;
                                        rec.w_hat_h2 = res.w_hat_h2;
                                    }
                                    out.records.push_back(std::move(rec));
                                    continue;
                                }
                                for (std::size_t pi = 0; pi < config.priors.size(); ++pi) {
                                    StudyRecord rec = base;
                                    rec.prior_id = config.priors[pi].id;
                                    if (method == StudyMethod::integrate_mc) {
                                        Rng mc_rng = make_stream(config.master_seed, {qi, wi, mi, rep, hk, 1 + pi});
                                        rec.woe = woe_integrate_mc(evidence, config.priors[pi].dist, w_r,
                                                                   config.mc_samples, mc_rng)
                                                      .woe;
                                    } else {
                                        rec.woe =
                                            woe_integrate_quad(evidence, config.priors[pi].dist, w_r, config.quad_tol)
                                                .woe;
                                    }
                                    out.records.push_back(std::move(rec));
                                }
                            }
                        } catch (const std::exception& e) {
                            throw StudyError("method " + std::string(to_string(base.method)) + " failed at " +
                                             cell_text(h, q, w_t.value(), m, rep) + ": " + e.what());
                        }
                    }
                    ++done;
                    if (progress) progress(done, total_units);
                }
            }
        }
    }
    out.summary = summarize(out.records);
    return out;
}

std::vector<SummaryRow> summarize(std::span<const StudyRecord> records) {
    std::vector<SummaryRow> rows;
    std::map<std::tuple<int, int, std::string, std::size_t, double, double>, std::size_t> index;
    std::vector<double> sums;
    for (const auto& rec : records) {
        auto key = std::make_tuple(static_cast<int>(rec.hypothesis), static_cast<int>(rec.method), rec.prior_id,
                                   rec.m, rec.q, rec.w_t_true);
        auto [it, inserted] = index.try_emplace(key, rows.size());
        if (inserted) {
            SummaryRow row;
            row.hypothesis = rec.hypothesis;
            row.method = rec.method;
            row.prior_id = rec.prior_id;
            row.m = rec.m;
            row.q = rec.q;
            row.w_t_true = rec.w_t_true;
            row.min_woe = std::numeric_limits<double>::infinity();
            row.max_woe = -std::numeric_limits<double>::infinity();
            rows.push_back(row);
            sums.push_back(0.0);
        }
        SummaryRow& row = rows[it->second];
        ++row.n;
        sums[it->second] += rec.woe;
        row.min_woe = std::min(row.min_woe, rec.woe);
        row.max_woe = std::max(row.max_woe, rec.woe);
        if (rec.woe > 0.0) ++row.n_positive;
        else if (rec.woe < 0.0) ++row.n_negative;
        else ++row.n_zero;
        const bool wrong = rec.hypothesis == Hypothesis::H1 ? !(rec.woe > 0.0) : !(rec.woe < 0.0);
        if (wrong) ++row.n_wrong_sign;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].mean_woe = sums[i] / static_cast<double>(rows[i].n);
    }
    return rows;
}

void OverdispersionConfig::validate() const {
    if (q_values.empty()) throw DomainError("q_values must be nonempty");
    if (priors.empty()) throw DomainError("priors must be nonempty");
    if (table_sizes.empty()) throw DomainError("table_sizes must be nonempty");
    if (replicates < 1) throw DomainError("replicates must be at least 1");
    for (double q : q_values) hwe_priors(q);
    for (auto n : table_sizes) {
        if (n < 1) throw DomainError("table sizes must be at least 1");
    }
}

std::vector<OverdispersionRecord> run_overdispersion_study(const OverdispersionConfig& config,
                                                           const ProgressFn& progress) {
    config.validate();
    std::vector<OverdispersionRecord> out;
    const std::size_t total = config.q_values.size() * config.priors.size() * config.table_sizes.size() *
                              config.replicates;
    out.reserve(total);
    std::size_t done = 0;
    for (std::size_t qi = 0; qi < config.q_values.size(); ++qi) {
        const GenotypePriors priors = hwe_priors(config.q_values[qi]);
        for (std::size_t pi = 0; pi < config.priors.size(); ++pi) {
            for (std::size_t ni = 0; ni < config.table_sizes.size(); ++ni) {
                for (std::size_t rep = 0; rep < config.replicates; ++rep) {
                    Rng rng = make_stream(config.master_seed, {qi, pi, ni, rep, 7});
                    const auto table =
                        simulate_overdispersed_table(config.table_sizes[ni], config.priors[pi].dist, priors, rng);
                    const auto est = estimate_w_mle(table);
                    out.push_back({config.q_values[qi], config.priors[pi].id, config.table_sizes[ni], rep,
                                   est.w_hat, est.log_likelihood, est.boundary});
                    ++done;
                    if (progress) progress(done, total);
                }
            }
        }
    }
    return out;
}

namespace {

// log2(1 + 10^x) without overflow.
double log2_one_plus_pow10(double x) {
    if (x == std::numeric_limits<double>::infinity()) return x;
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    if (x > 0.0) return x * std::log2(10.0) + std::log1p(std::pow(10.0, -x)) / std::log(2.0);
    return std::log1p(std::pow(10.0, x)) / std::log(2.0);
}

} // namespace

double compute_ece(std::span<const double> woe_h1, std::span<const double> woe_h2) {
    if (woe_h1.empty() || woe_h2.empty()) throw DomainError("ECE needs WoE values under both hypotheses");
    double s1 = 0.0;
    for (double w : woe_h1) s1 += log2_one_plus_pow10(-w);
    double s2 = 0.0;
    for (double w : woe_h2) s2 += log2_one_plus_pow10(w);
    return 0.5 * s1 / static_cast<double>(woe_h1.size()) + 0.5 * s2 / static_cast<double>(woe_h2.size());
}

std::string describe(const CellKey& key) {
    std::ostringstream os;
    os.precision(10);
    os << "method=" << to_string(key.method) << " prior_id=" << (key.prior_id.empty() ? "-" : key.prior_id)
       << " m=" << key.m << " q=" << key.q << " w_t=" << key.w_t_true;
    return os.str();
}

namespace {

template <class Row, class Fn>
std::vector<Row> group_by_cell(std::span<const StudyRecord> records, Fn&& add) {
    std::vector<Row> rows;
    std::map<std::tuple<int, std::string, std::size_t, double, double>, std::size_t> index;
    for (const auto& rec : records) {
        auto key = std::make_tuple(static_cast<int>(rec.method), rec.prior_id, rec.m, rec.q, rec.w_t_true);
        auto [it, inserted] = index.try_emplace(key, rows.size());
        if (inserted) {
            rows.emplace_back();
            rows.back().cell = CellKey{rec.method, rec.prior_id, rec.m, rec.q, rec.w_t_true};
        }
        add(it->second, rec);
    }
    return rows;
}

} // namespace

std::vector<EceRow> ece_by_cell(std::span<const StudyRecord> records) {
    std::vector<std::vector<double>> h1;
    std::vector<std::vector<double>> h2;
    auto rows = group_by_cell<EceRow>(records, [&](std::size_t i, const StudyRecord& rec) {
        if (i >= h1.size()) {
            h1.resize(i + 1);
            h2.resize(i + 1);
        }
        (rec.hypothesis == Hypothesis::H1 ? h1 : h2)[i].push_back(rec.woe);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (h1[i].empty() || h2[i].empty()) {
            throw DomainError("cell " + describe(rows[i].cell) + " lacks " + (h1[i].empty() ? "H1" : "H2") +
                              " records");
        }
        rows[i].n_h1 = h1[i].size();
        rows[i].n_h2 = h2[i].size();
        rows[i].ece = compute_ece(h1[i], h2[i]);
    }
    return rows;
}

std::vector<SignErrorRow> summarize_sign_errors(std::span<const StudyRecord> records) {
    if (records.empty()) throw DomainError("no records to summarise");
    std::vector<std::size_t> n;
    std::vector<std::size_t> wrong;
    auto rows = group_by_cell<SignErrorRow>(records, [&](std::size_t i, const StudyRecord& rec) {
        if (i >= n.size()) {
            n.resize(i + 1);
            wrong.resize(i + 1);
        }
        ++n[i];
        if (rec.hypothesis == Hypothesis::H1 ? rec.woe <= 0.0 : rec.woe >= 0.0) ++wrong[i];
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].n = n[i];
        rows[i].n_wrong = wrong[i];
        rows[i].wrong_fraction = static_cast<double>(wrong[i]) / static_cast<double>(n[i]);
    }
    return rows;
}

} // namespace wgslr

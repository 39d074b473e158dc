// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "prior_table.hpp"
#include "wgslr/evidence.hpp"
#include "wgslr/io.hpp"
#include "wgslr/scaled_beta.hpp"
#include "wgslr/simulation.hpp"
#include "wgslr/unknown_w.hpp"

namespace fs = std::filesystem;
using namespace wgslr;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " FAILED[" << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) {
        out.pass = false;
        out.detail << " FAILED[runtime]";
    }
    if (!out.pass) ++failures;
    std::printf("CRITERION %d %s  %s |%s | %.2f s", id, out.pass ? "PASS" : "FAIL", title, out.detail.str().c_str(),
                secs);
    if (limit_s > 0) std::printf(" (limit %.0f s)", limit_s);
    std::printf("\n");
    std::fflush(stdout);
}

std::string fmt(double x, int prec = 6) {
    std::ostringstream s;
    s.precision(prec);
    s << x;
    return s.str();
}

// Shared WoE study behind criteria 6, 7 and 10.

constexpr std::size_t kStudyReplicates = 300;

StudyConfig table_study_config() {
    StudyConfig c;
    c.q_values = {0.75, 0.9};
    c.w_t_values = {1e-4, 1e-3, 1e-2};
    c.w_r = 1e-4;
    c.marker_counts = {50, 100, 200};
    c.replicates = kStudyReplicates;
    c.methods = {StudyMethod::true_w, StudyMethod::plug_in, StudyMethod::profile, StudyMethod::integrate_mc};
    c.priors = {{"mean=1e-4;var=1e-8", ScaledBeta::from_moments(1e-4, 1e-8)},
                {"mean=1e-4;var=5e-9", ScaledBeta::from_moments(1e-4, 5e-9)}};
    c.mc_samples = 1000;
    c.master_seed = 20240601;
    return c;
}

const WoEStudyResult& table_study() {
    static const WoEStudyResult result = run_woe_study(table_study_config());
    return result;
}

const SummaryRow* find_row(Hypothesis h, StudyMethod m, std::size_t markers, double q, double w_t,
                           const std::string& prior = "") {
    for (const auto& r : table_study().summary) {
        if (r.hypothesis == h && r.method == m && r.m == markers && r.q == q && r.w_t_true == w_t &&
            r.prior_id == prior)
            return &r;
    }
    return nullptr;
}

void check_mean(Outcome& o, Hypothesis h, StudyMethod m, std::size_t markers, double q, double w_t, double reference,
                double rel_tol) {
    const SummaryRow* r = find_row(h, m, markers, q, w_t);
    std::ostringstream label;
    label << to_string(m) << "(m=" << markers << ",q=" << q << ",w_t=" << w_t << ")";
    if (!r) {
        o.require(false, label.str() + " missing");
        return;
    }
    o.detail << ' ' << label.str() << "=" << fmt(r->mean_woe, 4) << " vs " << reference;
    o.require(std::abs(r->mean_woe - reference) <= rel_tol * std::abs(reference), label.str());
}

void check_signs(Outcome& o, Hypothesis h, std::size_t markers) {
    std::size_t wrong = 0;
    std::size_t cells = 0;
    for (const auto& r : table_study().summary) {
        if (r.hypothesis != h || r.m != markers) continue;
        ++cells;
        wrong += r.n_wrong_sign;
        if (r.n != kStudyReplicates) o.require(false, "cell size");
    }
    o.detail << " wrong signs at m=" << markers << ": " << wrong << " over " << cells << " cells";
    o.require(cells == 2 * 3 * 5 && wrong == 0, "sign rate");
}

// CLI determinism.

std::string run_binary(const std::string& args) {
    const std::string cmd = std::string(WGSLR_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + cmd);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return "status=" + std::to_string(status) + "\n" + out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

int main() {
    criterion(1, "prior table shapes and fractiles", 1.0, [](Outcome& o) {
        double worst_shape = 0.0, worst_frac = 0.0;
        for (const auto& row : oracle::kPriorTable) {
            const auto d = ScaledBeta::from_moments(row.mean, row.variance);
            worst_shape = std::max({worst_shape, std::abs(d.alpha() - row.shape1), std::abs(d.beta() - row.shape2)});
            worst_frac = std::max({worst_frac, std::abs(d.quantile(0.05) - row.q05),
                                   std::abs(d.quantile(0.95) - row.q95)});
            // Shapes printed to 3 decimals: the rounded value must match.
            o.require(std::abs(std::round(d.alpha() * 1000) / 1000 - row.shape1) < 1e-9, "shape1 " + fmt(row.variance));
            o.require(std::abs(std::round(d.beta() * 1000) / 1000 - row.shape2) < 1e-9, "shape2 " + fmt(row.variance));
        }
        o.detail << " max |shape diff|=" << fmt(worst_shape, 3) << " max |fractile diff|=" << fmt(worst_frac, 3);
        o.require(worst_frac <= 1e-6, "fractiles");
    });

    criterion(2, "HWE and zero-error LR identities", 1.0, [](Outcome& o) {
        const auto p = hwe_priors(0.75);
        o.require(p[0] == 0.5625 && p[1] == 0.375 && p[2] == 0.0625, "hwe");
        const ErrorProb zero(0.0);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double v = lr(Genotype(a), Genotype(b), p, zero, zero);
                o.require(a == b ? v == 1.0 / p[a] : v == 0.0, "lr(" + std::to_string(a) + "," + std::to_string(b) + ")");
            }
        }
        o.detail << " priors (0.5625, 0.375, 0.0625); LR(match)=1/p_a; LR(mismatch)=0";
    });

    criterion(3, "joint probabilities vs 1e7-draw allele-flip simulation", 120.0, [](Outcome& o) {
        std::mt19937_64 pick(31);
        std::uniform_real_distribution<double> uq(0.05, 0.95), lw(-5.0, std::log10(0.3));
        std::uniform_int_distribution<int> ug(0, 2);
        double worst_z = 0.0;
        for (int i = 0; i < 20; ++i) {
            const int a = ug(pick), b = ug(pick);
            const double q = uq(pick), wt = std::pow(10.0, lw(pick)), wr = std::pow(10.0, lw(pick));
            const auto pr = hwe_priors(q);
            const std::size_t n = 10'000'000;
            const bool same = i % 2 == 0;
            const auto freq = oracle::simulate_joint(same, pr.probs(), wt, wr, n, 1000 + i);
            const double expect = same ? joint_prob_h1(Genotype(a), Genotype(b), pr, ErrorProb(wt), ErrorProb(wr))
                                       : joint_prob_h2(Genotype(a), Genotype(b), pr, ErrorProb(wt), ErrorProb(wr));
            const double se = std::sqrt(std::max(expect * (1 - expect), 1e-300) / static_cast<double>(n));
            const double z = std::abs(freq[a][b] - expect) / se;
            worst_z = std::max(worst_z, z);
            o.require(z <= 4.0, "tuple " + std::to_string(i));
        }
        o.detail << " 20 tuples (alternating H1/H2), max |z|=" << fmt(worst_z, 3);
    });

    criterion(4, "E[LR | H2] = 1", 1.0, [](Outcome& o) {
        std::mt19937_64 pick(4);
        std::uniform_real_distribution<double> uq(0.01, 0.99), lw(-6.0, std::log10(0.45));
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const auto pr = hwe_priors(uq(pick));
            const ErrorProb wt(std::pow(10.0, lw(pick))), wr(std::pow(10.0, lw(pick)));
            double e = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const double p2 = joint_prob_h2(Genotype(a), Genotype(b), pr, wt, wr);
                    if (p2 > 0) e += p2 * lr(Genotype(a), Genotype(b), pr, wt, wr);
                }
            worst = std::max(worst, std::abs(e - 1.0));
        }
        o.detail << " 50 triples, max |E - 1|=" << fmt(worst, 3);
        o.require(worst <= 1e-10, "identity");
    });

    criterion(5, "overdispersion: mean w_hat and shrinking dispersion", 600.0, [](Outcome& o) {
        OverdispersionConfig c;
        c.q_values = {0.75, 0.9};
        c.priors = {{"var=5e-6", ScaledBeta::from_moments(0.01, 5e-6)},
                    {"var=5e-5", ScaledBeta::from_moments(0.01, 5e-5)},
                    {"var=1e-4", ScaledBeta::from_moments(0.01, 1e-4)}};
        c.table_sizes = {1000, 10000, 100000};
        c.replicates = 200;
        c.master_seed = 7;
        const auto recs = run_overdispersion_study(c);
        std::map<std::tuple<double, std::string, std::size_t>, std::vector<double>> cells;
        for (const auto& r : recs) cells[{r.q, r.prior_id, r.n_sites}].push_back(r.w_hat);
        auto sd = [](const std::vector<double>& v) {
            const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            double s = 0.0;
            for (double x : v) s += (x - m) * (x - m);
            return std::sqrt(s / static_cast<double>(v.size() - 1));
        };
        for (double q : c.q_values) {
            for (const auto& p : c.priors) {
                const auto& big = cells.at({q, p.id, 100000});
                const double mean = std::accumulate(big.begin(), big.end(), 0.0) / static_cast<double>(big.size());
                const double s3 = sd(cells.at({q, p.id, 1000})), s4 = sd(cells.at({q, p.id, 10000})), s5 = sd(big);
                o.detail << " [q=" << q << " " << p.id << " mean=" << fmt(mean, 5) << " sd=" << fmt(s3, 2) << ">"
                         << fmt(s4, 2) << ">" << fmt(s5, 2) << "]";
                o.require(mean >= 0.0095 && mean <= 0.0105, "mean " + p.id);
                o.require(s3 > s4 && s4 > s5, "dispersion " + p.id);
            }
        }
    });

    criterion(6, "H1 WoE cells and sign rate (300 replicates)", 900.0, [](Outcome& o) {
        check_mean(o, Hypothesis::H1, StudyMethod::true_w, 200, 0.75, 1e-4, 75.0, 0.05);
        check_mean(o, Hypothesis::H1, StudyMethod::true_w, 100, 0.9, 1e-3, 22.3, 0.05);
        check_mean(o, Hypothesis::H1, StudyMethod::plug_in, 200, 0.75, 1e-2, 61.3, 0.05);
        check_signs(o, Hypothesis::H1, 200);
    });

    criterion(7, "H2 WoE cells, method ordering and sign rate", 0.0, [](Outcome& o) {
        check_mean(o, Hypothesis::H2, StudyMethod::true_w, 200, 0.75, 1e-2, -156.5, 0.05);
        check_mean(o, Hypothesis::H2, StudyMethod::plug_in, 200, 0.75, 1e-2, -358.0, 0.05);
        check_mean(o, Hypothesis::H2, StudyMethod::profile, 200, 0.75, 1e-2, -14.5, 0.15);
        const auto* pl = find_row(Hypothesis::H2, StudyMethod::plug_in, 200, 0.75, 1e-2);
        const auto* tw = find_row(Hypothesis::H2, StudyMethod::true_w, 200, 0.75, 1e-2);
        const auto* pf = find_row(Hypothesis::H2, StudyMethod::profile, 200, 0.75, 1e-2);
        o.require(pl && tw && pf && pl->mean_woe < tw->mean_woe && tw->mean_woe < pf->mean_woe && pf->mean_woe < 0,
                  "ordering");
        check_signs(o, Hypothesis::H2, 200);
    });

    criterion(8, "Monte Carlo vs quadrature integration", 120.0, [](Outcome& o) {
        const std::size_t n_rows = std::size(oracle::kPriorTable);
        std::size_t outside = 0;
        double worst_ratio = 0.0;
        for (std::uint64_t i = 0; i < 100; ++i) {
            const auto& row = oracle::kPriorTable[i % n_rows];
            const auto prior = ScaledBeta::from_moments(row.mean, row.variance);
            const Hypothesis h = (i / n_rows) % 2 == 0 ? Hypothesis::H1 : Hypothesis::H2;
            const std::size_t m = std::array<std::size_t, 3>{50, 100, 200}[i % 3];
            const double q = i % 2 == 0 ? 0.75 : 0.9;
            Rng case_rng = make_stream(88, {i, 0});
            const auto c = simulate_case(h, m, hwe_priors(q), ErrorProb(row.mean), ErrorProb(1e-4), case_rng);
            Rng mc_rng = make_stream(88, {i, 1});
            const auto mc = woe_integrate_mc(c, prior, ErrorProb(1e-4), 1000, mc_rng);
            const auto quad = woe_integrate_quad(c, prior, ErrorProb(1e-4));
            const double ratio = std::abs(mc.woe - quad.woe) / *mc.mc_std_error;
            worst_ratio = std::max(worst_ratio, ratio);
            if (!(ratio <= 3.0)) ++outside;
        }
        o.detail << " 100 cases, " << outside << " outside 3 SE, max |mc-quad|/SE=" << fmt(worst_ratio, 3);
        o.require(outside == 0, "3 SE");

        double worst = 0.0;
        for (std::uint64_t i = 0; i < 10; ++i) {
            const double mu = std::array<double, 5>{1e-1, 1e-2, 1e-3, 1e-4, 1e-5}[i % 5];
            const auto prior = ScaledBeta::from_moments(mu, mu * mu * 1e-6);
            Rng case_rng = make_stream(89, {i, 0});
            const auto c = simulate_case(i < 5 ? Hypothesis::H1 : Hypothesis::H2, 100, hwe_priors(0.75),
                                         ErrorProb(mu), ErrorProb(1e-4), case_rng);
            Rng mc_rng = make_stream(89, {i, 1});
            const double known = woe_known(c, ErrorProb(mu), ErrorProb(1e-4));
            worst = std::max(worst, std::abs(woe_integrate_mc(c, prior, ErrorProb(1e-4), 1000, mc_rng).woe - known));
        }
        o.detail << "; near-point-mass max |mc-known|=" << fmt(worst, 3);
        o.require(worst <= 0.01, "point mass");
    });

    criterion(9, "profile maxima dominate a 1e4-point grid", 60.0, [](Outcome& o) {
        const ErrorProb wr(1e-4);
        double worst_shortfall = -1e300, worst_gap = 0.0;
        for (std::uint64_t i = 0; i < 100; ++i) {
            std::mt19937_64 pick(500 + i);
            const double q = std::uniform_real_distribution<double>(0.05, 0.95)(pick);
            const double wt = std::pow(10.0, std::uniform_real_distribution<double>(-4.0, -1.0)(pick));
            const std::size_t m = 1 + pick() % 200;
            Rng case_rng = make_stream(99, {i});
            const auto c = simulate_case(i % 2 ? Hypothesis::H1 : Hypothesis::H2, m, hwe_priors(q), ErrorProb(wt), wr,
                                         case_rng);
            const auto res = woe_profile(c, wr);
            std::array<double, 2> grid_max{-HUGE_VAL, -HUGE_VAL};
            for (int k = 0; k < 10000; ++k) {
                const double w = std::min(0.5 * k / 9999.0, std::nextafter(0.5, 0.0));
                grid_max[0] = std::max(grid_max[0], log10_likelihood(c, Hypothesis::H1, ErrorProb(w), wr));
                grid_max[1] = std::max(grid_max[1], log10_likelihood(c, Hypothesis::H2, ErrorProb(w), wr));
            }
            const double l1 = log10_likelihood(c, Hypothesis::H1, ErrorProb(*res.w_hat_h1), wr);
            const double l2 = log10_likelihood(c, Hypothesis::H2, ErrorProb(*res.w_hat_h2), wr);
            worst_shortfall = std::max({worst_shortfall, grid_max[0] - l1, grid_max[1] - l2});
            worst_gap = std::max(worst_gap, std::abs(res.woe - (grid_max[0] - grid_max[1])));
        }
        o.detail << " 100 cases, max grid excess over returned maximum=" << fmt(worst_shortfall, 3)
                 << ", max |WoE - grid WoE|=" << fmt(worst_gap, 3);
        o.require(worst_shortfall < 1e-6, "dominance");
    });

    criterion(10, "ECE properties and CLI determinism", 0.0, [](Outcome& o) {
        const std::vector<double> zeros(300, 0.0);
        const double e0 = compute_ece(zeros, zeros);
        o.detail << " ECE(all zero)=" << fmt(e0, 17);
        o.require(e0 == 1.0, "all-zero");

        const auto rows = ece_by_cell(table_study().records);
        for (double q : {0.75, 0.9}) {
            double prof = NAN, truth = NAN;
            for (const auto& r : rows) {
                if (r.cell.m != 50 || r.cell.q != q || r.cell.w_t_true != 1e-2) continue;
                if (r.cell.method == StudyMethod::profile) prof = r.ece;
                if (r.cell.method == StudyMethod::true_w) truth = r.ece;
            }
            o.detail << " [q=" << q << " profile " << fmt(prof, 4) << " > true-w " << fmt(truth, 4) << "]";
            o.require(prof > truth, "ece ordering q=" + fmt(q));
        }

        const fs::path dir = fs::temp_directory_path() / "wgslr_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        {
            Rng rng(1);
            std::ofstream(dir / "case.csv") << [&] {
                std::ostringstream s;
                io::write_case(s, simulate_case(Hypothesis::H1, 60, hwe_priors(0.75), ErrorProb(1e-2), ErrorProb(1e-4), rng));
                return s.str();
            }();
            std::ostringstream t;
            io::write_pair_table(t, simulate_fixed_table(5000, ErrorProb(0.01), hwe_priors(0.75), rng), 0.75);
            std::ofstream(dir / "table.csv") << t.str();
            std::ofstream(dir / "study.json")
                << R"({"study": "woe", "q_values": [0.75], "w_t_values": [0.01], "w_r": 0.0001, "marker_counts": [50],
                       "replicates": 20, "methods": ["true-w", "plug-in", "profile", "integrate-mc", "integrate-quad"],
                       "priors": [{"mean": 0.0001, "variance": 5e-9}], "mc_samples": 200, "master_seed": 3})";
        }
        const std::string c = (dir / "case.csv").string();
        const std::vector<std::string> commands{
            "woe --case " + c + " --w-r 1e-4 --w-t 1e-2 --verbose",
            "woe --case " + c + " --w-r 1e-4 --plugin --json",
            "woe --case " + c + " --w-r 1e-4 --profile",
            "woe --case " + c + " --w-r 1e-4 --prior-mean 1e-4 --prior-var 5e-9 --mc 1000 --seed 7",
            "woe --case " + c + " --w-r 1e-4 --prior-mean 1e-4 --prior-var 5e-9 --integration quad",
            "estimate --table " + (dir / "table.csv").string(),
        };
        int identical = 0;
        for (const auto& cmd : commands) {
            const auto a = run_binary(cmd), b = run_binary(cmd);
            o.require(a == b && a.rfind("status=0\n", 0) == 0, cmd);
            identical += a == b;
        }
        std::array<std::string, 3> files[2];
        for (int k = 0; k < 2; ++k) {
            const std::string prefix = (dir / ("run" + std::to_string(k))).string();
            run_binary("simulate --quiet --config " + (dir / "study.json").string() + " --output " + prefix);
            run_binary("ece --records " + prefix + ".records.csv --output " + prefix + ".ece.csv");
            files[k] = {slurp(prefix + ".records.csv"), slurp(prefix + ".summary.csv"), slurp(prefix + ".ece.csv")};
        }
        o.require(!files[0][0].empty() && !files[0][2].empty() && files[0] == files[1], "simulate/ece rerun");
        identical += files[0] == files[1] ? 2 : 0;
        o.detail << "; " << identical << "/" << commands.size() + 2 << " CLI commands byte-identical on rerun";
        fs::remove_all(dir);
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

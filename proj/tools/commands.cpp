#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wgslr/errors.hpp"
#include "wgslr/io.hpp"
#include "wgslr/unknown_w.hpp"

namespace wgslr::cli {

namespace {

using nlohmann::ordered_json;

/// Bad flag values, reported with the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string human(double x) {
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << x;
    return os.str();
}

std::string precise(double x) {
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

ordered_json json_number(double x) {
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    return x;
}

ErrorProb usage_prob(double w, const char* flag) {
    try {
        return ErrorProb(w);
    } catch (const DomainError&) {
        throw UsageError(std::string(flag) + " must lie in [0, 0.5)");
    }
}

struct WoeOptions {
    std::string case_path;
    double w_r = 0.0;
    std::optional<double> w_t;
    std::optional<double> prior_mean;
    std::optional<double> prior_var;
    std::optional<double> prior_shape1;
    std::optional<double> prior_shape2;
    bool profile = false;
    bool plugin = false;
    std::string integration = "mc";
    std::size_t mc_samples = kDefaultMcSamples;
    double quad_tol = kDefaultQuadTolerance;
    std::uint64_t seed = 1;
    double profile_lower = 0.0;
    double profile_upper = 0.5;
    bool verbose = false;
    bool json = false;
};

int cmd_woe(const WoeOptions& o, std::ostream& out) {
    const bool moments = o.prior_mean || o.prior_var;
    const bool shapes = o.prior_shape1 || o.prior_shape2;
    const int modes = (o.w_t ? 1 : 0) + ((moments || shapes) ? 1 : 0) + (o.profile ? 1 : 0) + (o.plugin ? 1 : 0);
    if (modes != 1) {
        throw UsageError("give exactly one of --w-t, a prior (--prior-mean/--prior-var or --prior-shape1/--prior-shape2), "
                         "--profile, --plugin");
    }
    if (moments && shapes) throw UsageError("give the prior as moments or as shapes, not both");
    if (moments && !(o.prior_mean && o.prior_var)) throw UsageError("--prior-mean and --prior-var go together");
    if (shapes && !(o.prior_shape1 && o.prior_shape2)) throw UsageError("--prior-shape1 and --prior-shape2 go together");
    const ErrorProb w_r = usage_prob(o.w_r, "--w-r");

    std::optional<ScaledBeta> prior;
    try {
        if (moments) prior = ScaledBeta::from_moments(*o.prior_mean, *o.prior_var);
        if (shapes) prior = ScaledBeta(*o.prior_shape1, *o.prior_shape2);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    if (o.profile && !(o.profile_lower >= 0.0 && o.profile_lower <= o.profile_upper && o.profile_upper <= 0.5)) {
        throw UsageError("profile bounds must satisfy 0 <= lower <= upper <= 0.5");
    }

    const CaseData evidence = io::read_case_file(o.case_path);

    WoEResult res;
    if (o.w_t) {
        res = woe_known_result(evidence, usage_prob(*o.w_t, "--w-t"), w_r);
    } else if (o.plugin) {
        res = woe_plugin(evidence, w_r);
    } else if (o.profile) {
        res = woe_profile(evidence, w_r, o.profile_lower, o.profile_upper);
    } else if (o.integration == "mc") {
        Rng rng(o.seed);
        res = woe_integrate_mc(evidence, *prior, w_r, o.mc_samples, rng);
    } else {
        res = woe_integrate_quad(evidence, *prior, w_r, o.quad_tol);
    }

    if (o.json) {
        ordered_json doc;
        doc["method"] = to_string(res.method);
        doc["woe"] = json_number(res.woe);
        doc["markers"] = evidence.size();
        doc["w_r"] = o.w_r;
        if (o.w_t) doc["w_t"] = *o.w_t;
        if (prior) {
            doc["prior_shape1"] = prior->alpha();
            doc["prior_shape2"] = prior->beta();
        }
        if (res.method == WoEMethod::integrate_mc) {
            doc["mc_samples"] = o.mc_samples;
            doc["seed"] = o.seed;
        }
        if (res.mc_std_error) doc["mc_std_error"] = json_number(*res.mc_std_error);
        if (res.w_hat_h1) doc["w_hat_h1"] = *res.w_hat_h1;
        if (res.w_hat_h2) doc["w_hat_h2"] = *res.w_hat_h2;
        if (o.verbose) {
            ordered_json rows = ordered_json::array();
            for (std::size_t j = 0; j < evidence.size(); ++j) {
                rows.push_back({{"marker_id", evidence.label(j)}, {"log10_lr", json_number(res.marker_contributions[j])}});
            }
            doc["per_marker"] = rows;
        }
        out << doc.dump(2) << '\n';
        return kOk;
    }

    out << "method: " << to_string(res.method) << '\n';
    out << "woe: " << precise(res.woe) << '\n';
    out << "markers: " << evidence.size() << '\n';
    out << "w_r: " << precise(o.w_r) << '\n';
    if (o.w_t) out << "w_t: " << precise(*o.w_t) << '\n';
    if (prior) {
        out << "prior_shape1: " << precise(prior->alpha()) << '\n';
        out << "prior_shape2: " << precise(prior->beta()) << '\n';
    }
    if (res.method == WoEMethod::integrate_mc) {
        out << "mc_samples: " << o.mc_samples << '\n';
        out << "seed: " << o.seed << '\n';
    }
    if (res.mc_std_error) out << "mc_std_error: " << precise(*res.mc_std_error) << '\n';
    if (res.w_hat_h1) out << "w_hat_h1: " << precise(*res.w_hat_h1) << '\n';
    if (res.w_hat_h2) out << "w_hat_h2: " << precise(*res.w_hat_h2) << '\n';
    if (o.verbose) {
        out << "marker_id,log10_lr\n";
        for (std::size_t j = 0; j < evidence.size(); ++j) {
            out << evidence.label(j) << ',' << human(res.marker_contributions[j]) << '\n';
        }
    }
    return kOk;
}

int cmd_estimate(const std::string& path, bool json, std::ostream& out) {
    const PairCountTable table = io::read_pair_table_file(path);
    if (table.total() == 0) throw ParseError("pair table has no counts");
    const WEstimate est = estimate_w_mle(table);
    if (json) {
        ordered_json doc;
        doc["w_hat"] = est.w_hat;
        doc["log_likelihood"] = est.log_likelihood;
        doc["boundary"] = est.boundary;
        doc["total"] = table.total();
        out << doc.dump(2) << '\n';
    } else {
        out << "w_hat: " << precise(est.w_hat) << '\n';
        out << "log_likelihood: " << precise(est.log_likelihood) << '\n';
        out << "boundary: " << (est.boundary ? "yes" : "no") << '\n';
        out << "total: " << table.total() << '\n';
    }
    return kOk;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ParseError("cannot write '" + path.string() + "'");
    return f;
}

int cmd_simulate(const std::string& config_path, const std::string& prefix, bool quiet, std::ostream& out,
                 std::ostream& err) {
    const io::StudyFile study = io::read_study_config_file(config_path);
    const std::string records_path = prefix + ".records.csv";
    const std::string summary_path = prefix + ".summary.csv";

    ProgressFn progress;
    if (!quiet) {
        progress = [&err](std::size_t done, std::size_t total) {
            if (done == total || done % 50 == 0) err << "progress " << done << '/' << total << '\n';
        };
    }

    if (const auto* od = std::get_if<OverdispersionConfig>(&study)) {
        auto records_file = open_output(records_path);
        const auto records = run_overdispersion_study(*od, progress);
        io::write_overdispersion_csv(records_file, records);
        out << "records: " << records_path << '\n';
        return kOk;
    }
    const auto& config = std::get<StudyConfig>(study);
    auto records_file = open_output(records_path);
    auto summary_file = open_output(summary_path);
    const auto result = run_woe_study(config, progress);
    io::write_records_csv(records_file, result.records);
    io::write_summary_csv(summary_file, result.summary);
    out << "records: " << records_path << '\n';
    out << "summary: " << summary_path << '\n';
    return kOk;
}

int cmd_ece(const std::string& records_path, const std::string& output, std::ostream& out) {
    std::ifstream in(records_path);
    if (!in) throw ParseError("cannot open '" + records_path + "'");
    const auto records = io::read_records_csv(in);
    std::vector<EceRow> rows;
    try {
        rows = ece_by_cell(records);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    if (output.empty()) {
        io::write_ece_csv(out, rows);
    } else {
        auto f = open_output(output);
        io::write_ece_csv(f, rows);
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weight of evidence for SNP genotype comparisons with genotyping errors", "wgslr"};
    app.require_subcommand(1);

    WoeOptions woe;
    auto* woe_cmd = app.add_subcommand("woe", "Weight of evidence (log10 LR) for a case file");
    woe_cmd->add_option("--case", woe.case_path, "Case CSV (marker_id,x_t,x_r,q | p0,p1,p2)")->required();
    woe_cmd->add_option("--w-r", woe.w_r, "Reference sample error probability")->required();
    woe_cmd->add_option("--w-t", woe.w_t, "Known trace sample error probability");
    woe_cmd->add_option("--prior-mean", woe.prior_mean, "Mean of the beta prior on (0, 1/2) for w_t");
    woe_cmd->add_option("--prior-var", woe.prior_var, "Variance of the beta prior on (0, 1/2) for w_t");
    woe_cmd->add_option("--prior-shape1", woe.prior_shape1, "First shape of the beta prior for w_t");
    woe_cmd->add_option("--prior-shape2", woe.prior_shape2, "Second shape of the beta prior for w_t");
    woe_cmd->add_flag("--profile", woe.profile, "Maximise the profile likelihood under each hypothesis");
    woe_cmd->add_flag("--plugin", woe.plugin, "Use w_t = w_r");
    woe_cmd->add_option("--integration", woe.integration, "Prior integration: mc or quad")
        ->check(CLI::IsMember({"mc", "quad"}));
    woe_cmd->add_option("--mc", woe.mc_samples, "Monte Carlo prior draws")->check(CLI::Range(2, 100000000));
    woe_cmd->add_option("--quad-tol", woe.quad_tol, "Absolute quadrature tolerance per marker")
        ->check(CLI::PositiveNumber);
    woe_cmd->add_option("--seed", woe.seed, "Monte Carlo seed");
    woe_cmd->add_option("--profile-lower", woe.profile_lower, "Lower bound of the profile search");
    woe_cmd->add_option("--profile-upper", woe.profile_upper, "Upper bound of the profile search");
    woe_cmd->add_flag("--verbose", woe.verbose, "Print per-marker log10 LR contributions");
    woe_cmd->add_flag("--json", woe.json, "Machine-readable output");

    std::string table_path;
    bool estimate_json = false;
    auto* est_cmd = app.add_subcommand("estimate", "Estimate w from a duplicate-sample pair count table");
    est_cmd->add_option("--table", table_path, "Pair count table file")->required();
    est_cmd->add_flag("--json", estimate_json, "Machine-readable output");

    std::string config_path;
    std::string prefix;
    bool quiet = false;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a simulation study from a JSON config");
    sim_cmd->add_option("--config", config_path, "Study config (JSON)")->required();
    sim_cmd->add_option("--output", prefix, "Output prefix; writes <prefix>.records.csv and <prefix>.summary.csv")
        ->required();
    sim_cmd->add_flag("--quiet", quiet, "No progress on standard error");

    std::string records_path;
    std::string ece_output;
    auto* ece_cmd = app.add_subcommand("ece", "Empirical cross-entropy per cell of a records file");
    ece_cmd->add_option("--records", records_path, "Records CSV from simulate")->required();
    ece_cmd->add_option("--output", ece_output, "Write CSV here instead of standard output");

    std::vector<std::string> argv_store{"wgslr"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "wgslr: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (woe_cmd->parsed()) return cmd_woe(woe, out);
        if (est_cmd->parsed()) return cmd_estimate(table_path, estimate_json, out);
        if (sim_cmd->parsed()) return cmd_simulate(config_path, prefix, quiet, out, err);
        if (ece_cmd->parsed()) return cmd_ece(records_path, ece_output, out);
    } catch (const UsageError& e) {
        err << "wgslr: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "wgslr: " << e.what() << '\n';
        return kData;
    } catch (const DomainError& e) {
        err << "wgslr: " << e.what() << '\n';
        return kData;
    } catch (const DegenerateInputError& e) {
        err << "wgslr: " << e.what() << '\n';
        return kNumeric;
    } catch (const NumericError& e) {
        err << "wgslr: " << e.what() << '\n';
        return kNumeric;
    } catch (const StudyError& e) {
        err << "wgslr: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}

} // namespace wgslr::cli

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "wgslr/errors.hpp"
#include "wgslr/estimation.hpp"
#include "wgslr/evidence.hpp"
#include "wgslr/io.hpp"
#include "wgslr/scaled_beta.hpp"
#include "wgslr/simulation.hpp"
#include "wgslr/unknown_w.hpp"

namespace py = pybind11;
using namespace wgslr;

namespace {

CaseData make_case(const std::vector<int>& x_t, const std::vector<int>& x_r,
                   const std::vector<GenotypePriors>& priors, std::optional<std::vector<std::string>> ids) {
    if (x_t.size() != x_r.size() || x_t.size() != priors.size()) {
        throw DomainError("x_t, x_r and the priors must have the same length");
    }
    std::vector<MarkerObservation> markers;
    markers.reserve(x_t.size());
    for (std::size_t j = 0; j < x_t.size(); ++j) markers.push_back({Genotype(x_t[j]), Genotype(x_r[j]), priors[j]});
    return CaseData(std::move(markers), ids.value_or(std::vector<std::string>{}));
}

py::dict record_dict(const StudyRecord& r) {
    py::dict d;
    d["hypothesis"] = std::string(to_string(r.hypothesis));
    d["method"] = std::string(to_string(r.method));
    d["prior_id"] = r.prior_id;
    d["m"] = r.m;
    d["q"] = r.q;
    d["w_t_true"] = r.w_t_true;
    d["replicate"] = r.replicate;
    d["woe"] = r.woe;
    d["w_hat_h1"] = r.w_hat_h1;
    d["w_hat_h2"] = r.w_hat_h2;
    return d;
}

py::dict overdispersion_dict(const OverdispersionRecord& r) {
    py::dict d;
    d["q"] = r.q;
    d["prior_id"] = r.prior_id;
    d["n_sites"] = r.n_sites;
    d["replicate"] = r.replicate;
    d["w_hat"] = r.w_hat;
    d["log_likelihood"] = r.log_likelihood;
    d["boundary"] = r.boundary;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weight of evidence for SNP genotype comparisons with genotyping error";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ArithmeticError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<GenotypePriors>(m, "GenotypePriors")
        .def(py::init<double, double, double>(), py::arg("p0"), py::arg("p1"), py::arg("p2"))
        .def("probs", &GenotypePriors::probs)
        .def("__getitem__", [](const GenotypePriors& p, int g) { return p[g]; })
        .def("__repr__", [](const GenotypePriors& p) {
            std::ostringstream s;
            s.precision(17);
            s << "GenotypePriors(" << p[0] << ", " << p[1] << ", " << p[2] << ")";
            return s.str();
        });
    m.def("hwe_priors", &hwe_priors, py::arg("q"));

    py::class_<ScaledBeta>(m, "ScaledBeta")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def_static("from_moments", &ScaledBeta::from_moments, py::arg("mean"), py::arg("variance"))
        .def_property_readonly("alpha", &ScaledBeta::alpha)
        .def_property_readonly("beta", &ScaledBeta::beta)
        .def_property_readonly("mean", &ScaledBeta::mean)
        .def_property_readonly("variance", &ScaledBeta::variance)
        .def("pdf", &ScaledBeta::pdf, py::arg("w"))
        .def("cdf", &ScaledBeta::cdf, py::arg("w"))
        .def("quantile", &ScaledBeta::quantile, py::arg("p"))
        .def(
            "sample",
            [](const ScaledBeta& d, std::size_t n, std::uint64_t seed) {
                Rng rng(seed);
                return d.sample(rng, n);
            },
            py::arg("n"), py::arg("seed") = 1);

    py::class_<CaseData>(m, "Case")
        .def_static(
            "from_hwe",
            [](const std::vector<int>& x_t, const std::vector<int>& x_r, const std::vector<double>& q,
               std::optional<std::vector<std::string>> ids) {
                std::vector<GenotypePriors> priors;
                for (double v : q) priors.push_back(hwe_priors(v));
                return make_case(x_t, x_r, priors, std::move(ids));
            },
            py::arg("x_t"), py::arg("x_r"), py::arg("q"), py::arg("ids") = py::none())
        .def_static("from_priors", &make_case, py::arg("x_t"), py::arg("x_r"), py::arg("priors"),
                    py::arg("ids") = py::none())
        .def_static("read", [](const std::string& path) { return io::read_case_file(path); }, py::arg("path"))
        .def("__len__", &CaseData::size)
        .def("label", &CaseData::label, py::arg("j"))
        .def_property_readonly("x_t",
                               [](const CaseData& c) {
                                   std::vector<int> v;
                                   for (const auto& mk : c.markers()) v.push_back(mk.x_t.dosage());
                                   return v;
                               })
        .def_property_readonly("x_r", [](const CaseData& c) {
            std::vector<int> v;
            for (const auto& mk : c.markers()) v.push_back(mk.x_r.dosage());
            return v;
        });

    py::class_<WoEResult>(m, "WoEResult")
        .def_readonly("woe", &WoEResult::woe)
        .def_property_readonly("method", [](const WoEResult& r) { return std::string(to_string(r.method)); })
        .def_readonly("w_hat_h1", &WoEResult::w_hat_h1)
        .def_readonly("w_hat_h2", &WoEResult::w_hat_h2)
        .def_readonly("mc_std_error", &WoEResult::mc_std_error)
        .def_readonly("marker_contributions", &WoEResult::marker_contributions)
        .def("__repr__", [](const WoEResult& r) {
            std::ostringstream s;
            s.precision(12);
            s << "WoEResult(method='" << to_string(r.method) << "', woe=" << r.woe << ")";
            return s.str();
        });

    m.def(
        "woe_known",
        [](const CaseData& c, double w_t, double w_r) { return woe_known_result(c, ErrorProb(w_t), ErrorProb(w_r)); },
        py::arg("case"), py::arg("w_t"), py::arg("w_r"));
    m.def(
        "woe_plugin", [](const CaseData& c, double w_r) { return woe_plugin(c, ErrorProb(w_r)); }, py::arg("case"),
        py::arg("w_r"));
    m.def(
        "woe_integrate_mc",
        [](const CaseData& c, const ScaledBeta& prior, double w_r, std::size_t n_samples, std::uint64_t seed) {
            Rng rng(seed);
            return woe_integrate_mc(c, prior, ErrorProb(w_r), n_samples, rng);
        },
        py::arg("case"), py::arg("prior"), py::arg("w_r"), py::arg("n_samples") = kDefaultMcSamples,
        py::arg("seed") = 1);
    m.def(
        "woe_integrate_quad",
        [](const CaseData& c, const ScaledBeta& prior, double w_r, double tol) {
            return woe_integrate_quad(c, prior, ErrorProb(w_r), tol);
        },
        py::arg("case"), py::arg("prior"), py::arg("w_r"), py::arg("tol") = kDefaultQuadTolerance);
    m.def(
        "woe_profile",
        [](const CaseData& c, double w_r, double lower, double upper) {
            return woe_profile(c, ErrorProb(w_r), lower, upper);
        },
        py::arg("case"), py::arg("w_r"), py::arg("lower") = 0.0, py::arg("upper") = 0.5);

    py::class_<WEstimate>(m, "WEstimate")
        .def_readonly("w_hat", &WEstimate::w_hat)
        .def_readonly("log_likelihood", &WEstimate::log_likelihood)
        .def_readonly("boundary", &WEstimate::boundary);
    m.def(
        "estimate_w",
        [](const PairCountTable::Counts& counts, double q) {
            return estimate_w_mle(PairCountTable(counts, hwe_priors(q)));
        },
        py::arg("counts"), py::arg("q"));

    m.def(
        "compute_ece",
        [](const std::vector<double>& h1, const std::vector<double>& h2) { return compute_ece(h1, h2); },
        py::arg("woe_h1"), py::arg("woe_h2"));

    m.def(
        "_run_study_json",
        [](const std::string& text) {
            const auto study = io::parse_study_config(nlohmann::json::parse(text));
            py::list out;
            if (const auto* c = std::get_if<StudyConfig>(&study)) {
                for (const auto& r : run_woe_study(*c).records) out.append(record_dict(r));
            } else {
                for (const auto& r : run_overdispersion_study(std::get<OverdispersionConfig>(study)))
                    out.append(overdispersion_dict(r));
            }
            return out;
        },
        py::arg("config"));
}

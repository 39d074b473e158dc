#include "wgslr/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "wgslr/errors.hpp"

namespace wgslr::io {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != last || std::isnan(v)) {
        throw ParseError("invalid number '" + std::string(s) + "'", line);
    }
    return v;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t parse_uint(std::string_view s, std::size_t line) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("invalid non-negative integer '" + std::string(s) + "'", line);
    }
    return v;
}

Genotype parse_genotype(std::string_view s, std::size_t line) {
    if (s == "0" || s == "1" || s == "2") return Genotype(s[0] - '0');
    throw ParseError("invalid genotype '" + std::string(s) + "', expected 0, 1 or 2", line);
}

std::optional<double> parse_optional_double(std::string_view s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    return parse_double(s, line);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

/// Rows of a comma-separated file; blank lines are skipped but counted.
struct CsvRow {
    std::size_t line;
    std::vector<std::string> fields;
};

std::vector<CsvRow> read_rows(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (line == 1 && text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
        if (trim(text).empty()) continue;
        rows.push_back({line, split(text)});
    }
    return rows;
}

std::vector<CsvRow> read_table(std::istream& in, const std::vector<std::string>& header, const char* what) {
    auto rows = read_rows(in);
    if (rows.empty()) throw ParseError(std::string(what) + ": missing header row", 1);
    if (rows.front().fields != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw ParseError(std::string(what) + ": expected header '" + expected + "'", rows.front().line);
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].fields.size() != header.size()) {
            throw ParseError(std::string(what) + ": expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(rows[i].fields.size()),
                             rows[i].line);
        }
    }
    rows.erase(rows.begin());
    return rows;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return in;
}

const std::vector<std::string> kRecordHeader{"hypothesis", "method",   "prior_id", "m",        "q",
                                             "w_t_true",   "replicate", "woe",     "w_hat_h1", "w_hat_h2"};
const std::vector<std::string> kSummaryHeader{"hypothesis", "method",  "prior_id",   "m",          "q",
                                              "w_t_true",   "n",       "mean_woe",   "min_woe",    "max_woe",
                                              "n_positive", "n_negative", "n_zero", "n_wrong_sign"};
const std::vector<std::string> kOverdispersionHeader{"q",     "prior_id",       "n_sites", "replicate",
                                                     "w_hat", "log_likelihood", "boundary"};

} // namespace

CaseData read_case(std::istream& in) {
    auto rows = read_rows(in);
    if (rows.empty()) throw ParseError("case file: missing header row", 1);
    const auto& header = rows.front().fields;
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!col.emplace(header[i], i).second) {
            throw ParseError("case file: duplicate column '" + header[i] + "'", rows.front().line);
        }
    }
    static const std::set<std::string> known{"marker_id", "x_t", "x_r", "q", "p0", "p1", "p2"};
    for (const auto& h : header) {
        if (!known.count(h)) throw ParseError("case file: unknown column '" + h + "'", rows.front().line);
    }
    for (const char* req : {"marker_id", "x_t", "x_r"}) {
        if (!col.count(req)) throw ParseError(std::string("case file: missing column '") + req + "'", rows.front().line);
    }
    const bool has_q = col.count("q") > 0;
    const int n_p = static_cast<int>(col.count("p0") + col.count("p1") + col.count("p2"));
    if (n_p != 0 && n_p != 3) throw ParseError("case file: columns p0, p1, p2 must appear together", rows.front().line);
    if (!has_q && n_p == 0) throw ParseError("case file: need a q column or p0, p1, p2 columns", rows.front().line);
    if (rows.size() < 2) throw ParseError("case file: no markers", rows.front().line);

    std::vector<MarkerObservation> markers;
    std::vector<std::string> ids;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& [line, f] = rows[i];
        if (f.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()),
                             line);
        }
        const std::string& id = f[col["marker_id"]];
        if (id.empty()) throw ParseError("empty marker_id", line);
        if (!seen.insert(id).second) throw ParseError("duplicate marker_id '" + id + "'", line);
        const Genotype x_t = parse_genotype(f[col["x_t"]], line);
        const Genotype x_r = parse_genotype(f[col["x_r"]], line);

        const std::optional<double> q = has_q ? parse_optional_double(f[col["q"]], line) : std::nullopt;
        std::optional<double> p[3];
        if (n_p == 3) {
            p[0] = parse_optional_double(f[col["p0"]], line);
            p[1] = parse_optional_double(f[col["p1"]], line);
            p[2] = parse_optional_double(f[col["p2"]], line);
        }
        const int given = (p[0] ? 1 : 0) + (p[1] ? 1 : 0) + (p[2] ? 1 : 0);
        if (given != 0 && given != 3) throw ParseError("p0, p1, p2 must be given together", line);
        if (q.has_value() == (given == 3)) throw ParseError("give exactly one of q or p0, p1, p2", line);

        if (q) {
            if (!(*q > 0.0 && *q < 1.0)) throw ParseError("q must lie in (0, 1)", line);
            markers.push_back({x_t, x_r, hwe_priors(*q)});
        } else {
            const double sum = *p[0] + *p[1] + *p[2];
            for (const auto& v : p) {
                if (!(*v >= 0.0 && *v <= 1.0)) throw ParseError("genotype probabilities must lie in [0, 1]", line);
            }
            if (std::abs(sum - 1.0) > 1e-9) throw ParseError("p0 + p1 + p2 must equal 1", line);
            markers.push_back({x_t, x_r, GenotypePriors(*p[0] / sum, *p[1] / sum, *p[2] / sum)});
        }
        ids.push_back(id);
    }
    return CaseData(std::move(markers), std::move(ids));
}

CaseData read_case_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_case(in);
}

void write_case(std::ostream& out, const CaseData& evidence) {
    write_row(out, {"marker_id", "x_t", "x_r", "p0", "p1", "p2"});
    for (std::size_t j = 0; j < evidence.size(); ++j) {
        const auto& mk = evidence[j];
        const auto& p = mk.priors.probs();
        write_row(out, {evidence.label(j), std::to_string(mk.x_t.dosage()), std::to_string(mk.x_r.dosage()),
                        format_double(p[0]), format_double(p[1]), format_double(p[2])});
    }
}

PairCountTable read_pair_table(std::istream& in) {
    auto rows = read_rows(in);
    if (rows.empty()) throw ParseError("pair table: empty file", 1);
    const auto& qrow = rows[0];
    if (qrow.fields.size() != 2 || qrow.fields[0] != "q") {
        throw ParseError("pair table: first row must be 'q,<allele frequency>'", qrow.line);
    }
    const double q = parse_double(qrow.fields[1], qrow.line);
    if (!(q > 0.0 && q <= 1.0)) throw ParseError("q must lie in (0, 1]", qrow.line);
    if (rows.size() < 2 || rows[1].fields != std::vector<std::string>{"genotype", "0", "1", "2"}) {
        throw ParseError("pair table: second row must be 'genotype,0,1,2'", rows.size() < 2 ? qrow.line + 1 : rows[1].line);
    }
    if (rows.size() != 5) {
        throw ParseError("pair table: expected 3 count rows, got " + std::to_string(rows.size() - 2),
                         rows.back().line);
    }
    PairCountTable::Counts counts{};
    for (int a = 0; a < 3; ++a) {
        const auto& [line, f] = rows[static_cast<std::size_t>(a) + 2];
        if (f.size() != 4) throw ParseError("expected 4 fields, got " + std::to_string(f.size()), line);
        if (f[0] != std::to_string(a)) throw ParseError("expected row label " + std::to_string(a), line);
        for (int b = 0; b < 3; ++b) {
            counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                parse_uint(f[static_cast<std::size_t>(b) + 1], line);
        }
    }
    return PairCountTable(counts, hwe_priors(q));
}

PairCountTable read_pair_table_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_pair_table(in);
}

void write_pair_table(std::ostream& out, const PairCountTable& table, double q) {
    write_row(out, {"q", format_double(q)});
    write_row(out, {"genotype", "0", "1", "2"});
    for (int a = 0; a < 3; ++a) {
        write_row(out, {std::to_string(a), std::to_string(table(a, 0)), std::to_string(table(a, 1)),
                        std::to_string(table(a, 2))});
    }
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw DomainError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get_required(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw DomainError(where + ": missing key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw DomainError(where + ": key '" + key + "' has the wrong type");
    }
}

template <class T>
T get_optional(const json& obj, const char* key, T fallback, const std::string& where) {
    return obj.contains(key) ? get_required<T>(obj, key, where) : fallback;
}

std::size_t get_count(const json& v, const std::string& what) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw DomainError(what + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::uint64_t get_seed(const json& obj, const std::string& where) {
    if (!obj.contains("master_seed")) throw DomainError(where + ": missing key 'master_seed'");
    const json& v = obj.at("master_seed");
    if (!v.is_number_unsigned()) throw DomainError(where + ": 'master_seed' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> get_numbers(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_array()) throw DomainError(where + ": '" + key + "' must be a list");
    std::vector<double> out;
    for (const auto& v : obj.at(key)) {
        if (!v.is_number()) throw DomainError(where + ": '" + key + "' must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::size_t> get_counts(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_array()) throw DomainError(where + ": '" + key + "' must be a list");
    std::vector<std::size_t> out;
    for (const auto& v : obj.at(key)) out.push_back(get_count(v, where + ": '" + key + "'"));
    return out;
}

std::vector<NamedPrior> parse_priors(const json& doc) {
    std::vector<NamedPrior> out;
    if (!doc.contains("priors")) return out;
    if (!doc.at("priors").is_array()) throw DomainError("study config: 'priors' must be a list");
    std::size_t i = 0;
    for (const auto& p : doc.at("priors")) {
        const std::string where = "prior " + std::to_string(i++);
        if (!p.is_object()) throw DomainError(where + ": must be an object");
        reject_unknown_keys(p, {"id", "mean", "variance", "shape1", "shape2"}, where);
        const bool moments = p.contains("mean") || p.contains("variance");
        const bool shapes = p.contains("shape1") || p.contains("shape2");
        if (moments == shapes) throw DomainError(where + ": give either mean/variance or shape1/shape2");
        std::optional<ScaledBeta> dist;
        std::string id;
        if (moments) {
            const double mean = get_required<double>(p, "mean", where);
            const double var = get_required<double>(p, "variance", where);
            dist = ScaledBeta::from_moments(mean, var);
            id = "mean=" + format_double(mean) + ";var=" + format_double(var);
        } else {
            const double a = get_required<double>(p, "shape1", where);
            const double b = get_required<double>(p, "shape2", where);
            dist = ScaledBeta(a, b);
            id = "shape1=" + format_double(a) + ";shape2=" + format_double(b);
        }
        id = get_optional<std::string>(p, "id", id, where);
        if (id.find_first_of(",\n\r") != std::string::npos) throw DomainError(where + ": id must not contain commas");
        out.push_back({id, *dist});
    }
    return out;
}

} // namespace

StudyFile parse_study_config(const json& doc) {
    if (!doc.is_object()) throw DomainError("study config must be a JSON object");
    const std::string kind = get_optional<std::string>(doc, "study", "woe", "study config");
    const std::string where = "study config";
    if (kind == "woe") {
        reject_unknown_keys(doc,
                            {"study", "q_values", "w_t_values", "w_r", "marker_counts", "replicates", "methods",
                             "priors", "mc_samples", "quad_tol", "profile_lower", "profile_upper", "master_seed"},
                            where);
        StudyConfig c;
        c.q_values = get_numbers(doc, "q_values", where);
        c.w_t_values = get_numbers(doc, "w_t_values", where);
        c.w_r = get_required<double>(doc, "w_r", where);
        c.marker_counts = get_counts(doc, "marker_counts", where);
        c.replicates = get_count(doc.value("replicates", json()), where + ": 'replicates'");
        if (!doc.contains("methods") || !doc.at("methods").is_array()) {
            throw DomainError(where + ": 'methods' must be a list");
        }
        for (const auto& m : doc.at("methods")) {
            if (!m.is_string()) throw DomainError(where + ": methods must be strings");
            c.methods.push_back(parse_study_method(m.get<std::string>()));
        }
        c.priors = parse_priors(doc);
        if (doc.contains("mc_samples")) c.mc_samples = get_count(doc.at("mc_samples"), where + ": 'mc_samples'");
        c.quad_tol = get_optional<double>(doc, "quad_tol", c.quad_tol, where);
        c.profile_lower = get_optional<double>(doc, "profile_lower", c.profile_lower, where);
        c.profile_upper = get_optional<double>(doc, "profile_upper", c.profile_upper, where);
        c.master_seed = get_seed(doc, where);
        c.validate();
        return c;
    }
    if (kind == "overdispersion") {
        reject_unknown_keys(doc, {"study", "q_values", "priors", "table_sizes", "replicates", "master_seed"}, where);
        OverdispersionConfig c;
        c.q_values = get_numbers(doc, "q_values", where);
        c.priors = parse_priors(doc);
        c.table_sizes = get_counts(doc, "table_sizes", where);
        c.replicates = get_count(doc.value("replicates", json()), where + ": 'replicates'");
        c.master_seed = get_seed(doc, where);
        c.validate();
        return c;
    }
    throw DomainError(where + ": 'study' must be \"woe\" or \"overdispersion\"");
}

StudyFile read_study_config_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("study config: " + std::string(e.what()));
    }
    return parse_study_config(doc);
}

void write_records_csv(std::ostream& out, const std::vector<StudyRecord>& records) {
    write_row(out, kRecordHeader);
    for (const auto& r : records) {
        write_row(out, {std::string(to_string(r.hypothesis)), std::string(to_string(r.method)), r.prior_id,
                        std::to_string(r.m), format_double(r.q), format_double(r.w_t_true),
                        std::to_string(r.replicate), format_double(r.woe), format_optional(r.w_hat_h1),
                        format_optional(r.w_hat_h2)});
    }
}

std::vector<StudyRecord> read_records_csv(std::istream& in) {
    std::vector<StudyRecord> out;
    for (const auto& [line, f] : read_table(in, kRecordHeader, "records")) {
        try {
            StudyRecord r;
            r.hypothesis = parse_hypothesis(f[0]);
            r.method = parse_study_method(f[1]);
            r.prior_id = f[2];
            r.m = parse_uint(f[3], line);
            r.q = parse_double(f[4], line);
            r.w_t_true = parse_double(f[5], line);
            r.replicate = parse_uint(f[6], line);
            r.woe = parse_double(f[7], line);
            r.w_hat_h1 = parse_optional_double(f[8], line);
            r.w_hat_h2 = parse_optional_double(f[9], line);
            out.push_back(std::move(r));
        } catch (const DomainError& e) {
            throw ParseError(e.what(), line);
        }
    }
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    write_row(out, kSummaryHeader);
    for (const auto& r : rows) {
        write_row(out, {std::string(to_string(r.hypothesis)), std::string(to_string(r.method)), r.prior_id,
                        std::to_string(r.m), format_double(r.q), format_double(r.w_t_true), std::to_string(r.n),
                        format_double(r.mean_woe), format_double(r.min_woe), format_double(r.max_woe),
                        std::to_string(r.n_positive), std::to_string(r.n_negative), std::to_string(r.n_zero),
                        std::to_string(r.n_wrong_sign)});
    }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    std::vector<SummaryRow> out;
    for (const auto& [line, f] : read_table(in, kSummaryHeader, "summary")) {
        try {
            SummaryRow r;
            r.hypothesis = parse_hypothesis(f[0]);
            r.method = parse_study_method(f[1]);
            r.prior_id = f[2];
            r.m = parse_uint(f[3], line);
            r.q = parse_double(f[4], line);
            r.w_t_true = parse_double(f[5], line);
            r.n = parse_uint(f[6], line);
            r.mean_woe = parse_double(f[7], line);
            r.min_woe = parse_double(f[8], line);
            r.max_woe = parse_double(f[9], line);
            r.n_positive = parse_uint(f[10], line);
            r.n_negative = parse_uint(f[11], line);
            r.n_zero = parse_uint(f[12], line);
            r.n_wrong_sign = parse_uint(f[13], line);
            out.push_back(std::move(r));
        } catch (const DomainError& e) {
            throw ParseError(e.what(), line);
        }
    }
    return out;
}

void write_overdispersion_csv(std::ostream& out, const std::vector<OverdispersionRecord>& records) {
    write_row(out, kOverdispersionHeader);
    for (const auto& r : records) {
        write_row(out, {format_double(r.q), r.prior_id, std::to_string(r.n_sites), std::to_string(r.replicate),
                        format_double(r.w_hat), format_double(r.log_likelihood), r.boundary ? "1" : "0"});
    }
}

std::vector<OverdispersionRecord> read_overdispersion_csv(std::istream& in) {
    std::vector<OverdispersionRecord> out;
    for (const auto& [line, f] : read_table(in, kOverdispersionHeader, "overdispersion records")) {
        OverdispersionRecord r;
        r.q = parse_double(f[0], line);
        r.prior_id = f[1];
        r.n_sites = parse_uint(f[2], line);
        r.replicate = parse_uint(f[3], line);
        r.w_hat = parse_double(f[4], line);
        r.log_likelihood = parse_double(f[5], line);
        if (f[6] != "0" && f[6] != "1") throw ParseError("boundary must be 0 or 1", line);
        r.boundary = f[6] == "1";
        out.push_back(std::move(r));
    }
    return out;
}

void write_ece_csv(std::ostream& out, const std::vector<EceRow>& rows) {
    write_row(out, {"method", "prior_id", "m", "q", "w_t_true", "n_h1", "n_h2", "ece"});
    for (const auto& r : rows) {
        write_row(out, {std::string(to_string(r.cell.method)), r.cell.prior_id, std::to_string(r.cell.m),
                        format_double(r.cell.q), format_double(r.cell.w_t_true), std::to_string(r.n_h1),
                        std::to_string(r.n_h2), format_double(r.ece)});
    }
}

} // namespace wgslr::io

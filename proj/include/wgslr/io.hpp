#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wgslr/estimation.hpp"
#include "wgslr/evidence.hpp"
#include "wgslr/simulation.hpp"

namespace wgslr::io {

/// Shortest round-trip decimal; infinities as "inf" / "-inf".
std::string format_double(double x);
/// Accepts what format_double writes. Throws ParseError.
double parse_double(std::string_view s, std::size_t line = 0);

/// Comma-separated with header: marker_id,x_t,x_r and either q or p0,p1,p2.
CaseData read_case(std::istream& in);
CaseData read_case_file(const std::filesystem::path& path);
void write_case(std::ostream& out, const CaseData& evidence);

/// "q,<value>" line, "genotype,0,1,2" header, then three labelled count rows.
PairCountTable read_pair_table(std::istream& in);
PairCountTable read_pair_table_file(const std::filesystem::path& path);
void write_pair_table(std::ostream& out, const PairCountTable& table, double q);

using StudyFile = std::variant<StudyConfig, OverdispersionConfig>;

/// Validates against the schema (unknown keys rejected) and the config invariants.
StudyFile parse_study_config(const nlohmann::json& doc);
StudyFile read_study_config_file(const std::filesystem::path& path);

void write_records_csv(std::ostream& out, const std::vector<StudyRecord>& records);
std::vector<StudyRecord> read_records_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

void write_overdispersion_csv(std::ostream& out, const std::vector<OverdispersionRecord>& records);
std::vector<OverdispersionRecord> read_overdispersion_csv(std::istream& in);

void write_ece_csv(std::ostream& out, const std::vector<EceRow>& rows);

} // namespace wgslr::io

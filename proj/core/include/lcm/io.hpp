#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lcm/bench.hpp"
#include "lcm/simulator.hpp"

namespace lcm {

// Datasets ------------------------------------------------------------------

struct CsvOptions {
  std::optional<CategoryScheme> scheme;  // inferred from column maxima when absent
  bool zero_based = false;               // shift every value by +1 (0/1 files)
};

/// Reads comma separated integer rows. A first line containing any
/// non-integer field is treated as a header. Errors name the offending line.
Dataset read_dataset_csv(std::istream& in, const CsvOptions& opts = {}, const std::string& source = "<stream>");
Dataset read_dataset_csv(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Writes a header y1..yd (plus "class" when labels are given) and one row per observation.
void write_dataset_csv(std::ostream& out, const Dataset& data, const std::vector<int>* labels = nullptr);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const std::vector<int>* labels = nullptr);

/// {"categories": [c_1, ..., c_d]}
CategoryScheme parse_scheme_json(const std::string& text);
CategoryScheme read_scheme_json(const std::filesystem::path& path);

// Parameters ----------------------------------------------------------------

/// {"K": int, "eta": [...], "pi": [[[row of variable 1], ...], ...]} with
/// pi indexed by component, then variable.
std::string params_to_json(const LcmParams& params, int indent = 2);
LcmParams parse_params_json(const std::string& text);
LcmParams read_params_json(const std::filesystem::path& path);

/// Every bundle with its id, n, reported true log-likelihood and parameters.
std::string registry_to_json(const std::vector<BundleSpec>& bundles, int indent = 2);

// Run records ---------------------------------------------------------------

/// Serialises records without wall-clock fields (wall_seconds and the trace
/// timestamps), so the text depends only on the computation. Timings live in
/// the timing CSV.
std::string records_to_json(const std::vector<RunRecord>& records, int indent = 2);
/// Inverse of records_to_json; timing fields come back as zero.
std::vector<RunRecord> parse_records_json(const std::string& text);

/// Copy of r with its timing fields zeroed.
RunRecord without_timings(RunRecord r);
/// Field-by-field equality, exact on every double.
bool same_record(const RunRecord& a, const RunRecord& b);

// Reports -------------------------------------------------------------------

void write_summary_csv(std::ostream& out, const ComparisonReport& report);
void write_boxplot_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_rmse_csv(std::ostream& out, const ComparisonReport& report);
void write_timing_csv(std::ostream& out, const std::vector<RunRecord>& records);

struct ReportFiles {
  std::filesystem::path runs_json, summary_csv, boxplot_csv, rmse_csv, timing_csv;
};

/// Writes runs.json, summary.csv, boxplot.csv, rmse.csv and timing.csv into dir
/// (created if missing). Only timing.csv depends on wall-clock time.
ReportFiles emit_report(const std::filesystem::path& dir, const std::vector<RunRecord>& records);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lcm

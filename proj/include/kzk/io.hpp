#pragma once

#include "kzk/diagnostics.hpp"
#include "kzk/field.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kzk {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// KZK_OUTPUT_ROOT, when set, replaces the directory that relative output
/// paths resolve against.
std::filesystem::path resolve_output_dir(const std::string& dir,
                                         const std::filesystem::path& base = ".");

void write_text(const std::filesystem::path& path, const std::string& text);

/// Records as CSV with a `# columns=` header line.
void write_records_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records,
                       const std::vector<std::string>& weight_names,
                       const std::vector<std::string>& strong_names,
                       const std::vector<std::string>& lambda_names);

/// Physical field with `# key=value` header rows (nx, ny, X_max, L, family)
/// followed by nx rows of ny values.
void write_field_csv(const std::filesystem::path& path, const Field& u);

struct FieldFile {
  std::map<std::string, std::string> header;
  Eigen::MatrixXd values;  ///< nx x ny physical samples
};
FieldFile read_field_csv(const std::filesystem::path& path);

/// Writes run metadata (timestamp, command) beside the outputs so the CSVs
/// themselves stay byte-identical between runs.
void write_metadata(const std::filesystem::path& dir, const std::string& command);

} // namespace kzk

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kernlab/diagnostics.hpp"
#include "kernlab/interp.hpp"

namespace kernlab {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Leading comment block shared by every emitted CSV: the config text with
/// each line prefixed "# ", then `summary` as "## key = value" lines.
std::string csv_preamble(std::string_view config_text, const KeyValues& summary);

/// Report CSV columns:
/// n,h,q,rho,lebesgue,native_norm,sup_error,l2_error,jitter,precision,sampling_condition,status
/// Missing values are empty cells. The report's own metadata is appended to
/// the summary block.
std::string report_csv(const DiagnosticsReport& report, std::string_view config_text,
                       const KeyValues& summary = {});

struct DecayRow {
  std::size_t n = 0;
  std::size_t node_index = 0;
  std::optional<DecayFit> fit;
  std::string status = "ok";
};

/// Columns: n,node_index,nu_hat,c_hat,r2,c_env,samples,status
std::string decay_csv(const std::vector<DecayRow>& rows, std::string_view config_text,
                      const KeyValues& summary = {});

/// Columns: index,x1..xN,data,coefficient
std::string interpolant_csv(const Interpolant& s, std::string_view config_text);

struct DesignRow {
  std::size_t index = 0;
  std::vector<double> x;
  /// Index of the first level containing the point.
  std::size_t level = 0;
};

/// Columns: index,x1..xN,level
std::string design_csv(const std::vector<DesignRow>& rows, int dim, std::string_view config_text);

/// RFC-4180 style quoting when a cell holds a comma, quote or newline.
std::string csv_cell(std::string_view s);

struct CsvTable {
  /// Leading lines starting with '#', verbatim.
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws ContractError naming the column when it is absent.
  std::size_t column(std::string_view name) const;
  /// Empty cells become nullopt; throws ContractError on unparseable cells.
  std::vector<std::optional<double>> numbers(std::string_view name) const;
  /// Value of a "## key = value" summary line.
  std::optional<std::string> summary(std::string_view key) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace kernlab

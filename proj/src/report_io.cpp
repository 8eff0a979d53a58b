#include "kernlab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kernlab/errors.hpp"
#include "kernlab/format.hpp"

namespace kernlab {

namespace {

// Undefined geometry (q of a single node) is an empty cell.
std::string defined(double v) { return std::isnan(v) ? std::string() : format_number(v); }

}  // namespace

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' || c == '\r' ? ' ' : c;
  }
  return out + '"';
}

std::string csv_preamble(std::string_view config_text, const KeyValues& summary) {
  std::string out;
  while (!config_text.empty()) {
    const auto nl = config_text.find('\n');
    const auto line = config_text.substr(0, nl);
    out += line.empty() ? "#" : "# " + std::string(line);
    out += '\n';
    if (nl == std::string_view::npos) break;
    config_text = config_text.substr(nl + 1);
  }
  for (const auto& [k, v] : summary) out += "## " + k + " = " + v + '\n';
  return out;
}

std::string report_csv(const DiagnosticsReport& report, std::string_view config_text,
                       const KeyValues& summary) {
  KeyValues all = report.metadata;
  all.insert(all.end(), summary.begin(), summary.end());
  std::string out = csv_preamble(config_text, all);
  out += "n,h,q,rho,lebesgue,native_norm,sup_error,l2_error,jitter,precision,"
         "sampling_condition,status\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.n) + ',' + format_number(r.h) + ',' + defined(r.q) + ',' +
           defined(r.rho) + ',' + format_number(r.lebesgue) + ',' +
           format_number(r.native_norm) + ',' + format_number(r.sup_error) + ',' +
           format_number(r.l2_error) + ',' + format_number(r.jitter) + ',' +
           (r.precision ? std::string(to_string(*r.precision)) : std::string()) + ',' +
           csv_cell(r.sampling_condition) + ',' + csv_cell(r.status) + '\n';
  }
  return out;
}

std::string decay_csv(const std::vector<DecayRow>& rows, std::string_view config_text,
                      const KeyValues& summary) {
  std::string out = csv_preamble(config_text, summary);
  out += "n,node_index,nu_hat,c_hat,r2,c_env,samples,status\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.node_index) + ',';
    if (r.fit) {
      out += format_number(r.fit->rate) + ',' + format_number(r.fit->constant) + ',' +
             format_number(r.fit->r2) + ',' + format_number(r.fit->envelope) + ',' +
             std::to_string(r.fit->samples);
    } else {
      out += ",,,,";
    }
    out += ',' + csv_cell(r.status) + '\n';
  }
  return out;
}

std::string interpolant_csv(const Interpolant& s, std::string_view config_text) {
  KeyValues summary{{"precision", std::string(to_string(s.precision()))},
                    {"relative_residual", format_number(s.info().relative_residual)},
                    {"jitter", format_number(s.info().jitter)}};
  std::string out = csv_preamble(config_text, summary);
  const int dim = s.nodes().dim();
  out += "index";
  for (int k = 0; k < dim; ++k) out += ",x" + std::to_string(k + 1);
  out += ",data,coefficient\n";
  for (std::size_t i = 0; i < s.nodes().size(); ++i) {
    out += std::to_string(i);
    for (int k = 0; k < dim; ++k) out += ',' + format_number(s.nodes()[i][k]);
    const auto e = static_cast<Eigen::Index>(i);
    out += ',' + format_number(s.data()(e)) + ',' + format_number(s.coefficients()(e)) + '\n';
  }
  return out;
}

std::string design_csv(const std::vector<DesignRow>& rows, int dim, std::string_view config_text) {
  std::string out = csv_preamble(config_text, {});
  out += "index";
  for (int k = 0; k < dim; ++k) out += ",x" + std::to_string(k + 1);
  out += ",level\n";
  for (const auto& r : rows) {
    out += std::to_string(r.index);
    for (double v : r.x) out += ',' + format_number(v);
    out += ',' + std::to_string(r.level) + '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_row(std::string_view line, std::size_t lineno) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ContractError("unterminated quote on CSV line " + std::to_string(lineno));
  cells.push_back(std::move(cur));
  return cells;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool in_header = true;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (in_header && line.starts_with("#")) {
      t.comments.emplace_back(line);
      continue;
    }
    if (line.empty()) continue;
    if (in_header) {
      t.header = split_row(line, lineno);
      in_header = false;
      continue;
    }
    auto row = split_row(line, lineno);
    if (row.size() != t.header.size())
      throw ContractError("CSV line " + std::to_string(lineno) + " has " +
                          std::to_string(row.size()) + " cells, header has " +
                          std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ContractError("CSV has no column '" + std::string(name) + "'");
}

std::vector<std::optional<double>> CsvTable::numbers(std::string_view name) const {
  const auto c = column(name);
  std::vector<std::optional<double>> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& s = rows[r][c];
    if (s.empty()) {
      out.emplace_back();
      continue;
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ContractError("column '" + std::string(name) + "' row " + std::to_string(r) +
                          ": not a number: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::optional<std::string> CsvTable::summary(std::string_view key) const {
  const std::string prefix = "## " + std::string(key) + " = ";
  for (const auto& c : comments)
    if (c.starts_with(prefix)) return c.substr(prefix.size());
  return std::nullopt;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error("failed writing " + path);
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

}  // namespace kernlab

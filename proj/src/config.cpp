#include "kernlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "kernlab/errors.hpp"
#include "kernlab/format.hpp"

namespace kernlab {

std::string_view to_string(ExperimentType t) {
  switch (t) {
    case ExperimentType::lebesgue_trace: return "lebesgue_trace";
    case ExperimentType::convergence: return "convergence";
    case ExperimentType::norm_growth: return "norm_growth";
    case ExperimentType::decay: return "decay";
    default: return "interp_once";
  }
}

std::string_view to_string(DesignScheme s) {
  switch (s) {
    case DesignScheme::greedy: return "greedy";
    case DesignScheme::dyadic: return "dyadic";
    default: return "equispaced";
  }
}

namespace {

const char* const kKeys[] = {
    "experiment.type",        "experiment.output",         "experiment.svg",
    "experiment.precision",   "kernel.family",             "kernel.gamma",
    "domain.lower",           "domain.upper",              "design.scheme",
    "design.candidates",      "design.candidate_count",    "design.seed",
    "design.start",           "design.levels",             "grid.points_per_axis",
    "grid.probe_points_per_axis", "target.name",           "target.value",
    "target.center",          "target.power",              "target.centers",
    "target.weights",         "target.frequency",          "target.phase",
    "target.width",           "decay.node",
};

const char* const kTargets[] = {"zero", "constant", "abs_power", "kernel_translate",
                                "kernel_combination", "sine", "smooth_step"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(line(key), key, msg);
  }

  const std::string& text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail(key, "required key is missing");
    return it->second.value;
  }

  double number(const std::string& key) const { return parse_double(key, text(key)); }

  std::uint64_t integer(const std::string& key) const {
    const auto& s = text(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail(key, "expected a non-negative integer, got '" + s + "'");
    return v;
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : items(key)) out.push_back(parse_double(key, item));
    return out;
  }

  std::vector<std::size_t> integers(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& item : items(key)) {
      std::size_t v = 0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size())
        fail(key, "expected a list of non-negative integers, got '" + item + "'");
      out.push_back(v);
    }
    return out;
  }

  bool boolean(const std::string& key) const {
    const auto& s = text(key);
    if (s == "true") return true;
    if (s == "false") return false;
    fail(key, "expected true or false, got '" + s + "'");
  }

 private:
  double parse_double(const std::string& key, const std::string& s) const {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
      fail(key, "expected a finite number, got '" + s + "'");
    return v;
  }

  std::vector<std::string> items(const std::string& key) const {
    std::vector<std::string> out;
    std::string_view rest = text(key);
    while (true) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (item.empty()) fail(key, "empty list item");
      out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  std::map<std::string, Entry> entries_;
};

std::map<std::string, Entry> tokenize(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::string section;
  int lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "", "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(lineno, "", "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(lineno, "", "expected 'key = value' or '[section]'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(lineno, "", "missing key before '='");
    if (section.empty()) throw ConfigError(lineno, std::string(key), "key outside any section");
    const std::string full = section + "." + std::string(key);
    bool known = false;
    for (const char* k : kKeys) known = known || full == k;
    if (!known) throw ConfigError(lineno, full, "unknown key");
    if (entries.count(full))
      throw ConfigError(lineno, full,
                        "duplicate key (first set on line " +
                            std::to_string(entries[full].line) + ")");
    entries[full] = Entry{std::string(trim(line.substr(eq + 1))), lineno};
  }
  return entries;
}

bool is_index(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

ExperimentConfig build(const Reader& r) {
  ExperimentConfig c;

  {
    const auto& t = r.text("experiment.type");
    bool found = false;
    for (auto e : {ExperimentType::lebesgue_trace, ExperimentType::convergence,
                   ExperimentType::norm_growth, ExperimentType::decay,
                   ExperimentType::interp_once}) {
      if (to_string(e) == t) {
        c.type = e;
        found = true;
      }
    }
    if (!found) r.fail("experiment.type", "unknown experiment '" + t + "'");
  }
  c.output = r.text("experiment.output");
  if (c.output.empty()) r.fail("experiment.output", "output prefix is empty");
  if (r.has("experiment.svg")) c.svg = r.boolean("experiment.svg");
  if (r.has("experiment.precision")) {
    const auto& p = r.text("experiment.precision");
    if (p == "auto")
      c.precision = PrecisionPolicy::automatic;
    else if (p == "binary64")
      c.precision = PrecisionPolicy::binary64;
    else if (p == "double-double")
      c.precision = PrecisionPolicy::double_double;
    else
      r.fail("experiment.precision",
             "expected auto, binary64 or double-double, got '" + p + "'");
  }

  {
    const auto& f = r.text("kernel.family");
    const auto family = parse_kernel_family(f);
    if (!family) r.fail("kernel.family", "unknown kernel family '" + f + "'");
    c.kernel.family = *family;
  }
  if (r.has("kernel.gamma")) c.kernel.gamma = r.number("kernel.gamma");
  if (!(c.kernel.gamma > 0.0)) r.fail("kernel.gamma", "gamma must be positive");

  {
    std::vector<double> lo{0.0}, hi{1.0};
    if (r.has("domain.lower")) lo = r.numbers("domain.lower");
    if (r.has("domain.upper")) hi = r.numbers("domain.upper");
    if (lo.size() != hi.size())
      r.fail("domain.upper", "lower and upper must have the same number of coordinates");
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (!(lo[k] < hi[k])) r.fail("domain.upper", "each upper bound must exceed its lower bound");
    c.domain = Box(lo, hi);
  }
  const int dim = c.domain.dim();
  if (c.kernel.family == KernelFamily::interval_w21 && dim != 1)
    r.fail("kernel.family", "w21 is defined on an interval only");

  {
    const auto& s = r.text("design.scheme");
    if (s == "greedy")
      c.design.scheme = DesignScheme::greedy;
    else if (s == "dyadic")
      c.design.scheme = DesignScheme::dyadic;
    else if (s == "equispaced")
      c.design.scheme = DesignScheme::equispaced;
    else
      r.fail("design.scheme", "expected greedy, dyadic or equispaced, got '" + s + "'");
  }
  if (c.design.scheme != DesignScheme::greedy && dim != 1)
    r.fail("design.scheme", std::string(to_string(c.design.scheme)) + " designs are 1D only");
  if (r.has("design.candidates")) {
    const auto& s = r.text("design.candidates");
    const auto scheme = parse_candidate_scheme(s);
    if (!scheme) r.fail("design.candidates", "unknown candidate scheme '" + s + "'");
    c.design.candidates = *scheme;
  }
  if (r.has("design.candidate_count"))
    c.design.candidate_count = r.integer("design.candidate_count");
  if (r.has("design.seed")) c.design.seed = r.integer("design.seed");
  if (r.has("design.start")) {
    c.design.start = r.text("design.start");
    if (c.design.start != "center" && !is_index(c.design.start))
      r.fail("design.start", "expected 'center' or a candidate index");
  }
  c.design.levels = r.integers("design.levels");
  for (std::size_t i = 0; i < c.design.levels.size(); ++i) {
    if (c.design.levels[i] < 1) r.fail("design.levels", "level counts must be positive");
    if (i > 0 && c.design.levels[i] <= c.design.levels[i - 1])
      r.fail("design.levels", "level counts must be strictly increasing");
  }
  if (c.design.scheme == DesignScheme::greedy) {
    if (c.design.candidate_count < c.design.levels.back())
      r.fail("design.candidate_count", "fewer candidates than the largest level");
    if (c.design.candidates == CandidateScheme::tensor_grid) {
      const auto m = static_cast<std::size_t>(
          std::llround(std::pow(static_cast<double>(c.design.candidate_count), 1.0 / dim)));
      std::size_t total = 1;
      for (int k = 0; k < dim; ++k) total *= m;
      if (total != c.design.candidate_count)
        r.fail("design.candidate_count", "tensor_grid needs a perfect power count");
    }
    if (is_index(c.design.start) &&
        std::stoull(c.design.start) >= c.design.candidate_count)
      r.fail("design.start", "start index exceeds the candidate count");
  }

  c.grid.points_per_axis = dim == 1 ? 4097 : 513;
  if (r.has("grid.points_per_axis")) c.grid.points_per_axis = r.integer("grid.points_per_axis");
  if (c.grid.points_per_axis < 33)
    r.fail("grid.points_per_axis", "at least 33 points per axis are required");
  c.grid.probe_points_per_axis = dim == 1 ? c.grid.points_per_axis : 1001;
  if (r.has("grid.probe_points_per_axis"))
    c.grid.probe_points_per_axis = r.integer("grid.probe_points_per_axis");
  if (c.grid.probe_points_per_axis < 33)
    r.fail("grid.probe_points_per_axis", "at least 33 points per axis are required");

  if (r.has("target.name")) c.target.name = r.text("target.name");
  {
    bool known = false;
    for (const char* t : kTargets) known = known || c.target.name == t;
    if (!known) r.fail("target.name", "unknown target '" + c.target.name + "'");
  }
  auto& t = c.target;
  const bool centered = t.name == "abs_power" || t.name == "kernel_translate";
  t.center = c.domain.center();
  if (r.has("target.center")) t.center = r.numbers("target.center");
  if (t.name == "smooth_step") t.center.resize(1);
  if (centered && static_cast<int>(t.center.size()) != dim)
    r.fail("target.center", "center needs one coordinate per domain axis");
  if (r.has("target.value")) t.value = r.number("target.value");
  if (r.has("target.power")) t.power = r.number("target.power");
  if (t.name == "abs_power" && !(t.power > 0.0))
    r.fail("target.power", "power must be positive");
  if (t.name == "kernel_combination") {
    t.centers = r.numbers("target.centers");
    t.weights = r.numbers("target.weights");
    if (t.centers.size() != t.weights.size() * static_cast<std::size_t>(dim))
      r.fail("target.weights", "need one weight per center");
  }
  if (r.has("target.frequency")) t.frequency = r.number("target.frequency");
  if (r.has("target.phase")) t.phase = r.number("target.phase");
  if (r.has("target.width")) t.width = r.number("target.width");
  if (t.name == "smooth_step" && !(t.width > 0.0))
    r.fail("target.width", "width must be positive");
  const bool needs_target =
      c.type == ExperimentType::convergence || c.type == ExperimentType::norm_growth ||
      c.type == ExperimentType::interp_once;
  if (needs_target && !r.has("target.name"))
    r.fail("target.name", std::string(to_string(c.type)) + " experiments need a target");

  if (r.has("decay.node")) {
    c.decay.node = r.text("decay.node");
    if (c.decay.node != "center" && !is_index(c.decay.node))
      r.fail("decay.node", "expected 'center' or a node index");
  }
  if (c.type == ExperimentType::decay && dim != 1)
    r.fail("experiment.type", "decay experiments are 1D only");

  // Constructing the kernel and target here surfaces remaining problems
  // (e.g. centers outside the domain) at parse time.
  try {
    (void)c.make_target();
  } catch (const Error& e) {
    r.fail("target.name", e.what());
  }
  return c;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s;
}

}  // namespace

Kernel ExperimentConfig::make_kernel() const {
  std::optional<std::pair<double, double>> interval;
  if (domain.dim() == 1) interval = std::make_pair(domain.lower(0), domain.upper(0));
  return Kernel::make(kernel.family, kernel.gamma, domain.dim(), interval);
}

Target ExperimentConfig::make_target() const {
  const auto& t = target;
  if (t.name == "zero") return Target::zero();
  if (t.name == "constant") return Target::constant(t.value);
  if (t.name == "abs_power") return Target::abs_power(t.center, t.power);
  if (t.name == "sine") return Target::sine(t.frequency, t.phase);
  if (t.name == "smooth_step") return Target::smooth_step(t.center.at(0), t.width);
  const int dim = domain.dim();
  std::vector<double> flat = t.name == "kernel_translate" ? t.center : t.centers;
  const std::vector<double> weights = t.name == "kernel_translate" ? std::vector<double>{1.0}
                                                                    : t.weights;
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
  const auto rows = static_cast<Eigen::Index>(flat.size() / static_cast<std::size_t>(dim));
  PointMatrix m = Eigen::Map<const PointMatrix>(flat.data(), rows, dim);
  return Target::kernel_combination(make_kernel(), PointSet(domain, std::move(m)), w);
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream o;
  o << "[experiment]\n"
    << "type = " << to_string(type) << '\n'
    << "output = " << output << '\n'
    << "svg = " << (svg ? "true" : "false") << '\n'
    << "precision = " << to_string(precision) << '\n'
    << "\n[kernel]\n"
    << "family = " << to_string(kernel.family) << '\n'
    << "gamma = " << format_number(kernel.gamma) << '\n'
    << "\n[domain]\n"
    << "lower = " << join(domain.lower()) << '\n'
    << "upper = " << join(domain.upper()) << '\n'
    << "\n[design]\n"
    << "scheme = " << to_string(design.scheme) << '\n';
  if (design.scheme == DesignScheme::greedy) {
    o << "candidates = " << to_string(design.candidates) << '\n'
      << "candidate_count = " << design.candidate_count << '\n'
      << "seed = " << design.seed << '\n'
      << "start = " << design.start << '\n';
  }
  o << "levels = ";
  for (std::size_t i = 0; i < design.levels.size(); ++i) o << (i ? ", " : "") << design.levels[i];
  o << "\n\n[grid]\n"
    << "points_per_axis = " << grid.points_per_axis << '\n'
    << "probe_points_per_axis = " << grid.probe_points_per_axis << '\n'
    << "\n[target]\n"
    << "name = " << target.name << '\n';
  const auto& t = target;
  if (t.name == "constant") o << "value = " << format_number(t.value) << '\n';
  if (t.name == "abs_power" || t.name == "kernel_translate")
    o << "center = " << join(t.center) << '\n';
  if (t.name == "abs_power") o << "power = " << format_number(t.power) << '\n';
  if (t.name == "kernel_combination")
    o << "centers = " << join(t.centers) << '\n' << "weights = " << join(t.weights) << '\n';
  if (t.name == "sine")
    o << "frequency = " << format_number(t.frequency) << '\n'
      << "phase = " << format_number(t.phase) << '\n';
  if (t.name == "smooth_step")
    o << "center = " << join(t.center) << '\n' << "width = " << format_number(t.width) << '\n';
  o << "\n[decay]\n"
    << "node = " << decay.node << '\n';
  return o.str();
}

ExperimentConfig parse_config(std::string_view text) { return build(Reader(tokenize(text))); }

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(0, "", "cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

ExperimentConfig config_from_metadata(std::string_view csv_text) {
  std::string text;
  while (!csv_text.empty()) {
    const auto nl = csv_text.find('\n');
    const auto line = csv_text.substr(0, nl);
    csv_text = nl == std::string_view::npos ? std::string_view{} : csv_text.substr(nl + 1);
    if (line.starts_with("## ")) continue;
    if (!line.starts_with("#")) break;
    text += line.substr(line.starts_with("# ") ? 2 : 1);
    text += '\n';
  }
  return parse_config(text);
}

}  // namespace kernlab

// kernlab command line: run, validate and plot experiment configs.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernlab/config.hpp"
#include "kernlab/errors.hpp"
#include "kernlab/experiment.hpp"
#include "kernlab/report_io.hpp"
#include "kernlab/svg.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kAllLevelsFailed = 2;

void apply_thread_override() {
  const char* env = std::getenv("KERNLAB_THREADS");
  if (!env || !*env) return;
  const int n = std::atoi(env);
  if (n < 1) {
    std::cerr << "warning: ignoring KERNLAB_THREADS=" << env << '\n';
    return;
  }
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

int report_config_error(const std::string& path, const kernlab::ConfigError& e) {
  std::cerr << path << ": " << e.what() << '\n';
  return kConfigError;
}

int cmd_validate(const std::string& path) {
  try {
    const auto config = kernlab::load_config(path);
    std::cout << config.to_text();
    return kOk;
  } catch (const kernlab::ConfigError& e) {
    return report_config_error(path, e);
  }
}

int cmd_run(const std::string& path) {
  kernlab::ExperimentConfig config;
  try {
    config = kernlab::load_config(path);
  } catch (const kernlab::ConfigError& e) {
    return report_config_error(path, e);
  }
  const auto result = kernlab::run(config);
  for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
  for (const auto& [k, v] : result.summary) std::cout << k << " = " << v << '\n';
  if (result.failed_levels > 0)
    std::cerr << result.failed_levels << " of " << result.levels << " levels failed\n";
  return result.all_failed() ? kAllLevelsFailed : kOk;
}

// spec: "x:y1,y2[:scale]" with scale one of linear, logx, logy, loglog.
struct PlotSpec {
  std::string x;
  std::vector<std::string> y;
  bool log_x = false, log_y = false;
};

PlotSpec parse_plot_spec(const std::string& s) {
  PlotSpec p;
  const auto c1 = s.find(':');
  if (c1 == std::string::npos || c1 == 0)
    throw kernlab::ContractError("plot spec must look like x:y1,y2[:scale], got '" + s + "'");
  p.x = s.substr(0, c1);
  const auto c2 = s.find(':', c1 + 1);
  std::string ys = s.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1);
  if (c2 != std::string::npos) {
    const auto scale = s.substr(c2 + 1);
    if (scale == "loglog")
      p.log_x = p.log_y = true;
    else if (scale == "logx")
      p.log_x = true;
    else if (scale == "logy")
      p.log_y = true;
    else if (scale != "linear")
      throw kernlab::ContractError("unknown plot scale '" + scale + "'");
  }
  std::size_t start = 0;
  while (start <= ys.size()) {
    const auto comma = ys.find(',', start);
    const auto item = ys.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty()) throw kernlab::ContractError("empty y column in plot spec");
    p.y.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return p;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& spec_text,
             const std::string& out) {
  const auto spec = parse_plot_spec(spec_text);
  std::vector<kernlab::Series> series;
  for (const auto& path : csvs) {
    const auto table = kernlab::read_csv(path);
    const auto x = table.numbers(spec.x);
    std::string source = std::filesystem::path(path).stem().string();
    if (auto k = table.summary("kernel")) source = *k;
    for (const auto& col : spec.y) {
      const auto y = table.numbers(col);
      kernlab::Series s{csvs.size() > 1 ? source + " " + col : col, {}};
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] && y[i]) s.points.emplace_back(*x[i], *y[i]);
      series.push_back(std::move(s));
    }
  }
  std::string y_label;
  for (std::size_t i = 0; i < spec.y.size(); ++i) y_label += (i ? ", " : "") + spec.y[i];
  const kernlab::AxesSpec axes{std::filesystem::path(csvs.front()).stem().string(), spec.x,
                               y_label, spec.log_x, spec.log_y};
  const auto svg = kernlab::emit_svg(series, axes);
  if (out.empty() || out == "-")
    std::cout << svg;
  else
    kernlab::write_text_file(out, svg);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel interpolation laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required();

  auto* validate = app.add_subcommand("validate", "Parse a config and print its canonical form");
  validate->add_option("config", config_path, "Config file")->required();

  std::string csv, spec, out;
  std::vector<std::string> overlays;
  auto* plot = app.add_subcommand("plot", "Draw columns of report CSVs as an SVG chart");
  plot->add_option("csv", csv, "Report CSV")->required();
  plot->add_option("spec", spec, "x:y1,y2[:linear|logx|logy|loglog]")->required();
  plot->add_option("-o,--output", out, "SVG path (stdout when omitted)");
  plot->add_option("--overlay", overlays, "Further CSVs drawn on the same axes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  apply_thread_override();
  try {
    if (*run) return cmd_run(config_path);
    if (*validate) return cmd_validate(config_path);
    std::vector<std::string> files{csv};
    files.insert(files.end(), overlays.begin(), overlays.end());
    return cmd_plot(files, spec, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

#include "kernlab/experiment.hpp"

#include <algorithm>
#include <filesystem>

#include "kernlab/errors.hpp"
#include "kernlab/format.hpp"
#include "kernlab/grid.hpp"
#include "kernlab/svg.hpp"

namespace kernlab {

namespace {

std::size_t parse_index(const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); }

std::vector<DesignRow> nested_rows(const NestedDesign& d) {
  std::vector<DesignRow> rows;
  std::size_t level = 0;
  for (std::size_t i = 0; i < d.levels.back(); ++i) {
    while (i >= d.levels[level]) ++level;
    const auto p = d.master[i];
    rows.push_back({i, std::vector<double>(p.begin(), p.end()), level});
  }
  return rows;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : "n/a";
}

class Emitter {
 public:
  Emitter(const ExperimentConfig& config, RunResult& result)
      : prefix_(config.output), result_(result) {
    const auto parent = std::filesystem::path(prefix_).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
  }

  void text(const std::string& suffix, const std::string& body) {
    const auto path = prefix_ + suffix;
    write_text_file(path, body);
    result_.files.push_back(path);
  }

  void svg(const std::vector<Series>& series, const AxesSpec& axes) {
    std::vector<Series> kept;
    for (const auto& s : series)
      if (!s.points.empty()) kept.push_back(s);
    if (kept.empty()) return;  // nothing plottable, e.g. every level failed
    text(".svg", emit_svg(kept, axes));
  }

 private:
  std::string prefix_;
  RunResult& result_;
};

}  // namespace

BuiltDesign build_design(const ExperimentConfig& config) {
  BuiltDesign out;
  const auto& d = config.design;
  const auto& box = config.domain;
  if (d.scheme == DesignScheme::equispaced) {
    for (std::size_t k = 0; k < d.levels.size(); ++k) {
      auto nodes = equispaced_interval(box.lower(0), box.upper(0), d.levels[k]);
      const auto g = measure(nodes);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        out.rows.push_back({i, {nodes[i][0]}, k});
      out.levels.push_back({std::move(nodes), g});
    }
    return out;
  }
  NestedDesign design = [&] {
    if (d.scheme == DesignScheme::dyadic)
      return dyadic_design(box.lower(0), box.upper(0), d.levels);
    const auto candidates = generate_candidates(box, d.candidate_count, d.candidates, d.seed);
    const auto center = box.center();
    const std::size_t start =
        d.start == "center" ? nearest_index(candidates, center) : parse_index(d.start);
    return geometric_greedy(candidates, d.levels.back(), start, d.levels);
  }();
  if (box.dim() == 1) {
    measure_levels(design, nullptr);
  } else {
    const EvalGrid probe(box, config.grid.probe_points_per_axis);
    measure_levels(design, &probe);
  }
  out.levels = describe_levels(design);
  out.rows = nested_rows(design);
  return out;
}

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  Emitter emit(config, result);
  const std::string cfg = config.to_text();
  const Kernel kernel = config.make_kernel();
  const Target target = config.make_target();
  const EvalGrid grid(config.domain, config.grid.points_per_axis);
  SolveOptions opts;
  opts.precision = config.precision;

  const auto design = build_design(config);
  emit.text("_design.csv", design_csv(design.rows, config.domain.dim(), cfg));

  const bool with_target = config.type != ExperimentType::lebesgue_trace &&
                           config.type != ExperimentType::decay;
  DiagnosticsReport report =
      level_report(kernel, design.levels, grid, with_target ? &target : nullptr, opts);
  result.levels = report.rows.size();
  result.failed_levels = report.failed_levels();

  const std::string label = kernel.describe();
  std::vector<Series> series;
  AxesSpec axes;

  switch (config.type) {
    case ExperimentType::lebesgue_trace: {
      Series s{label, {}};
      for (const auto& r : report.rows)
        if (r.lebesgue) s.points.emplace_back(static_cast<double>(r.n), *r.lebesgue);
      series.push_back(std::move(s));
      axes = {"Lebesgue constant", "n", "Lambda", false, false};
      break;
    }
    case ExperimentType::convergence: {
      std::vector<double> h, sup, l2;
      Series ssup{"sup error", {}}, sl2{"L2 error", {}};
      for (const auto& r : report.rows) {
        if (r.status != "ok") continue;
        h.push_back(r.h);
        sup.push_back(*r.sup_error);
        l2.push_back(*r.l2_error);
        if (*r.sup_error > 0) ssup.points.emplace_back(r.h, *r.sup_error);
        if (*r.l2_error > 0) sl2.points.emplace_back(r.h, *r.l2_error);
      }
      result.summary.emplace_back("sup_slope", optional_number(tail_loglog_slope(h, sup)));
      result.summary.emplace_back("l2_slope", optional_number(tail_loglog_slope(h, l2)));
      series = {ssup, sl2};
      axes = {"Interpolation error, " + label, "h", "error", true, true};
      break;
    }
    case ExperimentType::norm_growth: {
      NormGrowth growth;
      for (const auto& r : report.rows) {
        if (r.status != "ok") {
          growth.failure = "level n=" + std::to_string(r.n) + ": " + r.status;
          break;
        }
        growth.samples.push_back({r.n, *r.native_norm, false, {}});
      }
      classify_growth(growth);
      result.summary.emplace_back("growth", std::string(to_string(growth.label)));
      result.summary.emplace_back("growth_slope", optional_number(growth.slope));
      result.summary.emplace_back("growth_variation", format_number(growth.variation));
      if (target.native_norm())
        result.summary.emplace_back("target_native_norm", format_number(*target.native_norm()));
      Series s{label, {}};
      for (const auto& x : growth.samples) s.points.emplace_back(static_cast<double>(x.n), x.norm);
      series.push_back(std::move(s));
      axes = {"Native norm of the interpolant", "n", "norm", false, false};
      break;
    }
    case ExperimentType::decay: {
      std::vector<DecayRow> rows;
      Series s{label, {}};
      std::size_t failed = 0;
      for (const auto& level : design.levels) {
        DecayRow row;
        row.n = level.nodes.size();
        try {
          row.node_index = config.decay.node == "center"
                               ? nearest_index(level.nodes, config.domain.center())
                               : parse_index(config.decay.node);
          if (row.node_index >= row.n) throw ContractError("decay node index out of range");
          row.fit = decay_profile(kernel, level.nodes, row.node_index, grid,
                                  level.geometry.fill, opts);
          s.points.emplace_back(static_cast<double>(row.n), row.fit->rate);
        } catch (const Error& e) {
          row.status = e.what();
          ++failed;
        }
        rows.push_back(std::move(row));
      }
      std::vector<double> rates;
      for (const auto& r : rows)
        if (r.fit) rates.push_back(r.fit->rate);
      if (!rates.empty() && *std::min_element(rates.begin(), rates.end()) > 0)
        result.summary.emplace_back(
            "nu_hat_max_over_min",
            format_number(*std::max_element(rates.begin(), rates.end()) /
                          *std::min_element(rates.begin(), rates.end())));
      emit.text("_decay.csv", decay_csv(rows, cfg, result.summary));
      // A level counts as failed when either its Lebesgue row or its decay fit failed.
      result.failed_levels = std::max(result.failed_levels, failed);
      series.push_back(std::move(s));
      axes = {"Lagrange decay rate", "n", "nu_hat", false, false};
      break;
    }
    case ExperimentType::interp_once: {
      const auto& nodes = design.levels.back().nodes;
      try {
        const auto s = fit(kernel, nodes, target.sample(nodes.coords()), opts);
        emit.text("_interpolant.csv", interpolant_csv(s, cfg));
        Series line{label, {}};
        if (config.domain.dim() == 1) {
          const std::size_t m = std::min<std::size_t>(grid.size(), 257);
          const EvalGrid coarse(config.domain, m);
          const auto v = s.evaluate(coarse.points());
          for (std::size_t j = 0; j < coarse.size(); ++j)
            line.points.emplace_back(coarse[j][0], v(static_cast<Eigen::Index>(j)));
        }
        series.push_back(std::move(line));
        axes = {"Interpolant", "x", "s(x)", false, false};
      } catch (const Error& e) {
        result.failed_levels = result.levels;
        result.summary.emplace_back("interpolant_failure", e.what());
      }
      break;
    }
  }

  emit.text("_report.csv", report_csv(report, cfg, result.summary));
  if (config.svg) emit.svg(series, axes);
  return result;
}

}  // namespace kernlab

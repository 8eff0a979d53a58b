#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>

#include "kernlab/config.hpp"
#include "kernlab/errors.hpp"
#include "kernlab/experiment.hpp"
#include "kernlab/report_io.hpp"
#include "kernlab/svg.hpp"

using namespace kernlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "kernlab_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig shipped(const std::string& file, const fs::path& out_dir) {
  auto c = load_config(std::string(KERNLAB_CONFIG_DIR) + "/" + file);
  c.output = (out_dir / fs::path(c.output).filename()).string();
  return c;
}

int cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" KERNLAB_CLI "\" " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli_stderr(const std::string& args) {
  const auto err = fs::temp_directory_path() / "kernlab_tests_stderr.txt";
  const std::string cmd = "\"" KERNLAB_CLI "\" " + args + " >/dev/null 2>\"" + err.string() + "\"";
  [[maybe_unused]] const int status = std::system(cmd.c_str());
  return read_text_file(err.string());
}

boost::property_tree::ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  boost::property_tree::ptree tree;
  boost::property_tree::read_xml(in, tree);
  return tree;
}

std::size_t count_occurrences(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto p = text.find(what); p != std::string::npos; p = text.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Config, CanonicalTextRoundTrips) {
  for (const auto& entry : fs::directory_iterator(KERNLAB_CONFIG_DIR)) {
    const auto c = load_config(entry.path().string());
    const auto text = c.to_text();
    EXPECT_EQ(parse_config(text).to_text(), text) << entry.path();
  }
}

TEST(Config, UnknownFamilyNamesTheField) {
  const std::string text =
      "[experiment]\ntype = lebesgue_trace\noutput = x\n\n[kernel]\nfamily = matern72\n"
      "gamma = 1\n\n[design]\nscheme = dyadic\nlevels = 3, 7\n";
  try {
    parse_config(text);
    FAIL() << "expected a ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "kernel.family");
    EXPECT_EQ(e.line(), 6);
  }
}

TEST(Config, StructuralErrors) {
  const std::string head = "[experiment]\ntype = lebesgue_trace\noutput = x\n[kernel]\nfamily = matern32\n";
  auto field_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(head + "[design]\nscheme = dyadic\nlevels = 7, 3\n"), "design.levels");
  EXPECT_EQ(field_of(head + "[design]\nscheme = dyadic\nlevels = 3\n[grid]\npoints_per_axis = 17\n"),
            "grid.points_per_axis");
  EXPECT_EQ(field_of(head + "[design]\nscheme = dyadic\nlevels = 3\nbogus = 1\n"), "design.bogus");
  EXPECT_EQ(field_of(head + "gamma = 1\ngamma = 2\n[design]\nlevels = 3\n"), "kernel.gamma");
}

TEST(Run, InterpOnceWritesTheCoefficient) {
  const auto dir = scratch("interp_once");
  const auto result = run(shipped("interp_once_constant.ini", dir));
  EXPECT_EQ(result.failed_levels, 0u);
  const auto table = read_csv((dir / "interp_once_interpolant.csv").string());
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0][table.column("coefficient")], "2.0");
  EXPECT_EQ(table.rows[0][table.column("data")], "2.0");
}

TEST(Run, LebesgueTraceHasOneRowPerLevel) {
  const auto dir = scratch("trace");
  auto c = shipped("lambda_matern32.ini", dir);
  c.grid.points_per_axis = 65;
  c.grid.probe_points_per_axis = 129;
  run(c);
  const auto table = read_csv(c.output + "_report.csv");
  ASSERT_EQ(table.rows.size(), 5u);
  const auto n = table.numbers("n");
  EXPECT_EQ(*n.front(), 25.0);
  EXPECT_EQ(*n.back(), 400.0);
  for (const auto& l : table.numbers("lebesgue")) EXPECT_GE(*l, 1.0);
}

TEST(Run, MetadataRebuildsTheConfig) {
  const auto dir = scratch("metadata");
  const auto c = shipped("interp_once_constant.ini", dir);
  run(c);
  for (const char* suffix : {"_report.csv", "_design.csv", "_interpolant.csv"}) {
    const auto text = read_text_file(c.output + suffix);
    EXPECT_EQ(config_from_metadata(text).to_text(), c.to_text()) << suffix;
  }
}

TEST(Svg, SinglePointIsWellFormed) {
  const auto svg = emit_svg({{"a", {{1.0, 2.0}}}}, {"t", "x", "y", false, false});
  const auto tree = parse_xml(svg);
  EXPECT_TRUE(tree.get_child_optional("svg"));
  EXPECT_EQ(count_occurrences(svg, "class=\"marker\""), 1u);
  EXPECT_EQ(svg, emit_svg({{"a", {{1.0, 2.0}}}}, {"t", "x", "y", false, false}));
}

TEST(Svg, TwoSeriesGiveTwoLegendEntries) {
  const std::vector<Series> s = {{"matern32", {{25, 1.5}, {50, 2.0}, {100, 2.4}}},
                                 {"gaussian", {{25, 1.0}, {50, 1.6}, {100, 3.7}}}};
  const auto svg = emit_svg(s, {"Lebesgue constants", "n", "Lambda", true, true});
  parse_xml(svg);
  EXPECT_EQ(count_occurrences(svg, "class=\"legend-entry\""), 2u);
  EXPECT_EQ(count_occurrences(svg, "class=\"marker\""), 6u);
}

TEST(Svg, Errors) {
  EXPECT_THROW(emit_svg({}, {}), ContractError);
  EXPECT_THROW(emit_svg({{"a", {}}}, {}), ContractError);
  try {
    emit_svg({{"a", {{1, 1}, {2, 2}, {3, 0.0}}}}, {"", "", "", false, true});
    FAIL() << "expected a DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("point 2"), std::string::npos) << e.what();
  }
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("exit");
  const std::string cfg = std::string(KERNLAB_CONFIG_DIR) + "/interp_once_constant.ini";
  EXPECT_EQ(cli("validate \"" + cfg + "\""), 0);
  EXPECT_EQ(cli("run \"" + cfg + "\"", "cd \"" + dir.string() + "\" &&"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "interp_once_report.csv"));

  const auto bad = dir / "bad.ini";
  write_text_file(bad.string(), "[experiment]\ntype = decay\noutput = x\n[kernel]\nfamily = matern72\n");
  EXPECT_EQ(cli("run \"" + bad.string() + "\""), 1);
  EXPECT_NE(cli_stderr("validate \"" + bad.string() + "\"").find("kernel.family"),
            std::string::npos);
  EXPECT_EQ(cli("validate \"" + (dir / "missing.ini").string() + "\""), 1);

  // Wide Gaussians on fine grids cannot be solved in binary64 at all.
  const auto hopeless = dir / "hopeless.ini";
  write_text_file(hopeless.string(),
                  "[experiment]\ntype = lebesgue_trace\noutput = " + (dir / "h").string() +
                      "\nprecision = binary64\n[kernel]\nfamily = gaussian\ngamma = 1.0\n"
                      "[design]\nscheme = dyadic\nlevels = 63, 127\n[grid]\npoints_per_axis = 65\n");
  EXPECT_EQ(cli("run \"" + hopeless.string() + "\""), 2);
}

TEST(Cli, OutputIsIndependentOfThreadCount) {
  const auto dir = scratch("threads");
  const auto cfg = dir / "c.ini";
  write_text_file(cfg.string(),
                  "[experiment]\ntype = lebesgue_trace\noutput = out\nsvg = true\n[kernel]\n"
                  "family = matern32\ngamma = 10\n[domain]\nlower = 0, 0\nupper = 1, 1\n"
                  "[design]\nscheme = greedy\ncandidate_count = 2000\nlevels = 10, 20, 40\n"
                  "[grid]\npoints_per_axis = 65\nprobe_points_per_axis = 101\n");
  std::string first;
  for (const char* threads : {"1", "3"}) {
    const std::string env = "cd \"" + dir.string() + "\" && KERNLAB_THREADS=" + threads;
    ASSERT_EQ(cli("run c.ini", env), 0);
    const auto text = read_text_file((dir / "out_report.csv").string()) +
                      read_text_file((dir / "out_design.csv").string()) +
                      read_text_file((dir / "out.svg").string());
    if (first.empty())
      first = text;
    else
      EXPECT_EQ(text, first);
  }
}

TEST(Cli, PlotDrawsReportColumns) {
  const auto dir = scratch("plot");
  auto c = shipped("interp_once_constant.ini", dir);
  c.type = ExperimentType::lebesgue_trace;
  c.design.scheme = DesignScheme::dyadic;
  c.design.levels = {3, 7, 15};
  c.grid.points_per_axis = 65;
  run(c);
  const auto svg = dir / "p.svg";
  EXPECT_EQ(cli("plot \"" + c.output + "_report.csv\" n:lebesgue,rho:loglog -o \"" +
                svg.string() + "\""),
            0);
  const auto text = read_text_file(svg.string());
  parse_xml(text);
  EXPECT_EQ(count_occurrences(text, "class=\"legend-entry\""), 2u);
  EXPECT_EQ(cli("plot \"" + c.output + "_report.csv\" n:nonexistent -o \"" + svg.string() + "\""),
            1);
}

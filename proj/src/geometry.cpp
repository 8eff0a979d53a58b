#include "kernlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/random/sobol.hpp>

#include "kernlab/errors.hpp"

namespace kernlab {

double separation_distance(const PointSet& x) {
  const auto n = x.size();
  if (n < 2) throw UndefinedQuantityError("separation distance needs at least two points");
  double best = std::numeric_limits<double>::infinity();
  if (x.dim() == 1) {
    std::vector<double> v(x.coords().data(), x.coords().data() + n);
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i + 1 < n; ++i) best = std::min(best, v[i + 1] - v[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, squared_distance(x[i], x[j]));
    best = std::sqrt(best);
  }
  return 0.5 * best;
}

double fill_distance_interval(const PointSet& x, double a, double b) {
  if (x.dim() != 1) throw ContractError("interval fill distance needs one-dimensional points");
  if (x.empty()) throw UndefinedQuantityError("fill distance of an empty set");
  if (!(a < b)) throw ContractError("interval requires a < b");
  std::vector<double> v(x.coords().data(), x.coords().data() + x.size());
  std::sort(v.begin(), v.end());
  if (v.front() < a || v.back() > b) throw ContractError("nodes outside [a, b]");
  double h = std::max(v.front() - a, b - v.back());
  for (std::size_t i = 0; i + 1 < v.size(); ++i) h = std::max(h, 0.5 * (v[i + 1] - v[i]));
  return h;
}

double fill_distance_interval(const PointSet& x) {
  return fill_distance_interval(x, x.domain().lower(0), x.domain().upper(0));
}

namespace {

// Running min of squared distances from every probe point to the nodes
// [first, last) of x.
void update_nearest(const PointSet& x, std::size_t first, std::size_t last, const EvalGrid& probe,
                    std::vector<double>& nearest_sq) {
  const auto m = static_cast<std::ptrdiff_t>(probe.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < m; ++p) {
    double best = nearest_sq[p];
    const auto pt = probe[static_cast<std::size_t>(p)];
    for (std::size_t i = first; i < last; ++i) best = std::min(best, squared_distance(pt, x[i]));
    nearest_sq[p] = best;
  }
}

double max_sqrt(const std::vector<double>& v) {
  return std::sqrt(*std::max_element(v.begin(), v.end()));
}

}  // namespace

double fill_distance_grid(const PointSet& x, const EvalGrid& probe) {
  if (x.empty()) throw UndefinedQuantityError("fill distance of an empty set");
  if (probe.size() == 0) throw ContractError("empty probe grid");
  if (probe.dim() != x.dim()) throw ContractError("probe dimension mismatch");
  std::vector<double> nearest(probe.size(), std::numeric_limits<double>::infinity());
  update_nearest(x, 0, x.size(), probe, nearest);
  return max_sqrt(nearest);
}

double mesh_ratio(const PointSet& x, double fill_distance) {
  return fill_distance / separation_distance(x);
}

SamplingCondition sampling_condition(double h, double tau, double a, double b) {
  const double len = b - a;
  if (h <= len / (1200.0 * tau * tau)) return SamplingCondition::strong;
  if (h <= len / (100.0 * tau * tau)) return SamplingCondition::weak;
  return SamplingCondition::none;
}

std::string_view to_string(SamplingCondition c) {
  switch (c) {
    case SamplingCondition::strong:
      return "strong-1200";
    case SamplingCondition::weak:
      return "weak-100";
    default:
      return "none";
  }
}

std::string_view to_string(CandidateScheme s) {
  switch (s) {
    case CandidateScheme::uniform_random:
      return "uniform_random";
    case CandidateScheme::low_discrepancy:
      return "low_discrepancy";
    default:
      return "tensor_grid";
  }
}

std::optional<CandidateScheme> parse_candidate_scheme(std::string_view name) {
  for (auto s : {CandidateScheme::uniform_random, CandidateScheme::low_discrepancy,
                 CandidateScheme::tensor_grid}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

PointSet generate_candidates(const Box& box, std::size_t count, CandidateScheme scheme,
                             std::uint64_t seed) {
  if (count < 1) throw ContractError("candidate count must be positive");
  const int dim = box.dim();
  PointMatrix pts(static_cast<Eigen::Index>(count), dim);
  auto scale = [&](int k, double unit) {
    return box.lower(k) + (box.upper(k) - box.lower(k)) * unit;
  };
  switch (scheme) {
    case CandidateScheme::uniform_random: {
      std::mt19937_64 rng(seed);
      // 53-bit mantissa draw; spelled out so the stream is identical across
      // standard libraries.
      auto unit = [&] {
        double u = 0.0;
        while (u == 0.0) u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return u;
      };
      for (std::size_t i = 0; i < count; ++i)
        for (int k = 0; k < dim; ++k) pts(static_cast<Eigen::Index>(i), k) = scale(k, unit());
      break;
    }
    case CandidateScheme::low_discrepancy: {
      // Boost's generator already starts after the origin.
      boost::random::sobol gen(static_cast<std::size_t>(dim));
      const double norm = 0x1.0p-64;
      for (std::size_t i = 0; i < count; ++i)
        for (int k = 0; k < dim; ++k)
          pts(static_cast<Eigen::Index>(i), k) = scale(k, static_cast<double>(gen()) * norm);
      break;
    }
    case CandidateScheme::tensor_grid: {
      const auto m = static_cast<std::size_t>(std::llround(std::pow(count, 1.0 / dim)));
      std::size_t total = 1;
      for (int k = 0; k < dim; ++k) total *= m;
      if (total != count) {
        std::ostringstream os;
        os << "tensor grid needs a perfect " << dim << "-th power count, got " << count;
        throw ContractError(os.str());
      }
      std::vector<std::size_t> idx(dim, 0);
      for (std::size_t p = 0; p < count; ++p) {
        for (int k = 0; k < dim; ++k)
          pts(static_cast<Eigen::Index>(p), k) =
              scale(k, static_cast<double>(idx[k] + 1) / static_cast<double>(m + 1));
        for (int k = dim - 1; k >= 0; --k) {
          if (++idx[k] < m) break;
          idx[k] = 0;
        }
      }
      break;
    }
  }
  return PointSet(box, std::move(pts));
}

PointSet equispaced_interval(double a, double b, std::size_t n) {
  if (n < 1) throw ContractError("need at least one node");
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(n + 1);
  return PointSet::on_interval(a, b, xs);
}

std::size_t nearest_index(const PointSet& x, PointView target) {
  if (x.empty()) throw ContractError("nearest point of an empty set");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = squared_distance(x[i], target);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

namespace {

void check_levels(const std::vector<std::size_t>& levels, std::size_t max_count) {
  if (levels.empty()) throw ContractError("at least one level is required");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1 || levels[i] > max_count)
      throw ContractError("level count out of range");
    if (i > 0 && levels[i] <= levels[i - 1])
      throw ContractError("level counts must be strictly increasing");
  }
}

}  // namespace

NestedDesign geometric_greedy(const PointSet& candidates, std::size_t m, std::size_t seed_index,
                              std::vector<std::size_t> level_counts) {
  const auto pool = candidates.size();
  if (m < 1) throw ContractError("greedy selection needs m >= 1");
  if (m > pool) {
    std::ostringstream os;
    os << "cannot select " << m << " points from " << pool << " candidates";
    throw ContractError(os.str());
  }
  if (seed_index >= pool) throw ContractError("seed index out of range");
  if (level_counts.empty()) level_counts = {m};
  check_levels(level_counts, m);

  std::vector<std::size_t> order;
  order.reserve(m);
  std::vector<double> nearest(pool, std::numeric_limits<double>::infinity());
  std::size_t next = seed_index;
  for (std::size_t step = 0; step < m; ++step) {
    order.push_back(next);
    const auto chosen = candidates[next];
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t c = 0; c < pool; ++c) {
      nearest[c] = std::min(nearest[c], squared_distance(candidates[c], chosen));
      if (nearest[c] > best) {
        best = nearest[c];
        arg = c;
      }
    }
    next = arg;
  }
  return NestedDesign{candidates.subset(order), std::move(level_counts), {}};
}

NestedDesign dyadic_design(double a, double b, std::vector<std::size_t> level_counts) {
  if (level_counts.empty()) throw ContractError("at least one level is required");
  const auto largest = *std::max_element(level_counts.begin(), level_counts.end());
  std::vector<double> xs;
  xs.reserve(largest);
  for (std::size_t depth = 1; xs.size() < largest; ++depth) {
    const double denom = std::ldexp(1.0, static_cast<int>(depth));
    for (std::size_t odd = 1; odd < (std::size_t{1} << depth) && xs.size() < largest; odd += 2)
      xs.push_back(a + (b - a) * (static_cast<double>(odd) / denom));
  }
  check_levels(level_counts, largest);
  return NestedDesign{PointSet::on_interval(a, b, xs), std::move(level_counts), {}};
}

LevelGeometry measure(const PointSet& x, const EvalGrid* probe) {
  LevelGeometry g;
  if (x.dim() == 1) {
    g.fill = fill_distance_interval(x);
  } else {
    if (!probe) throw ContractError("fill distance in dimension > 1 needs a probe grid");
    g.fill = fill_distance_grid(x, *probe);
  }
  if (x.size() < 2) {
    g.separation = g.mesh_ratio = std::numeric_limits<double>::quiet_NaN();
    return g;
  }
  g.separation = separation_distance(x);
  g.mesh_ratio = g.fill / g.separation;
  return g;
}

void measure_levels(NestedDesign& design, const EvalGrid* probe) {
  design.geometry.clear();
  if (design.master.dim() == 1) {
    for (std::size_t i = 0; i < design.level_count(); ++i)
      design.geometry.push_back(measure(design.level(i)));
    return;
  }
  if (!probe) throw ContractError("fill distance in dimension > 1 needs a probe grid");
  if (probe->dim() != design.master.dim()) throw ContractError("probe dimension mismatch");
  // Nesting lets the nearest-node distances be updated incrementally.
  std::vector<double> nearest(probe->size(), std::numeric_limits<double>::infinity());
  std::size_t done = 0;
  for (std::size_t i = 0; i < design.level_count(); ++i) {
    const auto n = design.levels[i];
    update_nearest(design.master, done, n, *probe, nearest);
    done = n;
    LevelGeometry g;
    g.fill = max_sqrt(nearest);
    if (n < 2) {
      g.separation = g.mesh_ratio = std::numeric_limits<double>::quiet_NaN();
    } else {
      g.separation = separation_distance(design.level(i));
      g.mesh_ratio = g.fill / g.separation;
    }
    design.geometry.push_back(g);
  }
}

}  // namespace kernlab

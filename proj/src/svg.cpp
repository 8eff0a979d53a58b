#include "kernlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kernlab/errors.hpp"

namespace kernlab {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0, hi = 1;  // in transformed units

  double transform(double v) const { return log ? std::log10(v) : v; }

  void fit(double vmin, double vmax) {
    lo = transform(vmin);
    hi = transform(vmax);
    if (log) {
      lo = std::floor(lo);
      hi = std::ceil(hi);
      if (hi == lo) hi = lo + 1;
    } else if (hi == lo) {
      const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }

  // Tick positions in data units.
  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const int step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 8)));
      for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += step)
        t.push_back(std::pow(10.0, e));
    } else {
      // 1, 2 or 5 times a power of ten, about five intervals.
      const double raw = (hi - lo) / 5.0;
      const double mag = std::pow(10.0, std::floor(std::log10(raw)));
      double step = 10.0 * mag;
      for (double m : {1.0, 2.0, 5.0})
        if (m * mag >= raw) {
          step = m * mag;
          break;
        }
      for (double k = std::ceil(lo / step); k * step <= hi + 1e-9 * step; k += 1.0)
        t.push_back(k * step == 0.0 ? 0.0 : k * step);
    }
    return t;
  }
};

// Greedy word wrap for legend labels.
std::vector<std::string> wrap(const std::string& text, std::size_t width) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string word, line;
  while (in >> word) {
    if (!line.empty() && line.size() + 1 + word.size() > width) {
      lines.push_back(line);
      line.clear();
    }
    line += (line.empty() ? "" : " ") + word;
  }
  if (!line.empty() || lines.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

std::string emit_svg(const std::vector<Series>& series, const AxesSpec& axes) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  std::size_t total = 0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto [x, y] = s.points[i];
      auto bad = [&](const char* what) {
        std::ostringstream os;
        os << "series '" << s.label << "' point " << i << ": " << what;
        throw DomainError(os.str());
      };
      if (!std::isfinite(x) || !std::isfinite(y)) bad("value is not finite");
      if (axes.log_x && x <= 0) bad("non-positive x on a log axis");
      if (axes.log_y && y <= 0) bad("non-positive y on a log axis");
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      ++total;
    }
  }
  if (total == 0) throw ContractError("cannot plot an empty series");

  Axis ax{axes.log_x}, ay{axes.log_y};
  ax.fit(xmin, xmax);
  ay.fit(ymin, ymax);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (ax.transform(x) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) {
    return kTop + ph - (ay.transform(y) - ay.lo) / (ay.hi - ay.lo) * ph;
  };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"15\">" << escape(axes.title) << "</text>\n"
    << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(pw)
    << "\" height=\"" << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks()) {
    const double x = px(t);
    o << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(x)
      << "\" y2=\"" << fixed(kTop + ph + 5) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(kTop + ph + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << tick_label(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    o << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(y) << "\" x2=\""
      << fixed(kLeft) << "\" y2=\"" << fixed(y) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(y + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(t)
      << "</text>\n";
  }
  o << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 15)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << escape(axes.x_label) << "</text>\n"
    << "<text x=\"18\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
    << fixed(kTop + ph / 2) << ")\">" << escape(axes.y_label) << "</text>\n";

  double ly = kTop + 12;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    o << "<g class=\"series\">\n";
    if (s.points.size() > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i)
        o << (i ? " " : "") << fixed(px(s.points[i].first)) << ','
          << fixed(py(s.points[i].second));
      o << "\"/>\n";
    }
    for (const auto& [x, y] : s.points)
      o << "<circle class=\"marker\" cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y))
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    o << "</g>\n";
    const double lx = kLeft + pw + 12;
    const auto lines = wrap(s.label, 18);
    o << "<g class=\"legend-entry\"><line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly)
      << "\" x2=\"" << fixed(lx + 20) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/><text x=\"" << fixed(lx + 26) << "\" y=\"" << fixed(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\">";
    for (std::size_t i = 0; i < lines.size(); ++i)
      o << "<tspan x=\"" << fixed(lx + 26) << "\" dy=\"" << (i ? "13" : "0") << "\">"
        << escape(lines[i]) << "</tspan>";
    o << "</text></g>\n";
    ly += 8.0 + 13.0 * static_cast<double>(lines.size());
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const std::string& path, const std::vector<Series>& series, const AxesSpec& axes) {
  const auto text = emit_svg(series, axes);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path);
}

}  // namespace kernlab

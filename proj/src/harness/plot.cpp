//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace aerobench::harness {
namespace {
  constexpr double kWidth = 820, kHeight = 520;
  constexpr double kLeft = 80, kRight = 190, kTop = 40, kBottom = 60;
  const char *kPalette[] = { "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                             "#9467bd", "#8c564b", "#e377c2", "#17becf" };

  std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
  }

  std::string escape(const std::string &s) {
    std::string out;
    for (char ch: s) {
      switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
      }
    }
    return out;
  }

  double nice_step(double span, int target) {
    const double raw = span / std::max(target, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0) * mag;
  }

  std::vector<double> linear_ticks(double lo, double hi) {
    const double step = nice_step(hi - lo, 6);
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step;
         v += step)
      t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
  }

  struct Frame {
    double x0, x1, y0, y1;  // data range (y in log10 units when log_y)
    bool log_y;
    double floor;  // smallest plotted value on a log axis

    double px(double x) const {
      return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
    }
    double py(double y) const {
      const double v = log_y ? std::log10(std::max(y, floor)) : y;
      return kTop + (y1 - v) / (y1 - y0) * (kHeight - kTop - kBottom);
    }
  };

  Frame make_frame(const PlotData &d) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0, min_pos = x0;
    for (const auto &c: d.curves) {
      const auto &b = c.band;
      for (std::size_t i = 0; i < b.size(); ++i) {
        x0 = std::min(x0, b.x[i]);
        x1 = std::max(x1, b.x[i]);
        y0 = std::min(y0, b.min[i]);
        y1 = std::max(y1, b.max[i]);
        for (double v: { b.min[i], b.mean[i], b.max[i] })
          if (v > 0.0)
            min_pos = std::min(min_pos, v);
      }
    }
    if (!std::isfinite(x0)) {
      x0 = 0;
      x1 = 1;
      y0 = 0;
      y1 = 1;
      min_pos = 1;
    }
    if (x1 <= x0)
      x1 = x0 + 1;
    Frame f{ x0, x1, y0, y1, d.log_y, 0.0 };
    if (d.log_y) {
      // Zeros (e.g. a satisfied constraint) are pinned a decade below the
      // smallest positive value.
      if (!std::isfinite(min_pos))
        min_pos = 1e-12;
      f.floor = min_pos / 10.0;
      f.y0 = std::floor(std::log10(f.floor));
      f.y1 = std::ceil(std::log10(std::max(y1, f.floor * 10)));
      if (f.y1 <= f.y0)
        f.y1 = f.y0 + 1;
    } else {
      if (y1 <= y0) {
        const double pad = std::max(std::abs(y0) * 0.05, 1e-12);
        f.y0 -= pad;
        f.y1 += pad;
      } else {
        const double pad = 0.04 * (y1 - y0);
        f.y0 -= pad;
        f.y1 += pad;
      }
    }
    return f;
  }

  std::string polyline(const Frame &f, const std::vector<double> &x,
                       const std::vector<double> &y) {
    std::string pts;
    for (std::size_t i = 0; i < x.size(); ++i)
      pts += num(f.px(x[i])) + "," + num(f.py(y[i])) + " ";
    return pts;
  }

  std::string metric_label(Metric m) {
    switch (m) {
    case Metric::objective: return "objective";
    case Metric::best_feasible: return "best feasible objective";
    case Metric::mcv: return "max constraint violation";
    case Metric::gradnorm: return "gradient inf-norm";
    }
    return "";
  }
}  // namespace

PlotData plot_data(const std::string &problem,
                   const std::vector<const RunRecord *> &records, Metric metric,
                   Axis axis) {
  PlotData d;
  d.problem = problem;
  d.metric = metric;
  d.axis = axis;
  d.log_y = metric == Metric::mcv || metric == Metric::gradnorm;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord *>> by_solver;
  for (const auto *r: records) {
    if (!by_solver.count(r->solver))
      order.push_back(r->solver);
    by_solver[r->solver].push_back(r);
  }
  for (const auto &s: order)
    d.curves.push_back({ s, aggregate(by_solver[s], metric, axis) });
  return d;
}

std::string render_svg(const PlotData &d) {
  const Frame f = make_frame(d);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
     << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"15\">"
     << escape(d.problem) << ": " << metric_label(d.metric) << "</text>\n";

  const double xl = kLeft, xr = kWidth - kRight, yt = kTop,
               yb = kHeight - kBottom;
  os << "<g stroke=\"#ccc\" stroke-width=\"0.5\">\n";
  std::ostringstream labels;
  for (double t: linear_ticks(f.x0, f.x1)) {
    const double x = f.px(t);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << yt << "\" x2=\"" << num(x)
       << "\" y2=\"" << yb << "\"/>\n";
    labels << "<text x=\"" << num(x) << "\" y=\"" << yb + 16
           << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  std::vector<double> yticks;
  if (f.log_y) {
    for (double e = f.y0; e <= f.y1; e += 1.0)
      yticks.push_back(e);
  } else {
    yticks = linear_ticks(f.y0, f.y1);
  }
  for (double t: yticks) {
    const double y = f.log_y ? f.py(std::pow(10.0, t)) : f.py(t);
    os << "<line x1=\"" << xl << "\" y1=\"" << num(y) << "\" x2=\"" << xr
       << "\" y2=\"" << num(y) << "\"/>\n";
    labels << "<text x=\"" << xl - 6 << "\" y=\"" << num(y + 4)
           << "\" text-anchor=\"end\">"
           << (f.log_y ? "1e" + num(t) : num(t)) << "</text>\n";
  }
  os << "</g>\n" << labels.str();
  os << "<rect x=\"" << xl << "\" y=\"" << yt << "\" width=\"" << xr - xl
     << "\" height=\"" << yb - yt
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << num((xl + xr) / 2) << "\" y=\"" << kHeight - 18
     << "\" text-anchor=\"middle\">"
     << (d.axis == Axis::iteration ? "iteration"
                                   : "cost (objective + gradient evaluations)")
     << "</text>\n";
  os << "<text transform=\"translate(18," << num((yt + yb) / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << metric_label(d.metric)
     << (f.log_y ? " (log)" : "") << "</text>\n";

  os << "<defs><clipPath id=\"plot-area\"><rect x=\"" << xl << "\" y=\""
     << yt << "\" width=\"" << xr - xl << "\" height=\"" << yb - yt
     << "\"/></clipPath></defs>\n";
  os << "<g clip-path=\"url(#plot-area)\">\n";
  for (std::size_t c = 0; c < d.curves.size(); ++c) {
    const auto &curve = d.curves[c];
    const auto &b = curve.band;
    const char *color = kPalette[c % std::size(kPalette)];
    if (b.size() == 0)
      continue;
    if (curve.shaded()) {
      std::vector<double> rx(b.x.rbegin(), b.x.rend());
      std::vector<double> rmin(b.min.rbegin(), b.min.rend());
      os << "<polygon class=\"band\" fill=\"" << color
         << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\""
         << polyline(f, b.x, b.max) << polyline(f, rx, rmin) << "\"/>\n";
    }
    os << "<polyline class=\"curve\" data-solver=\"" << escape(curve.solver)
       << "\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.8\" points=\"" << polyline(f, b.x, b.mean)
       << "\"/>\n";
  }
  os << "</g>\n";

  for (std::size_t c = 0; c < d.curves.size(); ++c) {
    const double y = yt + 14 + 20.0 * c;
    const char *color = kPalette[c % std::size(kPalette)];
    os << "<line x1=\"" << xr + 12 << "\" y1=\"" << num(y) << "\" x2=\""
       << xr + 36 << "\" y2=\"" << num(y) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    std::string label = d.curves[c].solver;
    if (d.curves[c].shaded())
      label += " (" + std::to_string(d.curves[c].band.repetitions)
               + " reps)";
    os << "<text x=\"" << xr + 42 << "\" y=\"" << num(y + 4) << "\">"
       << escape(label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> plot_campaign(const std::vector<CellResult> &cells,
                                       Metric metric, Axis axis,
                                       const std::string &dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord *>> by_problem;
  for (const auto &c: cells) {
    if (c.failed)
      continue;
    if (!by_problem.count(c.problem))
      order.push_back(c.problem);
    by_problem[c.problem].push_back(&c.record);
  }
  fs::create_directories(dir);
  std::vector<std::string> written;
  for (const auto &p: order) {
    std::string stem;
    for (char ch: p)
      stem += std::isalnum(static_cast<unsigned char>(ch)) || ch == '-'
                      || ch == '_'
                  ? ch
                  : '-';
    const fs::path path = fs::path(dir)
                          / (stem + "__" + to_string(metric) + "__"
                             + to_string(axis) + ".svg");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << render_svg(plot_data(p, by_problem[p], metric, axis));
    out.close();
    if (!out)
      throw std::runtime_error("cannot write '" + path.string() + "'");
    written.push_back(path.string());
  }
  return written;
}

}  // namespace aerobench::harness

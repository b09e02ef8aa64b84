#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gdlab/sweep.hpp"

namespace gdlab {

namespace {

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> points;  // sorted by x, y > 0
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Minimal standalone log-log SVG line plot; no display server, no deps.
std::string svg_loglog(const std::vector<Curve>& curves,
                       const std::string& x_label) {
  const double width = 640, height = 480;
  const double ml = 70, mr = 20, mt = 20, mb = 50;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& c : curves) {
    for (const auto& [x, y] : c.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax)) {  // no data at all
    xmin = 1;
    xmax = 10;
    ymin = 1e-3;
    ymax = 1;
  }
  double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  if (lx1 - lx0 < 1e-9) lx1 = lx0 + 1;
  if (ly1 - ly0 < 1e-9) ly1 = ly0 + 1;
  ly0 -= 0.05 * (ly1 - ly0);
  ly1 += 0.05 * (ly1 - ly0);

  auto px = [&](double x) {
    return ml + (std::log10(x) - lx0) / (lx1 - lx0) * (width - ml - mr);
  };
  auto py = [&](double y) {
    return height - mb -
           (std::log10(y) - ly0) / (ly1 - ly0) * (height - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\""
      << width - ml - mr << "\" height=\"" << height - mt - mb
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade ticks
  for (int e = static_cast<int>(std::floor(lx0)); e <= std::ceil(lx1); ++e) {
    const double x = std::pow(10.0, e);
    if (std::log10(x) < lx0 - 1e-9 || std::log10(x) > lx1 + 1e-9) continue;
    svg << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << height - mb
        << "\" x2=\"" << fmt(px(x)) << "\" y2=\"" << height - mb + 6
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(px(x)) << "\" y=\"" << height - mb + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::floor(ly0)); e <= std::ceil(ly1); ++e) {
    const double y = std::pow(10.0, e);
    if (std::log10(y) < ly0 - 1e-9 || std::log10(y) > ly1 + 1e-9) continue;
    svg << "<line x1=\"" << ml - 6 << "\" y1=\"" << fmt(py(y)) << "\" x2=\""
        << ml << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 10 << "\" y=\"" << fmt(py(y) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">population risk</text>\n";

  int ci = 0;
  for (const auto& c : curves) {
    const char* color = kPalette[ci % 8];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : c.points) {
      svg << fmt(px(x)) << "," << fmt(py(y)) << " ";
    }
    svg << "\"/>\n";
    for (const auto& [x, y] : c.points) {
      svg << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    svg << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 16 + 16 * ci
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">"
        << c.label << "</text>\n";
    ++ci;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::pair<double, double>> seed_averaged(const SweepResult& result,
                                                     SweepAxis axis) {
  std::map<double, std::pair<double, long>> groups;
  for (const auto& r : result.rows) {
    if (r.status != "ok") continue;
    const double x = axis == SweepAxis::k   ? static_cast<double>(r.k)
                     : axis == SweepAxis::T ? static_cast<double>(r.T)
                                            : static_cast<double>(r.n);
    auto& g = groups[x];
    g.first += r.pop_risk;
    g.second += 1;
  }
  std::vector<std::pair<double, double>> xy;
  for (const auto& [x, g] : groups) {
    const double mean = g.first / g.second;
    if (mean > 0.0) xy.emplace_back(x, mean);
  }
  return xy;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot write " + path.string());
  out << body;
}

}  // namespace

void emit_report(const std::vector<std::pair<std::string, SweepResult>>& results,
                 const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  std::ostringstream summary;
  summary << "sweep report\n";
  summary << "============\n\n";
  summary << "label | rows | ok | skipped | errors | mean pop_risk | mean "
             "pop/(bound_opt+bound_gen)\n";
  for (const auto& [label, result] : results) {
    long ok = 0, skipped = 0, errors = 0;
    double risk_sum = 0.0, ratio_sum = 0.0;
    long ratio_count = 0;
    for (const auto& r : result.rows) {
      if (r.status == "ok") {
        ++ok;
        risk_sum += r.pop_risk;
        const double bound = r.bound_opt + r.bound_gen;
        if (bound > 0.0) {
          ratio_sum += r.pop_risk / bound;
          ++ratio_count;
        }
      } else if (r.status == "skipped_infeasible") {
        ++skipped;
      } else {
        ++errors;
      }
    }
    summary << label << " | " << result.rows.size() << " | " << ok << " | "
            << skipped << " | " << errors << " | "
            << (ok ? fmt(risk_sum / ok) : "-") << " | "
            << (ratio_count ? fmt(ratio_sum / ratio_count) : "-") << "\n";
  }
  summary << "\nlog-log slopes of seed-averaged population risk\n";
  summary << "label | axis | slope | stderr | points\n";

  const struct {
    SweepAxis axis;
    const char* name;
  } axes[] = {{SweepAxis::k, "k"}, {SweepAxis::T, "T"}, {SweepAxis::n, "n"}};

  for (const auto& [label, result] : results) {
    for (const auto& ax : axes) {
      const auto xy = seed_averaged(result, ax.axis);
      if (xy.size() < 3) continue;
      const FitResult fit = fit_loglog(xy);
      summary << label << " | " << ax.name << " | " << fmt(fit.slope) << " | "
              << fmt(fit.stderr_) << " | " << fit.points << "\n";
    }
  }
  write_file(dir / "summary.txt", summary.str());

  for (const auto& ax : axes) {
    std::vector<Curve> curves;
    for (const auto& [label, result] : results) {
      auto xy = seed_averaged(result, ax.axis);
      if (xy.size() >= 2) curves.push_back({label, std::move(xy)});
    }
    if (curves.empty()) continue;
    write_file(dir / ("risk_vs_" + std::string(ax.name) + ".svg"),
               svg_loglog(curves, ax.name));
  }
}

}  // namespace gdlab

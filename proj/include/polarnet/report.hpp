#ifndef POLARNET_REPORT_HPP
#define POLARNET_REPORT_HPP

/** @file
 * CSV and SVG writers. Numbers go through std::to_chars, so output does not
 * depend on the global locale and is byte-identical across runs.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <locale>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polarnet/experiment.hpp"
#include "polarnet/metrics.hpp"

namespace polarnet {

/// Fixed-point with `decimals` digits; "nan" / "inf" for non-finite values.
inline std::string format_fixed(double x, int decimals = 6) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0.000000"
  char buf[128];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  std::string s(buf, ptr);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace detail

inline constexpr std::string_view kCurvesHeader = "day,new_unvacc,new_vacc,new_all,cum_unvacc,cum_vacc,cum_all";
inline constexpr std::string_view kSummaryHeader = "scenario,subpop,attack_rate,t_peak";

/// Ensemble-mean daily fractions and their running sums, one row per day.
inline std::string curves_csv(const EnsembleSummary& e) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << kCurvesHeader << '\n';
  const auto& u = e.curve(Subpop::Unvaccinated).mean;
  const auto& v = e.curve(Subpop::Vaccinated).mean;
  const auto& a = e.curve(Subpop::All).mean;
  double cu = 0, cv = 0, ca = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    cu += u[d];
    cv += v[d];
    ca += a[d];
    out << d << ',' << format_fixed(u[d]) << ',' << format_fixed(v[d]) << ',' << format_fixed(a[d]) << ','
        << format_fixed(cu) << ',' << format_fixed(cv) << ',' << format_fixed(ca) << '\n';
  }
  return out.str();
}

inline void write_curves_csv(const EnsembleSummary& e, const std::string& path) {
  detail::write_file(path, curves_csv(e));
}

/// One row per (scenario, subpopulation): mean attack rate and mean T_peak.
inline std::string summary_csv(std::span<const EnsembleSummary* const> ensembles) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << kSummaryHeader << '\n';
  for (const EnsembleSummary* e : ensembles)
    for (Subpop s : all_subpops)
      out << to_string(e->strategy) << ',' << to_string(s) << ',' << format_fixed(e->ar(s)) << ','
          << format_fixed(e->t_peak(s)) << '\n';
  return out.str();
}

inline void write_summary_csv(std::span<const EnsembleSummary* const> ensembles, const std::string& path) {
  detail::write_file(path, summary_csv(ensembles));
}

inline std::string metrics_csv(const MetricsReport& r) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  out << "metric,value\n"
      << "nodes," << r.nodes << '\n'
      << "edges," << r.edges << '\n'
      << "anti_fraction," << format_fixed(r.anti_fraction) << '\n'
      << "density," << format_fixed(r.density, 8) << '\n'
      << "mean_degree," << format_fixed(r.mean_degree) << '\n'
      << "avg_clustering," << format_fixed(r.avg_clustering) << '\n'
      << "power_law_gamma," << format_fixed(r.power_law ? r.power_law->gamma : nan) << '\n'
      << "power_law_kmin," << (r.power_law ? std::to_string(r.power_law->k_min) : "nan") << '\n'
      << "power_law_r2," << format_fixed(r.power_law ? r.power_law->r2 : nan) << '\n'
      << "assortativity," << format_fixed(r.assortativity.value_or(nan)) << '\n'
      << "cross_connection," << format_fixed(r.cross_connection.value_or(nan)) << '\n';
  return out.str();
}

inline void write_metrics_csv(const MetricsReport& r, const std::string& path) {
  detail::write_file(path, metrics_csv(r));
}

enum class Palette : std::uint8_t { Red, Grey };

/// A family of curves drawn in one palette with one legend entry.
struct CurveSet {
  std::string name;
  Palette palette = Palette::Red;
  std::vector<std::vector<double>> series;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string shade(Palette p, std::size_t i, std::size_t n) {
  // spread the runs over a band of tones so overlapping curves stay visible
  const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.5;
  int r, g, b;
  if (p == Palette::Red) {
    r = 150 + static_cast<int>(std::lround(t * 100));
    g = b = 20 + static_cast<int>(std::lround(t * 70));
  } else {
    r = g = b = 90 + static_cast<int>(std::lround(t * 90));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

/// "Nice" axis maximum: 1, 2 or 5 times a power of ten, at least `x`.
inline double nice_ceiling(double x) {
  if (!(x > 0)) return 1.0;
  const double base = std::pow(10.0, std::floor(std::log10(x)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * base >= x * (1 - 1e-12)) return m * base;
  return 10 * base;
}

}  // namespace detail

/**
 * Standalone SVG line chart: one polyline per series, x = day index,
 * y = value. Red-palette sets are drawn above grey ones.
 */
inline std::string render_svg(std::span<const CurveSet> sets, std::string_view title,
                              std::string_view y_label = "fraction infected per day") {
  std::size_t days = 0, count = 0;
  double y_max = 0.0;
  for (const auto& set : sets)
    for (const auto& s : set.series) {
      if (s.empty()) continue;
      ++count;
      days = std::max(days, s.size());
      for (double y : s)
        if (std::isfinite(y)) y_max = std::max(y_max, y);
    }
  if (count == 0) throw std::invalid_argument("render_svg: no non-empty series");

  constexpr double width = 800, height = 500, left = 80, right = 30, top = 50, bottom = 60;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const double x_span = days > 1 ? static_cast<double>(days - 1) : 1.0;
  const double y_top = detail::nice_ceiling(y_max);
  auto px = [&](double d) { return left + plot_w * d / x_span; };
  auto py = [&](double y) { return top + plot_h * (1.0 - y / y_top); };

  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"18\">" << detail::xml_escape(title) << "</text>\n";

  // axes and ticks
  out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double y = y_top * k / 5.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << format_fixed(py(y) + 4, 2)
        << "\" text-anchor=\"end\">" << format_fixed(y, 4) << "</text>\n";
    const double d = x_span * k / 5.0;
    out << "<text x=\"" << format_fixed(px(d), 2) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << format_fixed(d, 0) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << "days</text>\n"
      << "<text x=\"20\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << top + plot_h / 2 << ")\">" << detail::xml_escape(y_label) << "</text>\n</g>\n";

  std::vector<const CurveSet*> order;
  for (const auto& set : sets) order.push_back(&set);
  std::stable_sort(order.begin(), order.end(),
                   [](const CurveSet* a, const CurveSet* b) { return a->palette == Palette::Grey && b->palette == Palette::Red; });
  for (const CurveSet* set : order) {
    out << "<g fill=\"none\" stroke-width=\"1\" stroke-opacity=\"0.6\">\n";
    for (std::size_t i = 0; i < set->series.size(); ++i) {
      const auto& s = set->series[i];
      if (s.empty()) continue;
      out << "<polyline stroke=\"" << detail::shade(set->palette, i, set->series.size()) << "\" points=\"";
      for (std::size_t d = 0; d < s.size(); ++d) {
        const double y = std::isfinite(s[d]) ? s[d] : 0.0;
        out << (d ? " " : "") << format_fixed(px(static_cast<double>(d)), 2) << ',' << format_fixed(py(y), 2);
      }
      out << "\"/>\n";
    }
    out << "</g>\n";
  }

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
  double ly = top + 10;
  for (const auto& set : sets) {
    const std::string color = detail::shade(set.palette, 0, 1);
    out << "<g class=\"legend\"><line x1=\"" << left + plot_w - 170 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w - 145 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>"
        << "<text x=\"" << left + plot_w - 138 << "\" y=\"" << ly + 4 << "\">" << detail::xml_escape(set.name)
        << "</text></g>\n";
    ly += 20;
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

inline void emit_svg_plot(std::span<const CurveSet> sets, std::string_view title, const std::string& path,
                          std::string_view y_label = "fraction infected per day") {
  detail::write_file(path, render_svg(sets, title, y_label));
}

/// Per-run curves of `subpop` from an ensemble, for plotting.
inline CurveSet run_curves(const EnsembleSummary& e, Subpop subpop, std::string name, Palette palette) {
  CurveSet set{std::move(name), palette, {}};
  for (const auto& r : e.runs) set.series.push_back(r.curve(subpop));
  return set;
}

}  // namespace polarnet

#endif  // POLARNET_REPORT_HPP

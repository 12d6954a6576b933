#include "blochsim/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "blochsim/error.hpp"

namespace blochsim {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

struct Range {
  double lo = 0.0, hi = 1.0;
};

Range range_of(std::span<const SvgSeries> series, bool use_x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {};
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi};
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string xml(const std::string& text) {
  std::string out;
  for (char ch : text) {
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

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

void write_snapshots_csv(const std::filesystem::path& path, std::span<const ChainState> states) {
  auto out = open_out(path);
  out << "t,n,re,im,prob,prob_normalized\n";
  for (const auto& s : states) {
    const double total = s.norm();
    const std::string t = format_double(s.t);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const cplx c = s.amplitudes[k];
      const double p = std::norm(c);
      out << t << ',' << (s.n_min + static_cast<std::int64_t>(k)) << ',' << format_double(c.real())
          << ',' << format_double(c.imag()) << ',' << format_double(p) << ','
          << format_double(total > 0.0 ? p / total : 0.0) << '\n';
    }
  }
  close_out(out, path);
}

void write_observables_csv(const std::filesystem::path& path, std::span<const Observables> rows) {
  auto out = open_out(path);
  out << "t,norm,centroid_n,width,centroid_q_unwrapped,theta_measured,boundary_fraction,"
         "width_centered\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.norm) << ',' << format_double(r.centroid_n)
        << ',' << format_double(r.width) << ',' << format_double(r.centroid_q) << ','
        << format_double(r.theta_measured) << ',' << format_double(r.boundary_fraction) << ','
        << format_double(r.width_centered) << '\n';
  }
  close_out(out, path);
}

void emit_svg_lines(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, std::span<const SvgPanel> panels) {
  bool any = false;
  for (const auto& p : panels) {
    for (const auto& s : p.series) any = any || !s.x.empty();
  }
  if (!any) throw Error(ErrorCode::invalid_parameter, "svg: empty series");

  constexpr double width = 640.0, panel_h = 200.0, left = 80.0, right = 20.0, top = 40.0,
                   gap = 50.0;
  const double height = top + panels.size() * (panel_h + gap) + 10.0;
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml(title) << "</text>\n";

  std::vector<SvgSeries> all;
  for (const auto& p : panels) all.insert(all.end(), p.series.begin(), p.series.end());
  const Range xr = range_of(all, true);
  const double plot_w = width - left - right;

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& panel = panels[i];
    const double y0 = top + i * (panel_h + gap);
    const Range yr = range_of(panel.series, false);
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return y0 + panel_h - (y - yr.lo) / (yr.hi - yr.lo) * panel_h; };

    out << "<rect x=\"" << left << "\" y=\"" << fixed(y0) << "\" width=\"" << plot_w
        << "\" height=\"" << panel_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y0 + 10) << "\" text-anchor=\"end\">"
        << format_double(yr.hi) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y0 + panel_h) << "\" text-anchor=\"end\">"
        << format_double(yr.lo) << "</text>\n";
    out << "<text transform=\"translate(16," << fixed(y0 + panel_h / 2) << ") rotate(-90)\" "
        << "text-anchor=\"middle\">" << xml(panel.y_label) << "</text>\n";
    out << "<text x=\"" << left << "\" y=\"" << fixed(y0 + panel_h + 16) << "\">"
        << format_double(xr.lo) << "</text>\n";
    out << "<text x=\"" << width - right << "\" y=\"" << fixed(y0 + panel_h + 16)
        << "\" text-anchor=\"end\">" << format_double(xr.hi) << "</text>\n";
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << fixed(y0 + panel_h + 32)
        << "\" text-anchor=\"middle\">" << xml(x_label) << "</text>\n";

    static const char* colors[] = {"#1f4e9c", "#c0392b", "#27ae60", "#8e44ad"};
    for (std::size_t k = 0; k < panel.series.size(); ++k) {
      const auto& s = panel.series[k];
      out << "<polyline fill=\"none\" stroke=\"" << colors[k % 4] << "\" stroke-width=\"1.5\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
      for (std::size_t p = 0; p < s.x.size() && p < s.y.size(); ++p) {
        out << fixed(px(s.x[p])) << ',' << fixed(py(s.y[p])) << ' ';
      }
      out << "\"><title>" << xml(s.label) << "</title></polyline>\n";
    }
  }
  out << "</svg>\n";
  close_out(out, path);
}

void emit_svg_heatmap(const std::filesystem::path& path, const std::string& title,
                      std::span<const ChainState> states, bool normalize) {
  if (states.empty() || states.front().size() == 0) {
    throw Error(ErrorCode::invalid_parameter, "svg: empty series");
  }
  // Sites are max-pooled into at most 400 columns.
  const std::size_t sites = states.front().size();
  const std::size_t cols = std::min<std::size_t>(sites, 400);
  const std::size_t rows = states.size();
  std::vector<double> cell(rows * cols, 0.0);
  double peak = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& s = states[r];
    const double total = normalize ? s.norm() : 1.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::size_t c = k * cols / sites;
      const double p = total > 0.0 ? std::norm(s.amplitudes[k]) / total : 0.0;
      cell[r * cols + c] = std::max(cell[r * cols + c], p);
    }
  }
  for (double v : cell) peak = std::max(peak, v);
  if (!(peak > 0.0)) peak = 1.0;

  constexpr double left = 70.0, top = 40.0, plot_w = 560.0, plot_h = 400.0;
  const double cw = plot_w / cols, rh = plot_h / rows;
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + plot_w + 20
      << "\" height=\"" << top + plot_h + 50 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml(title) << "</text>\n";
  out << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const int level = static_cast<int>(std::lround(255.0 * cell[r * cols + c] / peak));
      if (level == 0) continue;
      const int g = 255 - level;
      out << "<rect x=\"" << fixed(left + c * cw) << "\" y=\"" << fixed(top + r * rh)
          << "\" width=\"" << fixed(cw + 0.01) << "\" height=\"" << fixed(rh + 0.01)
          << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
    }
  }
  out << "</g>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  const auto& first = states.front();
  out << "<text x=\"" << left << "\" y=\"" << top + plot_h + 16 << "\">" << first.n_min
      << "</text>\n";
  out << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 16
      << "\" text-anchor=\"end\">" << first.n_max() << "</text>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 32
      << "\" text-anchor=\"middle\">site n</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">"
      << format_double(states.front().t) << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + plot_h << "\" text-anchor=\"end\">"
      << format_double(states.back().t) << "</text>\n";
  out << "<text transform=\"translate(16," << top + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">time t (1/kappa)</text>\n";
  out << "</svg>\n";
  close_out(out, path);
}

void emit_svg_trajectory(const std::filesystem::path& path, const std::string& title,
                         std::span<const Observables> rows, std::span<const double> reference) {
  if (rows.empty()) throw Error(ErrorCode::invalid_parameter, "svg: empty series");
  SvgSeries n{"<n>", {}, {}, false}, q{"<q>", {}, {}, false}, w{"width", {}, {}, false};
  for (const auto& r : rows) {
    n.x.push_back(r.t);
    n.y.push_back(r.centroid_n);
    q.x.push_back(r.t);
    q.y.push_back(r.centroid_q);
    w.x.push_back(r.t);
    w.y.push_back(r.width);
  }
  std::vector<SvgPanel> panels;
  panels.push_back({"<n> (sites)", {n}});
  if (!reference.empty()) {
    SvgSeries ref{"prediction", n.x, {reference.begin(), reference.end()}, true};
    panels.back().series.push_back(std::move(ref));
  }
  panels.push_back({"<q> (1/a)", {q}});
  panels.push_back({"width (sites)", {w}});
  emit_svg_lines(path, title, "time t (1/kappa)", panels);
}

}  // namespace blochsim

#include "ddestab/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace ddestab::output {

namespace {

constexpr int kMargin = 50;

const char* fill_for(const SweepNode& n) {
  if (!n.label) return "#bdbdbd";
  switch (n.label->label) {
    case Label::StableSteadyState: return "#9ecae1";
    case Label::LimitCycleOscillation: return "#fc9272";
    case Label::BoundaryBand: return "#fee391";
  }
  return "#bdbdbd";
}

struct Frame {
  double tau_lo, tau_hi, beta_lo, beta_hi;
  int width, height;  // plotting area in px

  double x(double tau) const { return kMargin + (tau - tau_lo) / (tau_hi - tau_lo) * width; }
  double y(double beta) const { return kMargin + (beta_hi - beta) / (beta_hi - beta_lo) * height; }
};

void open_svg(std::ostream& os, const Frame& fr) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fr.width + 2 * kMargin << "\" height=\""
     << fr.height + 2 * kMargin << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fr.width + 2 * kMargin << "\" height=\"" << fr.height + 2 * kMargin
     << "\" fill=\"white\"/>\n";
}

void axes(std::ostream& os, const Frame& fr) {
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << fr.width << "\" height=\""
     << fr.height << "\" fill=\"none\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int k = 0; k <= kTicks; ++k) {
    const double tau = fr.tau_lo + (fr.tau_hi - fr.tau_lo) * k / kTicks;
    const double beta = fr.beta_lo + (fr.beta_hi - fr.beta_lo) * k / kTicks;
    os << "<text x=\"" << format_double(fr.x(tau)) << "\" y=\"" << kMargin + fr.height + 16
       << "\" font-size=\"11\" text-anchor=\"middle\">" << format_double(tau) << "</text>\n";
    os << "<text x=\"" << kMargin - 6 << "\" y=\"" << format_double(fr.y(beta) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(beta) << "</text>\n";
  }
  os << "<text x=\"" << kMargin + fr.width / 2 << "\" y=\"" << kMargin + fr.height + 36
     << "\" font-size=\"13\" text-anchor=\"middle\">tau</text>\n";
  os << "<text x=\"14\" y=\"" << kMargin + fr.height / 2 << "\" font-size=\"13\" text-anchor=\"middle\""
     << " transform=\"rotate(-90 14 " << kMargin + fr.height / 2 << ")\">beta</text>\n";
}

void dots(std::ostream& os, const Frame& fr, const std::vector<R0Point>& r0, double radius) {
  os << "<g fill=\"black\">\n";
  for (const R0Point& p : r0) {
    if (p.beta < fr.beta_lo || p.beta > fr.beta_hi || p.tau < fr.tau_lo || p.tau > fr.tau_hi) continue;
    os << "<circle cx=\"" << format_double(fr.x(p.tau)) << "\" cy=\"" << format_double(fr.y(p.beta))
       << "\" r=\"" << format_double(radius) << "\"/>\n";
  }
  os << "</g>\n";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

void write_region_svg(std::ostream& os, const std::vector<SweepNode>& nodes, const std::vector<R0Point>& r0,
                      std::pair<double, double> tau_range, std::pair<double, double> beta_range,
                      const SvgOptions& opts) {
  int n_tau = 0, n_beta = 0;
  for (const SweepNode& n : nodes) {
    n_tau = std::max(n_tau, n.col + 1);
    n_beta = std::max(n_beta, n.row + 1);
  }
  // Node values sit at cell centres, so the frame extends half a step past each range end.
  const double dtau = n_tau > 1 ? (tau_range.second - tau_range.first) / (n_tau - 1) : 1.0;
  const double dbeta = n_beta > 1 ? (beta_range.second - beta_range.first) / (n_beta - 1) : 1.0;
  const Frame fr{tau_range.first - 0.5 * dtau, tau_range.second + 0.5 * dtau, beta_range.first - 0.5 * dbeta,
                 beta_range.second + 0.5 * dbeta, n_tau * opts.cell_px, n_beta * opts.cell_px};
  open_svg(os, fr);
  os << "<g stroke=\"none\">\n";
  for (const SweepNode& n : nodes) {
    const int x = kMargin + n.col * opts.cell_px;
    const int y = kMargin + (n_beta - 1 - n.row) * opts.cell_px;
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << opts.cell_px << "\" height=\""
       << opts.cell_px << "\" fill=\"" << fill_for(n) << "\"/>\n";
  }
  os << "</g>\n";
  dots(os, fr, r0, opts.dot_radius);
  axes(os, fr);
  os << "</svg>\n";
}

void write_trace_svg(std::ostream& os, const std::vector<R0Point>& r0, std::pair<double, double> tau_range,
                     std::pair<double, double> beta_range, const SvgOptions& opts) {
  const Frame fr{tau_range.first, tau_range.second, beta_range.first, beta_range.second, 500, 500};
  open_svg(os, fr);
  dots(os, fr, r0, opts.dot_radius);
  axes(os, fr);
  os << "</svg>\n";
}

}  // namespace ddestab::output

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ddestab/region.hpp"

namespace ddestab::output {

/// Shortest round-trip decimal form (at most 17 significant digits); "inf", "-inf", "nan".
std::string format_double(double v);

/// RFC 4180 quoting where needed.
std::string csv_field(const std::string& s);

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

struct SvgOptions {
  int cell_px = 10;
  double dot_radius = 1.5;
};

/// Region map: one rectangle per sweep node (tau horizontal, beta upward), the
/// traced crossing points as dots on top. Nodes must come from one sweep.
void write_region_svg(std::ostream& os, const std::vector<SweepNode>& nodes, const std::vector<R0Point>& r0,
                      std::pair<double, double> tau_range, std::pair<double, double> beta_range,
                      const SvgOptions& opts = {});

/// Dots only, for a bare crossing trace.
void write_trace_svg(std::ostream& os, const std::vector<R0Point>& r0, std::pair<double, double> tau_range,
                     std::pair<double, double> beta_range, const SvgOptions& opts = {});

}  // namespace ddestab::output

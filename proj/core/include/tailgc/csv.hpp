#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tailgc/series.hpp"

namespace tailgc {

// =============================================================================
// CSV formats
//
// Binary panel: first row holds the N labels, each following row holds one
// time step of N comma-separated 0/1 values.
//
// Real series: header `timestamp,value`; timestamps are opaque strings kept
// for output alignment.
//
// Real panel (used by the GARCH simulator's CLI output): first row labels,
// following rows real values — same layout as the binary panel, real-valued.
// =============================================================================

BinaryPanel read_panel_csv(std::istream& in);
void write_panel_csv(std::ostream& out, const BinaryPanel& panel);

RealSeries read_real_series_csv(std::istream& in, std::string label = "");
void write_real_series_csv(std::ostream& out, const RealSeries& series);

void write_real_panel_csv(std::ostream& out, const std::vector<RealSeries>& columns);

// Splits one CSV line on commas and trims surrounding whitespace per field.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace tailgc

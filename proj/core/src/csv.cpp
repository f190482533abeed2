#include "tailgc/csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tailgc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

BinaryPanel read_panel_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("panel CSV: empty input");
  const std::vector<std::string> labels = split_csv_line(line);
  const std::size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("panel CSV: empty label row");

  std::vector<std::vector<std::uint8_t>> columns(n);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != n) {
      throw std::invalid_argument("panel CSV: ragged row " + std::to_string(row));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (fields[i] == "0") {
        columns[i].push_back(0);
      } else if (fields[i] == "1") {
        columns[i].push_back(1);
      } else {
        throw std::invalid_argument("panel CSV: non-binary value '" + fields[i] + "' at row " +
                                    std::to_string(row) + ", column " + std::to_string(i + 1));
      }
    }
  }
  if (columns.front().empty()) throw std::invalid_argument("panel CSV: no data rows");

  std::vector<BinarySeries> series;
  series.reserve(n);
  for (std::size_t i = 0; i < n; ++i) series.emplace_back(std::move(columns[i]), labels[i]);
  return BinaryPanel(std::move(series));
}

void write_panel_csv(std::ostream& out, const BinaryPanel& panel) {
  const auto labels = panel.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i] << (i + 1 < labels.size() ? "," : "\n");
  }
  const std::size_t T = panel.length();
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < panel.width(); ++i) {
      out << static_cast<int>(panel.series(i)[t]) << (i + 1 < panel.width() ? "," : "\n");
    }
  }
}

RealSeries read_real_series_csv(std::istream& in, std::string label) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("series CSV: empty input");
  // Header row `timestamp,value` is required; tolerate different names but
  // not a different column count.
  if (split_csv_line(line).size() != 2) {
    throw std::invalid_argument("series CSV: expected two columns (timestamp,value)");
  }

  std::vector<double> values;
  std::vector<std::string> timestamps;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw std::invalid_argument("series CSV: ragged row " + std::to_string(row));
    }
    timestamps.push_back(fields[0]);
    try {
      values.push_back(std::stod(fields[1]));
    } catch (const std::exception&) {
      throw std::invalid_argument("series CSV: non-numeric value at row " + std::to_string(row));
    }
  }
  return RealSeries(std::move(values), std::move(label), std::move(timestamps));
}

void write_real_series_csv(std::ostream& out, const RealSeries& series) {
  out << "timestamp,value\n";
  const bool has_ts = !series.timestamps().empty();
  out.precision(17);
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (has_ts) {
      out << series.timestamps()[t];
    } else {
      out << t;
    }
    out << "," << series[t] << "\n";
  }
}

void write_real_panel_csv(std::ostream& out, const std::vector<RealSeries>& columns) {
  if (columns.empty()) throw std::invalid_argument("real panel CSV: no columns");
  const std::size_t T = columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != T) throw std::invalid_argument("real panel CSV: unequal series lengths");
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << columns[i].label() << (i + 1 < columns.size() ? "," : "\n");
  }
  out.precision(17);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << columns[i][t] << (i + 1 < columns.size() ? "," : "\n");
    }
  }
}

}  // namespace tailgc

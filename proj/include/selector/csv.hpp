#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "selector/data_matrix.hpp"

namespace selector {

/// One data point per row; labels, when present, occupy a leading column.
/// The reader auto-detects a header row and a label column (a cell is a label
/// iff it does not parse completely as a number).
void write_data_matrix_csv(std::ostream& out, const DataMatrix& data);
DataMatrix read_data_matrix_csv(std::istream& in);

void write_labels_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<int>& classes);

/// Long-format price table: header `date,ticker,close`, ISO-8601 dates,
/// one row per (date, ticker). Cells with no quote hold NaN; completeness is
/// enforced per asset when a date window is sliced, not at parse time.
struct PriceTable {
  std::vector<std::string> dates;    // sorted ascending, distinct
  std::vector<std::string> tickers;  // sorted ascending, distinct
  std::vector<double> close;         // tickers.size() x dates.size(), row-major
  double at(std::size_t t, std::size_t d) const { return close[t * dates.size() + d]; }
  bool has(std::size_t t, std::size_t d) const { return close[t * dates.size() + d] == close[t * dates.size() + d]; }
};

PriceTable read_price_csv(std::istream& in);
void write_price_csv(std::ostream& out, const PriceTable& table);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::vector<std::string> split_csv_line(const std::string& line);
std::string format_csv_double(double v);

}  // namespace selector

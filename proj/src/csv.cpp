#include "selector/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "selector/errors.hpp"

namespace selector {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (const char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else if (ch != '\r') {
      current.push_back(ch);
    }
  }
  fields.push_back(current);
  return fields;
}

std::string format_csv_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !text.empty();
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

}  // namespace

void write_data_matrix_csv(std::ostream& out, const DataMatrix& data) {
  if (data.has_labels()) {
    out << "label";
    for (std::size_t j = 0; j < data.num_cols(); ++j) out << ",f" << j;
    out << "\n";
  }
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    if (data.has_labels()) out << data.label(i) << ",";
    auto row = data.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ",";
      out << format_csv_double(row[j]);
    }
    out << "\n";
  }
}

DataMatrix read_data_matrix_csv(std::istream& in) {
  auto rows = read_rows(in);
  require(!rows.empty(), ErrorClass::Parse, "empty data CSV");

  // A label column exists iff the first cell of the last row (surely a data
  // row) is not numeric; a header exists iff the first row's first numeric-
  // position cell is not numeric.
  double probe = 0.0;
  const bool has_labels = !parse_double(rows.back().front(), probe);
  const std::size_t first_value_col = has_labels ? 1 : 0;
  std::size_t start_row = 0;
  if (rows.front().size() > first_value_col &&
      !parse_double(rows.front()[first_value_col], probe)) {
    start_row = 1;
  }
  require(start_row < rows.size(), ErrorClass::Parse, "data CSV has a header but no data rows");

  std::vector<std::vector<double>> values;
  std::vector<std::string> labels;
  for (std::size_t r = start_row; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    require(cells.size() > first_value_col, ErrorClass::Parse,
            "data CSV row " + std::to_string(r + 1) + " has no value columns");
    if (has_labels) labels.push_back(cells.front());
    std::vector<double> row;
    row.reserve(cells.size() - first_value_col);
    for (std::size_t c = first_value_col; c < cells.size(); ++c) {
      double v = 0.0;
      require(parse_double(cells[c], v), ErrorClass::Parse,
              "data CSV row " + std::to_string(r + 1) + ": '" + cells[c] + "' is not a number");
      row.push_back(v);
    }
    values.push_back(std::move(row));
  }
  if (has_labels) return DataMatrix(std::move(values), std::move(labels));
  return DataMatrix(std::move(values));
}

void write_labels_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<int>& classes) {
  require(labels.size() == classes.size(), ErrorClass::InvalidArgument,
          "labels/classes size mismatch");
  out << "label,class\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << labels[i] << "," << classes[i] << "\n";
}

PriceTable read_price_csv(std::istream& in) {
  auto rows = read_rows(in);
  require(!rows.empty(), ErrorClass::Parse, "empty price CSV");
  std::size_t start = 0;
  if (rows.front().size() >= 3 && rows.front()[0] == "date") start = 1;

  // (ticker, date) -> close; dates/tickers collected as sorted sets.
  std::map<std::string, std::map<std::string, double>> by_ticker;
  std::map<std::string, bool> date_set;
  for (std::size_t r = start; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    require(cells.size() == 3, ErrorClass::Parse,
            "price CSV row " + std::to_string(r + 1) + " must be date,ticker,close");
    double price = 0.0;
    require(parse_double(cells[2], price), ErrorClass::Parse,
            "price CSV row " + std::to_string(r + 1) + ": bad close '" + cells[2] + "'");
    const auto inserted = by_ticker[cells[1]].emplace(cells[0], price);
    require(inserted.second, ErrorClass::Parse,
            "duplicate (date,ticker) = (" + cells[0] + "," + cells[1] + ")");
    date_set[cells[0]] = true;
  }
  require(!by_ticker.empty(), ErrorClass::Parse, "price CSV has no data rows");

  PriceTable table;
  for (const auto& [d, _] : date_set) table.dates.push_back(d);
  for (const auto& [t, _] : by_ticker) table.tickers.push_back(t);
  table.close.assign(table.tickers.size() * table.dates.size(),
                     std::numeric_limits<double>::quiet_NaN());
  for (std::size_t t = 0; t < table.tickers.size(); ++t) {
    const auto& series = by_ticker[table.tickers[t]];
    for (std::size_t d = 0; d < table.dates.size(); ++d) {
      auto it = series.find(table.dates[d]);
      if (it != series.end()) table.close[t * table.dates.size() + d] = it->second;
    }
  }
  return table;
}

void write_price_csv(std::ostream& out, const PriceTable& table) {
  out << "date,ticker,close\n";
  for (std::size_t t = 0; t < table.tickers.size(); ++t) {
    for (std::size_t d = 0; d < table.dates.size(); ++d) {
      if (!table.has(t, d)) continue;
      out << table.dates[d] << "," << table.tickers[t] << ","
          << format_csv_double(table.at(t, d)) << "\n";
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorClass::Io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorClass::Io, "cannot open '" + path + "' for writing");
  out << content;
  require(out.good(), ErrorClass::Io, "failed writing '" + path + "'");
}

}  // namespace selector

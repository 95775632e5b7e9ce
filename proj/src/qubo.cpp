#include "selector/qubo.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "selector/errors.hpp"

namespace selector {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

QuboModel::QuboModel(std::size_t num_vars)
    : n_(num_vars), coeffs_(num_vars * num_vars, 0.0), var_names_(num_vars) {
  require(num_vars >= 1, ErrorClass::InvalidArgument, "a QUBO model needs at least one variable");
  for (std::size_t i = 0; i < n_; ++i) var_names_[i] = "x_" + std::to_string(i);
}

void QuboModel::add_coeff(std::size_t i, std::size_t j, double v) {
  require(i < n_ && j < n_, ErrorClass::InvalidArgument, "coefficient index out of range");
  if (i > j) std::swap(i, j);
  coeffs_[i * n_ + j] += v;
}

double QuboModel::coeff(std::size_t i, std::size_t j) const {
  require(i < n_ && j < n_, ErrorClass::InvalidArgument, "coefficient index out of range");
  if (i > j) std::swap(i, j);
  return coeffs_[i * n_ + j];
}

double QuboModel::energy(const Bits& x) const {
  require(x.size() == n_, ErrorClass::InvalidArgument,
          "bit vector length " + std::to_string(x.size()) + " != num_vars " + std::to_string(n_));
  double e = offset_;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!x[i]) continue;
    const double* row = coeffs_.data() + i * n_;
    double acc = row[i];
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (x[j]) acc += row[j];
    }
    e += acc;
  }
  return e;
}

double QuboModel::coefficient_l1_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) s += std::abs(coeffs_[i * n_ + j]);
  return s;
}

std::string QuboModel::to_json_string() const {
  nlohmann::ordered_json doc;
  doc["num_vars"] = n_;
  doc["offset"] = offset_;
  auto terms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      const double c = coeffs_[i * n_ + j];
      if (c != 0.0) terms.push_back({i, j, c});
    }
  }
  doc["terms"] = std::move(terms);
  doc["var_names"] = var_names_;
  return doc.dump(2) + "\n";
}

QuboModel QuboModel::from_json_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorClass::Parse, std::string("bad QUBO JSON: ") + e.what());
  }
  try {
    QuboModel model(doc.at("num_vars").get<std::size_t>());
    model.set_offset(doc.at("offset").get<double>());
    for (const auto& t : doc.at("terms")) {
      model.add_coeff(t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>(),
                      t.at(2).get<double>());
    }
    if (doc.contains("var_names")) {
      auto names = doc["var_names"].get<std::vector<std::string>>();
      require(names.size() == model.num_vars(), ErrorClass::Parse,
              "var_names length does not match num_vars");
      for (std::size_t i = 0; i < names.size(); ++i) model.set_var_name(i, std::move(names[i]));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorClass::Parse, std::string("bad QUBO JSON structure: ") + e.what());
  }
}

void QuboModel::write_coordinate(std::ostream& out) const {
  out << "# qubo num_vars " << n_ << "\n";
  out << "# offset " << format_double(offset_) << "\n";
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      const double c = coeffs_[i * n_ + j];
      if (c != 0.0) out << i << " " << j << " " << format_double(c) << "\n";
    }
  }
}

QuboModel QuboModel::read_coordinate(std::istream& in) {
  std::string line;
  std::size_t num_vars = 0;
  double offset = 0.0;
  bool have_vars = false;
  std::vector<std::array<double, 3>> entries;
  std::size_t max_index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "qubo") {
        std::string tag;
        ls >> tag >> num_vars;
        have_vars = true;
      } else if (key == "offset") {
        ls >> offset;
      }
      continue;
    }
    std::size_t i = 0, j = 0;
    double c = 0.0;
    if (!(ls >> i >> j >> c))
      fail(ErrorClass::Parse, "bad coordinate line: '" + line + "'");
    entries.push_back({static_cast<double>(i), static_cast<double>(j), c});
    max_index = std::max({max_index, i, j});
  }
  if (!have_vars) num_vars = entries.empty() ? 1 : max_index + 1;
  QuboModel model(num_vars);
  model.set_offset(offset);
  for (const auto& e : entries)
    model.add_coeff(static_cast<std::size_t>(e[0]), static_cast<std::size_t>(e[1]), e[2]);
  return model;
}

}  // namespace selector

// Copyright 2026 The kpgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kpgen/embedding.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kpgen/corpus.h"
#include "kpgen/log.h"

namespace kpgen {
namespace {

std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; in >> f;) out.push_back(std::move(f));
  return out;
}

bool parse_double(const std::string& s, double* out) {
  errno = 0;
  char* end = nullptr;
  *out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE && std::isfinite(*out);
}

bool parse_int(const std::string& s, long* out) {
  char* end = nullptr;
  *out = std::strtol(s.c_str(), &end, 10);
  return !s.empty() && end == s.c_str() + s.size();
}

}  // namespace

void EmbeddingModel::add_row(const std::string& word,
                             const std::vector<double>& values) {
  Eigen::Map<const Vector> v(values.data(), static_cast<Eigen::Index>(values.size()));
  Vector row = v;
  if (!options_.raw_dot) {
    const double norm = row.norm();
    if (norm > 0) {
      row /= norm;
    } else {
      warnings_.push_back("zero vector for word '" + word + "'");
      log_warning(warnings_.back());
    }
  }
  if (auto it = index_.find(word); it != index_.end()) {
    warnings_.push_back("duplicate word '" + word + "'; keeping the last row");
    log_warning(warnings_.back());
    table_.row(it->second) = row.transpose();
    return;
  }
  if (rows_ == table_.rows()) {
    table_.conservativeResize(std::max<Eigen::Index>(16, 2 * table_.rows()),
                              Eigen::NoChange);
  }
  table_.row(rows_) = row.transpose();
  index_.emplace(word, rows_);
  ++rows_;
}

EmbeddingModel EmbeddingModel::load(const std::filesystem::path& path,
                                    const Options& options) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open vector file: " + path.string());
  EmbeddingModel model;
  model.options_ = options;
  int dim = -1;
  std::string line;
  int line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_spaces(line);
    if (fields.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    long count = 0;
    long header_dim = 0;
    if (line_no == 1 && fields.size() == 2 && parse_int(fields[0], &count) &&
        parse_int(fields[1], &header_dim)) {
      if (header_dim <= 0) throw FormatError(where + ": non-positive dimension");
      dim = static_cast<int>(header_dim);
      continue;
    }
    if (fields.size() < 2) throw FormatError(where + ": malformed row");
    const int row_dim = static_cast<int>(fields.size()) - 1;
    if (dim < 0) dim = row_dim;
    if (row_dim != dim) {
      throw FormatError(where + ": expected " + std::to_string(dim) +
                        " values, found " + std::to_string(row_dim));
    }
    values.resize(dim);
    for (int i = 0; i < dim; ++i) {
      if (!parse_double(fields[i + 1], &values[i])) {
        throw FormatError(where + ": malformed value '" + fields[i + 1] + "'");
      }
    }
    if (model.table_.cols() == 0) model.table_.resize(0, dim);
    model.add_row(fields[0], values);
  }
  if (dim < 0) throw FormatError(path.string() + ": no vectors");
  if (model.table_.cols() == 0) model.table_.resize(0, dim);
  model.table_.conservativeResize(model.rows_, Eigen::NoChange);
  return model;
}

EmbeddingModel EmbeddingModel::from_rows(
    const std::vector<std::pair<std::string, std::vector<double>>>& rows,
    const Options& options) {
  EmbeddingModel model;
  model.options_ = options;
  if (rows.empty()) return model;
  const size_t dim = rows.front().second.size();
  if (dim == 0) throw FormatError("from_rows: zero dimension");
  model.table_.resize(0, static_cast<Eigen::Index>(dim));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].second.size() != dim) {
      throw FormatError("from_rows: row " + std::to_string(i + 1) +
                        " has wrong dimension");
    }
    model.add_row(rows[i].first, rows[i].second);
  }
  model.table_.conservativeResize(model.rows_, Eigen::NoChange);
  return model;
}

std::optional<Eigen::Map<const Vector>> EmbeddingModel::lookup(
    const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return Eigen::Map<const Vector>(table_.row(it->second).data(), table_.cols());
}

Vector EmbeddingModel::embed_text(std::span<const std::string> tokens) const {
  Vector sum = Vector::Zero(table_.cols());
  int found = 0;
  for (const std::string& t : tokens) {
    auto it = index_.find(t);
    if (it == index_.end()) continue;
    sum += table_.row(it->second).transpose();
    ++found;
  }
  if (found == 0) return sum;
  sum /= found;
  if (!options_.raw_dot) {
    const double norm = sum.norm();
    if (norm > 0) sum /= norm;
  }
  return sum;
}

double EmbeddingModel::similarity(std::span<const std::string> a,
                                  std::span<const std::string> b) const {
  const double s = clamped_dot(embed_text(a), embed_text(b));
  return options_.raw_dot ? s : std::min(1.0, s);
}

double clamped_dot(const Vector& a, const Vector& b) {
  return std::max(0.0, a.dot(b));
}

}  // namespace kpgen

// Copyright 2026 The MMACC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmacc/matrices.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mmacc/errors.hpp"

namespace mmacc {
namespace {

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::string format_shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

bool EncoderMatrix::lower_triangular() const {
  if (rows != cols) return false;
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = i + 1; j < cols; ++j) {
      if (at(i, j) != 0.0) return false;
    }
  }
  return true;
}

void EncoderMatrix::validate() const {
  if (rows < 1 || cols < 1 ||
      entries.size() != static_cast<std::size_t>(rows * cols)) {
    throw InvalidMatrixError("EncoderMatrix: inconsistent dimensions");
  }
  for (double v : entries) {
    if (!(v >= 0.0)) {
      throw NegativeEntryError("EncoderMatrix: negative entry");
    }
  }
}

EncoderMatrix binary_tree(std::int64_t n) {
  if (!is_power_of_two(n)) {
    throw NotPowerOfTwoError("binary_tree: n must be a power of two");
  }
  EncoderMatrix m;
  m.rows = 2 * n - 1;
  m.cols = n;
  m.entries.assign(static_cast<std::size_t>(m.rows * m.cols), 0.0);
  std::int64_t row = 0;
  for (std::int64_t width = 1; width <= n; width *= 2) {
    for (std::int64_t start = 0; start < n; start += width, ++row) {
      for (std::int64_t j = start; j < start + width; ++j) {
        m.at(row, j) = 1.0;
      }
    }
  }
  return m;
}

EncoderMatrix prefix_opt(std::int64_t n) {
  if (n < 1) throw InvalidMatrixError("prefix_opt: n must be >= 1");
  std::vector<double> f(static_cast<std::size_t>(n));
  f[0] = 1.0;
  for (std::int64_t k = 1; k < n; ++k) {
    f[static_cast<std::size_t>(k)] =
        f[static_cast<std::size_t>(k - 1)] *
        (1.0 - 1.0 / (2.0 * static_cast<double>(k)));
  }
  EncoderMatrix m;
  m.rows = n;
  m.cols = n;
  m.entries.assign(static_cast<std::size_t>(n * n), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j <= i; ++j) {
      m.at(i, j) = f[static_cast<std::size_t>(i - j)];
    }
  }
  return m;
}

EncoderMatrix tree_restart(std::int64_t n, std::int64_t height) {
  if (height < 1) throw InvalidMatrixError("tree_restart: height must be >= 1");
  std::int64_t block_cols = std::int64_t{1} << (height - 1);
  if (n % block_cols != 0) {
    throw DivisibilityError("tree_restart: 2^(height-1) must divide n");
  }
  EncoderMatrix block = binary_tree(block_cols);
  std::int64_t copies = n / block_cols;
  EncoderMatrix m;
  m.rows = copies * block.rows;
  m.cols = n;
  m.entries.assign(static_cast<std::size_t>(m.rows * m.cols), 0.0);
  for (std::int64_t c = 0; c < copies; ++c) {
    for (std::int64_t i = 0; i < block.rows; ++i) {
      for (std::int64_t j = 0; j < block.cols; ++j) {
        m.at(c * block.rows + i, c * block_cols + j) = block.at(i, j);
      }
    }
  }
  return m;
}

EncoderMatrix identity(std::int64_t n) {
  if (n < 1) throw InvalidMatrixError("identity: n must be >= 1");
  EncoderMatrix m;
  m.rows = n;
  m.cols = n;
  m.entries.assign(static_cast<std::size_t>(n * n), 0.0);
  for (std::int64_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

EncoderMatrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("load_csv: cannot open " + path);
  }
  EncoderMatrix m;
  std::string line;
  std::int64_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    std::vector<double> values;
    std::size_t pos = 0;
    std::int64_t col = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string_view field(line.data() + pos,
                             (comma == std::string::npos ? line.size() : comma) -
                                 pos);
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        std::ostringstream msg;
        msg << "load_csv: " << path << ": bad number at row " << (row + 1)
            << ", column " << (col + 1);
        throw ParseError(msg.str());
      }
      if (value < 0.0) {
        std::ostringstream msg;
        msg << "load_csv: " << path << ": negative entry at row " << (row + 1)
            << ", column " << (col + 1);
        throw NegativeEntryError(msg.str());
      }
      values.push_back(value);
      ++col;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (row == 0) {
      m.cols = static_cast<std::int64_t>(values.size());
    } else if (static_cast<std::int64_t>(values.size()) != m.cols) {
      std::ostringstream msg;
      msg << "load_csv: " << path << ": ragged row " << (row + 1) << " ("
          << values.size() << " fields, expected " << m.cols << ")";
      throw ParseError(msg.str());
    }
    m.entries.insert(m.entries.end(), values.begin(), values.end());
    ++row;
  }
  if (row == 0) {
    throw ParseError("load_csv: " + path + ": empty file");
  }
  m.rows = row;
  return m;
}

void save_csv(const EncoderMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("save_csv: cannot open " + path);
  }
  write_csv(matrix, out);
}

void write_csv(const EncoderMatrix& matrix, std::ostream& out) {
  matrix.validate();
  for (std::int64_t i = 0; i < matrix.rows; ++i) {
    for (std::int64_t j = 0; j < matrix.cols; ++j) {
      if (j > 0) out << ',';
      out << format_shortest(matrix.at(i, j));
    }
    out << '\n';
  }
}

}  // namespace mmacc

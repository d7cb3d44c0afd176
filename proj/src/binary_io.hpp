/* Copyright 2026 The IRRM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef IRRM_SRC_BINARY_IO_HPP_
#define IRRM_SRC_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "irrm/errors.hpp"
#include "irrm/types.hpp"

namespace irrm::detail {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }
  void put_string(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void put_matrix(const Matrix& m) {
    put<std::uint32_t>(static_cast<std::uint32_t>(m.rows()));
    put<std::uint32_t>(static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) put<double>(m(r, c));
    }
  }
  void put_vector(const Vector& v) {
    put<std::uint32_t>(static_cast<std::uint32_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) put<double>(v(i));
  }

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string what)
      : in_(in), what_(std::move(what)) {}

  template <typename T>
  T get() {
    T value{};
    in_.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in_) throw FormatError(what_ + ": unexpected end of file");
    return value;
  }
  std::string get_string() {
    auto n = get<std::uint32_t>();
    if (n > (1u << 20)) throw FormatError(what_ + ": string too long");
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (!in_) throw FormatError(what_ + ": unexpected end of file");
    return s;
  }
  Matrix get_matrix() {
    auto rows = get<std::uint32_t>();
    auto cols = get<std::uint32_t>();
    check_size(std::uint64_t{rows} * cols);
    Matrix m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = get<double>();
    }
    return m;
  }
  Vector get_vector() {
    auto n = get<std::uint32_t>();
    check_size(n);
    Vector v(n);
    for (std::uint32_t i = 0; i < n; ++i) v(i) = get<double>();
    return v;
  }
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw FormatError(what_ + ": trailing bytes");
    }
  }
  const std::string& what() const { return what_; }

 private:
  void check_size(std::uint64_t n) {
    if (n > (std::uint64_t{1} << 28)) {
      throw FormatError(what_ + ": implausible matrix size");
    }
  }
  std::istream& in_;
  std::string what_;
};

}  // namespace irrm::detail

#endif  // IRRM_SRC_BINARY_IO_HPP_

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

#ifndef IRRM_TESTS_TEST_UTIL_HPP_
#define IRRM_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "irrm/random.hpp"
#include "irrm/types.hpp"

namespace irrm::testing {

inline Matrix random_matrix(int rows, int cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline Vector random_vector(int size, Rng& rng, double scale = 1.0) {
  return random_matrix(size, 1, rng, scale).col(0);
}

inline Rng test_rng(std::uint64_t key) {
  return keyed_stream(0x7E57ull, StreamTag::kCorpus, {key});
}

// |a - b| <= tol * max(|a|, |b|), with an absolute floor for values that
// are both near zero.
inline bool rel_close(double a, double b, double tol, double floor = 1e-9) {
  const double diff = std::abs(a - b);
  return diff <= floor || diff <= tol * std::max(std::abs(a), std::abs(b));
}

// Central difference of f along direction u.
inline double directional_fd(const std::function<double(double)>& f,
                             double h = 1e-6) {
  return (f(h) - f(-h)) / (2.0 * h);
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("irrm_test_" + name + "_" +
              std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace irrm::testing

#endif  // IRRM_TESTS_TEST_UTIL_HPP_

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

#include "irrm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "irrm/config.hpp"
#include "irrm/errors.hpp"

namespace irrm {
namespace {
constexpr double kToleranceSlack = 1e-9;
}

PerResult per(std::span<const int> ref, std::span<const int> hyp) {
  if (ref.empty()) throw DomainError("PER needs a non-empty reference");
  const int n = static_cast<int>(ref.size());
  const int m = static_cast<int>(hyp.size());
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  for (int i = 0; i <= n; ++i) cost[i][0] = i;
  for (int j = 0; j <= m; ++j) cost[0][j] = j;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      const int diag = cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i][j - 1] + 1, cost[i - 1][j] + 1});
    }
  }
  PerResult out;
  out.reference_length = n;
  int i = n;
  int j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (cost[i][j] == cost[i - 1][j - 1] + (same ? 0 : 1)) {
        if (!same) ++out.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && cost[i][j] == cost[i][j - 1] + 1) {
      ++out.insertions;
      --j;
      continue;
    }
    ++out.deletions;
    --i;
  }
  out.rate = static_cast<double>(out.errors()) / n;
  return out;
}

PerResult per(const std::vector<std::string>& ref,
              const std::vector<std::string>& hyp) {
  const auto& inventory = PhonemeInventory::cmu();
  auto encode = [&](const std::vector<std::string>& seq) {
    std::vector<int> out;
    for (const auto& s : seq) out.push_back(inventory.index(s));
    return out;
  };
  return per(encode(ref), encode(hyp));
}

PerResult pooled_per(std::span<const PerResult> results) {
  PerResult out;
  for (const auto& r : results) {
    out.deletions += r.deletions;
    out.substitutions += r.substitutions;
    out.insertions += r.insertions;
    out.reference_length += r.reference_length;
  }
  if (out.reference_length == 0) {
    throw DomainError("pooled PER needs a non-empty reference");
  }
  out.rate = static_cast<double>(out.errors()) / out.reference_length;
  return out;
}

MeanSe mean_standard_error(std::span<const double> values) {
  MeanSe out;
  out.count = static_cast<int>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / out.count;
  if (out.count < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.standard_error = std::sqrt(ss / (out.count - 1)) / std::sqrt(out.count);
  return out;
}

double segment_overlap(std::span<const double> ref,
                       std::span<const double> hyp, double total_duration) {
  auto to_segments = [&](std::span<const double> b) {
    std::vector<std::pair<double, double>> segs;
    double start = 0.0;
    for (double x : b) {
      segs.emplace_back(start, x);
      start = x;
    }
    segs.emplace_back(start, total_duration);
    return segs;
  };
  const auto ref_segs = to_segments(ref);
  const auto hyp_segs = to_segments(hyp);
  double covered = 0.0;
  for (auto [hs, he] : hyp_segs) {
    double best = 0.0;
    for (auto [rs, re] : ref_segs) {
      best = std::max(best, std::min(he, re) - std::max(hs, rs));
    }
    covered += best;
  }
  return std::clamp(covered / total_duration, 0.0, 1.0);
}

BoundaryMetrics boundary_metrics(std::span<const double> ref,
                                 std::span<const double> hyp, double tolerance,
                                 double total_duration) {
  if (!std::is_sorted(ref.begin(), ref.end()) ||
      !std::is_sorted(hyp.begin(), hyp.end())) {
    throw DomainError("boundary lists must be sorted");
  }
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be >= 0");
  double last = 0.0;
  if (!ref.empty()) last = std::max(last, ref.back());
  if (!hyp.empty()) last = std::max(last, hyp.back());
  if (!(total_duration > last) && !(ref.empty() && hyp.empty() &&
                                    total_duration > 0.0)) {
    throw DomainError("total duration must exceed every boundary");
  }

  BoundaryMetrics m;
  m.ref_count = static_cast<int>(ref.size());
  m.hyp_count = static_cast<int>(hyp.size());

  // (distance, earlier time, later time, ref index, hyp index); the first
  // three fields do not depend on which list is called the reference.
  std::vector<std::tuple<double, double, double, int, int>> pairs;
  for (int i = 0; i < m.ref_count; ++i) {
    for (int j = 0; j < m.hyp_count; ++j) {
      const double dist = std::abs(ref[i] - hyp[j]);
      if (dist <= tolerance + kToleranceSlack) {
        pairs.emplace_back(dist, std::min(ref[i], hyp[j]),
                           std::max(ref[i], hyp[j]), i, j);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
  });
  std::vector<char> ref_used(m.ref_count, 0);
  std::vector<char> hyp_used(m.hyp_count, 0);
  for (const auto& [dist, lo, hi, i, j] : pairs) {
    if (ref_used[i] || hyp_used[j]) continue;
    ref_used[i] = hyp_used[j] = 1;
    ++m.matches;
  }

  m.precision = m.hyp_count ? static_cast<double>(m.matches) / m.hyp_count
                            : 0.0;
  m.recall = m.ref_count ? static_cast<double>(m.matches) / m.ref_count : 0.0;
  m.f_score = (m.precision + m.recall) > 0.0
                  ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                  : 0.0;
  if (m.ref_count > 0) {
    const double os = static_cast<double>(m.hyp_count) / m.ref_count - 1.0;
    const double r1 = std::sqrt((1.0 - m.recall) * (1.0 - m.recall) + os * os);
    const double r2 = (-os + m.recall - 1.0) / std::sqrt(2.0);
    m.r_value = std::clamp(1.0 - (std::abs(r1) + std::abs(r2)) / 2.0, 0.0, 1.0);
  }
  m.overlap = segment_overlap(ref, hyp, total_duration);
  return m;
}

std::vector<DriftRow> codebook_drift(const Codebook& before,
                                     const Codebook& after, int top_n) {
  if (before.groups() != 1 || after.groups() != 1 ||
      before.entries() != after.entries() ||
      before.group_dim() != after.group_dim()) {
    throw ValidationError("codebooks must share a single-group shape");
  }
  if (before.labels() != after.labels()) {
    throw ValidationError("codebooks carry different labels");
  }
  if (top_n < 0) throw DomainError("top_n must be >= 0");
  std::vector<DriftRow> rows;
  for (int v = 0; v < before.entries(); ++v) {
    DriftRow row;
    row.slot = v;
    row.phoneme = before.labels() ? (*before.labels())[v]
                                  : "slot" + std::to_string(v);
    row.before = before.group(0).row(v).transpose();
    row.after = after.group(0).row(v).transpose();
    row.displacement = (row.after - row.before).norm();
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.displacement > b.displacement;
  });
  for (int i = 0; i < std::min<int>(top_n, static_cast<int>(rows.size()));
       ++i) {
    rows[i].top = true;
  }
  return rows;
}

std::string drift_csv(const std::vector<DriftRow>& rows) {
  std::ostringstream out;
  const Eigen::Index d = rows.empty() ? 0 : rows.front().before.size();
  out << "phoneme,displacement,top";
  for (Eigen::Index j = 0; j < d; ++j) out << ",before_" << j;
  for (Eigen::Index j = 0; j < d; ++j) out << ",after_" << j;
  out << "\n";
  for (const auto& r : rows) {
    out << r.phoneme << ',' << format_double(r.displacement) << ','
        << (r.top ? 1 : 0);
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << format_double(r.before(j));
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << format_double(r.after(j));
    out << "\n";
  }
  return out.str();
}

}  // namespace irrm

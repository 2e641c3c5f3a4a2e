// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "csv_util.hpp"

namespace morphguard {

double Histogram::bin_lo(int bin) const {
  return std::numbers::pi * bin / bin_count;
}

double Histogram::bin_hi(int bin) const {
  return std::numbers::pi * (bin + 1) / bin_count;
}

std::int64_t Histogram::count(const std::string& label, int bin) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) {
      return counts[i].at(static_cast<std::size_t>(bin));
    }
  }
  return 0;
}

Histogram make_histogram(const ScoreSet& scores, int bin_count) {
  if (bin_count < 1) {
    throw InvalidParameter("make_histogram: bin_count must be >= 1");
  }
  auto label_of = [](const ScoreRecord& r) -> std::string {
    switch (r.comparison_type) {
      case ComparisonType::mated:
        return "mated";
      case ComparisonType::nonmated:
        return "nonmated";
      case ComparisonType::morph:
        return r.morph_kind.empty() ? "morph" : r.morph_kind;
    }
    return "mated";
  };

  std::map<std::string, std::vector<std::int64_t>> bins;
  for (const ScoreRecord& r : scores.records) {
    std::vector<std::int64_t>& row = bins[label_of(r)];
    if (row.empty()) {
      row.assign(bin_count, 0);
    }
    int bin = static_cast<int>(std::floor(r.score / std::numbers::pi *
                                          bin_count));
    bin = std::clamp(bin, 0, bin_count - 1);
    ++row[bin];
  }

  Histogram h;
  h.bin_count = bin_count;
  for (auto& [label, row] : bins) {
    h.labels.push_back(label);
    h.counts.push_back(std::move(row));
  }
  return h;
}

void save_histogram(const Histogram& histogram,
                    const std::filesystem::path& path) {
  detail::atomic_write(path, [&](std::ostream& out) {
    out << "label,bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < histogram.labels.size(); ++i) {
      for (int bin = 0; bin < histogram.bin_count; ++bin) {
        out << histogram.labels[i] << ','
            << detail::format_double(histogram.bin_lo(bin)) << ','
            << detail::format_double(histogram.bin_hi(bin)) << ','
            << histogram.counts[i][bin] << '\n';
      }
    }
  });
}

}  // namespace morphguard

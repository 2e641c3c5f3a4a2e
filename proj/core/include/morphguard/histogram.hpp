// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "morphguard/scores.hpp"

namespace morphguard {

/// Equal-width histograms of score populations over [0, pi].  One labeled
/// row group per population: "mated", "nonmated", and one per morph kind
/// (or plain "morph" for unlabeled morph records).
struct Histogram {
  int bin_count = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<std::int64_t>> counts;  // [label][bin]

  double bin_lo(int bin) const;
  double bin_hi(int bin) const;

  /// Count for one label/bin cell; zero when the label is absent.
  std::int64_t count(const std::string& label, int bin) const;
};

/// Bins every score; a score of exactly pi lands in the last bin, so the
/// total count equals the number of records.  bin_count >= 1
/// (InvalidParameter otherwise).
Histogram make_histogram(const ScoreSet& scores, int bin_count);

/// CSV rows `label,bin_lo,bin_hi,count`; written atomically.
void save_histogram(const Histogram& histogram,
                    const std::filesystem::path& path);

}  // namespace morphguard

// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/histogram.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <unistd.h>

#include <doctest.h>

#include "morphguard/errors.hpp"
#include "morphguard/rng.hpp"

using namespace morphguard;

namespace {

ScoreRecord record(ComparisonType type, double score,
                   const std::string& kind = "") {
  ScoreRecord r;
  r.comparison_type = type;
  r.score = score;
  if (type == ComparisonType::morph) {
    r.attack_id = "a+b";
    r.contributor_slot = 1;
    r.morph_kind = kind;
  }
  return r;
}

}  // namespace

TEST_SUITE_BEGIN("histogram");

TEST_CASE("counts are conserved per label") {
  ScoreSet s;
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    s.records.push_back(
        record(ComparisonType::mated, rng.uniform() * std::numbers::pi));
  }
  for (int i = 0; i < 30; ++i) {
    s.records.push_back(
        record(ComparisonType::nonmated, rng.uniform() * std::numbers::pi));
  }
  for (int i = 0; i < 20; ++i) {
    s.records.push_back(record(ComparisonType::morph,
                               rng.uniform() * std::numbers::pi,
                               "worst_case"));
  }
  const Histogram h = make_histogram(s, 16);
  CHECK(h.bin_count == 16);
  REQUIRE(h.labels.size() == 3);
  std::int64_t mated_total = 0;
  std::int64_t nonmated_total = 0;
  std::int64_t morph_total = 0;
  for (int b = 0; b < h.bin_count; ++b) {
    mated_total += h.count("mated", b);
    nonmated_total += h.count("nonmated", b);
    morph_total += h.count("worst_case", b);
  }
  CHECK(mated_total == 50);
  CHECK(nonmated_total == 30);
  CHECK(morph_total == 20);
}

TEST_CASE("scores land in the bin holding their value") {
  ScoreSet s;
  const double width = std::numbers::pi / 4.0;
  s.records.push_back(record(ComparisonType::mated, 0.0));
  s.records.push_back(record(ComparisonType::mated, 0.5 * width));
  s.records.push_back(record(ComparisonType::mated, width));  // second bin
  s.records.push_back(record(ComparisonType::mated, 3.5 * width));
  s.records.push_back(record(ComparisonType::mated, std::numbers::pi));
  const Histogram h = make_histogram(s, 4);
  CHECK(h.count("mated", 0) == 2);
  CHECK(h.count("mated", 1) == 1);
  CHECK(h.count("mated", 2) == 0);
  CHECK(h.count("mated", 3) == 2);  // top edge folds into the last bin
  CHECK(h.bin_lo(0) == 0.0);
  CHECK(h.bin_hi(3) == std::numbers::pi);
  CHECK(h.bin_hi(1) == doctest::Approx(2.0 * width));
}

TEST_CASE("morph labels come from the kind with a generic fallback") {
  ScoreSet s;
  s.records.push_back(record(ComparisonType::morph, 0.1, "worst_case"));
  s.records.push_back(record(ComparisonType::morph, 0.2, "landmark"));
  s.records.push_back(record(ComparisonType::morph, 0.3, ""));
  const Histogram h = make_histogram(s, 2);
  REQUIRE(h.labels.size() == 3);
  CHECK(h.count("worst_case", 0) == 1);
  CHECK(h.count("landmark", 0) == 1);
  CHECK(h.count("morph", 0) == 1);
}

TEST_CASE("a single bin swallows the whole range") {
  ScoreSet s;
  s.records.push_back(record(ComparisonType::nonmated, 0.0));
  s.records.push_back(record(ComparisonType::nonmated, 1.0));
  s.records.push_back(record(ComparisonType::nonmated, std::numbers::pi));
  const Histogram h = make_histogram(s, 1);
  CHECK(h.count("nonmated", 0) == 3);
}

TEST_CASE("invalid bin counts are rejected") {
  ScoreSet s;
  s.records.push_back(record(ComparisonType::mated, 0.5));
  CHECK_THROWS_AS(make_histogram(s, 0), InvalidParameter);
  CHECK_THROWS_AS(make_histogram(s, -3), InvalidParameter);
}

TEST_CASE("csv output lists one row per label and bin") {
  ScoreSet s;
  s.records.push_back(record(ComparisonType::mated, 0.4));
  s.records.push_back(record(ComparisonType::nonmated, 1.9));
  const Histogram h = make_histogram(s, 3);

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("morphguard_histogram_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::filesystem::path file = dir / "hist.csv";
  save_histogram(h, file);

  std::ifstream in(file);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(line);
  }
  REQUIRE(lines.size() == 1 + 2 * 3);
  CHECK(lines[0] == "label,bin_lo,bin_hi,count");
  int mated_rows = 0;
  int nonmated_rows = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].rfind("mated,", 0) == 0) {
      ++mated_rows;
    }
    if (lines[i].rfind("nonmated,", 0) == 0) {
      ++nonmated_rows;
    }
  }
  CHECK(mated_rows == 3);
  CHECK(nonmated_rows == 3);
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();

// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "morphguard/dataset.hpp"
#include "morphguard/morphing.hpp"

namespace morphguard {

/// Which populations a comparison score belongs to.
enum class ComparisonType { mated, nonmated, morph };

std::string to_string(ComparisonType type);

/// One dissimilarity score (an angle in [0, pi]; lower means more similar;
/// a comparison at threshold t matches iff score <= t).
///
/// attack_id and contributor_slot (1 or 2) are set exactly for morph
/// records: slot 1 compares the morph against probes of the first
/// contributing subject, slot 2 against probes of the second.  morph_kind
/// is an in-memory label for grouping morph records by construction method;
/// it is not serialized.
struct ScoreRecord {
  std::string system_id = "default";
  ComparisonType comparison_type = ComparisonType::mated;
  std::string attack_id;
  int contributor_slot = 0;
  double score = 0.0;
  std::string morph_kind;
};

/// A flat bag of score records, possibly spanning several systems.
struct ScoreSet {
  std::vector<ScoreRecord> records;

  /// Sorted unique system ids present.
  std::vector<std::string> systems() const;
};

/// Options for compute_scores.
struct ScoreOptions {
  std::string system_id = "default";
  /// When set and fewer than the full nonmated cross product, a random
  /// subsample of exactly this many nonmated comparisons is scored
  /// (deterministic in seed).
  std::optional<std::size_t> nonmated_cap;
  std::uint64_t seed = 0;
  /// Label stored in morph_kind; defaults to the attack kind
  /// ("worst_case" or "ingested").
  std::optional<std::string> morph_label;
};

/// Scores a dataset against a set of attacks:
///  - mated: every unordered pair of bona fide samples of the same subject;
///  - nonmated: every enrollment of a subject against every bona fide sample
///    of every other subject;
///  - morph: every attack against every bona fide probe of each of its two
///    contributing subjects (slot 1 and slot 2).
/// Requires at least one bona fide subject (EmptyInput otherwise); attacks
/// need their contributors present with at least one probe each
/// (MissingSubject / EmptyProbeSet).
ScoreSet compute_scores(const Dataset& dataset,
                        const std::vector<AttackRecord>& attacks,
                        const ScoreOptions& options = {});

/// Scores CSV: header `system_id,comparison_type,attack_id,contributor_slot,
/// score`; attack_id and contributor_slot are empty for non-morph rows.
/// load_scores assigns morph_label to every morph record (the label is not
/// stored in the file).  Throws ParseError / IoError; save writes
/// atomically.
ScoreSet load_scores(const std::filesystem::path& path,
                     const std::string& morph_label = "morph");
void save_scores(const ScoreSet& scores, const std::filesystem::path& path);

}  // namespace morphguard

// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "morphguard/embedding.hpp"

namespace morphguard {

/// Whether a sample is presented at enrollment or as a verification probe.
enum class Role { enroll, probe };

/// Bona fide samples belong to one genuine subject; morph samples blend two.
enum class SampleKind { bonafide, morph };

std::string to_string(Role role);
std::string to_string(SampleKind kind);

/// One embedding with its identity bookkeeping.
///
/// pair_subject is the second contributing subject and is set exactly when
/// kind == morph; it must differ from subject_id.
struct SampleRecord {
  std::string subject_id;
  std::string sample_id;
  Role role = Role::probe;
  SampleKind kind = SampleKind::bonafide;
  std::string pair_subject;
  Embedding embedding;
};

/// A collection of samples sharing one embedding dimension (>= 2).
/// (subject_id, sample_id) pairs are unique within a dataset.
struct Dataset {
  int dimension = 0;
  std::vector<SampleRecord> records;

  /// Sorted unique subject ids that own at least one bona fide sample.
  std::vector<std::string> bonafide_subjects() const;

  /// Checks the structural invariants above plus finite components.
  /// Throws InconsistentDimension, DuplicateSample, or InvalidParameter.
  void validate() const;
};

/// CSV layout: header `subject_id,sample_id,role,kind,pair_subject,e0,...`
/// followed by one row per sample.  Floats are written with round-trip
/// precision.  load_dataset throws ParseError (naming file and line),
/// DuplicateSample, or IoError; save_dataset writes atomically.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace morphguard

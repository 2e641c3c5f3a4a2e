// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "morphguard/dataset.hpp"
#include "morphguard/embedding.hpp"
#include "morphguard/rng.hpp"

namespace morphguard {

/// How to choose which identities to pair for morphing.
enum class PairStrategy {
  /// Each subject is paired with its nearest other subject (by the angle
  /// between per-subject average embeddings); duplicates collapse.
  most_similar,
  /// A random perfect matching: subjects are shuffled and paired off, so
  /// every subject appears in at most one pair.
  random_disjoint,
};

/// A pair of subjects chosen for morphing.  subject_a < subject_b
/// lexicographically; selection_angle is the angle between the subjects'
/// average embeddings at selection time, in radians.
struct IdentityPair {
  std::string subject_a;
  std::string subject_b;
  double selection_angle = 0.0;
};

/// Whether a stored attack was constructed here or ingested from a file.
enum class AttackKind { worst_case, ingested };

/// A morph attack embedding with its two contributing subjects.
struct AttackRecord {
  std::string attack_id;
  std::string subject_a;
  std::string subject_b;
  Embedding morph_embedding;
  AttackKind kind = AttackKind::worst_case;
};

/// Which bona fide reference the worst-case morph is built from.
enum class WcEndpoints {
  enrollment,      // each subject's enrollment embedding
  mean_direction,  // normalized per-subject average embedding
};

/// The morph embedding with the smallest possible maximum angle to the two
/// inputs: the normalized sum of the normalized inputs, which bisects them
/// at theta/2 each.  Throws DimensionMismatch, ZeroVector, or AntipodalPair
/// (inputs within 1e-6 of the angle pi have no stable bisector).
Embedding worst_case_embedding(const Embedding& z1, const Embedding& z2);

/// Selects identity pairs among the bona fide subjects of the dataset.
/// Needs at least two such subjects (TooFewSubjects otherwise).  Output is
/// sorted by (subject_a, subject_b).  rng is only consumed by
/// random_disjoint.
std::vector<IdentityPair> select_pairs(const Dataset& dataset,
                                       PairStrategy strategy, Rng& rng);

/// Builds the worst-case attack for each pair from the chosen endpoint
/// embeddings.  attack_id is "<subject_a>+<subject_b>".  Throws
/// MissingEnrollment if a paired subject lacks the required bona fide
/// samples, and propagates AntipodalPair.
std::vector<AttackRecord> generate_wc_attacks(
    const Dataset& dataset, const std::vector<IdentityPair>& pairs,
    WcEndpoints endpoints = WcEndpoints::enrollment);

/// Spherical interpolation between the two inputs at fraction alpha of the
/// arc from z1 to z2 (alpha in [0, 1]), followed by a vMF perturbation with
/// concentration (d-1)/noise_angle^2 when noise_angle > 0.  With alpha = 0.5
/// and noise_angle = 0 this equals worst_case_embedding.  Throws
/// InvalidParameter, DimensionMismatch, ZeroVector, or AntipodalPair.
Embedding interpolated_morph(const Embedding& z1, const Embedding& z2,
                             double alpha, double noise_angle, Rng& rng);

/// Pairs CSV: header `subject_a,subject_b,selection_angle`.  load_pairs
/// throws ParseError naming file and line; save_pairs writes atomically.
std::vector<IdentityPair> load_pairs(const std::filesystem::path& path);
void save_pairs(const std::vector<IdentityPair>& pairs,
                const std::filesystem::path& path);

/// Attacks are stored in dataset CSV form: one morph row per attack with
/// subject_id = subject_a, sample_id = attack_id, pair_subject = subject_b.
Dataset attacks_to_dataset(const std::vector<AttackRecord>& attacks,
                           int dimension);
std::vector<AttackRecord> attacks_from_dataset(const Dataset& dataset);

}  // namespace morphguard

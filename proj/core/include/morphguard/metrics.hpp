// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morphguard/scores.hpp"

namespace morphguard {

/// All rates are exact counting proportions: comparisons with score <= t
/// (ties match) divided by the population size.
///
///  - fmr:   fraction of nonmated comparisons that match at t.
///  - fnmr:  fraction of mated comparisons that do NOT match at t.
///  - apcer: fraction of morph comparisons (each probe presentation counted
///           individually) that match at t.
///  - bpcer: fraction of bona fide mated comparisons rejected at t; with
///           angle scores this equals fnmr by construction.
///  - mmpmr: fraction of attacks accepted for BOTH contributing subjects,
///           where an attack matches a subject iff its minimum score over
///           that subject's probes is <= t.
///
/// Computing a rate over an empty population throws EmptyPopulation.

/// Precomputed sorted views of one score set, for repeated rate queries and
/// threshold selection.  An optional system filter restricts the records
/// considered; an empty filter means all records.
class ScoreAnalysis {
 public:
  explicit ScoreAnalysis(const ScoreSet& scores,
                         const std::string& system_filter = {});

  double fmr(double t) const;
  double fnmr(double t) const;
  double apcer(double t) const;
  double bpcer(double t) const;

  /// MMPMR over attacks whose morph_kind equals kind_filter; an empty
  /// filter means all attacks.  Throws MalformedAttack if an attack in
  /// scope lacks scores for one of its two contributor slots.
  double mmpmr(double t, const std::string& kind_filter = {}) const;

  /// MMPMR restricted to worst-case attacks: the attacks labeled
  /// "worst_case" when that label is present, otherwise all attacks.
  double wcmmpmr(double t) const;

  /// Largest candidate threshold t with rate(t) <= x, where candidates are
  /// the sorted unique scores of the relevant population plus 0 and pi.
  /// Post: rate(t) <= x and, if t is not the last candidate, rate of the
  /// next candidate exceeds x.  Throws InvalidParameter if even t = 0
  /// exceeds x, and EmptyPopulation if the population is empty.
  double threshold_at_fmr(double x) const;
  double threshold_at_apcer(double x) const;
  /// Same rule applied to the worst-case attack acceptance rate, i.e. the
  /// largest t whose wcmmpmr stays within x.
  double threshold_wc(double x) const;

  /// Sorted unique morph_kind labels present.
  std::vector<std::string> morph_kinds() const;

  std::size_t mated_count() const { return mated_.size(); }
  std::size_t nonmated_count() const { return nonmated_.size(); }
  std::size_t morph_count() const { return morph_.size(); }
  std::size_t attack_count(const std::string& kind_filter = {}) const;

  /// Sorted score pools (exposed for sweeps and diagnostics).
  const std::vector<double>& mated_scores() const { return mated_; }
  const std::vector<double>& nonmated_scores() const { return nonmated_; }
  const std::vector<double>& morph_scores() const { return morph_; }

 private:
  std::vector<double> mated_;     // sorted
  std::vector<double> nonmated_;  // sorted
  std::vector<double> morph_;     // sorted, all morph comparisons
  // Per kind ("" = all attacks): sorted per-attack combined scores
  // max(min slot1, min slot2).
  std::map<std::string, std::vector<double>> combined_;
  // Per kind ("" = all): first attack_id missing a slot, if any.
  std::map<std::string, std::string> malformed_;
  bool has_wc_label_ = false;
};

/// Convenience single-shot forms of the rates above.
double fmr(const ScoreSet& scores, double t);
double fnmr(const ScoreSet& scores, double t);
double apcer(const ScoreSet& scores, double t);
double bpcer(const ScoreSet& scores, double t);
double mmpmr(const ScoreSet& scores, double t,
             const std::string& kind_filter = {});
double threshold_at_fmr(const ScoreSet& scores, double x);
double threshold_at_apcer(const ScoreSet& scores, double x);
double threshold_wc(const ScoreSet& scores, double x);

/// Morphing attack potential: the fraction of attacks accepted by at least
/// c of the given systems, where system k accepts an attack iff at least r
/// of the attack's scores against EACH contributor's probes are <= the
/// system's threshold.  Each (scores, threshold) entry is one system; all
/// systems must cover the same attack ids (AttackIdMismatch otherwise).
/// Requires r >= 1 and 1 <= c <= number of systems (InvalidRC otherwise).
/// map_rc(({scores, t}), 1, 1) equals mmpmr(scores, t) exactly.
struct SystemScores {
  const ScoreSet* scores = nullptr;
  double threshold = 0.0;
};
double map_rc(const std::vector<SystemScores>& systems, int r, int c);

/// Three-way decision rule: score <= t_low -> mated, score <= t_high ->
/// morph, otherwise nonmated.  Requires 0 <= t_low < t_high <= pi
/// (InvalidThresholdOrder otherwise).
ComparisonType three_way_classify(double score, double t_low, double t_high);

/// 3x3 confusion counts over a score set: counts[true][predicted] with the
/// index order mated, nonmated, morph (matching ComparisonType).
using ConfusionMatrix = std::array<std::array<std::int64_t, 3>, 3>;
ConfusionMatrix evaluate_three_way(const ScoreSet& scores, double t_low,
                                   double t_high);

/// One row of a threshold sweep.  Columns without a population are NaN.
struct DetRow {
  double threshold = 0.0;
  double fmr = std::numeric_limits<double>::quiet_NaN();
  double fnmr = std::numeric_limits<double>::quiet_NaN();
  double apcer = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> mmpmr_by_kind;  // parallel to DetTable::morph_kinds
  double wcmmpmr = std::numeric_limits<double>::quiet_NaN();
};

struct DetTable {
  std::vector<std::string> morph_kinds;
  std::vector<DetRow> rows;
};

/// Evaluates every rate at every candidate threshold (sorted unique scores
/// plus 0 and pi).  Rates over missing populations are NaN rather than an
/// error.
DetTable det_sweep(const ScoreSet& scores);

/// Writes a sweep as CSV: threshold,fmr,fnmr,apcer[,mmpmr_<kind>...],wcmmpmr.
void save_det_table(const DetTable& table, const std::filesystem::path& path);

/// Aggregated evaluation results, serializable as JSON.
struct EvaluationSummary {
  /// Named threshold rules that were applied, e.g. "fmr@0.001" -> t.
  std::vector<std::pair<std::string, double>> thresholds;
  double decision_threshold = 0.0;
  std::optional<double> fmr;
  std::optional<double> fnmr;
  std::optional<double> apcer;
  std::optional<double> bpcer;
  std::map<std::string, double> mmpmr;  // morph kind -> value
  std::optional<double> wcmmpmr;
  struct MapEntry {
    int r = 1;
    int c = 1;
    double value = 0.0;
  };
  std::vector<MapEntry> map;
};

/// Pretty-printed JSON with stable key order; ends with a newline.
std::string to_json(const EvaluationSummary& summary);
void save_summary(const EvaluationSummary& summary,
                  const std::filesystem::path& path);

}  // namespace morphguard

// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/scores.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "csv_util.hpp"
#include "morphguard/rng.hpp"

namespace morphguard {

namespace {

struct SubjectIndex {
  std::vector<std::size_t> samples;      // all bona fide samples
  std::vector<std::size_t> enrollments;  // bona fide enrollment samples
  std::vector<std::size_t> probes;       // bona fide probe samples
};

std::string attack_kind_label(const AttackRecord& attack) {
  return attack.kind == AttackKind::worst_case ? "worst_case" : "ingested";
}

}  // namespace

std::string to_string(ComparisonType type) {
  switch (type) {
    case ComparisonType::mated:
      return "mated";
    case ComparisonType::nonmated:
      return "nonmated";
    case ComparisonType::morph:
      return "morph";
  }
  return "mated";
}

std::vector<std::string> ScoreSet::systems() const {
  std::set<std::string> ids;
  for (const ScoreRecord& r : records) {
    ids.insert(r.system_id);
  }
  return {ids.begin(), ids.end()};
}

ScoreSet compute_scores(const Dataset& dataset,
                        const std::vector<AttackRecord>& attacks,
                        const ScoreOptions& options) {
  // Normalize every embedding once; all comparisons are angles.
  std::vector<Embedding> unit(dataset.records.size());
  std::map<std::string, SubjectIndex> subjects;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const SampleRecord& r = dataset.records[i];
    if (r.kind != SampleKind::bonafide) {
      continue;
    }
    unit[i] = normalize(r.embedding);
    SubjectIndex& idx = subjects[r.subject_id];
    idx.samples.push_back(i);
    if (r.role == Role::enroll) {
      idx.enrollments.push_back(i);
    } else {
      idx.probes.push_back(i);
    }
  }
  if (subjects.empty()) {
    throw EmptyInput("compute_scores: dataset has no bona fide samples");
  }

  ScoreSet out;
  auto push = [&](ComparisonType type, double score) {
    ScoreRecord rec;
    rec.system_id = options.system_id;
    rec.comparison_type = type;
    rec.score = score;
    out.records.push_back(std::move(rec));
  };

  // Mated: all unordered within-subject pairs, in dataset order.
  for (const auto& [subject, idx] : subjects) {
    for (std::size_t a = 0; a < idx.samples.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.samples.size(); ++b) {
        push(ComparisonType::mated,
             angle_unit(unit[idx.samples[a]], unit[idx.samples[b]]));
      }
    }
  }

  // Nonmated: each enrollment against every sample of every other subject.
  // With a cap, a deterministic subsample of the full cross product is
  // scored instead (selection by index, order preserved).
  std::vector<std::pair<std::size_t, std::size_t>> cross;
  for (const auto& [subject, idx] : subjects) {
    for (const std::size_t e : idx.enrollments) {
      for (const auto& [other, other_idx] : subjects) {
        if (other == subject) {
          continue;
        }
        for (const std::size_t s : other_idx.samples) {
          cross.push_back({e, s});
        }
      }
    }
  }
  if (options.nonmated_cap && *options.nonmated_cap < cross.size()) {
    const std::size_t keep = *options.nonmated_cap;
    Rng rng = Rng::substream(options.seed, 0x6e6f6e6d6174ULL);
    // Partial Fisher-Yates: the first `keep` slots become a uniform sample.
    for (std::size_t i = 0; i < keep; ++i) {
      const std::size_t j = i + rng.uniform_int(cross.size() - i);
      std::swap(cross[i], cross[j]);
    }
    cross.resize(keep);
    std::sort(cross.begin(), cross.end());
  }
  for (const auto& [e, s] : cross) {
    push(ComparisonType::nonmated, angle_unit(unit[e], unit[s]));
  }

  // Morph: each attack against every probe of both contributors.
  for (const AttackRecord& attack : attacks) {
    if (attack.morph_embedding.size() != dataset.dimension) {
      throw DimensionMismatch("compute_scores: attack " + attack.attack_id +
                              " has dimension " +
                              std::to_string(attack.morph_embedding.size()) +
                              ", dataset has " +
                              std::to_string(dataset.dimension));
    }
    const Embedding morph_unit = normalize(attack.morph_embedding);
    const std::string label =
        options.morph_label ? *options.morph_label : attack_kind_label(attack);
    const std::string* contributors[2] = {&attack.subject_a,
                                          &attack.subject_b};
    for (int slot = 0; slot < 2; ++slot) {
      const std::string& subject = *contributors[slot];
      const auto it = subjects.find(subject);
      if (it == subjects.end()) {
        throw MissingSubject("compute_scores: attack " + attack.attack_id +
                             " references unknown subject " + subject);
      }
      if (it->second.probes.empty()) {
        throw EmptyProbeSet("compute_scores: subject " + subject +
                            " has no probe samples for attack " +
                            attack.attack_id);
      }
      for (const std::size_t p : it->second.probes) {
        ScoreRecord rec;
        rec.system_id = options.system_id;
        rec.comparison_type = ComparisonType::morph;
        rec.attack_id = attack.attack_id;
        rec.contributor_slot = slot + 1;
        rec.score = angle_unit(morph_unit, unit[p]);
        rec.morph_kind = label;
        out.records.push_back(std::move(rec));
      }
    }
  }

  return out;
}

ScoreSet load_scores(const std::filesystem::path& path,
                     const std::string& morph_label) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty() ||
      lines[0] != "system_id,comparison_type,attack_id,contributor_slot,score") {
    detail::fail_parse(path, 1, "bad scores header");
  }
  ScoreSet out;
  out.records.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const std::size_t line_no = i + 1;
    const std::vector<std::string> f = detail::split_csv_line(lines[i]);
    if (f.size() != 5) {
      detail::fail_parse(path, line_no, "expected 5 fields");
    }
    ScoreRecord rec;
    rec.system_id = f[0];
    if (rec.system_id.empty()) {
      detail::fail_parse(path, line_no, "empty system_id");
    }
    if (f[1] == "mated") {
      rec.comparison_type = ComparisonType::mated;
    } else if (f[1] == "nonmated") {
      rec.comparison_type = ComparisonType::nonmated;
    } else if (f[1] == "morph") {
      rec.comparison_type = ComparisonType::morph;
    } else {
      detail::fail_parse(path, line_no, "unknown comparison_type '" + f[1] +
                                            "'");
    }
    const bool is_morph = rec.comparison_type == ComparisonType::morph;
    if (is_morph) {
      if (f[2].empty()) {
        detail::fail_parse(path, line_no, "morph row missing attack_id");
      }
      rec.attack_id = f[2];
      const long slot = detail::parse_csv_long(f[3], path, line_no);
      if (slot != 1 && slot != 2) {
        detail::fail_parse(path, line_no, "contributor_slot must be 1 or 2");
      }
      rec.contributor_slot = static_cast<int>(slot);
      rec.morph_kind = morph_label;
    } else {
      if (!f[2].empty() || !f[3].empty()) {
        detail::fail_parse(path, line_no,
                           "attack fields must be empty for non-morph rows");
      }
    }
    rec.score = detail::parse_csv_double(f[4], path, line_no);
    if (rec.score < 0.0 || rec.score > std::numbers::pi) {
      detail::fail_parse(path, line_no, "score out of [0, pi]");
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

void save_scores(const ScoreSet& scores, const std::filesystem::path& path) {
  detail::atomic_write(path, [&](std::ostream& out) {
    out << "system_id,comparison_type,attack_id,contributor_slot,score\n";
    for (const ScoreRecord& r : scores.records) {
      out << r.system_id << ',' << to_string(r.comparison_type) << ',';
      if (r.comparison_type == ComparisonType::morph) {
        out << r.attack_id << ',' << r.contributor_slot;
      } else {
        out << ',';
      }
      out << ',' << detail::format_double(r.score) << '\n';
    }
  });
}

}  // namespace morphguard

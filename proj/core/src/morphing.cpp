// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/morphing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "csv_util.hpp"
#include "morphguard/simulator.hpp"

namespace morphguard {

namespace {

constexpr double kAntipodalTol = 1e-6;

/// Per-subject bona fide views: record indices of all samples and of the
/// enrollment samples, in dataset order.
struct SubjectView {
  std::vector<std::size_t> samples;
  std::vector<std::size_t> enrollments;
};

std::map<std::string, SubjectView> bonafide_views(const Dataset& dataset) {
  std::map<std::string, SubjectView> views;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const SampleRecord& r = dataset.records[i];
    if (r.kind != SampleKind::bonafide) {
      continue;
    }
    SubjectView& view = views[r.subject_id];
    view.samples.push_back(i);
    if (r.role == Role::enroll) {
      view.enrollments.push_back(i);
    }
  }
  return views;
}

Embedding subject_average(const Dataset& dataset, const SubjectView& view) {
  std::vector<Embedding> samples;
  samples.reserve(view.samples.size());
  for (std::size_t i : view.samples) {
    samples.push_back(dataset.records[i].embedding);
  }
  return average_embedding(samples);
}

}  // namespace

Embedding worst_case_embedding(const Embedding& z1, const Embedding& z2) {
  if (z1.size() != z2.size()) {
    throw DimensionMismatch("worst_case_embedding: dimensions " +
                            std::to_string(z1.size()) + " vs " +
                            std::to_string(z2.size()));
  }
  const Embedding u1 = normalize(z1);
  const Embedding u2 = normalize(z2);
  if (angle_unit(u1, u2) >= std::numbers::pi - kAntipodalTol) {
    throw AntipodalPair("worst_case_embedding: inputs are antipodal");
  }
  return normalize(u1 + u2);
}

std::vector<IdentityPair> select_pairs(const Dataset& dataset,
                                       PairStrategy strategy, Rng& rng) {
  const std::map<std::string, SubjectView> views = bonafide_views(dataset);
  if (views.size() < 2) {
    throw TooFewSubjects("select_pairs: need at least 2 bona fide subjects, "
                         "got " +
                         std::to_string(views.size()));
  }

  std::vector<std::string> subjects;
  std::vector<Embedding> means;
  subjects.reserve(views.size());
  means.reserve(views.size());
  for (const auto& [subject, view] : views) {
    subjects.push_back(subject);
    means.push_back(normalize(subject_average(dataset, view)));
  }
  const std::size_t n = subjects.size();

  std::set<std::pair<std::size_t, std::size_t>> chosen;
  if (strategy == PairStrategy::most_similar) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = n;
      double best_angle = std::numbers::pi + 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) {
          continue;
        }
        const double a = angle_unit(means[i], means[j]);
        if (a < best_angle) {
          best_angle = a;
          best = j;
        }
      }
      chosen.insert({std::min(i, best), std::max(i, best)});
    }
  } else {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
      order[i] = i;
    }
    // Fisher-Yates on the deterministic stream.
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = rng.uniform_int(i + 1);
      std::swap(order[i], order[j]);
    }
    for (std::size_t k = 0; k + 1 < n; k += 2) {
      const std::size_t a = order[k];
      const std::size_t b = order[k + 1];
      chosen.insert({std::min(a, b), std::max(a, b)});
    }
  }

  std::vector<IdentityPair> pairs;
  pairs.reserve(chosen.size());
  for (const auto& [i, j] : chosen) {
    pairs.push_back({subjects[i], subjects[j], angle_unit(means[i], means[j])});
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.subject_a, a.subject_b) <
           std::tie(b.subject_a, b.subject_b);
  });
  return pairs;
}

std::vector<AttackRecord> generate_wc_attacks(
    const Dataset& dataset, const std::vector<IdentityPair>& pairs,
    WcEndpoints endpoints) {
  const std::map<std::string, SubjectView> views = bonafide_views(dataset);

  auto endpoint = [&](const std::string& subject) -> Embedding {
    const auto it = views.find(subject);
    if (it == views.end()) {
      throw MissingEnrollment("generate_wc_attacks: subject " + subject +
                              " has no bona fide samples");
    }
    if (endpoints == WcEndpoints::enrollment) {
      if (it->second.enrollments.empty()) {
        throw MissingEnrollment("generate_wc_attacks: subject " + subject +
                                " has no enrollment sample");
      }
      return dataset.records[it->second.enrollments.front()].embedding;
    }
    return normalize(subject_average(dataset, it->second));
  };

  std::vector<AttackRecord> attacks;
  attacks.reserve(pairs.size());
  for (const IdentityPair& pair : pairs) {
    AttackRecord attack;
    attack.attack_id = pair.subject_a + "+" + pair.subject_b;
    attack.subject_a = pair.subject_a;
    attack.subject_b = pair.subject_b;
    attack.morph_embedding =
        worst_case_embedding(endpoint(pair.subject_a), endpoint(pair.subject_b));
    attack.kind = AttackKind::worst_case;
    attacks.push_back(std::move(attack));
  }
  return attacks;
}

Embedding interpolated_morph(const Embedding& z1, const Embedding& z2,
                             double alpha, double noise_angle, Rng& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidParameter("interpolated_morph: alpha must be in [0, 1]");
  }
  if (!(noise_angle >= 0.0)) {
    throw InvalidParameter("interpolated_morph: noise_angle must be >= 0");
  }
  if (z1.size() != z2.size()) {
    throw DimensionMismatch("interpolated_morph: dimensions " +
                            std::to_string(z1.size()) + " vs " +
                            std::to_string(z2.size()));
  }
  const Embedding u1 = normalize(z1);
  const Embedding u2 = normalize(z2);
  const double theta = angle_unit(u1, u2);
  if (theta >= std::numbers::pi - kAntipodalTol) {
    throw AntipodalPair("interpolated_morph: inputs are antipodal");
  }

  Embedding morph;
  const double sin_theta = std::sin(theta);
  if (sin_theta < kZeroNormTol) {
    morph = u1;  // coincident inputs: the arc degenerates to a point
  } else {
    morph = (std::sin((1.0 - alpha) * theta) * u1 +
             std::sin(alpha * theta) * u2) /
            sin_theta;
    morph = normalize(morph);
  }

  if (noise_angle > 0.0) {
    const double m = static_cast<double>(morph.size() - 1);
    const double kappa = m / (noise_angle * noise_angle);
    morph = sample_vmf(morph, kappa, rng);
  }
  return morph;
}

std::vector<IdentityPair> load_pairs(const std::filesystem::path& path) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty() || lines[0] != "subject_a,subject_b,selection_angle") {
    detail::fail_parse(path, 1, "bad pairs header");
  }
  std::vector<IdentityPair> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const std::size_t line_no = i + 1;
    const std::vector<std::string> f = detail::split_csv_line(lines[i]);
    if (f.size() != 3) {
      detail::fail_parse(path, line_no, "expected 3 fields");
    }
    IdentityPair pair;
    pair.subject_a = f[0];
    pair.subject_b = f[1];
    if (pair.subject_a.empty() || pair.subject_b.empty()) {
      detail::fail_parse(path, line_no, "empty subject id");
    }
    if (!(pair.subject_a < pair.subject_b)) {
      detail::fail_parse(path, line_no,
                         "subjects must satisfy subject_a < subject_b");
    }
    pair.selection_angle = detail::parse_csv_double(f[2], path, line_no);
    if (pair.selection_angle < 0.0 ||
        pair.selection_angle > std::numbers::pi) {
      detail::fail_parse(path, line_no, "selection_angle out of [0, pi]");
    }
    if (!seen.insert({pair.subject_a, pair.subject_b}).second) {
      detail::fail_parse(path, line_no, "duplicate pair");
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

void save_pairs(const std::vector<IdentityPair>& pairs,
                const std::filesystem::path& path) {
  detail::atomic_write(path, [&](std::ostream& out) {
    out << "subject_a,subject_b,selection_angle\n";
    for (const IdentityPair& pair : pairs) {
      out << pair.subject_a << ',' << pair.subject_b << ','
          << detail::format_double(pair.selection_angle) << '\n';
    }
  });
}

Dataset attacks_to_dataset(const std::vector<AttackRecord>& attacks,
                           int dimension) {
  Dataset ds;
  ds.dimension = dimension;
  ds.records.reserve(attacks.size());
  for (const AttackRecord& attack : attacks) {
    SampleRecord rec;
    rec.subject_id = attack.subject_a;
    rec.sample_id = attack.attack_id;
    rec.role = Role::enroll;  // morphs are presented at enrollment
    rec.kind = SampleKind::morph;
    rec.pair_subject = attack.subject_b;
    rec.embedding = attack.morph_embedding;
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

std::vector<AttackRecord> attacks_from_dataset(const Dataset& dataset) {
  std::vector<AttackRecord> attacks;
  for (const SampleRecord& r : dataset.records) {
    if (r.kind != SampleKind::morph) {
      continue;
    }
    AttackRecord attack;
    attack.attack_id = r.sample_id;
    attack.subject_a = r.subject_id;
    attack.subject_b = r.pair_subject;
    attack.morph_embedding = r.embedding;
    attack.kind = AttackKind::ingested;
    attacks.push_back(std::move(attack));
  }
  return attacks;
}

}  // namespace morphguard

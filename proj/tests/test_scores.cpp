// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/scores.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include <unistd.h>

#include <doctest.h>

#include "morphguard/simulator.hpp"

using namespace morphguard;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() /
      ("morphguard_scores_test_" + std::to_string(::getpid()) + "_" +
       std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

Embedding make(std::initializer_list<double> values) {
  Embedding v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) {
    v[i++] = x;
  }
  return v;
}

SampleRecord bona_fide(const std::string& subject, const std::string& id,
                       Role role, const Embedding& z) {
  SampleRecord r;
  r.subject_id = subject;
  r.sample_id = id;
  r.role = role;
  r.embedding = z;
  return r;
}

/// Two subjects, one enrollment and one probe each (the canonical counting
/// example: 2 mated, 4 nonmated scores).
Dataset two_by_two() {
  Dataset ds;
  ds.dimension = 3;
  ds.records.push_back(bona_fide("a", "s0", Role::enroll, make({1, 0, 0})));
  ds.records.push_back(
      bona_fide("a", "s1", Role::probe, normalize(make({1, 0.2, 0}))));
  ds.records.push_back(bona_fide("b", "s0", Role::enroll, make({0, 1, 0})));
  ds.records.push_back(
      bona_fide("b", "s1", Role::probe, normalize(make({0, 1, 0.2}))));
  return ds;
}

AttackRecord wc_attack(const Dataset& ds, const std::string& a,
                       const std::string& b) {
  const Embedding* za = nullptr;
  const Embedding* zb = nullptr;
  for (const SampleRecord& r : ds.records) {
    if (r.role != Role::enroll) {
      continue;
    }
    if (r.subject_id == a) {
      za = &r.embedding;
    }
    if (r.subject_id == b) {
      zb = &r.embedding;
    }
  }
  AttackRecord attack;
  attack.attack_id = a + "+" + b;
  attack.subject_a = a;
  attack.subject_b = b;
  attack.morph_embedding = normalize(*za + *zb);
  attack.kind = AttackKind::worst_case;
  return attack;
}

}  // namespace

TEST_SUITE_BEGIN("scores");

TEST_CASE("comparison counts follow the population conventions") {
  const Dataset ds = two_by_two();
  const ScoreSet scores = compute_scores(ds, {});
  int mated = 0;
  int nonmated = 0;
  for (const ScoreRecord& r : scores.records) {
    if (r.comparison_type == ComparisonType::mated) {
      ++mated;
    } else if (r.comparison_type == ComparisonType::nonmated) {
      ++nonmated;
    }
  }
  CHECK(mated == 2);     // one within-subject pair per subject
  CHECK(nonmated == 4);  // each enrollment vs both samples of the other
}

TEST_CASE("general counting formulas hold on a simulated population") {
  SimulationParams p;
  p.dimension = 8;
  p.n_identities = 6;
  p.samples_per_identity = 4;
  p.kappa_mu = 100.0;
  p.kappa_sigma = 10.0;
  p.seed = 3;
  const Dataset ds = simulate_population(p);
  const ScoreSet scores = compute_scores(ds, {});
  const int n = p.n_identities;
  const int k = p.samples_per_identity;
  int mated = 0;
  int nonmated = 0;
  for (const ScoreRecord& r : scores.records) {
    mated += r.comparison_type == ComparisonType::mated ? 1 : 0;
    nonmated += r.comparison_type == ComparisonType::nonmated ? 1 : 0;
  }
  CHECK(mated == n * k * (k - 1) / 2);
  CHECK(nonmated == n * (n - 1) * k);  // one enrollment each, all others
}

TEST_CASE("scores are the angles of the underlying comparisons") {
  const Dataset ds = two_by_two();
  const ScoreSet scores = compute_scores(ds, {wc_attack(ds, "a", "b")});

  // Mated scores: a(s0,s1) within each subject.
  const double mated_a = angle(ds.records[0].embedding,
                               ds.records[1].embedding);
  const double mated_b = angle(ds.records[2].embedding,
                               ds.records[3].embedding);
  std::vector<double> mated;
  std::vector<double> morph;
  for (const ScoreRecord& r : scores.records) {
    if (r.comparison_type == ComparisonType::mated) {
      mated.push_back(r.score);
    } else if (r.comparison_type == ComparisonType::morph) {
      morph.push_back(r.score);
    }
  }
  REQUIRE(mated.size() == 2);
  CHECK(mated[0] == doctest::Approx(mated_a).epsilon(1e-15));
  CHECK(mated[1] == doctest::Approx(mated_b).epsilon(1e-15));

  // Morph scores: attack vs the probe of each contributor.
  const Embedding wc = wc_attack(ds, "a", "b").morph_embedding;
  REQUIRE(morph.size() == 2);
  CHECK(morph[0] == doctest::Approx(angle(wc, ds.records[1].embedding))
                        .epsilon(1e-15));
  CHECK(morph[1] == doctest::Approx(angle(wc, ds.records[3].embedding))
                        .epsilon(1e-15));
}

TEST_CASE("morph records carry attack bookkeeping") {
  const Dataset ds = two_by_two();
  const ScoreSet scores = compute_scores(ds, {wc_attack(ds, "a", "b")});
  int slot1 = 0;
  int slot2 = 0;
  for (const ScoreRecord& r : scores.records) {
    if (r.comparison_type != ComparisonType::morph) {
      CHECK(r.attack_id.empty());
      CHECK(r.contributor_slot == 0);
      continue;
    }
    CHECK(r.attack_id == "a+b");
    CHECK(r.morph_kind == "worst_case");
    slot1 += r.contributor_slot == 1 ? 1 : 0;
    slot2 += r.contributor_slot == 2 ? 1 : 0;
  }
  CHECK(slot1 == 1);
  CHECK(slot2 == 1);
}

TEST_CASE("morph kind label can be overridden") {
  const Dataset ds = two_by_two();
  ScoreOptions opt;
  opt.morph_label = "landmark";
  const ScoreSet scores = compute_scores(ds, {wc_attack(ds, "a", "b")}, opt);
  for (const ScoreRecord& r : scores.records) {
    if (r.comparison_type == ComparisonType::morph) {
      CHECK(r.morph_kind == "landmark");
    }
  }
}

TEST_CASE("system id option propagates to every record") {
  const Dataset ds = two_by_two();
  ScoreOptions opt;
  opt.system_id = "sysA";
  const ScoreSet scores = compute_scores(ds, {}, opt);
  for (const ScoreRecord& r : scores.records) {
    CHECK(r.system_id == "sysA");
  }
  CHECK(scores.systems() == std::vector<std::string>{"sysA"});
}

TEST_CASE("nonmated cap subsamples deterministically") {
  SimulationParams p;
  p.dimension = 8;
  p.n_identities = 8;
  p.samples_per_identity = 3;
  p.kappa_mu = 100.0;
  p.kappa_sigma = 10.0;
  p.seed = 4;
  const Dataset ds = simulate_population(p);

  ScoreOptions opt;
  opt.nonmated_cap = 20;
  opt.seed = 17;
  const ScoreSet capped = compute_scores(ds, {}, opt);
  const ScoreSet full = compute_scores(ds, {});

  std::vector<double> capped_nm;
  std::multiset<double> full_nm;
  for (const ScoreRecord& r : capped.records) {
    if (r.comparison_type == ComparisonType::nonmated) {
      capped_nm.push_back(r.score);
    }
  }
  for (const ScoreRecord& r : full.records) {
    if (r.comparison_type == ComparisonType::nonmated) {
      full_nm.insert(r.score);
    }
  }
  CHECK(capped_nm.size() == 20);
  for (const double s : capped_nm) {
    CHECK(full_nm.count(s) > 0);  // every capped score exists in the full set
  }

  const ScoreSet again = compute_scores(ds, {}, opt);
  std::vector<double> again_nm;
  for (const ScoreRecord& r : again.records) {
    if (r.comparison_type == ComparisonType::nonmated) {
      again_nm.push_back(r.score);
    }
  }
  CHECK(again_nm == capped_nm);

  ScoreOptions other = opt;
  other.seed = 18;
  const ScoreSet different = compute_scores(ds, {}, other);
  std::vector<double> different_nm;
  for (const ScoreRecord& r : different.records) {
    if (r.comparison_type == ComparisonType::nonmated) {
      different_nm.push_back(r.score);
    }
  }
  CHECK(different_nm != capped_nm);

  // A cap at or above the full count changes nothing.
  ScoreOptions big = opt;
  big.nonmated_cap = 100000;
  const ScoreSet uncapped = compute_scores(ds, {}, big);
  std::size_t nm = 0;
  for (const ScoreRecord& r : uncapped.records) {
    nm += r.comparison_type == ComparisonType::nonmated ? 1 : 0;
  }
  CHECK(nm == full_nm.size());
}

TEST_CASE("scoring rejects impossible attack references") {
  const Dataset ds = two_by_two();
  AttackRecord ghost = wc_attack(ds, "a", "b");
  ghost.subject_b = "zz";
  CHECK_THROWS_AS(compute_scores(ds, {ghost}), MissingSubject);

  // Strip subject b's probe: slot 2 has no comparisons.
  Dataset no_probe = ds;
  std::erase_if(no_probe.records, [](const SampleRecord& r) {
    return r.subject_id == "b" && r.role == Role::probe;
  });
  CHECK_THROWS_AS(compute_scores(no_probe, {wc_attack(ds, "a", "b")}),
                  EmptyProbeSet);

  Dataset empty;
  empty.dimension = 3;
  CHECK_THROWS_AS(compute_scores(empty, {}), EmptyInput);

  AttackRecord bad_dim = wc_attack(ds, "a", "b");
  bad_dim.morph_embedding = Embedding::Ones(5);
  CHECK_THROWS_AS(compute_scores(ds, {bad_dim}), DimensionMismatch);
}

TEST_CASE("score files round-trip") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "scores.csv";
  const Dataset ds = two_by_two();
  const ScoreSet scores = compute_scores(ds, {wc_attack(ds, "a", "b")});
  save_scores(scores, file);
  const ScoreSet loaded = load_scores(file, "worst_case");
  REQUIRE(loaded.records.size() == scores.records.size());
  for (std::size_t i = 0; i < scores.records.size(); ++i) {
    const ScoreRecord& in = scores.records[i];
    const ScoreRecord& out = loaded.records[i];
    CHECK(out.system_id == in.system_id);
    CHECK(out.comparison_type == in.comparison_type);
    CHECK(out.attack_id == in.attack_id);
    CHECK(out.contributor_slot == in.contributor_slot);
    CHECK(out.score == in.score);  // bit-exact
    CHECK(out.morph_kind == in.morph_kind);
  }
  fs::remove_all(dir);
}

TEST_CASE("score files are validated") {
  const fs::path dir = temp_dir();
  const fs::path file = dir / "scores.csv";
  auto write_file = [&](const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    out << content;
  };
  const std::string header =
      "system_id,comparison_type,attack_id,contributor_slot,score\n";
  SUBCASE("bad header") {
    write_file("system,type,attack,slot,score\n");
    CHECK_THROWS_AS(load_scores(file), ParseError);
  }
  SUBCASE("unknown comparison type") {
    write_file(header + "default,imposter,,,0.5\n");
    CHECK_THROWS_AS(load_scores(file), ParseError);
  }
  SUBCASE("morph row without attack id") {
    write_file(header + "default,morph,,1,0.5\n");
    CHECK_THROWS_AS(load_scores(file), ParseError);
  }
  SUBCASE("bad contributor slot") {
    write_file(header + "default,morph,a+b,3,0.5\n");
    CHECK_THROWS_AS(load_scores(file), ParseError);
  }
  SUBCASE("attack fields on a mated row") {
    write_file(header + "default,mated,a+b,1,0.5\n");
    CHECK_THROWS_AS(load_scores(file), ParseError);
  }
  SUBCASE("score out of range") {
    write_file(header + "default,mated,,,3.2\n");
    CHECK_THROWS_AS(load_scores(file), ParseError);
  }
  SUBCASE("negative score") {
    write_file(header + "default,mated,,,-0.1\n");
    CHECK_THROWS_AS(load_scores(file), ParseError);
  }
  SUBCASE("morph label is applied on load") {
    write_file(header + "default,morph,a+b,1,0.5\ndefault,morph,a+b,2,0.6\n");
    const ScoreSet loaded = load_scores(file, "printed");
    REQUIRE(loaded.records.size() == 2);
    CHECK(loaded.records[0].morph_kind == "printed");
    CHECK(loaded.records[1].morph_kind == "printed");
  }
  fs::remove_all(dir);
}

TEST_SUITE_END();

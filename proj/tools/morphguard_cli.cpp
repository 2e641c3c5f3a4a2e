// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end.  Subcommands mirror the evaluation pipeline:
//
//   simulate   draw a synthetic identity population on the unit sphere
//   pairs      choose identity pairs for morphing
//   wc-morphs  build the worst-case morph for each pair
//   score      compare a dataset (and optional attacks) into score records
//   thresholds solve named threshold rules on a score file
//   metrics    full evaluation summary as JSON
//   report     histogram and threshold-sweep exports
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morphguard/dataset.hpp"
#include "morphguard/errors.hpp"
#include "morphguard/histogram.hpp"
#include "morphguard/metrics.hpp"
#include "morphguard/morphing.hpp"
#include "morphguard/rng.hpp"
#include "morphguard/scores.hpp"
#include "morphguard/simulator.hpp"

namespace {

using namespace morphguard;

std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

/// "label=path" -> {label, path}; a bare path gets the fallback label.
std::pair<std::string, std::string> split_labeled_path(
    const std::string& arg, const std::string& fallback) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) {
    return {fallback, arg};
  }
  const std::string label = arg.substr(0, eq);
  const std::string path = arg.substr(eq + 1);
  if (label.empty() || path.empty()) {
    throw CLI::ValidationError("--scores",
                               "expected label=path, got '" + arg + "'");
  }
  return {label, path};
}

/// Loads and merges several "label=path" score files; the label becomes the
/// morph kind of that file's morph records.
ScoreSet load_merged_scores(const std::vector<std::string>& args) {
  ScoreSet merged;
  for (const std::string& arg : args) {
    const auto [label, path] = split_labeled_path(arg, "morph");
    ScoreSet part = load_scores(path, label);
    merged.records.insert(merged.records.end(),
                          std::make_move_iterator(part.records.begin()),
                          std::make_move_iterator(part.records.end()));
  }
  return merged;
}

/// System the scalar rates refer to.  A multi-system score set is ambiguous
/// unless --system picks one.
std::string resolve_system(const ScoreSet& scores,
                           const std::string& requested) {
  const std::vector<std::string> systems = scores.systems();
  if (!requested.empty()) {
    for (const std::string& s : systems) {
      if (s == requested) {
        return requested;
      }
    }
    throw InvalidParameter("system '" + requested +
                           "' not present in the score files");
  }
  if (systems.size() == 1) {
    return systems.front();
  }
  throw InvalidParameter(
      "score files contain several systems; pass --system to pick the one "
      "the scalar rates refer to");
}

void write_text(const std::string& text,
                const std::optional<std::string>& out_path) {
  if (!out_path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*out_path);
  if (!out) {
    throw IoError("cannot open '" + *out_path + "' for writing");
  }
  out << text;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  SimulationParams params;
  std::string out;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "simulate", "Draw a synthetic identity population on the unit sphere");
  sc->add_option("--dimension,-d", a.params.dimension,
                 "Embedding dimension (>= 2)")
      ->capture_default_str();
  sc->add_option("--identities,-n", a.params.n_identities,
                 "Number of identities")
      ->capture_default_str();
  sc->add_option("--samples,-k", a.params.samples_per_identity,
                 "Samples per identity; the first one is the enrollment")
      ->capture_default_str();
  sc->add_option("--kappa-mu", a.params.kappa_mu,
                 "Mean of the per-identity concentration distribution")
      ->capture_default_str();
  sc->add_option("--kappa-sigma", a.params.kappa_sigma,
                 "Spread of the per-identity concentration distribution")
      ->capture_default_str();
  sc->add_option("--kappa-floor", a.params.kappa_floor,
                 "Lower truncation of the concentration distribution")
      ->capture_default_str();
  sc->add_option("--seed", a.params.seed, "Master seed")
      ->capture_default_str();
  sc->add_option("--out", a.out, "Output dataset CSV")->required();
  sc->callback([&a] {
    const Dataset ds = simulate_population(a.params);
    save_dataset(ds, a.out);
  });
}

// ------------------------------------------------------------------- pairs

struct PairsArgs {
  std::string dataset;
  PairStrategy strategy = PairStrategy::most_similar;
  std::uint64_t seed = 0;
  std::string out;
};

void add_pairs(CLI::App& app, PairsArgs& a) {
  CLI::App* sc =
      app.add_subcommand("pairs", "Choose identity pairs for morphing");
  sc->add_option("--dataset", a.dataset, "Input dataset CSV")->required();
  const std::map<std::string, PairStrategy> strategies{
      {"most_similar", PairStrategy::most_similar},
      {"random_disjoint", PairStrategy::random_disjoint},
  };
  sc->add_option("--strategy", a.strategy,
                 "most_similar: nearest neighbour per subject; "
                 "random_disjoint: random perfect matching")
      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case))
      ->capture_default_str();
  sc->add_option("--seed", a.seed, "Seed for random_disjoint")
      ->capture_default_str();
  sc->add_option("--out", a.out, "Output pairs CSV")->required();
  sc->callback([&a] {
    const Dataset ds = load_dataset(a.dataset);
    Rng rng(a.seed);
    save_pairs(select_pairs(ds, a.strategy, rng), a.out);
  });
}

// --------------------------------------------------------------- wc-morphs

struct WcMorphsArgs {
  std::string dataset;
  std::string pairs;
  WcEndpoints endpoints = WcEndpoints::enrollment;
  std::string out;
};

void add_wc_morphs(CLI::App& app, WcMorphsArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "wc-morphs", "Build the worst-case morph embedding for each pair");
  sc->add_option("--dataset", a.dataset, "Input dataset CSV")->required();
  sc->add_option("--pairs", a.pairs, "Pairs CSV from `pairs`")->required();
  const std::map<std::string, WcEndpoints> endpoints{
      {"enroll", WcEndpoints::enrollment},
      {"mean", WcEndpoints::mean_direction},
  };
  sc->add_option("--endpoints", a.endpoints,
                 "Reference embeddings the morph is built from: enroll "
                 "(each subject's enrollment) or mean (per-subject average)")
      ->transform(CLI::CheckedTransformer(endpoints, CLI::ignore_case))
      ->capture_default_str();
  sc->add_option("--out", a.out, "Output attacks CSV (dataset format)")
      ->required();
  sc->callback([&a] {
    const Dataset ds = load_dataset(a.dataset);
    const auto pairs = load_pairs(a.pairs);
    const auto attacks = generate_wc_attacks(ds, pairs, a.endpoints);
    save_dataset(attacks_to_dataset(attacks, ds.dimension), a.out);
  });
}

// ------------------------------------------------------------------- score

struct ScoreArgs {
  std::string dataset;
  std::string attacks;
  std::string morph_kind = "morph";
  std::string system_id = "default";
  std::size_t nonmated_cap = 0;
  CLI::Option* cap_opt = nullptr;
  std::uint64_t seed = 0;
  std::string out;
};

void add_score(CLI::App& app, ScoreArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "score", "Compare a dataset (and optional attacks) into score records");
  sc->add_option("--dataset", a.dataset, "Input dataset CSV")->required();
  sc->add_option("--attacks", a.attacks,
                 "Attacks CSV (dataset format, e.g. from wc-morphs)");
  sc->add_option("--morph-kind", a.morph_kind,
                 "Kind label given to the attack scores (grouping only; "
                 "not stored in the output file)")
      ->capture_default_str();
  sc->add_option("--system-id", a.system_id, "System id for the records")
      ->capture_default_str();
  a.cap_opt = sc->add_option(
      "--nonmated-cap", a.nonmated_cap,
      "Score at most this many randomly chosen nonmated comparisons");
  sc->add_option("--seed", a.seed, "Seed for the nonmated subsample")
      ->capture_default_str();
  sc->add_option("--out", a.out, "Output scores CSV")->required();
  sc->callback([&a] {
    const Dataset ds = load_dataset(a.dataset);
    std::vector<AttackRecord> attacks;
    if (!a.attacks.empty()) {
      attacks = attacks_from_dataset(load_dataset(a.attacks));
    }
    ScoreOptions opt;
    opt.system_id = a.system_id;
    if (a.cap_opt->count() > 0) {
      opt.nonmated_cap = a.nonmated_cap;
    }
    opt.seed = a.seed;
    opt.morph_label = a.morph_kind;
    save_scores(compute_scores(ds, attacks, opt), a.out);
  });
}

// -------------------------------------------------------------- thresholds

struct ThresholdsArgs {
  std::string scores;
  std::vector<double> fmr_targets;
  std::vector<double> apcer_targets;
  std::vector<double> wc_targets;
  std::string system;
  std::optional<std::string> out;
};

void add_thresholds(CLI::App& app, ThresholdsArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "thresholds", "Solve named threshold rules on a score file");
  sc->add_option("--scores", a.scores, "Scores CSV")->required();
  CLI::Option* f = sc->add_option("--fmr", a.fmr_targets,
                                  "Largest t with FMR(t) <= x (repeatable)");
  CLI::Option* p = sc->add_option(
      "--apcer", a.apcer_targets, "Largest t with APCER(t) <= x (repeatable)");
  CLI::Option* w = sc->add_option(
      "--wcmmpmr", a.wc_targets,
      "Largest t whose worst-case morph acceptance stays within x "
      "(repeatable)");
  sc->add_option("--system", a.system,
                 "System the rates refer to (required when the file holds "
                 "several)");
  sc->add_option("--out", a.out, "Output JSON path (default: stdout)");
  sc->callback([&a, f, p, w] {
    if (f->count() + p->count() + w->count() == 0) {
      throw CLI::ValidationError(
          "thresholds", "pass at least one of --fmr, --apcer, --wcmmpmr");
    }
    const ScoreSet scores = load_scores(a.scores);
    const std::string system = resolve_system(scores, a.system);
    const ScoreAnalysis analysis(scores, system);
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const double x : a.fmr_targets) {
      out["fmr@" + short_number(x)] = analysis.threshold_at_fmr(x);
    }
    for (const double x : a.apcer_targets) {
      out["apcer@" + short_number(x)] = analysis.threshold_at_apcer(x);
    }
    for (const double x : a.wc_targets) {
      out["wcmmpmr@" + short_number(x)] = analysis.threshold_wc(x);
    }
    write_text(out.dump(2) + "\n", a.out);
  });
}

// ----------------------------------------------------------------- metrics

struct MetricsArgs {
  std::vector<std::string> scores;
  double at_fmr = 0.0;
  double at_apcer = 0.0;
  double at_wcmmpmr = 0.0;
  double at_threshold = 0.0;
  CLI::Option* fmr_opt = nullptr;
  CLI::Option* apcer_opt = nullptr;
  CLI::Option* wc_opt = nullptr;
  CLI::Option* fixed_opt = nullptr;
  std::vector<std::string> map_specs;
  std::string system;
  std::optional<std::string> out;
};

std::pair<int, int> parse_map_spec(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma != std::string::npos) {
    try {
      const int r = std::stoi(spec.substr(0, comma));
      const int c = std::stoi(spec.substr(comma + 1));
      return {r, c};
    } catch (const std::exception&) {
      // fall through to the error below
    }
  }
  throw CLI::ValidationError("--map", "expected r,c (e.g. --map 2,1), got '" +
                                          spec + "'");
}

void add_metrics(CLI::App& app, MetricsArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "metrics", "Evaluate error rates and attack potential as JSON");
  sc->add_option("--scores", a.scores,
                 "Scores CSV, repeatable; label=path assigns the file's "
                 "morph records a kind label (default label: morph)")
      ->required();
  CLI::Option_group* rule = sc->add_option_group(
      "decision rule", "How the decision threshold is chosen");
  a.fmr_opt = rule->add_option("--at-fmr", a.at_fmr,
                               "Largest t with FMR(t) <= x");
  a.apcer_opt = rule->add_option("--at-apcer", a.at_apcer,
                                 "Largest t with APCER(t) <= x");
  a.wc_opt = rule->add_option(
      "--at-wcmmpmr", a.at_wcmmpmr,
      "Largest t whose worst-case morph acceptance stays within x");
  a.fixed_opt =
      rule->add_option("--at-threshold", a.at_threshold, "Fixed threshold");
  rule->require_option(1);
  sc->add_option("--map", a.map_specs,
                 "Attack potential entry r,c: fraction of attacks with >= r "
                 "matching scores per contributor for >= c systems "
                 "(repeatable; thresholds per system follow the decision "
                 "rule)");
  sc->add_option("--system", a.system,
                 "System the scalar rates refer to (required when the files "
                 "hold several)");
  sc->add_option("--out", a.out, "Output JSON path (default: stdout)");
  sc->callback([&a] {
    const ScoreSet merged = load_merged_scores(a.scores);
    const std::string scalar_system = resolve_system(merged, a.system);
    const ScoreAnalysis analysis(merged, scalar_system);

    // Threshold for one system under the chosen rule.
    const auto rule_threshold = [&a](const ScoreAnalysis& sa) {
      if (a.fmr_opt->count() > 0) {
        return sa.threshold_at_fmr(a.at_fmr);
      }
      if (a.apcer_opt->count() > 0) {
        return sa.threshold_at_apcer(a.at_apcer);
      }
      if (a.wc_opt->count() > 0) {
        return sa.threshold_wc(a.at_wcmmpmr);
      }
      return a.at_threshold;
    };
    const auto rule_name = [&a]() -> std::string {
      if (a.fmr_opt->count() > 0) {
        return "fmr@" + short_number(a.at_fmr);
      }
      if (a.apcer_opt->count() > 0) {
        return "apcer@" + short_number(a.at_apcer);
      }
      if (a.wc_opt->count() > 0) {
        return "wcmmpmr@" + short_number(a.at_wcmmpmr);
      }
      return "fixed";
    };

    EvaluationSummary summary;
    const double t = rule_threshold(analysis);
    summary.decision_threshold = t;
    summary.thresholds.emplace_back(rule_name(), t);

    const auto try_rate = [](std::optional<double>& slot, auto&& fn) {
      try {
        slot = fn();
      } catch (const EmptyPopulation&) {
        slot.reset();
      }
    };
    try_rate(summary.fmr, [&] { return analysis.fmr(t); });
    try_rate(summary.fnmr, [&] { return analysis.fnmr(t); });
    try_rate(summary.apcer, [&] { return analysis.apcer(t); });
    try_rate(summary.bpcer, [&] { return analysis.bpcer(t); });
    for (const std::string& kind : analysis.morph_kinds()) {
      summary.mmpmr[kind] = analysis.mmpmr(t, kind);
    }
    if (analysis.attack_count() > 0) {
      summary.wcmmpmr = analysis.wcmmpmr(t);
    }

    if (!a.map_specs.empty()) {
      // One entry per system, each with its own rule-derived threshold.
      const std::vector<std::string> system_ids = merged.systems();
      std::vector<ScoreSet> subsets(system_ids.size());
      std::vector<SystemScores> systems(system_ids.size());
      for (std::size_t i = 0; i < system_ids.size(); ++i) {
        for (const ScoreRecord& r : merged.records) {
          if (r.system_id == system_ids[i]) {
            subsets[i].records.push_back(r);
          }
        }
        const double ti = system_ids[i] == scalar_system
                              ? t
                              : rule_threshold(
                                    ScoreAnalysis(merged, system_ids[i]));
        systems[i] = {&subsets[i], ti};
        if (system_ids[i] != scalar_system) {
          summary.thresholds.emplace_back(
              rule_name() + ":" + system_ids[i], ti);
        }
      }
      for (const std::string& spec : a.map_specs) {
        const auto [r, c] = parse_map_spec(spec);
        summary.map.push_back({r, c, map_rc(systems, r, c)});
      }
    }
    write_text(to_json(summary), a.out);
  });
}

// ------------------------------------------------------------------ report

struct ReportArgs {
  std::vector<std::string> scores;
  int bins = 50;
  std::optional<std::string> hist_out;
  std::optional<std::string> det_out;
};

void add_report(CLI::App& app, ReportArgs& a) {
  CLI::App* sc = app.add_subcommand(
      "report", "Export score histograms and a threshold sweep");
  sc->add_option("--scores", a.scores,
                 "Scores CSV, repeatable; label=path assigns the file's "
                 "morph records a kind label")
      ->required();
  sc->add_option("--bins", a.bins, "Histogram bin count over [0, pi]")
      ->capture_default_str();
  sc->add_option("--hist-out", a.hist_out, "Histogram CSV path");
  sc->add_option("--det-out", a.det_out, "Threshold sweep CSV path");
  sc->callback([&a] {
    if (!a.hist_out && !a.det_out) {
      throw CLI::ValidationError(
          "report", "pass at least one of --hist-out, --det-out");
    }
    const ScoreSet merged = load_merged_scores(a.scores);
    if (a.hist_out) {
      save_histogram(make_histogram(merged, a.bins), *a.hist_out);
    }
    if (a.det_out) {
      save_det_table(det_sweep(merged), *a.det_out);
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "morphguard: quantify face recognition exposure to morphing attacks "
      "on the embedding sphere"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "morphguard 0.1.0");

  SimulateArgs simulate_args;
  PairsArgs pairs_args;
  WcMorphsArgs wc_morphs_args;
  ScoreArgs score_args;
  ThresholdsArgs thresholds_args;
  MetricsArgs metrics_args;
  ReportArgs report_args;
  add_simulate(app, simulate_args);
  add_pairs(app, pairs_args);
  add_wc_morphs(app, wc_morphs_args);
  add_score(app, score_args);
  add_thresholds(app, thresholds_args);
  add_metrics(app, metrics_args);
  add_report(app, report_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return 2;
  } catch (const morphguard::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

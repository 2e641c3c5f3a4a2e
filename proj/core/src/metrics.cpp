// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <json.hpp>

#include "csv_util.hpp"

namespace morphguard {

namespace {

double count_le(const std::vector<double>& sorted, double t) {
  return static_cast<double>(
      std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

/// Largest candidate threshold whose prefix proportion stays within x.
/// Candidates are 0, the sorted unique values, and pi.
double largest_threshold(const std::vector<double>& sorted, double x,
                         const std::string& what) {
  if (sorted.empty()) {
    throw EmptyPopulation("threshold selection: no " + what + " scores");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidParameter("threshold selection: target rate must be in "
                           "[0, 1]");
  }
  std::vector<double> candidates;
  candidates.reserve(sorted.size() + 2);
  candidates.push_back(0.0);
  for (const double v : sorted) {
    if (candidates.back() != v) {
      candidates.push_back(v);
    }
  }
  if (candidates.back() < std::numbers::pi) {
    candidates.push_back(std::numbers::pi);
  }
  const double n = static_cast<double>(sorted.size());
  const auto beyond = std::partition_point(
      candidates.begin(), candidates.end(),
      [&](double c) { return count_le(sorted, c) / n <= x; });
  if (beyond == candidates.begin()) {
    throw InvalidParameter("threshold selection: no threshold reaches " +
                           what + " <= " + detail::format_double(x));
  }
  return *(beyond - 1);
}

using AttackKey = std::pair<std::string, std::string>;  // (kind, attack_id)

}  // namespace

ScoreAnalysis::ScoreAnalysis(const ScoreSet& scores,
                             const std::string& system_filter) {
  struct Accum {
    double min1 = std::numeric_limits<double>::infinity();
    double min2 = std::numeric_limits<double>::infinity();
    bool has1 = false;
    bool has2 = false;
  };
  std::map<AttackKey, Accum> attacks;

  for (const ScoreRecord& r : scores.records) {
    if (!system_filter.empty() && r.system_id != system_filter) {
      continue;
    }
    switch (r.comparison_type) {
      case ComparisonType::mated:
        mated_.push_back(r.score);
        break;
      case ComparisonType::nonmated:
        nonmated_.push_back(r.score);
        break;
      case ComparisonType::morph: {
        morph_.push_back(r.score);
        Accum& a = attacks[{r.morph_kind, r.attack_id}];
        if (r.contributor_slot == 1) {
          a.has1 = true;
          a.min1 = std::min(a.min1, r.score);
        } else {
          a.has2 = true;
          a.min2 = std::min(a.min2, r.score);
        }
        break;
      }
    }
  }
  std::sort(mated_.begin(), mated_.end());
  std::sort(nonmated_.begin(), nonmated_.end());
  std::sort(morph_.begin(), morph_.end());

  for (const auto& [key, a] : attacks) {
    const auto& [kind, id] = key;
    if (!a.has1 || !a.has2) {
      malformed_.try_emplace(kind, id);
      malformed_.try_emplace(std::string{}, id);
      continue;
    }
    const double combined = std::max(a.min1, a.min2);
    combined_[kind].push_back(combined);
    combined_[std::string{}].push_back(combined);
  }
  for (auto& [kind, v] : combined_) {
    std::sort(v.begin(), v.end());
  }
  has_wc_label_ = combined_.count("worst_case") > 0 ||
                  malformed_.count("worst_case") > 0;
}

double ScoreAnalysis::fmr(double t) const {
  if (nonmated_.empty()) {
    throw EmptyPopulation("fmr: no nonmated scores");
  }
  return count_le(nonmated_, t) / static_cast<double>(nonmated_.size());
}

double ScoreAnalysis::fnmr(double t) const {
  if (mated_.empty()) {
    throw EmptyPopulation("fnmr: no mated scores");
  }
  const double n = static_cast<double>(mated_.size());
  return (n - count_le(mated_, t)) / n;
}

double ScoreAnalysis::apcer(double t) const {
  if (morph_.empty()) {
    throw EmptyPopulation("apcer: no morph scores");
  }
  return count_le(morph_, t) / static_cast<double>(morph_.size());
}

double ScoreAnalysis::bpcer(double t) const { return fnmr(t); }

double ScoreAnalysis::mmpmr(double t, const std::string& kind_filter) const {
  const auto bad = malformed_.find(kind_filter);
  if (bad != malformed_.end()) {
    throw MalformedAttack("mmpmr: attack " + bad->second +
                          " lacks scores for one contributor slot");
  }
  const auto it = combined_.find(kind_filter);
  if (it == combined_.end() || it->second.empty()) {
    throw EmptyPopulation(kind_filter.empty()
                              ? std::string("mmpmr: no morph attacks")
                              : "mmpmr: no morph attacks of kind '" +
                                    kind_filter + "'");
  }
  return count_le(it->second, t) / static_cast<double>(it->second.size());
}

double ScoreAnalysis::wcmmpmr(double t) const {
  return mmpmr(t, has_wc_label_ ? "worst_case" : std::string{});
}

double ScoreAnalysis::threshold_at_fmr(double x) const {
  if (nonmated_.empty()) {
    throw EmptyPopulation("threshold_at_fmr: no nonmated scores");
  }
  return largest_threshold(nonmated_, x, "fmr");
}

double ScoreAnalysis::threshold_at_apcer(double x) const {
  if (morph_.empty()) {
    throw EmptyPopulation("threshold_at_apcer: no morph scores");
  }
  return largest_threshold(morph_, x, "apcer");
}

double ScoreAnalysis::threshold_wc(double x) const {
  const std::string kind = has_wc_label_ ? "worst_case" : std::string{};
  const auto bad = malformed_.find(kind);
  if (bad != malformed_.end()) {
    throw MalformedAttack("threshold_wc: attack " + bad->second +
                          " lacks scores for one contributor slot");
  }
  const auto it = combined_.find(kind);
  if (it == combined_.end() || it->second.empty()) {
    throw EmptyPopulation("threshold_wc: no morph attacks");
  }
  return largest_threshold(it->second, x, "wcmmpmr");
}

std::vector<std::string> ScoreAnalysis::morph_kinds() const {
  std::vector<std::string> kinds;
  for (const auto& [kind, v] : combined_) {
    if (!kind.empty()) {
      kinds.push_back(kind);
    }
  }
  for (const auto& [kind, id] : malformed_) {
    if (!kind.empty() && !combined_.count(kind)) {
      kinds.push_back(kind);
    }
  }
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  return kinds;
}

std::size_t ScoreAnalysis::attack_count(const std::string& kind_filter) const {
  const auto it = combined_.find(kind_filter);
  return it == combined_.end() ? 0 : it->second.size();
}

double fmr(const ScoreSet& scores, double t) {
  return ScoreAnalysis(scores).fmr(t);
}
double fnmr(const ScoreSet& scores, double t) {
  return ScoreAnalysis(scores).fnmr(t);
}
double apcer(const ScoreSet& scores, double t) {
  return ScoreAnalysis(scores).apcer(t);
}
double bpcer(const ScoreSet& scores, double t) {
  return ScoreAnalysis(scores).bpcer(t);
}
double mmpmr(const ScoreSet& scores, double t, const std::string& kind_filter) {
  return ScoreAnalysis(scores).mmpmr(t, kind_filter);
}
double threshold_at_fmr(const ScoreSet& scores, double x) {
  return ScoreAnalysis(scores).threshold_at_fmr(x);
}
double threshold_at_apcer(const ScoreSet& scores, double x) {
  return ScoreAnalysis(scores).threshold_at_apcer(x);
}
double threshold_wc(const ScoreSet& scores, double x) {
  return ScoreAnalysis(scores).threshold_wc(x);
}

double map_rc(const std::vector<SystemScores>& systems, int r, int c) {
  if (systems.empty()) {
    throw InvalidParameter("map_rc: no systems given");
  }
  if (r < 1) {
    throw InvalidRC("map_rc: r must be >= 1, got " + std::to_string(r));
  }
  if (c < 1 || static_cast<std::size_t>(c) > systems.size()) {
    throw InvalidRC("map_rc: c must be in [1, " +
                    std::to_string(systems.size()) + "], got " +
                    std::to_string(c));
  }

  struct Counts {
    long le1 = 0, le2 = 0, tot1 = 0, tot2 = 0;
  };
  std::vector<std::map<AttackKey, Counts>> per_system(systems.size());
  for (std::size_t k = 0; k < systems.size(); ++k) {
    if (systems[k].scores == nullptr) {
      throw InvalidParameter("map_rc: null score set");
    }
    const double t = systems[k].threshold;
    for (const ScoreRecord& rec : systems[k].scores->records) {
      if (rec.comparison_type != ComparisonType::morph) {
        continue;
      }
      Counts& cc = per_system[k][{rec.morph_kind, rec.attack_id}];
      if (rec.contributor_slot == 1) {
        ++cc.tot1;
        cc.le1 += rec.score <= t ? 1 : 0;
      } else {
        ++cc.tot2;
        cc.le2 += rec.score <= t ? 1 : 0;
      }
    }
  }

  const auto& universe = per_system[0];
  if (universe.empty()) {
    throw EmptyPopulation("map_rc: no morph attacks");
  }
  for (std::size_t k = 0; k < per_system.size(); ++k) {
    if (per_system[k].size() != universe.size()) {
      throw AttackIdMismatch("map_rc: systems cover different attack sets");
    }
    for (const auto& [key, cc] : per_system[k]) {
      if (!universe.count(key)) {
        throw AttackIdMismatch("map_rc: attack " + key.second +
                               " is not covered by every system");
      }
      if (cc.tot1 == 0 || cc.tot2 == 0) {
        throw MalformedAttack("map_rc: attack " + key.second +
                              " lacks scores for one contributor slot");
      }
    }
  }

  long success = 0;
  for (const auto& [key, first_counts] : universe) {
    int accepting = 0;
    for (std::size_t k = 0; k < per_system.size(); ++k) {
      const Counts& cc = k == 0 ? first_counts : per_system[k].at(key);
      if (cc.le1 >= r && cc.le2 >= r) {
        ++accepting;
      }
    }
    if (accepting >= c) {
      ++success;
    }
  }
  return static_cast<double>(success) / static_cast<double>(universe.size());
}

ComparisonType three_way_classify(double score, double t_low, double t_high) {
  if (!(t_low >= 0.0) || !(t_low < t_high) || !(t_high <= std::numbers::pi)) {
    throw InvalidThresholdOrder(
        "three_way_classify: need 0 <= t_low < t_high <= pi");
  }
  if (score <= t_low) {
    return ComparisonType::mated;
  }
  if (score <= t_high) {
    return ComparisonType::morph;
  }
  return ComparisonType::nonmated;
}

ConfusionMatrix evaluate_three_way(const ScoreSet& scores, double t_low,
                                   double t_high) {
  // Validate once up front (also covers an empty score set).
  three_way_classify(0.0, t_low, t_high);
  ConfusionMatrix counts{};
  for (const ScoreRecord& r : scores.records) {
    const auto truth = static_cast<std::size_t>(r.comparison_type);
    const auto pred = static_cast<std::size_t>(
        three_way_classify(r.score, t_low, t_high));
    ++counts[truth][pred];
  }
  return counts;
}

DetTable det_sweep(const ScoreSet& scores) {
  const ScoreAnalysis analysis(scores);
  std::vector<double> candidates;
  candidates.reserve(analysis.mated_scores().size() + analysis.nonmated_scores().size() +
                     analysis.morph_scores().size() + 2);
  candidates.push_back(0.0);
  candidates.insert(candidates.end(), analysis.mated_scores().begin(),
                    analysis.mated_scores().end());
  candidates.insert(candidates.end(), analysis.nonmated_scores().begin(),
                    analysis.nonmated_scores().end());
  candidates.insert(candidates.end(), analysis.morph_scores().begin(),
                    analysis.morph_scores().end());
  candidates.push_back(std::numbers::pi);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  DetTable table;
  table.morph_kinds = analysis.morph_kinds();
  table.rows.reserve(candidates.size());
  const bool has_attacks = analysis.attack_count() > 0;
  for (const double t : candidates) {
    DetRow row;
    row.threshold = t;
    if (!analysis.nonmated_scores().empty()) {
      row.fmr = analysis.fmr(t);
    }
    if (!analysis.mated_scores().empty()) {
      row.fnmr = analysis.fnmr(t);
    }
    if (!analysis.morph_scores().empty()) {
      row.apcer = analysis.apcer(t);
    }
    row.mmpmr_by_kind.reserve(table.morph_kinds.size());
    for (const std::string& kind : table.morph_kinds) {
      row.mmpmr_by_kind.push_back(analysis.mmpmr(t, kind));
    }
    if (has_attacks) {
      row.wcmmpmr = analysis.wcmmpmr(t);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void save_det_table(const DetTable& table, const std::filesystem::path& path) {
  detail::atomic_write(path, [&](std::ostream& out) {
    out << "threshold,fmr,fnmr,apcer";
    for (const std::string& kind : table.morph_kinds) {
      out << ",mmpmr_" << kind;
    }
    out << ",wcmmpmr\n";
    auto field = [&](double v) {
      if (std::isnan(v)) {
        return std::string{};
      }
      return detail::format_double(v);
    };
    for (const DetRow& row : table.rows) {
      out << detail::format_double(row.threshold) << ',' << field(row.fmr)
          << ',' << field(row.fnmr) << ',' << field(row.apcer);
      for (const double v : row.mmpmr_by_kind) {
        out << ',' << field(v);
      }
      out << ',' << field(row.wcmmpmr) << '\n';
    }
  });
}

std::string to_json(const EvaluationSummary& summary) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json thresholds = nlohmann::ordered_json::object();
  for (const auto& [name, value] : summary.thresholds) {
    thresholds[name] = value;
  }
  j["thresholds"] = std::move(thresholds);
  j["decision_threshold"] = summary.decision_threshold;
  auto put_optional = [&](const char* key, const std::optional<double>& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  put_optional("fmr", summary.fmr);
  put_optional("fnmr", summary.fnmr);
  put_optional("apcer", summary.apcer);
  put_optional("bpcer", summary.bpcer);
  nlohmann::ordered_json mmpmr_obj = nlohmann::ordered_json::object();
  for (const auto& [kind, value] : summary.mmpmr) {
    mmpmr_obj[kind] = value;
  }
  j["mmpmr"] = std::move(mmpmr_obj);
  put_optional("wcmmpmr", summary.wcmmpmr);
  nlohmann::ordered_json map_list = nlohmann::ordered_json::array();
  for (const auto& entry : summary.map) {
    nlohmann::ordered_json e = nlohmann::ordered_json::object();
    e["r"] = entry.r;
    e["c"] = entry.c;
    e["value"] = entry.value;
    map_list.push_back(std::move(e));
  }
  j["map"] = std::move(map_list);
  return j.dump(2) + "\n";
}

void save_summary(const EvaluationSummary& summary,
                  const std::filesystem::path& path) {
  detail::atomic_write(path,
                       [&](std::ostream& out) { out << to_json(summary); });
}

}  // namespace morphguard

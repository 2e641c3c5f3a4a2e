// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "csv_util.hpp"

namespace morphguard {

namespace {

constexpr std::size_t kFixedColumns = 5;

Role parse_role(const std::string& s, const std::filesystem::path& file,
                std::size_t line_no) {
  if (s == "enroll") return Role::enroll;
  if (s == "probe") return Role::probe;
  detail::fail_parse(file, line_no, "unknown role '" + s + "'");
}

SampleKind parse_kind(const std::string& s, const std::filesystem::path& file,
                      std::size_t line_no) {
  if (s == "bonafide") return SampleKind::bonafide;
  if (s == "morph") return SampleKind::morph;
  detail::fail_parse(file, line_no, "unknown kind '" + s + "'");
}

}  // namespace

std::string to_string(Role role) {
  return role == Role::enroll ? "enroll" : "probe";
}

std::string to_string(SampleKind kind) {
  return kind == SampleKind::bonafide ? "bonafide" : "morph";
}

std::vector<std::string> Dataset::bonafide_subjects() const {
  std::set<std::string> subjects;
  for (const SampleRecord& r : records) {
    if (r.kind == SampleKind::bonafide) {
      subjects.insert(r.subject_id);
    }
  }
  return {subjects.begin(), subjects.end()};
}

void Dataset::validate() const {
  if (dimension < 2) {
    throw InvalidParameter("dataset dimension must be >= 2, got " +
                           std::to_string(dimension));
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const SampleRecord& r : records) {
    if (r.embedding.size() != dimension) {
      throw InconsistentDimension(
          "sample " + r.subject_id + "/" + r.sample_id + " has dimension " +
          std::to_string(r.embedding.size()) + ", expected " +
          std::to_string(dimension));
    }
    if (!r.embedding.allFinite()) {
      throw InvalidParameter("sample " + r.subject_id + "/" + r.sample_id +
                             " has non-finite components");
    }
    const bool has_pair = !r.pair_subject.empty();
    if ((r.kind == SampleKind::morph) != has_pair) {
      throw InvalidParameter("sample " + r.subject_id + "/" + r.sample_id +
                             ": pair_subject must be set exactly for morphs");
    }
    if (has_pair && r.pair_subject == r.subject_id) {
      throw InvalidParameter("sample " + r.subject_id + "/" + r.sample_id +
                             ": pair_subject equals subject_id");
    }
    if (!seen.insert({r.subject_id, r.sample_id}).second) {
      throw DuplicateSample("duplicate sample " + r.subject_id + "/" +
                            r.sample_id);
    }
  }
}

Dataset load_dataset(const std::filesystem::path& path) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty()) {
    detail::fail_parse(path, 1, "missing header");
  }
  const std::vector<std::string> header = detail::split_csv_line(lines[0]);
  if (header.size() < kFixedColumns + 2 || header[0] != "subject_id" ||
      header[1] != "sample_id" || header[2] != "role" || header[3] != "kind" ||
      header[4] != "pair_subject") {
    detail::fail_parse(path, 1, "bad dataset header");
  }
  const int dimension = static_cast<int>(header.size() - kFixedColumns);
  for (int j = 0; j < dimension; ++j) {
    if (header[kFixedColumns + j] != "e" + std::to_string(j)) {
      detail::fail_parse(path, 1, "bad embedding column name '" +
                                      header[kFixedColumns + j] + "'");
    }
  }

  Dataset ds;
  ds.dimension = dimension;
  ds.records.reserve(lines.size() - 1);
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const std::size_t line_no = i + 1;
    const std::vector<std::string> f = detail::split_csv_line(lines[i]);
    if (f.size() != header.size()) {
      detail::fail_parse(path, line_no,
                         "expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(f.size()));
    }
    SampleRecord rec;
    rec.subject_id = f[0];
    rec.sample_id = f[1];
    if (rec.subject_id.empty() || rec.sample_id.empty()) {
      detail::fail_parse(path, line_no, "empty subject_id or sample_id");
    }
    rec.role = parse_role(f[2], path, line_no);
    rec.kind = parse_kind(f[3], path, line_no);
    rec.pair_subject = f[4];
    const bool has_pair = !rec.pair_subject.empty();
    if ((rec.kind == SampleKind::morph) != has_pair) {
      detail::fail_parse(path, line_no,
                         "pair_subject must be set exactly for morph rows");
    }
    if (has_pair && rec.pair_subject == rec.subject_id) {
      detail::fail_parse(path, line_no, "pair_subject equals subject_id");
    }
    rec.embedding = Embedding(dimension);
    for (int j = 0; j < dimension; ++j) {
      rec.embedding[j] =
          detail::parse_csv_double(f[kFixedColumns + j], path, line_no);
    }
    if (!seen.insert({rec.subject_id, rec.sample_id}).second) {
      throw DuplicateSample(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate sample " + rec.subject_id + "/" +
                            rec.sample_id);
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  if (dataset.dimension < 2) {
    throw InvalidParameter("dataset dimension must be >= 2, got " +
                           std::to_string(dataset.dimension));
  }
  detail::atomic_write(path, [&](std::ostream& out) {
    out << "subject_id,sample_id,role,kind,pair_subject";
    for (int j = 0; j < dataset.dimension; ++j) {
      out << ",e" << j;
    }
    out << '\n';
    for (const SampleRecord& r : dataset.records) {
      out << r.subject_id << ',' << r.sample_id << ',' << to_string(r.role)
          << ',' << to_string(r.kind) << ',' << r.pair_subject;
      for (int j = 0; j < dataset.dimension; ++j) {
        out << ',' << detail::format_double(r.embedding[j]);
      }
      out << '\n';
    }
  });
}

}  // namespace morphguard

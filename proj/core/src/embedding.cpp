// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace morphguard {

Embedding normalize(const Embedding& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n < kZeroNormTol) {
    throw ZeroVector("cannot normalize vector with norm " + std::to_string(n));
  }
  return v / n;
}

bool is_unit(const Embedding& v) {
  const double n = v.norm();
  return std::isfinite(n) && std::abs(n - 1.0) <= kUnitNormTol;
}

double angle_unit(const Embedding& u, const Embedding& v) {
  const double c = std::clamp(u.dot(v), -1.0, 1.0);
  return std::acos(c);
}

double angle(const Embedding& u, const Embedding& v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("angle: dimensions " + std::to_string(u.size()) +
                            " vs " + std::to_string(v.size()));
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (!std::isfinite(nu) || nu < kZeroNormTol) {
    throw ZeroVector("angle: first argument has norm " + std::to_string(nu));
  }
  if (!std::isfinite(nv) || nv < kZeroNormTol) {
    throw ZeroVector("angle: second argument has norm " + std::to_string(nv));
  }
  const double c = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  return std::acos(c);
}

Embedding average_embedding(std::span<const Embedding> samples) {
  if (samples.empty()) {
    throw EmptyInput("average_embedding: no samples");
  }
  const Eigen::Index d = samples.front().size();
  Embedding sum = Embedding::Zero(d);
  for (const Embedding& s : samples) {
    if (s.size() != d) {
      throw DimensionMismatch("average_embedding: dimensions " +
                              std::to_string(d) + " vs " +
                              std::to_string(s.size()));
    }
    sum += s;
  }
  return sum / static_cast<double>(samples.size());
}

}  // namespace morphguard

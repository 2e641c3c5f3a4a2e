// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#include "morphguard/simulator.hpp"

#include <cmath>
#include <string>

#include "morphguard/parallel.hpp"

namespace morphguard {

namespace {

Embedding gaussian_vector(int dimension, Rng& rng) {
  Embedding v(dimension);
  for (int i = 0; i < dimension; ++i) {
    v[i] = rng.normal();
  }
  return v;
}

std::string padded_id(const char* prefix, std::size_t value,
                      std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) {
    digits.insert(0, width - digits.size(), '0');
  }
  return prefix + digits;
}

/// Draws one identity cluster from rng (mean direction first, then kappa).
IdentityCluster draw_cluster(const SimulationParams& p, std::size_t index,
                             Rng& rng) {
  IdentityCluster cluster;
  const std::size_t width =
      std::to_string(static_cast<std::size_t>(p.n_identities) - 1).size();
  cluster.subject_id = padded_id("id", index, width);
  cluster.mean_direction = sample_uniform_direction(p.dimension, rng);
  cluster.kappa = sample_kappa(p.kappa_mu, p.kappa_sigma, p.kappa_floor, rng);
  return cluster;
}

}  // namespace

void SimulationParams::validate() const {
  if (dimension < 2) {
    throw InvalidParameter("dimension must be >= 2, got " +
                           std::to_string(dimension));
  }
  if (n_identities < 1) {
    throw InvalidParameter("n_identities must be >= 1, got " +
                           std::to_string(n_identities));
  }
  if (samples_per_identity < 1) {
    throw InvalidParameter("samples_per_identity must be >= 1, got " +
                           std::to_string(samples_per_identity));
  }
  if (!(kappa_floor >= 0.0)) {
    throw InvalidParameter("kappa_floor must be >= 0");
  }
  if (!(kappa_mu > kappa_floor)) {
    throw InvalidParameter("kappa_mu must exceed kappa_floor");
  }
  if (!(kappa_sigma >= 0.0)) {
    throw InvalidParameter("kappa_sigma must be >= 0");
  }
}

Embedding sample_uniform_direction(int dimension, Rng& rng) {
  if (dimension < 2) {
    throw InvalidParameter("sample_uniform_direction: dimension must be >= 2");
  }
  for (;;) {
    Embedding v = gaussian_vector(dimension, rng);
    const double n = v.norm();
    if (n >= kZeroNormTol) {
      return v / n;
    }
    // Astronomically unlikely; redraw keeps the direction well defined.
  }
}

double sample_kappa(double mu, double sigma, double floor, Rng& rng) {
  if (!(floor >= 0.0) || !(mu > floor) || !(sigma >= 0.0)) {
    throw InvalidParameter("sample_kappa: need mu > floor >= 0, sigma >= 0");
  }
  if (sigma == 0.0) {
    return mu;
  }
  for (;;) {
    const double k = mu + sigma * rng.normal();
    if (k >= floor) {
      return k;
    }
  }
}

Embedding sample_vmf(const Embedding& mean_direction, double kappa, Rng& rng) {
  if (!(kappa > 0.0)) {
    throw InvalidKappa("sample_vmf: kappa must be positive, got " +
                       std::to_string(kappa));
  }
  const int d = static_cast<int>(mean_direction.size());
  if (d < 2) {
    throw InvalidParameter("sample_vmf: dimension must be >= 2");
  }
  const Embedding mu = normalize(mean_direction);
  const double m = static_cast<double>(d - 1);

  // Envelope parameter b = (-2k + sqrt(4k^2 + m^2)) / m, evaluated in the
  // algebraically equal form m / (2k + sqrt(4k^2 + m^2)) which avoids the
  // cancellation of the direct form at large kappa.
  const double b = m / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m * m));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double log_env_x0 = std::log1p(-x0 * x0);

  double w = 0.0;
  for (;;) {
    const double z = rng.beta(0.5 * m, 0.5 * m);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform_pos();
    // Acceptance test kappa*w + m*log(1 - x0*w) - c >= log(u) with
    // c = kappa*x0 + m*log(1 - x0^2), grouped so the large-kappa terms
    // cancel before rounding.
    const double log_ratio =
        kappa * (w - x0) + m * (std::log1p(-x0 * w) - log_env_x0);
    if (log_ratio >= std::log(u)) {
      break;
    }
  }

  // Tangent direction uniform on the sphere orthogonal to the first axis.
  Embedding y(d);
  y[0] = w;
  const double sin_part = std::sqrt(std::max(0.0, 1.0 - w * w));
  if (d == 2) {
    y[1] = (rng.next_u64() & 1u) ? sin_part : -sin_part;
  } else {
    Embedding tangent = sample_uniform_direction(d - 1, rng);
    for (int i = 1; i < d; ++i) {
      y[i] = sin_part * tangent[i - 1];
    }
  }

  // Householder reflection taking the first axis onto mu.
  Embedding axis = -mu;
  axis[0] += 1.0;  // axis = e0 - mu
  const double axis_sq = axis.squaredNorm();
  if (axis_sq < kZeroNormTol) {
    return normalize(y);  // mu is (numerically) the first axis already
  }
  const double scale = 2.0 * axis.dot(y) / axis_sq;
  Embedding result = y - scale * axis;
  return normalize(result);
}

std::vector<IdentityCluster> simulate_clusters(const SimulationParams& params) {
  params.validate();
  const std::size_t n = static_cast<std::size_t>(params.n_identities);
  std::vector<IdentityCluster> clusters(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng = Rng::substream(params.seed, i);
    clusters[i] = draw_cluster(params, i, rng);
  });
  return clusters;
}

Dataset simulate_population(const SimulationParams& params) {
  params.validate();
  const std::size_t n = static_cast<std::size_t>(params.n_identities);
  const std::size_t spi = static_cast<std::size_t>(params.samples_per_identity);
  const std::size_t sample_width = std::to_string(spi - 1).size();

  Dataset ds;
  ds.dimension = params.dimension;
  ds.records.resize(n * spi);
  parallel_for(n, [&](std::size_t i) {
    Rng rng = Rng::substream(params.seed, i);
    const IdentityCluster cluster = draw_cluster(params, i, rng);
    for (std::size_t j = 0; j < spi; ++j) {
      SampleRecord& rec = ds.records[i * spi + j];
      rec.subject_id = cluster.subject_id;
      rec.sample_id = padded_id("s", j, sample_width);
      rec.role = j == 0 ? Role::enroll : Role::probe;
      rec.kind = SampleKind::bonafide;
      rec.embedding = sample_vmf(cluster.mean_direction, cluster.kappa, rng);
    }
  });
  return ds;
}

}  // namespace morphguard

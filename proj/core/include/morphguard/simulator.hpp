// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "morphguard/dataset.hpp"
#include "morphguard/embedding.hpp"
#include "morphguard/rng.hpp"

namespace morphguard {

/// Parameters of a simulated recognition population.
///
/// Identity clusters live on the unit (dimension-1)-sphere: each identity
/// gets a uniformly random mean direction and a von Mises-Fisher
/// concentration drawn from a normal truncated below at kappa_floor.
struct SimulationParams {
  int dimension = 128;
  int n_identities = 250;
  int samples_per_identity = 25;
  double kappa_mu = 250.0;
  double kappa_sigma = 50.0;
  double kappa_floor = 1.0;
  std::uint64_t seed = 0;

  /// Throws InvalidParameter if any field is out of range.
  void validate() const;
};

/// One simulated identity cluster.
struct IdentityCluster {
  std::string subject_id;
  Embedding mean_direction;  // unit norm
  double kappa = 0.0;        // > 0
};

/// Uniform direction on the unit (dimension-1)-sphere.  dimension >= 2.
Embedding sample_uniform_direction(int dimension, Rng& rng);

/// Normal(mu, sigma) truncated below at floor, via redraw.  Requires
/// mu > floor >= 0 and sigma >= 0; sigma == 0 returns mu.
double sample_kappa(double mu, double sigma, double floor, Rng& rng);

/// von Mises-Fisher deviate around mean_direction (unit norm, dim >= 2)
/// with concentration kappa > 0.  Rejection sampling of the cosine against
/// a transformed-beta envelope, a uniform tangent direction, and a
/// Householder reflection from the first axis onto the mean.
/// Throws InvalidKappa or InvalidParameter.
Embedding sample_vmf(const Embedding& mean_direction, double kappa, Rng& rng);

/// Draws the full population: n_identities clusters, samples_per_identity
/// draws each.  Record order is identity-major; the first sample of each
/// identity is the enrollment, the rest are probes.  Identities use
/// independent RNG substreams of (seed, identity index), so results do not
/// depend on the thread count.
Dataset simulate_population(const SimulationParams& params);

/// The clusters simulate_population(params) draws its samples from, in
/// subject order (exposed for diagnostics and tests).
std::vector<IdentityCluster> simulate_clusters(const SimulationParams& params);

}  // namespace morphguard

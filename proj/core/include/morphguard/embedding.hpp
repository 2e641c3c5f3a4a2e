// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include <Eigen/Core>

#include "morphguard/errors.hpp"

namespace morphguard {

/// A point in a face-recognition latent space.  Operations that require a
/// direction (angle, morphing, cluster means) normalize internally, so an
/// Embedding is not forced to unit norm by the type.
using Embedding = Eigen::VectorXd;

/// Norms below this are treated as zero (the direction is undefined).
inline constexpr double kZeroNormTol = 1e-12;

/// Tolerance used when a unit-norm input is a stated precondition.
inline constexpr double kUnitNormTol = 1e-9;

/// Returns v scaled to unit norm.  Throws ZeroVector if the norm of v is
/// below kZeroNormTol or not finite.
Embedding normalize(const Embedding& v);

/// True if v has unit norm within kUnitNormTol.
bool is_unit(const Embedding& v);

/// Angle in radians between the directions of u and v, in [0, pi].
/// Scale-invariant: inputs are normalized before the inner product, and the
/// inner product is clamped to [-1, 1] before acos.  Throws
/// DimensionMismatch or ZeroVector.
double angle(const Embedding& u, const Embedding& v);

/// angle() for inputs already known to have unit norm (skips the norm
/// computations; still clamps).  Callers must guarantee the precondition.
double angle_unit(const Embedding& u, const Embedding& v);

/// Component-wise mean of the samples.  The result is intentionally not
/// normalized.  Throws EmptyInput or DimensionMismatch.
Embedding average_embedding(std::span<const Embedding> samples);

}  // namespace morphguard

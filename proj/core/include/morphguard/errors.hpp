// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace morphguard {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MORPHGUARD_DEFINE_ERROR(name) \
  class name : public Error {         \
   public:                            \
    using Error::Error;               \
  };

// Embedding and dataset errors.
MORPHGUARD_DEFINE_ERROR(ZeroVector)
MORPHGUARD_DEFINE_ERROR(DimensionMismatch)
MORPHGUARD_DEFINE_ERROR(EmptyInput)
MORPHGUARD_DEFINE_ERROR(ParseError)
MORPHGUARD_DEFINE_ERROR(DuplicateSample)
MORPHGUARD_DEFINE_ERROR(InconsistentDimension)

// Simulation errors.
MORPHGUARD_DEFINE_ERROR(InvalidKappa)
MORPHGUARD_DEFINE_ERROR(InvalidParameter)

// Morph generation errors.
MORPHGUARD_DEFINE_ERROR(TooFewSubjects)
MORPHGUARD_DEFINE_ERROR(AntipodalPair)
MORPHGUARD_DEFINE_ERROR(MissingEnrollment)

// Scoring and metric errors.
MORPHGUARD_DEFINE_ERROR(MissingSubject)
MORPHGUARD_DEFINE_ERROR(EmptyProbeSet)
MORPHGUARD_DEFINE_ERROR(EmptyPopulation)
MORPHGUARD_DEFINE_ERROR(MalformedAttack)
MORPHGUARD_DEFINE_ERROR(AttackIdMismatch)
MORPHGUARD_DEFINE_ERROR(InvalidRC)
MORPHGUARD_DEFINE_ERROR(InvalidThresholdOrder)

// Filesystem failures that are not parse errors.
MORPHGUARD_DEFINE_ERROR(IoError)

#undef MORPHGUARD_DEFINE_ERROR

}  // namespace morphguard

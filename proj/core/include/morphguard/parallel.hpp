// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace morphguard {

/// Number of worker threads to use: the MORPHGUARD_THREADS environment
/// variable when set to a positive integer, otherwise the hardware
/// concurrency (at least 1).
std::size_t thread_budget();

/// Runs body(i) for i in [0, count).  Iterations may execute on multiple
/// threads; the body must only touch state owned by iteration i.  The first
/// exception thrown by any iteration is rethrown on the calling thread.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body);

}  // namespace morphguard

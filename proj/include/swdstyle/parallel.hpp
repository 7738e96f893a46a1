// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace swdstyle {

/// Caps the number of worker threads used by library kernels. 0 restores the
/// default, which honours the SWDSTYLE_THREADS environment variable.
void set_max_threads(std::size_t n);
std::size_t max_threads();

/// Runs body(i) for i in [0, n). Each index must write only its own output
/// slot; callers reduce afterwards in index order so results do not depend on
/// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace swdstyle

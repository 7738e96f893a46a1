// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iomanip>
#include <sstream>
#include <string>

namespace swdstyle {

/// Shortest of fixed/scientific with 9 significant digits (printf "%.9g").
inline std::string fmt9(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

}  // namespace swdstyle

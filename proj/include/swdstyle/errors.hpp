// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace swdstyle {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed files or streams: bad magic, truncated payloads, unsupported
/// pixel formats.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Operating-system level I/O failure (open, read, write).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Shapes that do not line up: channel widths, pixel counts, tile sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Arguments that are well formed but outside an operation's domain, e.g.
/// inconsistent region masks or an empty view set.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A loss or gradient became non-finite during optimization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A pluggable component violated its contract (e.g. a stylizer changed the
/// tile dimensions).
class ContractError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_dimension(const std::string& what);
[[noreturn]] void throw_domain(const std::string& what);

}  // namespace swdstyle

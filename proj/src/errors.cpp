// Copyright 2026 The swdstyle Authors
// SPDX-License-Identifier: Apache-2.0

#include "swdstyle/errors.hpp"

namespace swdstyle {

void throw_dimension(const std::string& what) { throw DimensionError(what); }

void throw_domain(const std::string& what) { throw DomainError(what); }

}  // namespace swdstyle

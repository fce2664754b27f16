//===- StructuralEqual.h - IR isomorphism check -----------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"

#include <string>

namespace mir {

/// True if `a` and `b` are isomorphic: same opcodes, attributes, types and
/// region/block shapes, with a consistent bijection between values and
/// blocks. Value identities, printed names and locations are ignored.
/// When `why` is non-null it receives a short description of the first
/// difference.
bool structurallyEqual(Operation *a, Operation *b, std::string *why = nullptr);

} // namespace mir

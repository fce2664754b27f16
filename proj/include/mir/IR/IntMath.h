//===- IntMath.h - Fixed-width integer helpers ------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Attributes.h"
#include "mir/IR/Types.h"

namespace mir {

/// Bit width of an integer or index type (index is 64 bits).
unsigned getIntegerBitWidth(Type type);

/// Wraps `value` to `width` bits. i1 values are 0 or 1; wider values are
/// sign-extended two's complement.
BigInt wrapInteger(const BigInt &value, unsigned width);

/// Signed integer predicates shared by folding and interpretation.
bool evaluateIntPredicate(std::string_view predicate, const BigInt &lhs, const BigInt &rhs);
/// Float predicates (`oeq`, `olt`, `une`, ...).
bool evaluateFloatPredicate(std::string_view predicate, double lhs, double rhs);
bool isIntPredicate(std::string_view predicate);
bool isFloatPredicate(std::string_view predicate);

} // namespace mir

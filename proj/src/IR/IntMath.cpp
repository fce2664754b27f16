//===- IntMath.cpp - Fixed-width integer helpers --------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/IntMath.h"

#include <array>
#include <cmath>

namespace mir {

unsigned getIntegerBitWidth(Type type) { return type.isIndex() ? 64 : type.getWidth(); }

BigInt wrapInteger(const BigInt &value, unsigned width) {
  BigInt modulus = BigInt(1) << width;
  BigInt r = value % modulus;
  if (r < 0)
    r += modulus;
  if (width > 1 && r >= (modulus >> 1))
    r -= modulus;
  return r;
}

static constexpr std::array<std::string_view, 6> kIntPredicates = {"eq",  "ne",  "slt",
                                                                   "sle", "sgt", "sge"};
static constexpr std::array<std::string_view, 16> kFloatPredicates = {
    "false", "oeq", "ogt", "oge", "olt", "ole", "one", "ord",
    "ueq",   "ugt", "uge", "ult", "ule", "une", "uno", "true"};

bool isIntPredicate(std::string_view predicate) {
  for (auto p : kIntPredicates)
    if (p == predicate)
      return true;
  return false;
}

bool isFloatPredicate(std::string_view predicate) {
  for (auto p : kFloatPredicates)
    if (p == predicate)
      return true;
  return false;
}

bool evaluateIntPredicate(std::string_view p, const BigInt &lhs, const BigInt &rhs) {
  if (p == "eq")
    return lhs == rhs;
  if (p == "ne")
    return lhs != rhs;
  if (p == "slt")
    return lhs < rhs;
  if (p == "sle")
    return lhs <= rhs;
  if (p == "sgt")
    return lhs > rhs;
  return lhs >= rhs;
}

bool evaluateFloatPredicate(std::string_view p, double lhs, double rhs) {
  bool unordered = std::isnan(lhs) || std::isnan(rhs);
  if (p == "false")
    return false;
  if (p == "true")
    return true;
  if (p == "ord")
    return !unordered;
  if (p == "uno")
    return unordered;
  bool result;
  std::string_view base = p.substr(1);
  if (base == "eq")
    result = lhs == rhs;
  else if (base == "gt")
    result = lhs > rhs;
  else if (base == "ge")
    result = lhs >= rhs;
  else if (base == "lt")
    result = lhs < rhs;
  else if (base == "le")
    result = lhs <= rhs;
  else
    result = lhs != rhs;
  if (unordered)
    return p[0] == 'u';
  return result;
}

} // namespace mir

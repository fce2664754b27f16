//===- DialectTable.h - Declarative op-definition tables --------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Dialects describe their ops in a small text format that is loaded into the
// context's registry at startup:
//
//   dialect arith
//   op arith.addi traits(NoSideEffect, Commutative, SameOperandsAndResultType)
//       operands(integer, same(0)) results(same(0)) hooks(fold=addi)
//   op arith.cmpi traits(NoSideEffect) operands(integer, same(0))
//       results(type(i1)) attrs(predicate: string)
//
// Clauses: traits(...), operands(...), results(...), attrs(name: kind[?]),
// regions(N), successors(N), hooks(kind=id, ...). A trailing `...` after
// the last operand/result constraint makes it variadic. Type constraints:
// any, integer, float, index, memref, tensor, function, same(N), type(T).
// Hook identifiers are resolved against a HookTable supplied in C++.
// `#` starts a comment.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Context.h"

#include <map>
#include <string>
#include <string_view>

namespace mir {

struct HookTable {
  std::map<std::string, VerifyHook> verify;
  std::map<std::string, FoldHook> fold;
  std::map<std::string, CanonicalizeHook> canonicalize;
  std::map<std::string, PrintHook> print;
  std::map<std::string, ParseHook> parse;
};

/// Registers every dialect and op in `table`. Throws ValidationError on
/// syntax errors, unknown hook identifiers, or double registration.
void loadDialectTable(Context &ctx, std::string_view table, const HookTable &hooks);

} // namespace mir

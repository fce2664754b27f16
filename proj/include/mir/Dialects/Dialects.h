//===- Dialects.h - Shipped dialects ----------------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Builder.h"
#include "mir/IR/Context.h"

#include <span>
#include <vector>

namespace mir {

/// Registers builtin, func, arith, cf, memref, affine, ml and pat. Throws
/// ValidationError if any of them is already registered.
void registerAllDialects(Context &ctx);

void registerBuiltinDialect(Context &ctx);
void registerFuncDialect(Context &ctx);
void registerArithDialect(Context &ctx);
void registerCFDialect(Context &ctx);
void registerMemRefDialect(Context &ctx);
void registerAffineDialect(Context &ctx);
void registerMLDialect(Context &ctx);

/// Builds an empty `builtin.module` (with its terminator).
std::unique_ptr<Operation> createModule(Context &ctx, Location loc = Location());

//===----------------------------------------------------------------------===//
// Affine helpers
//===----------------------------------------------------------------------===//

/// Induction variable of an enclosing `affine.for`, or a valid symbol.
bool isValidAffineDim(Value *value);
/// A constant, a value defined at the top level of the enclosing function,
/// or an `affine.apply` of symbols.
bool isValidAffineSymbol(Value *value);

/// Emits arith ops at the builder's insertion point computing every result
/// of `map` on `operands` (dims then symbols, all index-typed).
std::vector<Value *> materializeAffineMap(OpBuilder &builder, const AffineMap &map,
                                          std::span<Value *const> operands, Location loc);

/// Operand ranges of an `affine.for`.
struct AffineForBounds {
  AffineMap lower, upper;
  std::vector<Value *> lowerOperands, upperOperands;
  int64_t step;
};
AffineForBounds getAffineForBounds(Operation *forOp);

} // namespace mir

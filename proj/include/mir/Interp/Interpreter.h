//===- Interpreter.h - Reference interpreter --------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Executes func, arith, cf, memref, affine and ml ops directly on the IR.
// Integers wrap to their type width; f32 arithmetic is computed in double
// and rounded to f32 after every op.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mir {

/// Raised when execution cannot continue (out-of-bounds access, step budget,
/// use after dealloc, ...).
class InterpTrap : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Buffer;

/// A scalar or a buffer reference, tagged with its static type.
struct RuntimeValue {
  Type type;
  std::variant<__int128, double, std::shared_ptr<Buffer>> data;

  static RuntimeValue integer(Type type, __int128 v) { return {type, v}; }
  static RuntimeValue floating(Type type, double v) { return {type, v}; }

  __int128 getInt() const { return std::get<__int128>(data); }
  double getFloat() const { return std::get<double>(data); }
  const std::shared_ptr<Buffer> &getBuffer() const { return std::get<std::shared_ptr<Buffer>>(data); }

  /// Same type and bit-identical contents (buffers compared by value).
  bool operator==(const RuntimeValue &other) const;
};

struct Buffer {
  std::vector<int64_t> shape;
  Type elementType;
  /// Row-major scalars.
  std::vector<RuntimeValue> data;
  bool freed = false;
};

/// Wraps to the width of `type` (index is 64 bits, i1 is 0 or 1). Traps for
/// widths above 64.
__int128 wrapToType(__int128 value, Type type);
/// Rounds to the precision of `type`.
double roundToType(double value, Type type);

struct InterpLimits {
  uint64_t maxSteps = 10'000'000;
  unsigned maxCallDepth = 128;
};

class Interpreter {
public:
  explicit Interpreter(Operation *module, InterpLimits limits = {});

  /// Runs `@name` on `args`. Throws InterpTrap.
  std::vector<RuntimeValue> run(std::string_view name, std::vector<RuntimeValue> args);

  uint64_t getSteps() const { return steps_; }
  /// Buffers allocated and never deallocated.
  size_t getLiveAllocations() const;

private:
  struct Frame;
  std::vector<RuntimeValue> call(Operation *func, std::vector<RuntimeValue> args);
  /// Runs a region until its terminator leaves it; returns the operands of
  /// `func.return` or `affine.yield`.
  std::vector<RuntimeValue> runRegion(Frame &frame, Region &region,
                                      std::vector<RuntimeValue> entryArgs);
  void execute(Frame &frame, Operation *op);
  void runFor(Frame &frame, Operation *op);
  void tick();

  Operation *module_;
  InterpLimits limits_;
  uint64_t steps_ = 0;
  unsigned depth_ = 0;
  std::vector<std::weak_ptr<Buffer>> allocations_;
};

std::vector<RuntimeValue> runFunction(Operation *module, std::string_view name,
                                      std::vector<RuntimeValue> args, InterpLimits limits = {});

/// `3:i32`, `-2.5:f32`, `[1,2,3]:memref<3xi32>` (buffers listed row-major).
/// Throws ValidationError.
RuntimeValue parseRuntimeValue(Context &ctx, std::string_view text);
/// Whitespace-separated literals.
std::vector<RuntimeValue> parseRuntimeValues(Context &ctx, std::string_view text);
std::string formatRuntimeValue(const RuntimeValue &value);

} // namespace mir

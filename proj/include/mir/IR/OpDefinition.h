//===- OpDefinition.h - Op definitions, traits and hooks --------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// An OpDefinition describes a registered opcode: its traits, declarative
// operand/result/attribute constraints, and optional C++ hooks for custom
// verification, folding, canonicalization and custom assembly syntax.
// Unregistered opcodes have no definition and no traits.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Attributes.h"
#include "mir/IR/Diagnostic.h"
#include "mir/IR/Types.h"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mir {

class Block;
class Context;
class OpAsmParser;
class OpAsmPrinter;
class OpBuilder;
class Operation;
class Region;
class RewritePattern;
class Value;
struct DialectDescriptor;
struct OperationState;

enum class Trait : uint32_t {
  Terminator = 1u << 0,
  IsolatedFromAbove = 1u << 1,
  NoSideEffect = 1u << 2,
  Commutative = 1u << 3,
  SameOperandsAndResultType = 1u << 4,
  SymbolDefiner = 1u << 5,
  SymbolTableHolder = 1u << 6,
  SingleRegionSingleBlock = 1u << 7,
  ConstantLike = 1u << 8,
};

std::optional<Trait> traitFromName(std::string_view name);
std::string_view traitName(Trait trait);

class TraitSet {
public:
  TraitSet() = default;
  TraitSet(std::initializer_list<Trait> traits) {
    for (Trait t : traits)
      add(t);
  }
  void add(Trait t) { bits_ |= static_cast<uint32_t>(t); }
  bool has(Trait t) const { return (bits_ & static_cast<uint32_t>(t)) != 0; }
  uint32_t bits() const { return bits_; }

private:
  uint32_t bits_ = 0;
};

struct TypeConstraint {
  enum class Kind { Any, IntegerLike, FloatLike, Index, MemRef, Tensor, Function, SameAs, Exact };
  Kind kind = Kind::Any;
  /// Operand slot for SameAs.
  unsigned slot = 0;
  /// Required type for Exact.
  Type exact;

  /// Checks `type`; `operandTypes` resolves SameAs references.
  bool matches(Type type, std::span<const Type> operandTypes) const;
  std::string describe() const;
};

struct AttrConstraint {
  std::string name;
  /// Required kind; nullopt accepts any attribute.
  std::optional<AttrKind> kind;
  bool required = true;
};

/// One folded result: nothing, an existing value, or a constant attribute.
using OpFoldResult = std::variant<std::monostate, Value *, Attribute>;

/// Appends error diagnostics for violations.
using VerifyHook = std::function<void(Operation &, DiagnosticList &)>;
/// `constOperands[i]` is the constant value attribute of operand i, or null.
/// Returns true and fills one entry per result on success.
using FoldHook = std::function<bool(Operation &, std::span<const Attribute> constOperands,
                                    std::vector<OpFoldResult> &results)>;
using CanonicalizeHook =
    std::function<void(Context &, std::vector<std::unique_ptr<RewritePattern>> &)>;
/// Returns false when the op does not fit its custom form; the printer then
/// falls back to the generic form.
using PrintHook = std::function<bool(Operation &, OpAsmPrinter &)>;
/// Fills `state` from the custom form; reports errors through the parser.
using ParseHook = std::function<void(OpAsmParser &, OperationState &)>;

struct OpDefinition {
  std::string name;
  TraitSet traits;
  std::vector<TypeConstraint> operands;
  /// When set, the last operand constraint applies to zero or more operands.
  bool variadicOperands = false;
  std::vector<TypeConstraint> results;
  bool variadicResults = false;
  std::vector<AttrConstraint> attributes;
  std::optional<unsigned> numRegions;
  std::optional<unsigned> numSuccessors;

  VerifyHook verify;
  FoldHook fold;
  CanonicalizeHook canonicalize;
  PrintHook print;
  ParseHook parse;

  const DialectDescriptor *dialect = nullptr;

  bool hasTrait(Trait t) const { return traits.has(t); }
};

/// Dialect-level hooks. A dialect without `isLegalToInline` has no inlining
/// interface; calls into its ops are never inlined.
struct DialectDescriptor {
  std::string name;

  /// Builds a constant op producing `value` of `type` at the builder's
  /// insertion point; returns null if the dialect cannot materialize it.
  std::function<Operation *(OpBuilder &, Attribute value, Type type, Location loc)>
      materializeConstant;

  std::function<bool(Operation &op, Region &dest)> isLegalToInline;
  /// Single-block inlining: the values that replace the call results.
  std::function<std::vector<Value *>(Operation &terminator)> terminatorValues;
  /// Multi-block inlining: replace `terminator` with a branch to
  /// `continuation`, passing the returned values as block arguments.
  std::function<void(Operation &terminator, Block &continuation)> rewriteTerminator;

  /// Verifies a discardable attribute named `<dialect>.<name>`.
  std::function<void(Operation &, const NamedAttribute &, DiagnosticList &)>
      verifyAttribute;
};

} // namespace mir

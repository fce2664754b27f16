//===- ArithDialect.cpp - Integer and float arithmetic --------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "DialectUtils.h"
#include "mir/Dialects/Dialects.h"
#include "mir/IR/IntMath.h"

#include <optional>

namespace mir {
using detail::emitOpError;

static const char *const kArithTable = R"(
dialect arith
op arith.constant traits(ConstantLike, NoSideEffect) operands() results(any) attrs(value: any)
  hooks(verify=constant, print=constant, parse=constant)

op arith.addi traits(NoSideEffect, Commutative, SameOperandsAndResultType)
  operands(integer, integer) results(integer) hooks(fold=addi)
op arith.subi traits(NoSideEffect, SameOperandsAndResultType)
  operands(integer, integer) results(integer) hooks(fold=subi)
op arith.muli traits(NoSideEffect, Commutative, SameOperandsAndResultType)
  operands(integer, integer) results(integer) hooks(fold=muli)
# Division may trap, so it is not side-effect free.
op arith.divsi traits(SameOperandsAndResultType)
  operands(integer, integer) results(integer) hooks(fold=divsi)
op arith.remsi traits(SameOperandsAndResultType)
  operands(integer, integer) results(integer) hooks(fold=remsi)
op arith.cmpi traits(NoSideEffect) operands(integer, same(0)) results(type(i1))
  attrs(predicate: string) hooks(verify=cmpi, fold=cmpi)

op arith.addf traits(NoSideEffect, Commutative, SameOperandsAndResultType)
  operands(float, float) results(float) hooks(fold=addf)
op arith.subf traits(NoSideEffect, SameOperandsAndResultType)
  operands(float, float) results(float) hooks(fold=subf)
op arith.mulf traits(NoSideEffect, Commutative, SameOperandsAndResultType)
  operands(float, float) results(float) hooks(fold=mulf)
op arith.cmpf traits(NoSideEffect) operands(float, same(0)) results(type(i1))
  attrs(predicate: string) hooks(verify=cmpf, fold=cmpf)

op arith.select traits(NoSideEffect) operands(type(i1), any, same(1)) results(same(1))
  hooks(fold=select)
)";

static std::optional<BigInt> getIntConstant(Attribute attr) {
  if (!attr || !attr.isa(AttrKind::Integer))
    return std::nullopt;
  return wrapInteger(attr.getInt(), getIntegerBitWidth(attr.getType()));
}

static std::optional<double> getFloatConstant(Attribute attr) {
  if (!attr || !attr.isa(AttrKind::Float))
    return std::nullopt;
  return attr.getFloat();
}

static Attribute makeInt(Operation &op, const BigInt &value) {
  Type type = op.getResult(0)->getType();
  return op.getContext().getIntegerAttr(type, wrapInteger(value, getIntegerBitWidth(type)));
}

static bool foldTo(std::vector<OpFoldResult> &results, OpFoldResult value) {
  results.push_back(value);
  return true;
}

using IntBinaryFn = std::optional<BigInt> (*)(const BigInt &, const BigInt &);

static bool foldIntConstants(Operation &op, std::span<const Attribute> c,
                             std::vector<OpFoldResult> &results, IntBinaryFn fn) {
  auto lhs = getIntConstant(c[0]), rhs = getIntConstant(c[1]);
  if (!lhs || !rhs)
    return false;
  std::optional<BigInt> value = fn(*lhs, *rhs);
  if (!value)
    return false;
  return foldTo(results, makeInt(op, *value));
}

static bool foldAddI(Operation &op, std::span<const Attribute> c,
                     std::vector<OpFoldResult> &results) {
  if (foldIntConstants(op, c, results,
                       [](const BigInt &a, const BigInt &b) -> std::optional<BigInt> {
                         return a + b;
                       }))
    return true;
  if (getIntConstant(c[1]) == BigInt(0))
    return foldTo(results, op.getOperand(0));
  if (getIntConstant(c[0]) == BigInt(0))
    return foldTo(results, op.getOperand(1));
  return false;
}

static bool foldSubI(Operation &op, std::span<const Attribute> c,
                     std::vector<OpFoldResult> &results) {
  if (op.getOperand(0) == op.getOperand(1))
    return foldTo(results, makeInt(op, 0));
  if (foldIntConstants(op, c, results,
                       [](const BigInt &a, const BigInt &b) -> std::optional<BigInt> {
                         return a - b;
                       }))
    return true;
  if (getIntConstant(c[1]) == BigInt(0))
    return foldTo(results, op.getOperand(0));
  return false;
}

static bool foldMulI(Operation &op, std::span<const Attribute> c,
                     std::vector<OpFoldResult> &results) {
  if (foldIntConstants(op, c, results,
                       [](const BigInt &a, const BigInt &b) -> std::optional<BigInt> {
                         return a * b;
                       }))
    return true;
  for (unsigned i = 0; i < 2; ++i) {
    auto value = getIntConstant(c[i]);
    if (value == BigInt(0))
      return foldTo(results, makeInt(op, 0));
    if (value == BigInt(1))
      return foldTo(results, op.getOperand(1 - i));
  }
  return false;
}

static bool foldDivSI(Operation &op, std::span<const Attribute> c,
                      std::vector<OpFoldResult> &results) {
  if (foldIntConstants(op, c, results,
                       [](const BigInt &a, const BigInt &b) -> std::optional<BigInt> {
                         if (b == 0)
                           return std::nullopt;
                         return a / b;
                       }))
    return true;
  if (getIntConstant(c[1]) == BigInt(1))
    return foldTo(results, op.getOperand(0));
  return false;
}

static bool foldRemSI(Operation &op, std::span<const Attribute> c,
                      std::vector<OpFoldResult> &results) {
  return foldIntConstants(op, c, results,
                          [](const BigInt &a, const BigInt &b) -> std::optional<BigInt> {
                            if (b == 0)
                              return std::nullopt;
                            return a % b;
                          });
}

static bool foldCmpI(Operation &op, std::span<const Attribute> c,
                     std::vector<OpFoldResult> &results) {
  Attribute predAttr = op.getAttr("predicate");
  if (!predAttr || !predAttr.isa(AttrKind::String) || !isIntPredicate(predAttr.getString()))
    return false;
  const std::string &pred = predAttr.getString();
  Context &ctx = op.getContext();
  if (op.getOperand(0) == op.getOperand(1))
    return foldTo(results, ctx.getBoolAttr(pred == "eq" || pred == "sle" || pred == "sge"));
  auto lhs = getIntConstant(c[0]), rhs = getIntConstant(c[1]);
  if (!lhs || !rhs)
    return false;
  return foldTo(results, ctx.getBoolAttr(evaluateIntPredicate(pred, *lhs, *rhs)));
}

template <typename Fn>
static bool foldFloatBinary(Operation &op, std::span<const Attribute> c,
                            std::vector<OpFoldResult> &results, Fn fn) {
  auto lhs = getFloatConstant(c[0]), rhs = getFloatConstant(c[1]);
  if (!lhs || !rhs)
    return false;
  return foldTo(results, op.getContext().getFloatAttr(op.getResult(0)->getType(), fn(*lhs, *rhs)));
}

static bool foldCmpF(Operation &op, std::span<const Attribute> c,
                     std::vector<OpFoldResult> &results) {
  Attribute predAttr = op.getAttr("predicate");
  if (!predAttr || !predAttr.isa(AttrKind::String) || !isFloatPredicate(predAttr.getString()))
    return false;
  auto lhs = getFloatConstant(c[0]), rhs = getFloatConstant(c[1]);
  if (!lhs || !rhs)
    return false;
  return foldTo(results, op.getContext().getBoolAttr(
                             evaluateFloatPredicate(predAttr.getString(), *lhs, *rhs)));
}

static bool foldSelect(Operation &op, std::span<const Attribute> c,
                       std::vector<OpFoldResult> &results) {
  if (op.getOperand(1) == op.getOperand(2))
    return foldTo(results, op.getOperand(1));
  auto cond = getIntConstant(c[0]);
  if (!cond)
    return false;
  return foldTo(results, op.getOperand(*cond != 0 ? 1 : 2));
}

static void verifyConstant(Operation &op, DiagnosticList &diags) {
  Attribute value = op.getAttr("value");
  if (!value.isa(AttrKind::Integer) && !value.isa(AttrKind::Float)) {
    emitOpError(op, diags, "requires 'value' to be an integer or float attribute");
    return;
  }
  if (op.getNumResults() == 1 && value.getType() != op.getResult(0)->getType())
    emitOpError(op, diags, "'value' type " + value.getType().str() +
                               " does not match result type " +
                               op.getResult(0)->getType().str());
}

static void verifyPredicate(Operation &op, DiagnosticList &diags, bool isInt) {
  const std::string &pred = op.getAttr("predicate").getString();
  if (isInt ? !isIntPredicate(pred) : !isFloatPredicate(pred))
    emitOpError(op, diags, "unknown predicate '" + pred + "'");
}

static bool printConstant(Operation &op, OpAsmPrinter &p) {
  Attribute value = op.getAttr("value");
  if (op.getAttrs().size() != 1 || op.getNumResults() != 1 || !value ||
      !(value.isa(AttrKind::Integer) || value.isa(AttrKind::Float)) ||
      value.getType() != op.getResult(0)->getType())
    return false;
  p << " ";
  p.printAttribute(value);
  return true;
}

static void parseConstant(OpAsmParser &parser, OperationState &state) {
  Location loc = parser.getCurrentLocation();
  Attribute value = parser.parseAttribute();
  if (!value.isa(AttrKind::Integer) && !value.isa(AttrKind::Float))
    parser.emitError(loc, "expected an integer or float literal");
  state.addAttribute("value", value);
  state.types.push_back(value.getType());
}

void registerArithDialect(Context &ctx) {
  HookTable hooks;
  hooks.verify["constant"] = verifyConstant;
  hooks.verify["cmpi"] = [](Operation &op, DiagnosticList &d) { verifyPredicate(op, d, true); };
  hooks.verify["cmpf"] = [](Operation &op, DiagnosticList &d) { verifyPredicate(op, d, false); };
  hooks.print["constant"] = printConstant;
  hooks.parse["constant"] = parseConstant;
  hooks.fold["addi"] = foldAddI;
  hooks.fold["subi"] = foldSubI;
  hooks.fold["muli"] = foldMulI;
  hooks.fold["divsi"] = foldDivSI;
  hooks.fold["remsi"] = foldRemSI;
  hooks.fold["cmpi"] = foldCmpI;
  hooks.fold["addf"] = [](Operation &op, std::span<const Attribute> c,
                          std::vector<OpFoldResult> &r) {
    return foldFloatBinary(op, c, r, [](double a, double b) { return a + b; });
  };
  hooks.fold["subf"] = [](Operation &op, std::span<const Attribute> c,
                          std::vector<OpFoldResult> &r) {
    return foldFloatBinary(op, c, r, [](double a, double b) { return a - b; });
  };
  hooks.fold["mulf"] = [](Operation &op, std::span<const Attribute> c,
                          std::vector<OpFoldResult> &r) {
    return foldFloatBinary(op, c, r, [](double a, double b) { return a * b; });
  };
  hooks.fold["cmpf"] = foldCmpF;
  hooks.fold["select"] = foldSelect;
  loadDialectTable(ctx, kArithTable, hooks);

  DialectDescriptor *dialect = ctx.getMutableDialect("arith");
  dialect->isLegalToInline = [](Operation &, Region &) { return true; };
  dialect->materializeConstant = [](OpBuilder &builder, Attribute value, Type type,
                                    Location loc) -> Operation * {
    if (!(value.isa(AttrKind::Integer) || value.isa(AttrKind::Float)) || value.getType() != type)
      return nullptr;
    return builder.create("arith.constant", {}, {type}, {{"value", value}}, loc);
  };
}

} // namespace mir

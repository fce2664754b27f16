//===- AffineDialect.cpp - Affine loops and accesses ----------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "DialectUtils.h"
#include "mir/Dialects/Dialects.h"

#include <map>

namespace mir {
using detail::emitOpError;

static const char *const kAffineTable = R"(
dialect affine
op affine.for traits(SingleRegionSingleBlock) operands(index...) results()
  attrs(lower_bound: affine_map, upper_bound: affine_map, step: integer)
  regions(1) successors(0) hooks(verify=for, print=for, parse=for)
op affine.yield traits(Terminator) operands() results() regions(0) successors(0)
  hooks(verify=yield)
op affine.apply traits(NoSideEffect) operands(index...) results(index) attrs(map: affine_map)
  regions(0) successors(0) hooks(verify=apply, fold=apply)
op affine.load operands(memref, index...) results(any) attrs(map: affine_map)
  regions(0) successors(0) hooks(verify=load)
op affine.store operands(any, memref, index...) results() attrs(map: affine_map)
  regions(0) successors(0) hooks(verify=store)
)";

//===----------------------------------------------------------------------===//
// Dims and symbols
//===----------------------------------------------------------------------===//

static bool isFunctionTopLevel(Value *value) {
  Block *block = value->getParentBlock();
  Operation *parent = block ? block->getParentOp() : nullptr;
  return parent && parent->getName() == "func.func";
}

bool isValidAffineSymbol(Value *value) {
  if (Operation *def = value->getDefiningOp()) {
    if (def->hasTrait(Trait::ConstantLike))
      return true;
    if (def->getName() == "affine.apply") {
      for (Value *operand : def->getOperands())
        if (!isValidAffineSymbol(operand))
          return false;
      return true;
    }
  }
  return isFunctionTopLevel(value);
}

bool isValidAffineDim(Value *value) {
  if (isValidAffineSymbol(value))
    return true;
  if (value->isBlockArgument()) {
    Operation *parent = value->getOwnerBlock()->getParentOp();
    return parent && parent->getName() == "affine.for";
  }
  if (Operation *def = value->getDefiningOp(); def && def->getName() == "affine.apply") {
    for (Value *operand : def->getOperands())
      if (!isValidAffineDim(operand))
        return false;
    return true;
  }
  return false;
}

/// Checks `operands` against the dim/symbol split of `map`.
static void verifyMapOperands(Operation &op, DiagnosticList &diags, const AffineMap &map,
                              std::span<Value *const> operands, const std::string &what) {
  if (operands.size() != map.getNumInputs()) {
    emitOpError(op, diags, what + " expects " + std::to_string(map.getNumInputs()) +
                               " operands, got " + std::to_string(operands.size()));
    return;
  }
  for (unsigned i = 0; i < operands.size(); ++i) {
    bool isDim = i < map.getNumDims();
    if (isDim ? !isValidAffineDim(operands[i]) : !isValidAffineSymbol(operands[i])) {
      emitOpError(op, diags, "operand #" + std::to_string(i) + " of " + what +
                                 " is not a valid affine " + (isDim ? "dimension" : "symbol"));
      return;
    }
  }
}

AffineForBounds getAffineForBounds(Operation *forOp) {
  AffineForBounds b;
  b.lower = forOp->getAttr("lower_bound").getAffineMap();
  b.upper = forOp->getAttr("upper_bound").getAffineMap();
  b.step = forOp->getAttr("step").getInt64();
  std::vector<Value *> operands = forOp->getOperands();
  unsigned n = b.lower.getNumInputs();
  b.lowerOperands.assign(operands.begin(), operands.begin() + std::min<size_t>(n, operands.size()));
  if (n < operands.size())
    b.upperOperands.assign(operands.begin() + n, operands.end());
  return b;
}

//===----------------------------------------------------------------------===//
// Verification
//===----------------------------------------------------------------------===//

static void verifyFor(Operation &op, DiagnosticList &diags) {
  AffineForBounds b = getAffineForBounds(&op);
  if (b.step <= 0 || op.getAttr("step").getInt() != b.step) {
    emitOpError(op, diags, "expects a positive 'step'");
    return;
  }
  if (b.lower.getNumResults() == 0 || b.upper.getNumResults() == 0) {
    emitOpError(op, diags, "bound maps must have at least one result");
    return;
  }
  if (op.getNumOperands() != b.lower.getNumInputs() + b.upper.getNumInputs()) {
    emitOpError(op, diags, "expects " +
                               std::to_string(b.lower.getNumInputs() + b.upper.getNumInputs()) +
                               " bound operands, got " + std::to_string(op.getNumOperands()));
    return;
  }
  verifyMapOperands(op, diags, b.lower, b.lowerOperands, "lower bound");
  verifyMapOperands(op, diags, b.upper, b.upperOperands, "upper bound");
  Region &body = op.getRegion(0);
  if (body.size() != 1)
    return;
  Block *block = body.front();
  if (block->getNumArguments() != 1 || !block->getArgument(0)->getType().isIndex()) {
    emitOpError(op, diags, "body must have a single index argument");
    return;
  }
  if (block->empty() || block->back()->getName() != "affine.yield")
    emitOpError(op, diags, "body must end with 'affine.yield'");
}

static void verifyApply(Operation &op, DiagnosticList &diags) {
  const AffineMap &map = op.getAttr("map").getAffineMap();
  if (map.getNumResults() != 1) {
    emitOpError(op, diags, "map must have exactly one result");
    return;
  }
  verifyMapOperands(op, diags, map, op.getOperands(), "map");
}

static void verifyAffineAccess(Operation &op, DiagnosticList &diags, unsigned memrefIndex,
                               Type elementType) {
  const AffineMap &map = op.getAttr("map").getAffineMap();
  Type memref = op.getOperand(memrefIndex)->getType();
  if (map.getNumResults() != memref.getRank()) {
    emitOpError(op, diags, "map has " + std::to_string(map.getNumResults()) +
                               " results but the memref has rank " +
                               std::to_string(memref.getRank()));
    return;
  }
  if (elementType != memref.getElementType()) {
    emitOpError(op, diags, "element type " + elementType.str() + " does not match " +
                               memref.str());
    return;
  }
  std::vector<Value *> operands = op.getOperands();
  verifyMapOperands(op, diags, map,
                    std::span<Value *const>(operands).subspan(memrefIndex + 1), "index map");
}

//===----------------------------------------------------------------------===//
// Custom syntax
//===----------------------------------------------------------------------===//

static void printBound(OpAsmPrinter &p, Attribute mapAttr, std::span<Value *const> operands,
                       bool lower) {
  const AffineMap &map = mapAttr.getAffineMap();
  if (map.getNumResults() > 1)
    p << (lower ? "max " : "min ");
  if (map.isSingleConstant()) {
    p << map.getResult(0).getValue();
    return;
  }
  p.printAttribute(mapAttr);
  p << "(";
  p.printOperands(operands.subspan(0, map.getNumDims()));
  p << ")";
  if (map.getNumSymbols() > 0) {
    p << "[";
    p.printOperands(operands.subspan(map.getNumDims()));
    p << "]";
  }
}

static bool printFor(Operation &op, OpAsmPrinter &p) {
  if (op.getAttrs().size() != 3 || op.getNumRegions() != 1)
    return false;
  Attribute step = op.getAttr("step");
  Attribute lbAttr = op.getAttr("lower_bound"), ubAttr = op.getAttr("upper_bound");
  if (!step.isa(AttrKind::Integer) || !step.getType().isIndex() || !lbAttr.isa(AttrKind::AffineMap) ||
      !ubAttr.isa(AttrKind::AffineMap))
    return false;
  const AffineMap &lb = lbAttr.getAffineMap(), &ub = ubAttr.getAffineMap();
  if (lb.getNumResults() == 0 || ub.getNumResults() == 0 ||
      op.getNumOperands() != lb.getNumInputs() + ub.getNumInputs())
    return false;
  Region &body = op.getRegion(0);
  if (body.size() != 1)
    return false;
  Block *block = body.front();
  if (block->getNumArguments() != 1 || !block->getArgument(0)->getType().isIndex() ||
      block->empty())
    return false;
  Operation *term = block->back();
  if (term->getName() != "affine.yield" || term->getNumOperands() != 0 ||
      !term->getAttrs().empty())
    return false;

  AffineForBounds b = getAffineForBounds(&op);
  p << " ";
  p.printOperand(block->getArgument(0));
  p << " = ";
  printBound(p, lbAttr, b.lowerOperands, true);
  p << " to ";
  printBound(p, ubAttr, b.upperOperands, false);
  p << " step ";
  p << std::string_view(step.getInt().str());
  p << " ";
  p.printRegion(body, /*printEntryArgs=*/false, /*printTerminators=*/false);
  return true;
}

static void parseBound(OpAsmParser &parser, OperationState &state, const char *attrName,
                       bool lower) {
  Context &ctx = parser.getContext();
  Location loc = parser.getCurrentLocation();
  bool multi = parser.parseOptionalKeyword(lower ? "max" : "min");
  BigInt constant;
  if (!multi && parser.parseOptionalInteger(constant)) {
    if (constant > INT64_MAX || constant < INT64_MIN)
      parser.emitError(loc, "bound out of range");
    state.addAttribute(attrName,
                       ctx.getAffineMapAttr(AffineMap::constant(static_cast<int64_t>(constant))));
    return;
  }
  Attribute attr = parser.parseAttribute();
  if (!attr.isa(AttrKind::AffineMap))
    parser.emitError(loc, "expected an affine map bound");
  const AffineMap &map = attr.getAffineMap();
  if ((map.getNumResults() > 1) != multi)
    parser.emitError(loc, multi ? "'max'/'min' bounds need a multi-result map"
                                : "multi-result bound needs a 'max'/'min' prefix");
  parser.parsePunct("(");
  auto dims = parser.parseOperandList();
  parser.parsePunct(")");
  std::vector<OpAsmParser::UnresolvedOperand> syms;
  if (parser.parseOptionalPunct("[")) {
    syms = parser.parseOperandList();
    parser.parsePunct("]");
  }
  if (dims.size() != map.getNumDims() || syms.size() != map.getNumSymbols())
    parser.emitError(loc, "bound operand count does not match the map");
  for (auto *list : {&dims, &syms})
    for (const auto &operand : *list)
      state.operands.push_back(parser.resolveOperand(operand, ctx.getIndexType()));
  state.addAttribute(attrName, attr);
}

static void parseFor(OpAsmParser &parser, OperationState &state) {
  Context &ctx = parser.getContext();
  OpAsmParser::Argument iv{parser.parseOperand(), ctx.getIndexType()};
  parser.parsePunct("=");
  parseBound(parser, state, "lower_bound", true);
  parser.parseKeyword("to");
  parseBound(parser, state, "upper_bound", false);
  int64_t step = 1;
  if (parser.parseOptionalKeyword("step"))
    step = parser.parseInteger();
  state.addAttribute("step", ctx.getIndexAttr(step));
  parser.parseOptionalAttrDictWithKeyword(state.attributes);
  Region *body = state.addRegion();
  std::vector<OpAsmParser::Argument> args{iv};
  parser.parseRegion(*body, &args);
  Block *block = body->front();
  if (block->empty() || block->back()->getName() != "affine.yield")
    block->push_back(Operation::create(ctx, OperationState("affine.yield", iv.name.loc)));
}

//===----------------------------------------------------------------------===//
// Folding and expansion
//===----------------------------------------------------------------------===//

static bool foldApply(Operation &op, std::span<const Attribute> constants,
                      std::vector<OpFoldResult> &results) {
  const AffineMap &map = op.getAttr("map").getAffineMap();
  if (map.getNumResults() != 1)
    return false;
  AffineExpr expr = map.getResult(0);
  if (expr.getKind() == AffineExprKind::Dim)
    return results.push_back(op.getOperand(expr.getPosition())), true;
  if (expr.getKind() == AffineExprKind::Symbol)
    return results.push_back(op.getOperand(map.getNumDims() + expr.getPosition())), true;
  std::vector<int64_t> values;
  for (Attribute c : constants) {
    if (!c || !c.isa(AttrKind::Integer))
      return false;
    values.push_back(c.getInt64());
  }
  std::span<const int64_t> all(values);
  int64_t v = map.evaluate(all.subspan(0, map.getNumDims()), all.subspan(map.getNumDims()))[0];
  results.push_back(op.getContext().getIndexAttr(v));
  return true;
}

namespace {
class AffineExpander {
public:
  AffineExpander(OpBuilder &b, const AffineMap &map, std::span<Value *const> operands,
                 Location loc)
      : b_(b), map_(map), operands_(operands), loc_(std::move(loc)) {}

  Value *expand(const AffineExpr &e) {
    switch (e.getKind()) {
    case AffineExprKind::Constant:
      return constant(e.getValue());
    case AffineExprKind::Dim:
      return operands_[e.getPosition()];
    case AffineExprKind::Symbol:
      return operands_[map_.getNumDims() + e.getPosition()];
    case AffineExprKind::Add:
      return binary("arith.addi", expand(e.getLHS()), expand(e.getRHS()));
    case AffineExprKind::Mul:
      return binary("arith.muli", expand(e.getLHS()), expand(e.getRHS()));
    case AffineExprKind::Mod: {
      // r = a rem c; r < 0 ? r + c : r
      Value *c = expand(e.getRHS());
      Value *r = binary("arith.remsi", expand(e.getLHS()), c);
      Value *neg = cmp("slt", r, constant(0));
      return select(neg, binary("arith.addi", r, c), r);
    }
    case AffineExprKind::FloorDiv: {
      // a < 0 ? -1 - ((-1 - a) / c) : a / c
      Value *a = expand(e.getLHS());
      Value *c = expand(e.getRHS());
      Value *minusOne = constant(-1);
      Value *neg = cmp("slt", a, constant(0));
      Value *t = binary("arith.divsi", binary("arith.subi", minusOne, a), c);
      return select(neg, binary("arith.subi", minusOne, t), binary("arith.divsi", a, c));
    }
    case AffineExprKind::CeilDiv: {
      // a <= 0 ? -((-a) / c) : ((a - 1) / c) + 1
      Value *a = expand(e.getLHS());
      Value *c = expand(e.getRHS());
      Value *zero = constant(0), *one = constant(1);
      Value *nonPos = cmp("sle", a, zero);
      Value *t = binary("arith.divsi", binary("arith.subi", zero, a), c);
      Value *u = binary("arith.divsi", binary("arith.subi", a, one), c);
      return select(nonPos, binary("arith.subi", zero, t), binary("arith.addi", u, one));
    }
    }
    return nullptr;
  }

private:
  Value *constant(int64_t v) {
    auto it = constants_.find(v);
    if (it != constants_.end())
      return it->second;
    Context &ctx = b_.getContext();
    Value *result = b_.create("arith.constant", {}, {ctx.getIndexType()},
                              {{"value", ctx.getIndexAttr(v)}}, loc_)
                        ->getResult(0);
    return constants_[v] = result;
  }
  Value *binary(const char *name, Value *lhs, Value *rhs) {
    return b_.create(name, {lhs, rhs}, {b_.getIndexType()}, {}, loc_)->getResult(0);
  }
  Value *cmp(const char *pred, Value *lhs, Value *rhs) {
    Context &ctx = b_.getContext();
    return b_.create("arith.cmpi", {lhs, rhs}, {ctx.getI1Type()},
                     {{"predicate", ctx.getStringAttr(pred)}}, loc_)
        ->getResult(0);
  }
  Value *select(Value *cond, Value *a, Value *b) {
    return b_.create("arith.select", {cond, a, b}, {b_.getIndexType()}, {}, loc_)->getResult(0);
  }

  OpBuilder &b_;
  const AffineMap &map_;
  std::span<Value *const> operands_;
  Location loc_;
  std::map<int64_t, Value *> constants_;
};
} // namespace

std::vector<Value *> materializeAffineMap(OpBuilder &builder, const AffineMap &map,
                                          std::span<Value *const> operands, Location loc) {
  if (operands.size() != map.getNumInputs())
    throw IRError("affine map expects " + std::to_string(map.getNumInputs()) + " operands, got " +
                  std::to_string(operands.size()));
  AffineExpander expander(builder, map, operands, loc);
  std::vector<Value *> results;
  for (const AffineExpr &e : map.getResults())
    results.push_back(expander.expand(e));
  return results;
}

void registerAffineDialect(Context &ctx) {
  HookTable hooks;
  hooks.verify["for"] = verifyFor;
  hooks.verify["yield"] = [](Operation &op, DiagnosticList &diags) {
    Operation *parent = op.getParentOp();
    if (!parent || parent->getName() != "affine.for")
      emitOpError(op, diags, "expects parent op 'affine.for'");
  };
  hooks.verify["apply"] = verifyApply;
  hooks.verify["load"] = [](Operation &op, DiagnosticList &diags) {
    verifyAffineAccess(op, diags, 0, op.getResult(0)->getType());
  };
  hooks.verify["store"] = [](Operation &op, DiagnosticList &diags) {
    verifyAffineAccess(op, diags, 1, op.getOperand(0)->getType());
  };
  hooks.print["for"] = printFor;
  hooks.parse["for"] = parseFor;
  hooks.fold["apply"] = foldApply;
  loadDialectTable(ctx, kAffineTable, hooks);

  ctx.getMutableDialect("affine")->isLegalToInline = [](Operation &, Region &dest) {
    Operation *parent = dest.getParentOp();
    return parent && (parent->getName() == "func.func" ||
                      parent->getDialectNamespace() == "affine");
  };
}

} // namespace mir

//===- CFDialect.cpp - Unstructured control flow --------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "DialectUtils.h"
#include "mir/Dialects/Dialects.h"
#include "mir/Rewrite/PatternMatch.h"

namespace mir {

static const char *const kCFTable = R"(
dialect cf
op cf.br traits(Terminator) operands() results() regions(0) successors(1)
  hooks(print=br, parse=br)
op cf.cond_br traits(Terminator) operands(type(i1)) results() regions(0) successors(2)
  hooks(print=cond_br, parse=cond_br, canonicalize=cond_br)
)";

static bool printBr(Operation &op, OpAsmPrinter &p) {
  if (!op.getAttrs().empty())
    return false;
  p << " ";
  p.printSuccessorAndOperands(op, 0);
  return true;
}

static void parseBr(OpAsmParser &parser, OperationState &state) {
  parser.parseSuccessorAndOperands(state);
}

static bool printCondBr(Operation &op, OpAsmPrinter &p) {
  if (!op.getAttrs().empty() || op.getNumOperands() != 1)
    return false;
  p << " ";
  p.printOperand(op.getOperand(0));
  p << ", ";
  p.printSuccessorAndOperands(op, 0);
  p << ", ";
  p.printSuccessorAndOperands(op, 1);
  return true;
}

static void parseCondBr(OpAsmParser &parser, OperationState &state) {
  auto cond = parser.parseOperand();
  state.operands.push_back(parser.resolveOperand(cond, parser.getContext().getI1Type()));
  parser.parsePunct(",");
  parser.parseSuccessorAndOperands(state);
  parser.parsePunct(",");
  parser.parseSuccessorAndOperands(state);
}

/// cond_br with a constant condition, or with identical destinations,
/// becomes an unconditional branch.
static bool simplifyCondBr(Operation *op, PatternRewriter &rewriter) {
  unsigned taken;
  if (Attribute cond = getConstantValue(op->getOperand(0)); cond && cond.isa(AttrKind::Integer)) {
    taken = cond.getInt() != 0 ? 0 : 1;
  } else if (op->getSuccessor(0) == op->getSuccessor(1) &&
             op->getSuccessorOperands(0) == op->getSuccessorOperands(1)) {
    taken = 0;
  } else {
    return false;
  }
  OperationState state("cf.br", op->getLoc());
  state.addSuccessor(op->getSuccessor(taken), op->getSuccessorOperands(taken));
  rewriter.setInsertionPoint(op);
  rewriter.create(std::move(state));
  rewriter.eraseOp(op);
  return true;
}

void registerCFDialect(Context &ctx) {
  HookTable hooks;
  hooks.print["br"] = printBr;
  hooks.parse["br"] = parseBr;
  hooks.print["cond_br"] = printCondBr;
  hooks.parse["cond_br"] = parseCondBr;
  hooks.canonicalize["cond_br"] = [](Context &,
                                     std::vector<std::unique_ptr<RewritePattern>> &patterns) {
    patterns.push_back(
        std::make_unique<LambdaPattern>("cf.cond_br", 1, "cf.cond_br-simplify", simplifyCondBr));
  };
  loadDialectTable(ctx, kCFTable, hooks);
  ctx.getMutableDialect("cf")->isLegalToInline = [](Operation &, Region &) { return true; };
}

} // namespace mir

//===- LowerAffine.cpp - Affine to CFG lowering ---------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Dialects/LowerAffine.h"
#include "mir/Dialects/Dialects.h"

namespace mir {

static bool isAffineOp(const Operation *op) {
  return op->getName().rfind("affine.", 0) == 0;
}

static bool isSupported(const Operation *op) {
  const std::string &n = op->getName();
  return n == "affine.for" || n == "affine.yield" || n == "affine.apply" ||
         n == "affine.load" || n == "affine.store";
}

/// Folds a list of bound values into one with cmpi+select.
static Value *combine(OpBuilder &b, std::vector<Value *> values, const char *pred,
                      const Location &loc) {
  Value *acc = values[0];
  for (size_t i = 1; i < values.size(); ++i) {
    Context &ctx = b.getContext();
    Value *c = b.create("arith.cmpi", {acc, values[i]}, {ctx.getI1Type()},
                        {{"predicate", ctx.getStringAttr(pred)}}, loc)
                   ->getResult(0);
    acc = b.create("arith.select", {c, acc, values[i]}, {ctx.getIndexType()}, {}, loc)
              ->getResult(0);
  }
  return acc;
}

static std::vector<Value *> expandMap(OpBuilder &b, Operation *op, std::span<Value *const> ops) {
  b.setInsertionPoint(op);
  return materializeAffineMap(b, op->getAttr("map").getAffineMap(), ops, op->getLoc());
}

static void lowerAccess(OpBuilder &b, Operation *op) {
  std::vector<Value *> operands = op->getOperands();
  if (op->getName() == "affine.apply") {
    Value *v = expandMap(b, op, operands)[0];
    op->getResult(0)->replaceAllUsesWith(v);
    op->erase();
    return;
  }
  bool isLoad = op->getName() == "affine.load";
  size_t memrefIdx = isLoad ? 0 : 1;
  std::vector<Value *> mapOperands(operands.begin() + memrefIdx + 1, operands.end());
  std::vector<Value *> indices = expandMap(b, op, mapOperands);
  std::vector<Value *> newOperands(operands.begin(), operands.begin() + memrefIdx + 1);
  newOperands.insert(newOperands.end(), indices.begin(), indices.end());
  if (isLoad) {
    Operation *load = b.create("memref.load", newOperands, op->getResultTypes(), {}, op->getLoc());
    op->getResult(0)->replaceAllUsesWith(load->getResult(0));
  } else {
    b.create("memref.store", newOperands, {}, {}, op->getLoc());
  }
  op->erase();
}

static void lowerFor(OpBuilder &b, Operation *forOp) {
  Context &ctx = b.getContext();
  Location loc = forOp->getLoc();
  AffineForBounds bounds = getAffineForBounds(forOp);

  Block *pre = forOp->getBlock();
  Region *parent = pre->getParent();
  Block *cont = pre->splitBlock(forOp->getNextNode());

  b.setInsertionPoint(forOp);
  Value *lb = combine(b, materializeAffineMap(b, bounds.lower, bounds.lowerOperands, loc),
                      "sgt", loc);
  Value *ub = combine(b, materializeAffineMap(b, bounds.upper, bounds.upperOperands, loc),
                      "slt", loc);
  Value *step = b.create("arith.constant", {}, {ctx.getIndexType()},
                         {{"value", ctx.getIndexAttr(bounds.step)}}, loc)
                    ->getResult(0);

  // Move the body blocks out of the loop, in front of the continuation.
  Region &body = forOp->getRegion(0);
  Block *bodyEntry = body.front();
  Block *yieldBlock = nullptr;
  for (Block *block : body.getBlocksSnapshot()) {
    Operation *term = block->back();
    if (term && term->getName() == "affine.yield")
      yieldBlock = block;
    parent->insert(cont, body.remove(block));
  }

  Block *cond = parent->insert(bodyEntry, std::make_unique<Block>(ctx));
  Value *iv = cond->addArgument(ctx.getIndexType());
  Block *stepBlock = parent->insert(cont, std::make_unique<Block>(ctx));

  b.setInsertionPointToEnd(pre);
  OperationState br("cf.br", loc);
  br.addSuccessor(cond, {lb});
  b.create(std::move(br));
  forOp->erase();

  b.setInsertionPointToEnd(cond);
  Value *inRange = b.create("arith.cmpi", {iv, ub}, {ctx.getI1Type()},
                            {{"predicate", ctx.getStringAttr("slt")}}, loc)
                       ->getResult(0);
  OperationState condBr("cf.cond_br", loc);
  condBr.operands.push_back(inRange);
  condBr.addSuccessor(bodyEntry, {iv});
  condBr.addSuccessor(cont);
  b.create(std::move(condBr));

  Operation *yield = yieldBlock->back();
  b.setInsertionPoint(yield);
  OperationState toStep("cf.br", yield->getLoc());
  toStep.addSuccessor(stepBlock);
  b.create(std::move(toStep));
  yield->erase();

  b.setInsertionPointToEnd(stepBlock);
  Value *next = b.create("arith.addi", {bodyEntry->getArgument(0), step}, {ctx.getIndexType()},
                         {}, loc)
                    ->getResult(0);
  OperationState back("cf.br", loc);
  back.addSuccessor(cond, {next});
  b.create(std::move(back));
}

bool lowerAffine(Operation *scope, ChangeReport &report, DiagnosticList &diags) {
  std::vector<Operation *> loops, accesses;
  for (Operation *op : collectOps(scope, WalkOrder::PostOrder)) {
    if (op == scope || !isAffineOp(op))
      continue;
    if (!isSupported(op)) {
      diags.push_back(Diagnostic::error(
          op->getLoc(), "cannot lower '" + op->getName() + "': unsupported affine op"));
      return false;
    }
    if (op->getName() == "affine.for")
      loops.push_back(op);
    else if (op->getName() != "affine.yield")
      accesses.push_back(op);
  }

  OpBuilder b(scope->getContext());
  for (Operation *op : accesses) {
    lowerAccess(b, op);
    ++report.rewrites;
  }
  // Post-order lists inner loops before the loops containing them.
  for (Operation *op : loops) {
    lowerFor(b, op);
    ++report.rewrites;
  }
  report.iterations = 1;
  report.converged = true;
  return true;
}

} // namespace mir

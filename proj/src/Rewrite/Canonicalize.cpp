//===- Canonicalize.cpp - Canonicalization driver -------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Rewrite/Canonicalize.h"
#include "mir/IR/Context.h"

namespace mir {

static bool moveConstantsRight(Operation *op, PatternRewriter &rewriter) {
  if (!op->hasTrait(Trait::Commutative) || op->getNumOperands() != 2)
    return false;
  Value *lhs = op->getOperand(0), *rhs = op->getOperand(1);
  if (!getConstantValue(lhs) || getConstantValue(rhs))
    return false;
  rewriter.modifyOpInPlace(op, [&] {
    Value *swapped[] = {rhs, lhs};
    op->setOperands(swapped);
  });
  return true;
}

void addCanonicalizationPatterns(Context &ctx, FrozenPatternSet &patterns) {
  patterns.add(std::make_shared<LambdaPattern>("", 0, "commutative-constants-right",
                                               moveConstantsRight),
               kNativePatternTier);
  for (const OpDefinition *def : ctx.getRegisteredOps()) {
    if (!def->canonicalize)
      continue;
    std::vector<std::unique_ptr<RewritePattern>> list;
    def->canonicalize(ctx, list);
    for (auto &p : list)
      patterns.add(std::shared_ptr<const RewritePattern>(std::move(p)), kNativePatternTier);
  }
}

GreedyConfig getCanonicalizeConfig() {
  GreedyConfig config;
  config.fold = true;
  config.removeDeadOps = true;
  config.eraseUnreachableBlocks = true;
  return config;
}

ChangeReport runCanonicalizer(Operation *scope, PatternApplicator &applicator) {
  return applyPatternsGreedily(scope, applicator, getCanonicalizeConfig());
}

ChangeReport runCanonicalizer(Operation *scope) {
  FrozenPatternSet patterns;
  addCanonicalizationPatterns(scope->getContext(), patterns);
  DirectApplicator applicator(patterns);
  return runCanonicalizer(scope, applicator);
}

} // namespace mir

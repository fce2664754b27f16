//===- PatternMatch.cpp - Rewrite patterns and the rewriter ---------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Rewrite/PatternMatch.h"

#include <algorithm>

namespace mir {

void PatternRewriter::replaceOp(Operation *op, std::span<Value *const> values) {
  if (values.size() != op->getNumResults())
    throw IRError("replacement for '" + op->getName() + "' provides " +
                  std::to_string(values.size()) + " values for " +
                  std::to_string(op->getNumResults()) + " results");
  for (unsigned i = 0; i < values.size(); ++i)
    if (!values[i] || values[i]->getType() != op->getResult(i)->getType())
      throw IRError("type mismatch in replacement of '" + op->getName() + "' result #" +
                    std::to_string(i));
  if (rewriteListener_)
    rewriteListener_->notifyOperationReplaced(op, values);
  for (unsigned i = 0; i < values.size(); ++i)
    replaceAllUsesWith(op->getResult(i), values[i]);
  eraseOp(op);
}

void PatternRewriter::eraseOp(Operation *op) {
  if (rewriteListener_)
    rewriteListener_->notifyOperationErased(op);
  op->erase();
}

void PatternRewriter::replaceAllUsesWith(Value *from, Value *to) {
  if (from == to)
    return;
  std::vector<Operation *> users = from->getUsers();
  from->replaceAllUsesWith(to);
  if (rewriteListener_)
    for (Operation *user : users)
      rewriteListener_->notifyOperationModified(user);
}

void PatternRewriter::modifyOpInPlace(Operation *op, const std::function<void()> &fn) {
  fn();
  if (rewriteListener_)
    rewriteListener_->notifyOperationModified(op);
}

void FrozenPatternSet::add(std::shared_ptr<const RewritePattern> pattern, unsigned tier) {
  entries_.push_back({std::move(pattern), tier, entries_.size()});
}

std::vector<const RewritePattern *> FrozenPatternSet::getCandidates(const Operation &op) const {
  std::vector<const Entry *> matching;
  for (const Entry &e : entries_)
    if (e.pattern->getRootName().empty() || e.pattern->getRootName() == op.getName())
      matching.push_back(&e);
  std::stable_sort(matching.begin(), matching.end(), [](const Entry *a, const Entry *b) {
    if (a->tier != b->tier)
      return a->tier < b->tier;
    if (a->pattern->getBenefit() != b->pattern->getBenefit())
      return a->pattern->getBenefit() > b->pattern->getBenefit();
    return a->order < b->order;
  });
  std::vector<const RewritePattern *> out;
  for (const Entry *e : matching)
    out.push_back(e->pattern.get());
  return out;
}

Attribute getConstantValue(Value *value) {
  if (!value)
    return Attribute();
  Operation *def = value->getDefiningOp();
  if (!def || !def->hasTrait(Trait::ConstantLike))
    return Attribute();
  return def->getAttr("value");
}

bool isTriviallyDead(Operation *op) {
  return op->hasTrait(Trait::NoSideEffect) && !op->hasTrait(Trait::Terminator) &&
         op->use_empty();
}

bool tryFoldOp(Operation *op, PatternRewriter &rewriter) {
  const OpDefinition *def = op->getDefinition();
  if (!def || !def->fold || op->hasTrait(Trait::ConstantLike))
    return false;
  std::vector<Attribute> constants;
  for (Value *v : op->getOperands())
    constants.push_back(getConstantValue(v));
  std::vector<OpFoldResult> results;
  if (!def->fold(*op, constants, results))
    return false;
  if (results.empty()) {
    // Folded in place.
    if (auto *listener = rewriter.getRewriteListener())
      listener->notifyOperationModified(op);
    return true;
  }
  if (results.size() != op->getNumResults())
    return false;
  for (const OpFoldResult &r : results)
    if (std::holds_alternative<std::monostate>(r))
      return false;

  std::vector<Value *> values;
  std::vector<Operation *> created;
  rewriter.setInsertionPoint(op);
  for (unsigned i = 0; i < results.size(); ++i) {
    if (auto *v = std::get_if<Value *>(&results[i])) {
      values.push_back(*v);
      continue;
    }
    Attribute attr = std::get<Attribute>(results[i]);
    Operation *cst = nullptr;
    if (def->dialect && def->dialect->materializeConstant)
      cst = def->dialect->materializeConstant(rewriter, attr, op->getResult(i)->getType(),
                                              op->getLoc());
    if (!cst) {
      for (auto it = created.rbegin(); it != created.rend(); ++it)
        rewriter.eraseOp(*it);
      return false;
    }
    created.push_back(cst);
    values.push_back(cst->getResult(0));
  }
  rewriter.replaceOp(op, values);
  return true;
}

} // namespace mir

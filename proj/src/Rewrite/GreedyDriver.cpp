//===- GreedyDriver.cpp - Worklist-driven pattern application -------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Rewrite/GreedyDriver.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace mir {

std::optional<std::string> DirectApplicator::apply(Operation *op, PatternRewriter &rewriter) {
  for (const RewritePattern *pattern : patterns_.getCandidates(*op)) {
    rewriter.setInsertionPoint(op);
    bool changed;
    try {
      changed = pattern->matchAndRewrite(op, rewriter);
    } catch (const IRError &e) {
      throw IRError("pattern '" + pattern->getName() + "': " + e.what());
    }
    if (changed)
      return pattern->getName();
  }
  return std::nullopt;
}

namespace {

class Worklist {
public:
  void push(Operation *op) {
    if (index_.count(op))
      return;
    index_[op] = items_.size();
    items_.push_back(op);
  }
  Operation *pop() {
    while (!items_.empty()) {
      Operation *op = items_.back();
      items_.pop_back();
      if (op) {
        index_.erase(op);
        return op;
      }
    }
    return nullptr;
  }
  void remove(Operation *op) {
    auto it = index_.find(op);
    if (it == index_.end())
      return;
    items_[it->second] = nullptr;
    index_.erase(it);
  }
  bool empty() const { return index_.empty(); }
  void clear() {
    items_.clear();
    index_.clear();
  }

private:
  std::vector<Operation *> items_;
  std::unordered_map<Operation *, size_t> index_;
};

class GreedyDriver : public RewriteListener {
public:
  GreedyDriver(Operation *scope, PatternApplicator &applicator, const GreedyConfig &config)
      : scope_(scope), applicator_(applicator), config_(config),
        rewriter_(scope->getContext(), this) {}

  ChangeReport run() {
    for (unsigned iter = 1; iter <= config_.maxIterations; ++iter) {
      report_.iterations = iter;
      unsigned before = totalChanges();
      bool exhausted = sweep();
      if (config_.eraseUnreachableBlocks)
        report_.blocksErased += eraseUnreachableBlocks(scope_);
      if (totalChanges() == before && !exhausted) {
        report_.converged = true;
        break;
      }
    }
    return report_;
  }

  void notifyOperationInserted(Operation *op) override {
    walk(op, WalkOrder::PostOrder, [&](Operation *nested) { addToWorklist(nested); });
  }
  void notifyOperationErased(Operation *op) override {
    walk(op, WalkOrder::PostOrder, [&](Operation *nested) {
      worklist_.remove(nested);
      erased_.insert(nested);
      for (Value *v : nested->getOperands())
        if (Operation *def = v->getDefiningOp())
          pendingProducers_.push_back(def);
    });
  }
  void notifyOperationModified(Operation *op) override { addToWorklist(op); }
  void notifyOperationReplaced(Operation *op, std::span<Value *const> values) override {
    for (Value *result : op->getResults())
      for (Operation *user : result->getUsers())
        addToWorklist(user);
  }

private:
  unsigned totalChanges() const {
    return report_.rewrites + report_.folds + report_.opsErased + report_.blocksErased;
  }

  void addToWorklist(Operation *op) {
    if (op != scope_ && scope_->isProperAncestor(op))
      worklist_.push(op);
  }

  void flushPendingProducers() {
    for (Operation *op : pendingProducers_)
      if (!erased_.count(op))
        addToWorklist(op);
    pendingProducers_.clear();
  }

  /// Returns true if the step budget ran out.
  bool sweep() {
    worklist_.clear();
    std::vector<Operation *> ops = collectOps(scope_, WalkOrder::PostOrder);
    ops.pop_back(); // the scope itself
    if (config_.reverseSeed)
      std::reverse(ops.begin(), ops.end());
    for (Operation *op : ops)
      worklist_.push(op);
    size_t budget = config_.maxStepsPerSweep ? config_.maxStepsPerSweep
                                             : std::max<size_t>(1000, ops.size() * 20);
    while (Operation *op = worklist_.pop()) {
      if (budget-- == 0)
        return true;
      processOp(op);
    }
    return false;
  }

  void processOp(Operation *op) {
    // Producers of erased ops are revisited only if they survived the step.
    erased_.clear();
    pendingProducers_.clear();

    if (config_.removeDeadOps && isTriviallyDead(op)) {
      unsigned erased = 0;
      walk(op, WalkOrder::PostOrder, [&](Operation *) { ++erased; });
      rewriter_.eraseOp(op);
      report_.opsErased += erased;
      flushPendingProducers();
      return;
    }
    if (config_.fold && tryFoldOp(op, rewriter_)) {
      ++report_.folds;
      flushPendingProducers();
      return;
    }
    if (auto name = applicator_.apply(op, rewriter_)) {
      ++report_.rewrites;
      report_.applied.push_back(*name);
      flushPendingProducers();
    }
  }

  Operation *scope_;
  PatternApplicator &applicator_;
  GreedyConfig config_;
  PatternRewriter rewriter_;
  Worklist worklist_;
  ChangeReport report_;
  std::vector<Operation *> pendingProducers_;
  std::unordered_set<Operation *> erased_;
};

} // namespace

ChangeReport applyPatternsGreedily(Operation *scope, PatternApplicator &applicator,
                                   const GreedyConfig &config) {
  GreedyDriver driver(scope, applicator, config);
  return driver.run();
}

ChangeReport applyPatternsGreedily(Operation *scope, const FrozenPatternSet &patterns,
                                   const GreedyConfig &config) {
  DirectApplicator applicator(patterns);
  return applyPatternsGreedily(scope, applicator, config);
}

unsigned eraseUnreachableBlocks(Operation *scope) {
  unsigned erased = 0;
  walk(scope, WalkOrder::PostOrder, [&](Operation *op) {
    for (unsigned r = 0; r < op->getNumRegions(); ++r) {
      Region &region = op->getRegion(r);
      if (region.size() < 2)
        continue;
      std::unordered_set<Block *> reachable;
      std::vector<Block *> stack{region.front()};
      while (!stack.empty()) {
        Block *b = stack.back();
        stack.pop_back();
        if (!reachable.insert(b).second)
          continue;
        for (Block *s : b->getSuccessors())
          if (s->getParent() == &region)
            stack.push_back(s);
      }
      std::vector<Block *> dead;
      for (Block *b : region.getBlocksSnapshot())
        if (!reachable.count(b))
          dead.push_back(b);
      if (dead.empty())
        continue;
      for (Block *b : dead)
        b->dropAllReferences();
      bool stillUsed = false;
      for (Block *b : dead) {
        for (Value *arg : b->getArguments())
          stillUsed |= !arg->use_empty();
        for (Operation &o : b->getOperations())
          stillUsed |= !o.use_empty();
      }
      // Uses from reachable code mean the IR was already invalid; keep it.
      if (stillUsed)
        continue;
      for (Block *b : dead)
        region.remove(b);
      erased += static_cast<unsigned>(dead.size());
    }
  });
  return erased;
}

} // namespace mir

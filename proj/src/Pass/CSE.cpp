//===- CSE.cpp - Common subexpression elimination -------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/Dominance.h"
#include "mir/Pass/Passes.h"

#include <unordered_set>

namespace mir {

namespace {

struct OpKeyHash {
  size_t operator()(const Operation *op) const {
    size_t h = std::hash<std::string_view>()(op->getName());
    auto mix = [&](size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (Value *v : op->getOperands())
      mix(std::hash<const void *>()(v));
    for (Type t : op->getResultTypes())
      mix(std::hash<Type>()(t));
    mix(std::hash<Attribute>()(op->getAttrDictionary()));
    return h;
  }
};

struct OpKeyEqual {
  bool operator()(const Operation *a, const Operation *b) const {
    return a == b || (a->getName() == b->getName() && a->getOperands() == b->getOperands() &&
                      a->getResultTypes() == b->getResultTypes() &&
                      a->getAttrDictionary() == b->getAttrDictionary());
  }
};

bool isCandidate(Operation *op) {
  return op->isRegistered() && op->hasTrait(Trait::NoSideEffect) && op->getNumRegions() == 0 &&
         op->getNumSuccessors() == 0 && op->getNumResults() > 0 &&
         !op->hasTrait(Trait::Terminator);
}

class CSE {
public:
  ChangeReport run(Operation *scope) {
    for (unsigned r = 0; r < scope->getNumRegions(); ++r)
      simplifyRegion(scope->getRegion(r));
    report_.iterations = 1;
    report_.converged = true;
    return report_;
  }

private:
  /// Known ops form a scoped set: everything inserted while processing a
  /// dominator-tree subtree is removed when leaving it.
  void simplifyRegion(Region &region) {
    if (region.empty())
      return;
    DominanceInfo dom;
    const RegionDomTree &tree = dom.getDomTree(&region);
    simplifyBlock(region.front(), tree);
  }

  void simplifyBlock(Block *block, const RegionDomTree &tree) {
    size_t mark = undo_.size();
    for (Operation *op : block->getOpsSnapshot()) {
      for (unsigned r = 0; r < op->getNumRegions(); ++r) {
        if (op->hasTrait(Trait::IsolatedFromAbove)) {
          CSE nested;
          nested.simplifyRegion(op->getRegion(r));
          absorb(nested.report_);
        } else {
          simplifyRegion(op->getRegion(r));
        }
      }
      if (!isCandidate(op))
        continue;
      auto [it, inserted] = known_.insert(op);
      if (inserted) {
        undo_.push_back(op);
        continue;
      }
      Operation *existing = *it;
      std::vector<Value *> replacements = existing->getResults();
      std::vector<Value *> results = op->getResults();
      for (size_t i = 0; i < results.size(); ++i)
        results[i]->replaceAllUsesWith(replacements[i]);
      op->erase();
      ++report_.rewrites;
      ++report_.opsErased;
    }
    if (auto it = tree.children.find(block); it != tree.children.end())
      for (Block *child : it->second)
        simplifyBlock(child, tree);
    while (undo_.size() > mark) {
      known_.erase(undo_.back());
      undo_.pop_back();
    }
  }

  void absorb(const ChangeReport &other) {
    report_.rewrites += other.rewrites;
    report_.opsErased += other.opsErased;
  }

  std::unordered_set<Operation *, OpKeyHash, OpKeyEqual> known_;
  std::vector<Operation *> undo_;
  ChangeReport report_;
};

} // namespace

ChangeReport runCSE(Operation *scope) { return CSE().run(scope); }

ChangeReport runDCE(Operation *scope) {
  ChangeReport report;
  report.converged = true;
  bool changed = true;
  while (changed) {
    changed = false;
    ++report.iterations;
    unsigned blocks = eraseUnreachableBlocks(scope);
    report.blocksErased += blocks;
    changed |= blocks > 0;
    std::vector<Operation *> ops = collectOps(scope, WalkOrder::PostOrder);
    // Users come after their operands in a block, so walking backwards
    // frees whole chains in one sweep.
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      Operation *op = *it;
      if (op == scope || !op->isRegistered() || !op->hasTrait(Trait::NoSideEffect) ||
          op->hasTrait(Trait::Terminator) || op->getNumRegions() != 0 || !op->use_empty())
        continue;
      op->erase();
      ++report.opsErased;
      changed = true;
    }
  }
  return report;
}

} // namespace mir

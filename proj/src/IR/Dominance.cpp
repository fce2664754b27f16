//===- Dominance.cpp - Block dominance and value visibility ---------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Iterative dominator computation over reverse post-order (Cooper, Harvey
// and Kennedy). Regions are small, so the simple algorithm is plenty.
//
//===----------------------------------------------------------------------===//

#include "mir/IR/Dominance.h"

#include <functional>
#include <unordered_set>

namespace mir {

static RegionDomTree computeDomTree(Region *region) {
  RegionDomTree tree;
  if (region->empty())
    return tree;

  std::vector<Block *> post;
  std::unordered_set<Block *> seen;
  // Explicit stack keeps deep CFGs from overflowing.
  std::vector<std::pair<Block *, size_t>> stack;
  Block *entry = region->front();
  seen.insert(entry);
  stack.push_back({entry, 0});
  while (!stack.empty()) {
    auto &[block, next] = stack.back();
    std::vector<Block *> succs = block->getSuccessors();
    if (next < succs.size()) {
      Block *succ = succs[next++];
      if (succ && succ->getParent() == region && seen.insert(succ).second)
        stack.push_back({succ, 0});
      continue;
    }
    post.push_back(block);
    stack.pop_back();
  }
  tree.rpo.assign(post.rbegin(), post.rend());
  for (unsigned i = 0; i < tree.rpo.size(); ++i)
    tree.rpoIndex[tree.rpo[i]] = i;

  std::unordered_map<Block *, std::vector<Block *>> preds;
  for (Block *b : tree.rpo)
    for (Block *s : b->getSuccessors())
      if (tree.isReachable(s))
        preds[s].push_back(b);

  tree.idom[entry] = entry;
  auto intersect = [&](Block *a, Block *b) {
    while (a != b) {
      while (tree.rpoIndex[a] > tree.rpoIndex[b])
        a = tree.idom[a];
      while (tree.rpoIndex[b] > tree.rpoIndex[a])
        b = tree.idom[b];
    }
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (Block *b : tree.rpo) {
      if (b == entry)
        continue;
      Block *newIdom = nullptr;
      for (Block *p : preds[b]) {
        if (!tree.idom.count(p))
          continue;
        newIdom = newIdom ? intersect(p, newIdom) : p;
      }
      if (newIdom && tree.idom[b] != newIdom) {
        tree.idom[b] = newIdom;
        changed = true;
      }
    }
  }
  for (Block *b : tree.rpo)
    if (b != entry)
      tree.children[tree.idom[b]].push_back(b);
  return tree;
}

const RegionDomTree &DominanceInfo::getDomTree(Region *region) {
  auto it = trees_.find(region);
  if (it != trees_.end())
    return it->second;
  return trees_.emplace(region, computeDomTree(region)).first->second;
}

bool DominanceInfo::dominates(Block *a, Block *b) {
  if (a == b)
    return true;
  Region *region = a->getParent();
  if (region->size() == 1)
    return false;
  const RegionDomTree &tree = getDomTree(region);
  if (!tree.isReachable(b))
    return true;
  if (!tree.isReachable(a))
    return false;
  Block *entry = region->front();
  while (b != entry) {
    b = tree.idom.at(b);
    if (b == a)
      return true;
  }
  return false;
}

bool DominanceInfo::properlyDominates(Value *value, Operation *user) {
  Block *defBlock = value->getParentBlock();
  if (!defBlock)
    return false;
  Region *defRegion = defBlock->getParent();

  // Hoist the user to its ancestor living in the defining region.
  Operation *op = user;
  while (op->getParentRegion() != defRegion) {
    Operation *parent = op->getParentOp();
    if (!parent || parent->hasTrait(Trait::IsolatedFromAbove))
      return false;
    op = parent;
  }
  if (!defRegion && op->getBlock() != defBlock)
    return false;

  if (Operation *defOp = value->getDefiningOp()) {
    if (defOp == op)
      return false;
    if (defOp->getBlock() == op->getBlock())
      return defOp->isBeforeInBlock(op);
  } else if (op->getBlock() == defBlock) {
    return true;
  }
  return dominates(defBlock, op->getBlock());
}

bool properlyDominates(Value *value, Operation *user) {
  DominanceInfo info;
  return info.properlyDominates(value, user);
}

bool crossesIsolationBarrier(Value *value, Operation *user) {
  Block *defBlock = value->getParentBlock();
  if (!defBlock)
    return false;
  // Operands of the user itself are evaluated outside its regions.
  Operation *parent = user->getParentOp();
  Operation *scope = parent ? parent->getIsolationScope() : nullptr;
  if (!scope)
    return false;
  // The value must be defined inside one of the scope's regions.
  for (Operation *op = defBlock->getParentOp(); op; op = op->getParentOp())
    if (op == scope)
      return false;
  return true;
}

} // namespace mir

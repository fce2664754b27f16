//===- Inliner.cpp - Call inlining through dialect interfaces -------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/Context.h"
#include "mir/IR/SymbolTable.h"
#include "mir/Pass/Passes.h"

#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace mir {

namespace {

Operation *resolveCallee(Operation *call) {
  Attribute callee = call->getAttr("callee");
  if (!callee || callee.getKind() != AttrKind::SymbolRef)
    return nullptr;
  Operation *target = lookupNearestSymbol(call, callee.getSymbol());
  return target && target->getName() == "func.func" ? target : nullptr;
}

/// Functions that sit on a call-graph cycle (Tarjan's SCC algorithm over
/// the resolved direct calls).
std::unordered_set<Operation *> findRecursiveFunctions(Operation *module) {
  std::vector<Operation *> funcs;
  std::unordered_map<Operation *, std::vector<Operation *>> edges;
  walk(module, WalkOrder::PreOrder, [&](Operation *op) {
    if (op->getName() == "func.func")
      funcs.push_back(op);
  });
  for (Operation *f : funcs)
    walk(f, WalkOrder::PreOrder, [&](Operation *op) {
      if (op->getName() == "func.call")
        if (Operation *callee = resolveCallee(op))
          edges[f].push_back(callee);
    });

  std::unordered_map<Operation *, unsigned> index, low;
  std::unordered_set<Operation *> onStack, recursive;
  std::vector<Operation *> stack;
  unsigned counter = 0;
  std::function<void(Operation *)> visit = [&](Operation *f) {
    index[f] = low[f] = counter++;
    stack.push_back(f);
    onStack.insert(f);
    for (Operation *g : edges[f]) {
      if (!index.count(g)) {
        visit(g);
        low[f] = std::min(low[f], low[g]);
      } else if (onStack.count(g)) {
        low[f] = std::min(low[f], index[g]);
      }
    }
    if (low[f] != index[f])
      return;
    std::vector<Operation *> scc;
    Operation *g;
    do {
      g = stack.back();
      stack.pop_back();
      onStack.erase(g);
      scc.push_back(g);
    } while (g != f);
    bool selfLoop = false;
    for (Operation *h : edges[f])
      selfLoop |= h == f;
    if (scc.size() > 1 || selfLoop)
      recursive.insert(scc.begin(), scc.end());
  };
  for (Operation *f : funcs)
    if (!index.count(f))
      visit(f);
  return recursive;
}

enum class Verdict { Ok, Unregistered, Illegal, Size };

Verdict checkCallee(Operation *callee, Operation *call, const InlinerOptions &options) {
  Region &dest = *call->getParentRegion();
  Region &body = callee->getRegion(0);
  unsigned count = 0;
  Verdict verdict = Verdict::Ok;
  Context &ctx = call->getContext();
  for (Block &block : body)
    for (Operation &top : block)
      walk(&top, WalkOrder::PreOrder, [&](Operation *op) {
        ++count;
        if (verdict == Verdict::Unregistered)
          return;
        if (!op->isRegistered()) {
          verdict = Verdict::Unregistered;
          return;
        }
        const DialectDescriptor *dialect = ctx.getDialect(op->getDialectNamespace());
        // Legality is asked about the region the op lands in: the call's
        // region for top-level body ops, its own parent otherwise.
        Region &target = op->getParentOp() == callee ? dest : *op->getParentRegion();
        if (!dialect || !dialect->isLegalToInline || !dialect->isLegalToInline(*op, target))
          verdict = Verdict::Illegal;
      });
  if (verdict != Verdict::Ok)
    return verdict;

  // Every terminator leaving the body needs its dialect's inlining hook.
  for (Block &block : body) {
    Operation *terminator = block.getTerminator();
    if (!terminator || terminator->getNumSuccessors() != 0)
      continue;
    const DialectDescriptor *dialect = ctx.getDialect(terminator->getDialectNamespace());
    if (!dialect || (body.size() == 1 ? !dialect->terminatorValues : !dialect->rewriteTerminator))
      return Verdict::Illegal;
  }
  if (body.size() > 1) {
    // A multi-block body cannot land in a region that must stay one block.
    Operation *parent = dest.getParentOp();
    if (parent && parent->hasTrait(Trait::SingleRegionSingleBlock))
      return Verdict::Illegal;
  }
  return count > options.maxOps ? Verdict::Size : Verdict::Ok;
}

/// Clones the callee body in place of `call`. Returns the calls that came
/// along with the body.
std::vector<Operation *> inlineCall(Operation *call, Operation *callee) {
  Context &ctx = call->getContext();
  Region &body = callee->getRegion(0);
  std::vector<Operation *> newCalls;
  auto noteCalls = [&](Operation *op) {
    walk(op, WalkOrder::PreOrder, [&](Operation *nested) {
      if (nested->getName() == "func.call")
        newCalls.push_back(nested);
    });
  };

  IRMapping mapping;
  std::vector<Value *> args = call->getOperands();
  if (body.size() == 1) {
    Block *entry = body.front();
    for (unsigned i = 0; i < entry->getNumArguments(); ++i)
      mapping.map(entry->getArgument(i), args[i]);
    Operation *terminator = entry->getTerminator();
    for (Operation &op : *entry) {
      if (&op == terminator)
        break;
      auto clone = op.clone(mapping);
      Operation *raw = clone.get();
      call->getBlock()->insert(call, std::move(clone));
      noteCalls(raw);
    }
    const DialectDescriptor *dialect = ctx.getDialect(terminator->getDialectNamespace());
    std::vector<Value *> returned = dialect->terminatorValues(*terminator);
    std::vector<Value *> results = call->getResults();
    for (size_t i = 0; i < results.size(); ++i)
      results[i]->replaceAllUsesWith(mapping.lookupOrDefault(returned[i]));
    call->erase();
    return newCalls;
  }

  // Multi-block: split after the call, branch into the cloned entry, and
  // turn every return into a branch to the continuation.
  Block *before = call->getBlock();
  Block *continuation = before->splitBlock(call->getNextNode());
  std::vector<Value *> results = call->getResults();
  for (size_t i = 0; i < results.size(); ++i)
    results[i]->replaceAllUsesWith(continuation->addArgument(results[i]->getType()));

  Region &dest = *before->getParent();
  body.cloneInto(&dest, continuation, mapping);
  Block *clonedEntry = mapping.lookupOrDefault(body.front());

  OpBuilder builder(ctx);
  builder.setInsertionPointToEnd(before);
  OperationState br("cf.br", call->getLoc());
  br.addSuccessor(clonedEntry, args);
  builder.create(std::move(br));
  call->erase();

  for (Block &oldBlock : body) {
    Block *block = mapping.lookupOrDefault(&oldBlock);
    for (Operation &op : *block)
      noteCalls(&op);
    Operation *terminator = block->getTerminator();
    if (terminator && terminator->getNumSuccessors() == 0) {
      const DialectDescriptor *dialect = ctx.getDialect(terminator->getDialectNamespace());
      dialect->rewriteTerminator(*terminator, *continuation);
    }
  }
  return newCalls;
}

} // namespace

PassResult runInliner(Operation *module, const InlinerOptions &options) {
  PassResult result;
  result.changes.converged = true;
  result.changes.iterations = 1;
  auto &stats = result.statistics;
  for (const char *key : {"inlined", "skipped-unresolved", "skipped-recursive", "skipped-size",
                          "skipped-unregistered", "skipped-illegal"})
    stats[key] = 0;

  std::unordered_set<Operation *> recursive = findRecursiveFunctions(module);
  std::deque<Operation *> worklist;
  walk(module, WalkOrder::PreOrder, [&](Operation *op) {
    if (op->getName() == "func.call")
      worklist.push_back(op);
  });

  while (!worklist.empty()) {
    Operation *call = worklist.front();
    worklist.pop_front();
    Operation *callee = resolveCallee(call);
    if (!callee || callee->getNumRegions() == 0 || callee->getRegion(0).empty()) {
      ++stats["skipped-unresolved"];
      continue;
    }
    if (recursive.count(callee)) {
      ++stats["skipped-recursive"];
      continue;
    }
    switch (checkCallee(callee, call, options)) {
    case Verdict::Unregistered:
      ++stats["skipped-unregistered"];
      continue;
    case Verdict::Illegal:
      ++stats["skipped-illegal"];
      continue;
    case Verdict::Size:
      ++stats["skipped-size"];
      continue;
    case Verdict::Ok:
      break;
    }
    // Calls cloned from a non-recursive callee only reach callees deeper
    // in the acyclic part of the call graph, so this terminates.
    for (Operation *nested : inlineCall(call, callee))
      worklist.push_back(nested);
    ++stats["inlined"];
    ++result.changes.rewrites;
  }
  return result;
}

} // namespace mir

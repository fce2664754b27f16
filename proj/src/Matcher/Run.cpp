//===- Run.cpp - Interpretation of matcher programs -----------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/Context.h"
#include "mir/Matcher/Matcher.h"

#include <unordered_map>

namespace mir {

namespace {

struct Frame {
  std::unordered_map<Value *, Operation *> handles;
  std::map<std::string, Value *> values;
  std::map<std::string, Attribute> attrs;
  unsigned evaluations = 0;

  Operation *handle(Operation &op) {
    auto it = handles.find(op.getOperand(0));
    return it == handles.end() ? nullptr : it->second;
  }
};

bool hasAttrs(Operation *target, const std::vector<NamedAttribute> &entries) {
  for (const NamedAttribute &entry : entries)
    if (target->getAttr(entry.name) != entry.value)
      return false;
  return true;
}

bool evaluate(Operation &check, Frame &frame) {
  const std::string &name = check.getName();
  if (name == "pat.check_same") {
    auto lhs = frame.values.find(check.getAttr("lhs").getString());
    auto rhs = frame.values.find(check.getAttr("rhs").getString());
    return lhs != frame.values.end() && rhs != frame.values.end() && lhs->second == rhs->second;
  }
  Operation *target = frame.handle(check);
  if (!target)
    return false;
  if (name == "pat.check_opcode")
    return target->getName() == check.getAttr("opcode").getString();
  if (name == "pat.check_arity")
    return target->getNumOperands() == uint64_t(check.getAttr("count").getInt64());
  if (name == "pat.check_op_arity")
    return target->getName() == check.getAttr("opcode").getString() &&
           target->getNumOperands() == uint64_t(check.getAttr("count").getInt64());
  if (name == "pat.check_attr") {
    Attribute actual = target->getAttr(check.getAttr("name").getString());
    Attribute expected = check.getAttr("value");
    return actual && (!expected || actual == expected);
  }
  if (name == "pat.check_attrs")
    return hasAttrs(target, check.getAttr("values").getDictionary());
  if (name == "pat.check_type") {
    uint64_t slot = check.getAttr("slot").getInt64();
    return slot < target->getNumOperands() &&
           target->getOperand(slot)->getType() == check.getAttr("type").getTypeValue();
  }
  throw IRError("unknown matcher check '" + name + "'");
}

/// Runs `block`; returns the emit reached, if any.
Operation *runBlock(Block *block, Frame &frame) {
  for (Operation &op : *block) {
    const std::string &name = op.getName();
    if (name == "pat.emit")
      return &op;
    if (name == "pat.fail")
      return nullptr;
    if (name == "pat.descend") {
      Operation *parent = frame.handle(op);
      uint64_t index = op.getAttr("index").getInt64();
      Operation *def = nullptr;
      if (parent && index < parent->getNumOperands()) {
        def = parent->getOperand(index)->getDefiningOp();
        // Nested source dags match single-result producers only.
        if (def && def->getNumResults() != 1)
          def = nullptr;
      }
      frame.handles[op.getResult(0)] = def;
      continue;
    }
    if (name == "pat.capture") {
      Operation *target = frame.handle(op);
      if (!target)
        continue;
      std::string id = op.getAttr("id").getString();
      if (Attribute slot = op.getAttr("slot")) {
        if (uint64_t(slot.getInt64()) < target->getNumOperands())
          frame.values[id] = target->getOperand(slot.getInt64());
      } else if (Attribute value = target->getAttr(op.getAttr("attr").getString())) {
        frame.attrs[id] = value;
      }
      continue;
    }
    Region *next = nullptr;
    ++frame.evaluations;
    if (name == "pat.switch_opcode") {
      Operation *target = frame.handle(op);
      const auto &cases = op.getAttr("cases").getArray();
      unsigned chosen = cases.size();
      for (unsigned i = 0; target && i < cases.size(); ++i)
        if (cases[i].getString() == target->getName())
          chosen = i;
      next = &op.getRegion(chosen);
    } else if (evaluate(op, frame)) {
      next = &op.getRegion(0);
    }
    if (next && !next->empty())
      if (Operation *emit = runBlock(next->front(), frame))
        return emit;
  }
  return nullptr;
}

} // namespace

MatcherApplicator::MatcherApplicator(Operation *matcherModule, const PatternSet &set,
                                     const FrozenPatternSet *fallback)
    : fallback_(fallback) {
  for (Operation &op : *matcherModule->getRegion(0).front())
    if (op.getName() == "pat.matcher")
      matchers_.push_back(&op);
  for (const auto &pattern : set.patterns)
    byName_[pattern->getName()] = pattern.get();
}

std::optional<MatcherApplicator::Match> MatcherApplicator::run(Operation *op) {
  for (Operation *matcher : matchers_) {
    Block *entry = matcher->getRegion(0).front();
    Frame frame;
    frame.handles[entry->getArgument(0)] = op;
    Operation *emit = runBlock(entry, frame);
    stats_.evaluations += frame.evaluations;
    if (!emit)
      continue;
    const std::string &name = emit->getAttr("pattern").getString();
    auto it = byName_.find(name);
    if (it == byName_.end())
      throw IRError("matcher emits unknown pattern '" + name + "'");
    Match match{it->second, {}};
    const auto &captures = match.pattern->getCaptures();
    for (const NamedAttribute &binding : emit->getAttr("bindings").getDictionary()) {
      const std::string &id = binding.value.getString();
      bool isAttr = captures.at(binding.name).isAttr;
      if (isAttr ? !frame.attrs.count(id) : !frame.values.count(id))
        throw IRError("matcher emits '" + name + "' without capture '" + id + "'");
      if (isAttr)
        match.bindings.attrs[binding.name] = frame.attrs.at(id);
      else
        match.bindings.values[binding.name] = frame.values.at(id);
    }
    ++stats_.matches;
    return match;
  }
  return std::nullopt;
}

std::optional<std::string> MatcherApplicator::match(Operation *op) {
  if (auto found = run(op))
    return found->pattern->getName();
  return std::nullopt;
}

std::optional<std::string> MatcherApplicator::apply(Operation *op, PatternRewriter &rewriter) {
  if (auto found = run(op)) {
    rewriter.setInsertionPoint(op);
    try {
      found->pattern->rewrite(op, found->bindings, rewriter);
    } catch (const IRError &e) {
      throw IRError("pattern '" + found->pattern->getName() + "': " + e.what());
    }
    ++stats_.rewrites;
    return found->pattern->getName();
  }
  if (fallback_)
    return DirectApplicator(*fallback_).apply(op, rewriter);
  return std::nullopt;
}

ChangeReport runMatcher(Operation *matcherModule, const PatternSet &set, Operation *scope,
                        const GreedyConfig &config, MatcherStats &stats) {
  MatcherApplicator applicator(matcherModule, set);
  ChangeReport report = applyPatternsGreedily(scope, applicator, config);
  stats = applicator.getStats();
  return report;
}

} // namespace mir

//===- Compile.cpp - Matcher compilation and optimization -----------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "MatcherTree.h"

#include "mir/Dialects/Dialects.h"
#include "mir/IR/Context.h"
#include "mir/Matcher/Matcher.h"
#include "mir/Pass/Passes.h"

#include <algorithm>
#include <map>
#include <set>

namespace mir {

using matcher::Chain;
using matcher::makeNode;
using matcher::MatcherTree;
using matcher::Node;
using matcher::NodeList;

std::string_view stageName(MatcherStage stage) {
  switch (stage) {
  case MatcherStage::Naive:
    return "naive";
  case MatcherStage::Contracted:
    return "contracted";
  case MatcherStage::Reordered:
    return "reordered";
  case MatcherStage::Factored:
    return "factored";
  case MatcherStage::Final:
    return "final";
  }
  return "";
}

std::vector<MatcherStage> allMatcherStages() {
  return {MatcherStage::Naive, MatcherStage::Contracted, MatcherStage::Reordered,
          MatcherStage::Factored, MatcherStage::Final};
}

std::optional<MatcherStage> parseStageName(std::string_view name) {
  for (MatcherStage stage : allMatcherStages())
    if (stageName(stage) == name)
      return stage;
  return std::nullopt;
}

//===----------------------------------------------------------------------===//
// Naive compilation
//===----------------------------------------------------------------------===//

namespace {

class ChainCompiler {
public:
  explicit ChainCompiler(Context &ctx) : ctx_(ctx) {}

  Chain compile(const DeclarativePattern &pattern) {
    Chain chain;
    compileNode(pattern.getSource(), "r", chain);
    const auto &captures = pattern.getCaptures();
    for (const DslPredicate &pred : pattern.getPredicates()) {
      const CaptureInfo &lhs = captures.at(pred.lhs);
      switch (pred.kind) {
      case DslPredicate::Kind::Same:
        chain.push_back(node("pat.check_same", "",
                             {{"lhs", str(lhs.id())}, {"rhs", str(captures.at(pred.rhs).id())}}));
        break;
      case DslPredicate::Kind::AttrEq:
        chain.push_back(node("pat.check_attr", lhs.opPath,
                             {{"name", str(lhs.attrName)}, {"value", pred.attr}}));
        break;
      case DslPredicate::Kind::TypeIs:
        chain.push_back(node("pat.check_type", lhs.opPath,
                             {{"slot", ctx_.getIndexAttr(lhs.slot)},
                              {"type", ctx_.getTypeAttr(pred.type)}}));
        break;
      }
    }
    std::vector<NamedAttribute> bindings;
    for (const auto &[name, info] : captures)
      bindings.push_back({name, str(info.id())});
    chain.push_back(node("pat.emit", "",
                         {{"pattern", str(pattern.getName())},
                          {"bindings", ctx_.getDictionaryAttr(bindings)}}));
    return chain;
  }

private:
  void compileNode(const DagNode &dag, const std::string &path, Chain &chain) {
    chain.push_back(node("pat.check_opcode", path, {{"opcode", str(dag.opcode)}}));
    chain.push_back(node("pat.check_arity", path,
                         {{"count", ctx_.getIndexAttr(dag.operands.size())}}));
    for (const DagAttr &attr : dag.attrs) {
      if (attr.literal) {
        chain.push_back(
            node("pat.check_attr", path, {{"name", str(attr.name)}, {"value", attr.literal}}));
        continue;
      }
      chain.push_back(node("pat.check_attr", path, {{"name", str(attr.name)}}));
      chain.push_back(node("pat.capture", path,
                           {{"id", str(path + "@" + attr.name)}, {"attr", str(attr.name)}}));
    }
    for (size_t i = 0; i < dag.operands.size(); ++i) {
      const DagOperand &operand = dag.operands[i];
      std::string slot = path + "." + std::to_string(i);
      if (operand.kind == DagOperand::Kind::Capture)
        chain.push_back(node("pat.capture", path,
                             {{"id", str(slot)}, {"slot", ctx_.getIndexAttr(i)}}));
      else if (operand.kind == DagOperand::Kind::Nested)
        compileNode(*operand.nested, slot, chain);
    }
  }

  Node node(std::string name, std::string handle, std::vector<NamedAttribute> attrs) {
    return makeNode(ctx_, std::move(name), std::move(handle), std::move(attrs));
  }
  Attribute str(std::string text) { return ctx_.getStringAttr(std::move(text)); }

  Context &ctx_;
};

} // namespace

std::unique_ptr<Operation> compilePatternsToMatcher(Context &ctx, const PatternSet &set) {
  std::set<std::string> names;
  for (const auto &pattern : set.patterns)
    if (!names.insert(pattern->getName()).second)
      throw ValidationError("duplicate pattern name '" + pattern->getName() + "'");

  // One matcher per root opcode, in order of first appearance.
  std::vector<std::string> roots;
  for (const auto &pattern : set.patterns)
    if (std::find(roots.begin(), roots.end(), pattern->getRootName()) == roots.end())
      roots.push_back(pattern->getRootName());

  ChainCompiler compiler(ctx);
  std::vector<MatcherTree> trees;
  for (const std::string &root : roots) {
    MatcherTree tree;
    tree.root = ctx.getStringAttr(root);
    for (const DeclarativePattern *pattern : set.getOrdered(root)) {
      NodeList nested = matcher::buildChain(compiler.compile(*pattern));
      nested.pop_back(); // the trailing fail, kept once at the end
      tree.body.insert(tree.body.end(), nested.begin(), nested.end());
    }
    tree.body.push_back(makeNode(ctx, "pat.fail", "", {}));
    trees.push_back(std::move(tree));
  }
  auto module = createModule(ctx);
  matcher::writeMatchers(module.get(), trees);
  return module;
}

//===----------------------------------------------------------------------===//
// Contraction
//===----------------------------------------------------------------------===//

namespace {

/// The only check of a success region, if the region is exactly
/// [check, fail].
Node *soleCheck(NodeList &region) {
  if (region.size() == 2 && region[0].isCheck() && region[1].name == "pat.fail")
    return &region[0];
  return nullptr;
}

/// Attribute entries tested by an equality check, or nullopt for other
/// checks (including presence-only check_attr).
std::optional<std::vector<NamedAttribute>> attrEqualities(const Node &node) {
  if (node.name == "pat.check_attrs")
    return node.get("values").getDictionary();
  if (node.name == "pat.check_attr" && node.get("value"))
    return std::vector<NamedAttribute>{{node.get("name").getString(), node.get("value")}};
  return std::nullopt;
}

bool contractNode(Context &ctx, Node &node) {
  Node *next = node.isCheck() ? soleCheck(node.regions[0]) : nullptr;
  if (!next || next->handle != node.handle)
    return false;
  if (node.name == "pat.check_opcode" && next->name == "pat.check_arity") {
    Node fused = makeNode(ctx, "pat.check_op_arity", node.handle,
                          {{"opcode", node.get("opcode")}, {"count", next->get("count")}});
    fused.regions = {std::move(next->regions[0])};
    node = std::move(fused);
    return true;
  }
  auto lhs = attrEqualities(node);
  auto rhs = attrEqualities(*next);
  if (!lhs || !rhs)
    return false;
  std::map<std::string, Attribute> merged;
  for (const NamedAttribute &a : *lhs)
    merged[a.name] = a.value;
  for (const NamedAttribute &a : *rhs) {
    auto [it, inserted] = merged.emplace(a.name, a.value);
    // Conflicting values can never both hold; leave such a chain alone.
    if (!inserted && it->second != a.value)
      return false;
  }
  std::vector<NamedAttribute> entries;
  for (const auto &[name, value] : merged)
    entries.push_back({name, value});
  Node fused = makeNode(ctx, "pat.check_attrs", node.handle,
                        {{"values", ctx.getDictionaryAttr(entries)}});
  fused.regions = {std::move(next->regions[0])};
  node = std::move(fused);
  return true;
}

void contractList(Context &ctx, NodeList &nodes, ChangeReport &report) {
  for (Node &node : nodes) {
    while (contractNode(ctx, node))
      ++report.rewrites;
    for (NodeList &region : node.regions)
      contractList(ctx, region, report);
  }
}

} // namespace

ChangeReport contractMatcher(Operation *module) {
  ChangeReport report;
  report.iterations = 1;
  report.converged = true;
  std::vector<MatcherTree> trees = matcher::readMatchers(module);
  for (MatcherTree &tree : trees)
    contractList(module->getContext(), tree.body, report);
  if (report.rewrites)
    matcher::writeMatchers(module, trees);
  return report;
}

//===----------------------------------------------------------------------===//
// Predicate reordering
//===----------------------------------------------------------------------===//

namespace {

unsigned kindRank(const Node &node) {
  if (node.name == "pat.check_opcode" || node.name == "pat.check_op_arity")
    return 0;
  if (node.name == "pat.check_arity")
    return 1;
  if (node.name == "pat.check_attr" || node.name == "pat.check_attrs")
    return 2;
  return 3;
}

/// Capture ids read by `node`.
std::vector<std::string> captureUses(const Node &node) {
  if (node.name == "pat.check_same")
    return {node.get("lhs").getString(), node.get("rhs").getString()};
  return {};
}

/// Captures move down to just before their first reader, or to the emit.
/// They cannot fail, so this changes nothing about which chains match.
Chain sinkCaptures(const Chain &chain) {
  std::vector<const Node *> pending;
  Chain rest;
  for (const Node &item : chain)
    (item.name == "pat.capture" ? pending.push_back(&item) : rest.push_back(item));
  Chain out;
  for (const Node &item : rest) {
    std::vector<std::string> uses = captureUses(item);
    bool all = item.name == "pat.emit";
    for (auto it = pending.begin(); it != pending.end();) {
      std::string id = (*it)->get("id").getString();
      if (all || std::find(uses.begin(), uses.end(), id) != uses.end()) {
        out.push_back(**it);
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
    out.push_back(item);
  }
  return out;
}

/// Sorts every maximal run of checks on one handle by the canonical key.
void sortRuns(Chain &chain, const std::map<std::string, unsigned> &frequency) {
  auto sortable = [](const Node &n) { return n.isCheck() && !n.handle.empty(); };
  auto before = [&](const Node &a, const Node &b) {
    unsigned ra = kindRank(a), rb = kindRank(b);
    if (ra != rb)
      return ra < rb;
    unsigned fa = frequency.at(a.key()), fb = frequency.at(b.key());
    if (fa != fb)
      return fa > fb;
    return a.key() < b.key();
  };
  for (size_t i = 0; i < chain.size();) {
    size_t j = i;
    while (j < chain.size() && sortable(chain[j]) && chain[j].handle == chain[i].handle)
      ++j;
    if (j > i + 1)
      std::stable_sort(chain.begin() + i, chain.begin() + j, before);
    i = std::max(j, i + 1);
  }
}

bool sameChain(const Chain &a, const Chain &b) {
  if (a.size() != b.size())
    return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].sameHead(b[i]))
      return false;
  return true;
}

NodeList buildChains(const std::vector<Chain> &chains) {
  NodeList body;
  for (const Chain &chain : chains) {
    NodeList nested = matcher::buildChain(chain);
    nested.pop_back();
    body.insert(body.end(), nested.begin(), nested.end());
  }
  Node fail;
  fail.name = "pat.fail";
  body.push_back(fail);
  return body;
}

} // namespace

ChangeReport reorderPredicates(Operation *module) {
  ChangeReport report;
  report.iterations = 1;
  report.converged = true;
  std::vector<MatcherTree> trees = matcher::readMatchers(module);
  std::vector<std::vector<Chain>> chains;
  // Frequencies are taken once, over the whole set, before any move.
  std::map<std::string, unsigned> frequency;
  for (const MatcherTree &tree : trees) {
    chains.push_back(matcher::flattenChains(tree.body));
    for (const Chain &chain : chains.back())
      for (const Node &item : chain)
        ++frequency[item.key()];
  }
  for (size_t t = 0; t < trees.size(); ++t) {
    for (Chain &chain : chains[t]) {
      Chain reordered = sinkCaptures(chain);
      sortRuns(reordered, frequency);
      if (!sameChain(chain, reordered)) {
        ++report.rewrites;
        chain = std::move(reordered);
      }
    }
    trees[t].body = buildChains(chains[t]);
  }
  if (report.rewrites)
    matcher::writeMatchers(module, trees);
  return report;
}

//===----------------------------------------------------------------------===//
// Factoring
//===----------------------------------------------------------------------===//

namespace {

bool isOpcodeCheck(const Node &node) {
  return node.name == "pat.check_opcode" || node.name == "pat.check_op_arity";
}

class Factorer {
public:
  explicit Factorer(Context &ctx) : ctx_(ctx) {}

  /// Merges `chains`, which agree on their first `depth` items, into one
  /// block. Only adjacent chains share a node, except across an opcode
  /// switch whose cases exclude each other; priority is kept either way.
  NodeList factor(const std::vector<const Chain *> &chains, size_t depth) {
    NodeList out;
    for (size_t i = 0; i < chains.size();) {
      const Node &head = (*chains[i])[depth];
      if (head.name == "pat.emit") {
        // Anything after an unconditional emit can never run.
        out.push_back(head);
        return out;
      }
      size_t j = i + 1;
      if (isOpcodeCheck(head)) {
        std::vector<std::string> opcodes;
        while (j < chains.size() && isOpcodeCheck((*chains[j])[depth]) &&
               (*chains[j])[depth].handle == head.handle)
          ++j;
        for (size_t k = i; k < j; ++k) {
          std::string opcode = (*chains[k])[depth].get("opcode").getString();
          if (std::find(opcodes.begin(), opcodes.end(), opcode) == opcodes.end())
            opcodes.push_back(opcode);
        }
        if (opcodes.size() > 1) {
          out.push_back(makeSwitch(chains, i, j, depth, opcodes));
          report.rewrites += j - i - 1;
          i = j;
          continue;
        }
        j = i + 1;
      }
      while (j < chains.size() && (*chains[j])[depth].sameHead(head))
        ++j;
      report.rewrites += j - i - 1;
      std::vector<const Chain *> group(chains.begin() + i, chains.begin() + j);
      NodeList rest = factor(group, depth + 1);
      if (head.isCheck()) {
        Node node = head;
        node.regions = {std::move(rest)};
        out.push_back(std::move(node));
      } else {
        // A capture does not branch: the group continues in this block.
        out.push_back(head);
        bool terminated = rest.back().name == "pat.emit";
        if (!terminated)
          rest.pop_back();
        out.insert(out.end(), rest.begin(), rest.end());
        if (terminated)
          return out;
      }
      i = j;
    }
    out.push_back(makeNode(ctx_, "pat.fail", "", {}));
    return out;
  }

  ChangeReport report;

private:
  Node makeSwitch(const std::vector<const Chain *> &chains, size_t begin, size_t end,
                  size_t depth, const std::vector<std::string> &opcodes) {
    const std::string &handle = (*chains[begin])[depth].handle;
    std::vector<Attribute> cases;
    for (const std::string &opcode : opcodes)
      cases.push_back(ctx_.getStringAttr(opcode));
    Node node = makeNode(ctx_, "pat.switch_opcode", handle, {{"cases", ctx_.getArrayAttr(cases)}});
    for (const std::string &opcode : opcodes) {
      // The case implies the opcode; a fused check leaves its arity part.
      std::vector<const Chain *> group;
      for (size_t k = begin; k < end; ++k) {
        const Node &head = (*chains[k])[depth];
        if (head.get("opcode").getString() != opcode)
          continue;
        Chain residual(chains[k]->begin(), chains[k]->end());
        if (head.name == "pat.check_op_arity")
          residual[depth] =
              makeNode(ctx_, "pat.check_arity", handle, {{"count", head.get("count")}});
        else
          residual.erase(residual.begin() + depth);
        owned_.push_back(std::make_unique<Chain>(std::move(residual)));
        group.push_back(owned_.back().get());
      }
      node.regions.push_back(factor(group, depth));
    }
    node.regions.push_back({makeNode(ctx_, "pat.fail", "", {})});
    return node;
  }

  Context &ctx_;
  std::vector<std::unique_ptr<Chain>> owned_;
};

} // namespace

ChangeReport factorMatcher(Operation *module) {
  Context &ctx = module->getContext();
  std::vector<MatcherTree> trees = matcher::readMatchers(module);
  std::vector<Chain> chains;
  std::vector<Attribute> roots;
  for (const MatcherTree &tree : trees) {
    for (Chain &chain : matcher::flattenChains(tree.body))
      chains.push_back(std::move(chain));
    if (std::find(roots.begin(), roots.end(), tree.root) == roots.end())
      roots.push_back(tree.root);
  }
  Factorer factorer(ctx);
  factorer.report.iterations = 1;
  factorer.report.converged = true;
  if (trees.empty())
    return factorer.report;

  std::vector<const Chain *> order;
  for (const Chain &chain : chains)
    order.push_back(&chain);
  MatcherTree merged;
  if (roots.size() == 1)
    merged.root = roots.front();
  merged.body = chains.empty() ? NodeList{makeNode(ctx, "pat.fail", "", {})}
                               : factorer.factor(order, 0);
  if (factorer.report.rewrites == 0 && trees.size() == 1)
    return factorer.report;
  if (trees.size() > 1)
    factorer.report.rewrites += trees.size() - 1;
  matcher::writeMatchers(module, {merged});
  return factorer.report;
}

//===----------------------------------------------------------------------===//
// Stages
//===----------------------------------------------------------------------===//

std::unique_ptr<Operation> buildMatcher(Context &ctx, const PatternSet &set, MatcherStage stage) {
  auto module = compilePatternsToMatcher(ctx, set);
  if (stage >= MatcherStage::Contracted)
    contractMatcher(module.get());
  if (stage >= MatcherStage::Reordered)
    reorderPredicates(module.get());
  if (stage >= MatcherStage::Factored)
    factorMatcher(module.get());
  if (stage >= MatcherStage::Final)
    runCSE(module.get());
  return module;
}

} // namespace mir

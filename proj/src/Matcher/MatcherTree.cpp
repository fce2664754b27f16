//===- MatcherTree.cpp - Reading and writing matcher programs -------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "MatcherTree.h"

#include "mir/IR/Builder.h"
#include "mir/IR/Context.h"
#include "mir/Matcher/PatDialect.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mir::matcher {

Attribute Node::get(std::string_view attrName) const {
  for (const NamedAttribute &a : attrs)
    if (a.name == attrName)
      return a.value;
  return Attribute();
}

bool Node::isCheck() const { return isPatCheck(name); }

bool Node::sameHead(const Node &other) const {
  return name == other.name && handle == other.handle && attrs == other.attrs;
}

std::string Node::key() const {
  std::string text = name + "(" + handle + "){";
  for (const NamedAttribute &a : attrs)
    text += a.name + "=" + a.value.str() + ";";
  return text + "}";
}

Node makeNode(Context &, std::string name, std::string handle,
              std::vector<NamedAttribute> attrs) {
  std::sort(attrs.begin(), attrs.end(),
            [](const NamedAttribute &a, const NamedAttribute &b) { return a.name < b.name; });
  Node node;
  node.name = std::move(name);
  node.handle = std::move(handle);
  node.attrs = std::move(attrs);
  if (node.isCheck())
    node.regions.resize(1);
  return node;
}

//===----------------------------------------------------------------------===//
// IR to tree
//===----------------------------------------------------------------------===//

namespace {

NodeList readBlock(Block *block, std::map<Value *, std::string> &positions) {
  NodeList nodes;
  for (Operation &op : *block) {
    if (op.getName() == "pat.descend") {
      positions[op.getResult(0)] = positions.at(op.getOperand(0)) + "." +
                                   std::to_string(op.getAttr("index").getInt64());
      continue;
    }
    Node node;
    node.name = op.getName();
    if (op.getNumOperands() > 0)
      node.handle = positions.at(op.getOperand(0));
    node.attrs = op.getAttrs();
    std::sort(node.attrs.begin(), node.attrs.end(),
              [](const NamedAttribute &a, const NamedAttribute &b) { return a.name < b.name; });
    for (unsigned r = 0; r < op.getNumRegions(); ++r) {
      Region &region = op.getRegion(r);
      node.regions.push_back(region.empty() ? NodeList() : readBlock(region.front(), positions));
    }
    nodes.push_back(std::move(node));
  }
  return nodes;
}

//===----------------------------------------------------------------------===//
// Tree to IR
//===----------------------------------------------------------------------===//

unsigned depth(const std::string &position) {
  return std::count(position.begin(), position.end(), '.');
}

void collectPositions(const Node &node, std::set<std::string> &out) {
  if (!node.handle.empty()) {
    // Every prefix needs its own descend.
    for (size_t dot = node.handle.find('.'); dot != std::string::npos;
         dot = node.handle.find('.', dot + 1))
      out.insert(node.handle.substr(0, dot));
    out.insert(node.handle);
  }
  for (const NodeList &region : node.regions)
    for (const Node &nested : region)
      collectPositions(nested, out);
}

void writeNodes(OpBuilder &builder, Block *block, const NodeList &nodes,
                const std::map<std::string, Value *> &handles) {
  for (const Node &node : nodes) {
    OperationState state(node.name);
    if (!node.handle.empty())
      state.operands.push_back(handles.at(node.handle));
    state.attributes = node.attrs;
    for (size_t r = 0; r < node.regions.size(); ++r)
      state.addRegion();
    builder.setInsertionPointToEnd(block);
    Operation *op = builder.create(std::move(state));
    for (size_t r = 0; r < node.regions.size(); ++r) {
      Block *nested = builder.createBlock(&op->getRegion(r));
      writeNodes(builder, nested, node.regions[r], handles);
    }
  }
}

} // namespace

std::vector<MatcherTree> readMatchers(Operation *module) {
  std::vector<MatcherTree> trees;
  for (Operation &op : *module->getRegion(0).front()) {
    if (op.getName() != "pat.matcher")
      continue;
    MatcherTree tree;
    tree.root = op.getAttr("root");
    Block *entry = op.getRegion(0).front();
    std::map<Value *, std::string> positions{{entry->getArgument(0), "r"}};
    tree.body = readBlock(entry, positions);
    trees.push_back(std::move(tree));
  }
  return trees;
}

void writeMatchers(Operation *module, const std::vector<MatcherTree> &matchers) {
  Block *top = module->getRegion(0).front();
  for (Operation *op : top->getOpsSnapshot())
    if (op->getName() == "pat.matcher")
      op->erase();

  Context &ctx = module->getContext();
  OpBuilder builder(ctx);
  for (const MatcherTree &tree : matchers) {
    OperationState state("pat.matcher");
    if (tree.root)
      state.addAttribute("root", tree.root);
    state.addRegion();
    if (Operation *terminator = top->getTerminator())
      builder.setInsertionPoint(terminator);
    else
      builder.setInsertionPointToEnd(top);
    Operation *matcher = builder.create(std::move(state));
    Block *entry = builder.createBlock(&matcher->getRegion(0), {ctx.getIndexType()});

    // Each top-level node gets the descends it needs right in front of
    // it; duplicates between siblings are left for CSE.
    for (const Node &node : tree.body) {
      std::set<std::string> positions;
      collectPositions(node, positions);
      std::vector<std::string> ordered(positions.begin(), positions.end());
      std::stable_sort(ordered.begin(), ordered.end(),
                       [](const std::string &a, const std::string &b) {
                         return depth(a) < depth(b);
                       });
      std::map<std::string, Value *> handles{{"r", entry->getArgument(0)}};
      for (const std::string &position : ordered) {
        if (position == "r")
          continue;
        size_t dot = position.rfind('.');
        int64_t index = std::stoll(position.substr(dot + 1));
        builder.setInsertionPointToEnd(entry);
        Operation *descend =
            builder.create("pat.descend", {handles.at(position.substr(0, dot))},
                           {ctx.getIndexType()}, {{"index", ctx.getIndexAttr(index)}});
        handles[position] = descend->getResult(0);
      }
      writeNodes(builder, entry, {node}, handles);
    }
  }
}

//===----------------------------------------------------------------------===//
// Chains
//===----------------------------------------------------------------------===//

namespace {

void flattenInto(const NodeList &block, Chain &prefix, std::vector<Chain> &out) {
  size_t mark = prefix.size();
  for (const Node &node : block) {
    if (node.name == "pat.fail")
      break;
    if (node.name == "pat.emit") {
      out.push_back(prefix);
      out.back().push_back(node);
      break;
    }
    Node head = node;
    head.regions.clear();
    if (node.isCheck()) {
      head.regions.resize(1);
      prefix.push_back(head);
      flattenInto(node.regions[0], prefix, out);
      prefix.pop_back();
      continue;
    }
    if (node.name == "pat.switch_opcode") {
      const auto &cases = node.get("cases").getArray();
      for (size_t i = 0; i < cases.size(); ++i) {
        Node check;
        check.name = "pat.check_opcode";
        check.handle = node.handle;
        check.attrs = {{"opcode", cases[i]}};
        check.regions.resize(1);
        prefix.push_back(check);
        flattenInto(node.regions[i], prefix, out);
        prefix.pop_back();
      }
      const NodeList &fallback = node.regions.back();
      if (!(fallback.empty() || (fallback.size() == 1 && fallback[0].name == "pat.fail")))
        throw std::logic_error("switch default regions must be empty to flatten");
      continue;
    }
    // Captures stay in effect for the rest of the block.
    prefix.push_back(head);
  }
  prefix.resize(mark);
}

} // namespace

std::vector<Chain> flattenChains(const NodeList &body) {
  std::vector<Chain> chains;
  Chain prefix;
  flattenInto(body, prefix, chains);
  return chains;
}

NodeList buildChain(const Chain &chain, size_t from) {
  NodeList out;
  for (size_t i = from; i < chain.size(); ++i) {
    const Node &item = chain[i];
    if (item.isCheck()) {
      Node nested = item;
      nested.regions = {buildChain(chain, i + 1)};
      out.push_back(std::move(nested));
      break;
    }
    out.push_back(item);
    if (item.name == "pat.emit")
      return out;
  }
  Node fail;
  fail.name = "pat.fail";
  out.push_back(std::move(fail));
  return out;
}

} // namespace mir::matcher

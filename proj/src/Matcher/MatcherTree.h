//===- MatcherTree.h - Value-free view of matcher programs ------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The transformations work on a tree copy of the `pat` ops in which
// handles are position strings instead of SSA values. `pat.descend` ops do
// not appear in the tree; the writer recreates them from the positions.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"

#include <string>
#include <vector>

namespace mir::matcher {

struct Node {
  std::string name;
  /// Position of the handle operand, empty for ops without one.
  std::string handle;
  /// Sorted by name.
  std::vector<NamedAttribute> attrs;
  std::vector<std::vector<Node>> regions;

  Attribute get(std::string_view attrName) const;
  bool isCheck() const;
  bool isTerminator() const { return name == "pat.emit" || name == "pat.fail"; }
  /// Same op, handle and attributes; regions are ignored.
  bool sameHead(const Node &other) const;
  /// Text of the head, used for frequency counts and tie breaking.
  std::string key() const;
};

using NodeList = std::vector<Node>;

struct MatcherTree {
  Attribute root;
  NodeList body;
};

/// A path through the tree: checks and captures without regions, then an
/// emit.
using Chain = std::vector<Node>;

std::vector<MatcherTree> readMatchers(Operation *module);
/// Replaces every `pat.matcher` in `module` with `matchers`.
void writeMatchers(Operation *module, const std::vector<MatcherTree> &matchers);

/// Every success path of `body` in execution order.
std::vector<Chain> flattenChains(const NodeList &body);
/// The nested form of a single chain, terminated.
NodeList buildChain(const Chain &chain, size_t from = 0);

Node makeNode(Context &ctx, std::string name, std::string handle,
              std::vector<NamedAttribute> attrs);

} // namespace mir::matcher

//===- StructuralEqual.cpp - IR isomorphism check -------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/StructuralEqual.h"

#include <unordered_map>

namespace mir {

namespace {

class Matcher {
public:
  explicit Matcher(std::string *why) : why_(why) {}

  bool ops(Operation *a, Operation *b) {
    if (a->getName() != b->getName())
      return fail("opcode '" + a->getName() + "' vs '" + b->getName() + "'");
    if (a->getAttrDictionary().str() != b->getAttrDictionary().str())
      return fail("attributes of '" + a->getName() + "' differ: " +
                  a->getAttrDictionary().str() + " vs " + b->getAttrDictionary().str());
    if (a->getNumResults() != b->getNumResults() || a->getNumOperands() != b->getNumOperands() ||
        a->getNumRegions() != b->getNumRegions() ||
        a->getNumSuccessors() != b->getNumSuccessors())
      return fail("shape of '" + a->getName() + "' differs");
    for (unsigned i = 0; i < a->getNumOperands(); ++i)
      if (!values(a->getOperand(i), b->getOperand(i)))
        return fail("operand #" + std::to_string(i) + " of '" + a->getName() + "' differs");
    for (unsigned i = 0; i < a->getNumSuccessors(); ++i) {
      if (!blocks(a->getSuccessor(i), b->getSuccessor(i)))
        return fail("successor #" + std::to_string(i) + " of '" + a->getName() + "' differs");
      auto sa = a->getSuccessorOperands(i), sb = b->getSuccessorOperands(i);
      if (sa.size() != sb.size())
        return fail("successor operand count of '" + a->getName() + "' differs");
      for (size_t j = 0; j < sa.size(); ++j)
        if (!values(sa[j], sb[j]))
          return fail("successor operand of '" + a->getName() + "' differs");
    }
    for (unsigned i = 0; i < a->getNumResults(); ++i)
      if (!values(a->getResult(i), b->getResult(i)))
        return fail("result #" + std::to_string(i) + " of '" + a->getName() + "' differs");
    for (unsigned i = 0; i < a->getNumRegions(); ++i)
      if (!regions(a->getRegion(i), b->getRegion(i)))
        return false;
    return true;
  }

private:
  bool regions(Region &a, Region &b) {
    if (a.size() != b.size())
      return fail("block count differs");
    for (Block *ba = a.front(), *bb = b.front(); ba; ba = ba->getNextNode(), bb = bb->getNextNode()) {
      if (!blocks(ba, bb))
        return fail("block correspondence differs");
      if (ba->getNumArguments() != bb->getNumArguments())
        return fail("block argument count differs");
      for (unsigned i = 0; i < ba->getNumArguments(); ++i)
        if (!values(ba->getArgument(i), bb->getArgument(i)))
          return fail("block argument differs");
      if (ba->size() != bb->size())
        return fail("op count of block differs");
      for (Operation *oa = ba->front(), *ob = bb->front(); oa;
           oa = oa->getNextNode(), ob = ob->getNextNode())
        if (!ops(oa, ob))
          return false;
    }
    return true;
  }

  bool values(Value *a, Value *b) {
    if (!a || !b)
      return a == b;
    if (a->getType().str() != b->getType().str())
      return false;
    return bind(valueAB_, valueBA_, a, b);
  }

  bool blocks(Block *a, Block *b) {
    if (!a || !b)
      return a == b;
    return bind(blockAB_, blockBA_, a, b);
  }

  template <typename T>
  static bool bind(std::unordered_map<T *, T *> &ab, std::unordered_map<T *, T *> &ba, T *a,
                   T *b) {
    auto ia = ab.find(a);
    auto ib = ba.find(b);
    if (ia == ab.end() && ib == ba.end()) {
      ab[a] = b;
      ba[b] = a;
      return true;
    }
    return ia != ab.end() && ib != ba.end() && ia->second == b && ib->second == a;
  }

  bool fail(std::string msg) {
    if (why_ && why_->empty())
      *why_ = std::move(msg);
    return false;
  }

  std::string *why_;
  std::unordered_map<Value *, Value *> valueAB_, valueBA_;
  std::unordered_map<Block *, Block *> blockAB_, blockBA_;
};

} // namespace

bool structurallyEqual(Operation *a, Operation *b, std::string *why) {
  if (why)
    why->clear();
  Matcher m(why);
  return m.ops(a, b);
}

} // namespace mir

//===- Builder.cpp - Insertion-point based op construction ----------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/Builder.h"

namespace mir {

Operation *OpBuilder::create(OperationState &&state) {
  return insert(Operation::create(*ctx_, std::move(state)));
}

Operation *OpBuilder::create(std::string name, std::vector<Value *> operands,
                             std::vector<Type> types, std::vector<NamedAttribute> attrs,
                             Location loc) {
  OperationState state(std::move(name), std::move(loc));
  state.operands = std::move(operands);
  state.types = std::move(types);
  state.attributes = std::move(attrs);
  return create(std::move(state));
}

Operation *OpBuilder::insert(std::unique_ptr<Operation> op) {
  if (!block_)
    throw IRError("builder has no insertion point");
  Operation *raw = block_->insert(before_, std::move(op));
  if (listener_)
    listener_->notifyOperationInserted(raw);
  return raw;
}

Block *OpBuilder::createBlock(Region *region, std::vector<Type> argTypes) {
  Block *block = region->addBlock(*ctx_);
  for (Type t : argTypes)
    block->addArgument(t);
  setInsertionPointToEnd(block);
  return block;
}

} // namespace mir

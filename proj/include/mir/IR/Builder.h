//===- Builder.h - Insertion-point based op construction --------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"

namespace mir {

/// Observes ops created through a builder; the rewrite driver uses it to
/// enqueue new ops.
class BuilderListener {
public:
  virtual ~BuilderListener() = default;
  virtual void notifyOperationInserted(Operation *op) {}
};

class OpBuilder {
public:
  explicit OpBuilder(Context &ctx, BuilderListener *listener = nullptr)
      : ctx_(&ctx), listener_(listener) {}

  Context &getContext() const { return *ctx_; }
  BuilderListener *getListener() const { return listener_; }
  void setListener(BuilderListener *listener) { listener_ = listener; }

  void setInsertionPoint(Operation *op) {
    block_ = op->getBlock();
    before_ = op;
  }
  void setInsertionPointAfter(Operation *op) {
    block_ = op->getBlock();
    before_ = op->getNextNode();
  }
  void setInsertionPointToStart(Block *block) {
    block_ = block;
    before_ = block->front();
  }
  void setInsertionPointToEnd(Block *block) {
    block_ = block;
    before_ = nullptr;
  }
  void clearInsertionPoint() {
    block_ = nullptr;
    before_ = nullptr;
  }
  Block *getInsertionBlock() const { return block_; }
  /// Op the next insertion goes in front of; null means block end.
  Operation *getInsertionPoint() const { return before_; }

  /// Creates an op and inserts it at the insertion point (if one is set).
  Operation *create(OperationState &&state);
  Operation *create(std::string name, std::vector<Value *> operands, std::vector<Type> types,
                    std::vector<NamedAttribute> attrs = {}, Location loc = Location());
  /// Inserts an already-built op.
  Operation *insert(std::unique_ptr<Operation> op);

  /// Creates a block at the end of `region` with the given argument types
  /// and moves the insertion point to its end.
  Block *createBlock(Region *region, std::vector<Type> argTypes = {});

  // Convenience shortcuts.
  Type getI1Type() { return ctx_->getI1Type(); }
  Type getIndexType() { return ctx_->getIndexType(); }
  Type getIntegerType(unsigned w) { return ctx_->getIntegerType(w); }

private:
  Context *ctx_;
  BuilderListener *listener_;
  Block *block_ = nullptr;
  Operation *before_ = nullptr;
};

} // namespace mir

//===- PatternMatch.h - Rewrite patterns and the rewriter -------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Builder.h"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mir {

/// Listener for every IR change made through a PatternRewriter.
class RewriteListener : public BuilderListener {
public:
  /// Called before `op` (and everything nested in it) is destroyed.
  virtual void notifyOperationErased(Operation *op) {}
  /// Called after `op`'s operands or attributes changed in place.
  virtual void notifyOperationModified(Operation *op) {}
  /// Called before `op`'s results are replaced by `values`.
  virtual void notifyOperationReplaced(Operation *op, std::span<Value *const> values) {}
};

class PatternRewriter : public OpBuilder {
public:
  explicit PatternRewriter(Context &ctx, RewriteListener *listener = nullptr)
      : OpBuilder(ctx, listener), rewriteListener_(listener) {}

  /// Replaces every result of `op` with `values` and erases `op`. Throws
  /// IRError on arity or type mismatch.
  void replaceOp(Operation *op, std::span<Value *const> values);
  void eraseOp(Operation *op);
  /// Redirects all uses of `from` to `to`, notifying the modified users.
  void replaceAllUsesWith(Value *from, Value *to);
  /// Runs `fn`, then reports `op` as modified.
  void modifyOpInPlace(Operation *op, const std::function<void()> &fn);

  RewriteListener *getRewriteListener() const { return rewriteListener_; }

private:
  RewriteListener *rewriteListener_;
};

/// A rewrite rooted at ops named `rootName` (empty matches any op).
class RewritePattern {
public:
  RewritePattern(std::string rootName, unsigned benefit, std::string name)
      : rootName_(std::move(rootName)), benefit_(benefit), name_(std::move(name)) {}
  virtual ~RewritePattern() = default;

  const std::string &getRootName() const { return rootName_; }
  unsigned getBenefit() const { return benefit_; }
  const std::string &getName() const { return name_; }

  /// Returns true iff the IR was changed. Must leave the IR untouched when
  /// returning false.
  virtual bool matchAndRewrite(Operation *op, PatternRewriter &rewriter) const = 0;

private:
  std::string rootName_;
  unsigned benefit_;
  std::string name_;
};

/// Pattern defined by a callable, for native C++ rewrites.
class LambdaPattern : public RewritePattern {
public:
  using Fn = std::function<bool(Operation *, PatternRewriter &)>;
  LambdaPattern(std::string rootName, unsigned benefit, std::string name, Fn fn)
      : RewritePattern(std::move(rootName), benefit, std::move(name)), fn_(std::move(fn)) {}
  bool matchAndRewrite(Operation *op, PatternRewriter &rewriter) const override {
    return fn_(op, rewriter);
  }

private:
  Fn fn_;
};

/// Patterns indexed by root opcode, each list ordered by (benefit desc,
/// insertion order). Patterns added to an earlier tier are always tried
/// before those of a later tier.
class FrozenPatternSet {
public:
  void add(std::shared_ptr<const RewritePattern> pattern, unsigned tier = 0);
  /// Candidates for `op`, in application order.
  std::vector<const RewritePattern *> getCandidates(const Operation &op) const;
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

private:
  struct Entry {
    std::shared_ptr<const RewritePattern> pattern;
    unsigned tier;
    size_t order;
  };
  std::vector<Entry> entries_;
};

/// Fold result materialization: tries the op's fold hook and, on success,
/// replaces the op (attributes become constants through the dialect's
/// materializer). Returns true if the IR changed.
bool tryFoldOp(Operation *op, PatternRewriter &rewriter);

/// Constant value attribute if `value` is produced by a ConstantLike op.
Attribute getConstantValue(Value *value);

/// NoSideEffect, registered, not a terminator, and all results unused.
bool isTriviallyDead(Operation *op);

} // namespace mir

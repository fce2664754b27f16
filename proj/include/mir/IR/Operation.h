//===- Operation.h - Operations, blocks, regions and values -----*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The in-memory IR. An Operation owns its result values and regions; a
// Region owns its blocks; a Block owns its arguments and operations. Use-def
// links are bidirectional: every OpOperand is registered in the use list of
// the value it references.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Attributes.h"
#include "mir/IR/Context.h"
#include "mir/IR/Location.h"
#include "mir/IR/OpDefinition.h"
#include "mir/IR/Types.h"
#include "mir/Support/IList.h"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mir {

class Block;
class OpOperand;
class Operation;
class Region;

//===----------------------------------------------------------------------===//
// Value
//===----------------------------------------------------------------------===//

class Value {
public:
  enum class Kind { OpResult, BlockArgument, Placeholder };

  Value(const Value &) = delete;
  Value &operator=(const Value &) = delete;
  ~Value();

  /// A detached value with no definition, used while parsing forward
  /// references and in tests.
  static std::unique_ptr<Value> createPlaceholder(Context &ctx, Type type);

  Kind getKind() const { return kind_; }
  bool isBlockArgument() const { return kind_ == Kind::BlockArgument; }
  Type getType() const { return type_; }
  uint64_t getId() const { return id_; }

  /// The op producing this value; null for block arguments.
  Operation *getDefiningOp() const;
  /// The block owning this argument; null for op results.
  Block *getOwnerBlock() const;
  /// Result number or argument number.
  unsigned getIndex() const { return index_; }

  /// Block containing the definition point.
  Block *getParentBlock() const;
  Region *getParentRegion() const;

  const std::vector<OpOperand *> &getUses() const { return uses_; }
  bool use_empty() const { return uses_.empty(); }
  size_t getNumUses() const { return uses_.size(); }
  /// Distinct users in use-list order.
  std::vector<Operation *> getUsers() const;

  /// Rewrites every operand slot referencing this value, including
  /// successor operands. Returns the number of rewritten slots. Throws
  /// IRError if the types differ.
  size_t replaceAllUsesWith(Value *replacement);
  size_t replaceUsesIf(Value *replacement,
                       const std::function<bool(OpOperand &)> &shouldReplace);

private:
  Value(Kind kind, Type type, uint64_t id, void *owner, unsigned index)
      : kind_(kind), type_(type), id_(id), owner_(owner), index_(index) {}

  Kind kind_;
  Type type_;
  uint64_t id_;
  void *owner_;
  unsigned index_;
  std::vector<OpOperand *> uses_;

  friend class Block;
  friend class OpOperand;
  friend class Operation;
};

class OpOperand {
public:
  OpOperand(Operation *owner, unsigned index, Value *value) : owner_(owner), index_(index) {
    set(value);
  }
  OpOperand(const OpOperand &) = delete;
  OpOperand &operator=(const OpOperand &) = delete;
  ~OpOperand() { set(nullptr); }

  Operation *getOwner() const { return owner_; }
  /// Index into the owner's flat operand storage (successor operands
  /// follow the regular operands).
  unsigned getOperandNumber() const { return index_; }
  Value *get() const { return value_; }
  void set(Value *value);

private:
  Operation *owner_;
  unsigned index_;
  Value *value_ = nullptr;
  friend class Operation;
  friend class Value;
};

/// Old-to-new value and block correspondences used by cloning.
class IRMapping {
public:
  void map(Value *from, Value *to) { values_[from] = to; }
  void map(Block *from, Block *to) { blocks_[from] = to; }
  Value *lookupOrDefault(Value *v) const {
    auto it = values_.find(v);
    return it == values_.end() ? v : it->second;
  }
  Value *lookupOrNull(Value *v) const {
    auto it = values_.find(v);
    return it == values_.end() ? nullptr : it->second;
  }
  Block *lookupOrDefault(Block *b) const {
    auto it = blocks_.find(b);
    return it == blocks_.end() ? b : it->second;
  }
  bool contains(Value *v) const { return values_.count(v) != 0; }

private:
  std::unordered_map<Value *, Value *> values_;
  std::unordered_map<Block *, Block *> blocks_;
};

//===----------------------------------------------------------------------===//
// Block
//===----------------------------------------------------------------------===//

class Block : public IListNode<Block> {
public:
  explicit Block(Context &ctx);
  Block(const Block &) = delete;
  Block &operator=(const Block &) = delete;
  ~Block();

  Context &getContext() const { return *ctx_; }
  uint64_t getId() const { return id_; }
  Region *getParent() const { return parent_; }
  Operation *getParentOp() const;
  bool isEntryBlock() const;

  // Arguments.
  Value *addArgument(Type type);
  unsigned getNumArguments() const { return static_cast<unsigned>(args_.size()); }
  Value *getArgument(unsigned i) const { return args_[i].get(); }
  std::vector<Value *> getArguments() const;
  std::vector<Type> getArgumentTypes() const;
  /// Throws IRError if the argument still has uses.
  void eraseArgument(unsigned i);

  // Operations.
  IList<Operation> &getOperations() { return ops_; }
  const IList<Operation> &getOperations() const { return ops_; }
  IList<Operation>::iterator begin() const { return ops_.begin(); }
  IList<Operation>::iterator end() const { return ops_.end(); }
  bool empty() const { return ops_.empty(); }
  Operation *front() const { return ops_.front(); }
  Operation *back() const { return ops_.back(); }
  size_t size() const { return ops_.size(); }

  Operation *push_back(std::unique_ptr<Operation> op);
  Operation *push_front(std::unique_ptr<Operation> op);
  /// Inserts before `before` (null appends).
  Operation *insert(Operation *before, std::unique_ptr<Operation> op);
  std::unique_ptr<Operation> remove(Operation *op);
  /// Snapshot of the op list, safe against mutation while iterating.
  std::vector<Operation *> getOpsSnapshot() const;

  /// Last op if it carries the Terminator trait, else null.
  Operation *getTerminator() const;
  std::vector<Block *> getSuccessors() const;
  /// Blocks of the parent region whose terminators branch here, one entry
  /// per branch edge.
  std::vector<Block *> getPredecessors() const;
  bool hasPredecessors() const { return !getPredecessors().empty(); }

  /// Moves [splitBefore, end) into a new block inserted after this one.
  Block *splitBlock(Operation *splitBefore);

  /// Drops the operand references of every op in this block (recursively).
  void dropAllReferences();

  /// Position of `op` in this block; recomputed lazily after mutation.
  unsigned getOpOrder(const Operation *op) const;

private:
  void invalidateOrder() { orderValid_ = false; }

  Context *ctx_;
  uint64_t id_;
  Region *parent_ = nullptr;
  std::vector<std::unique_ptr<Value>> args_;
  IList<Operation> ops_;
  mutable bool orderValid_ = false;

  friend class Operation;
  friend class Region;
};

//===----------------------------------------------------------------------===//
// Region
//===----------------------------------------------------------------------===//

class Region {
public:
  explicit Region(Operation *parent = nullptr) : parent_(parent) {}
  Region(const Region &) = delete;
  Region &operator=(const Region &) = delete;
  ~Region();

  Operation *getParentOp() const { return parent_; }
  /// Region containing the parent op, if any.
  Region *getParentRegion() const;
  unsigned getRegionNumber() const;

  IList<Block> &getBlocks() { return blocks_; }
  const IList<Block> &getBlocks() const { return blocks_; }
  IList<Block>::iterator begin() const { return blocks_.begin(); }
  IList<Block>::iterator end() const { return blocks_.end(); }
  bool empty() const { return blocks_.empty(); }
  size_t size() const { return blocks_.size(); }
  Block *front() const { return blocks_.front(); }
  Block *back() const { return blocks_.back(); }
  std::vector<Block *> getBlocksSnapshot() const;

  Block *push_back(std::unique_ptr<Block> block);
  Block *insert(Block *before, std::unique_ptr<Block> block);
  std::unique_ptr<Block> remove(Block *block);
  /// Creates and appends a new empty block.
  Block *addBlock(Context &ctx) { return push_back(std::make_unique<Block>(ctx)); }

  /// True if `other` is this region or nested (transitively) inside it.
  bool isAncestor(const Region *other) const;

  /// Clones all blocks into `dest` before `before` (null appends).
  void cloneInto(Region *dest, Block *before, IRMapping &mapping) const;
  /// Moves all blocks of `other` into this (empty) region.
  void takeBody(Region &other);

  void dropAllReferences();

private:
  Operation *parent_;
  IList<Block> blocks_;
  friend class Operation;
};

//===----------------------------------------------------------------------===//
// Operation
//===----------------------------------------------------------------------===//

struct OperationState {
  Location location;
  std::string name;
  std::vector<Value *> operands;
  std::vector<Type> types;
  std::vector<NamedAttribute> attributes;
  std::vector<std::unique_ptr<Region>> regions;
  std::vector<std::pair<Block *, std::vector<Value *>>> successors;

  OperationState() = default;
  explicit OperationState(std::string name, Location loc = Location())
      : location(std::move(loc)), name(std::move(name)) {}

  void addOperands(std::span<Value *const> values) {
    operands.insert(operands.end(), values.begin(), values.end());
  }
  void addTypes(std::span<const Type> ts) { types.insert(types.end(), ts.begin(), ts.end()); }
  void addAttribute(std::string attrName, Attribute value) {
    attributes.push_back({std::move(attrName), value});
  }
  Region *addRegion() {
    regions.push_back(std::make_unique<Region>());
    return regions.back().get();
  }
  void addSuccessor(Block *block, std::vector<Value *> args = {}) {
    successors.emplace_back(block, std::move(args));
  }
};

class Operation : public IListNode<Operation> {
public:
  /// Creates a detached op. Constraint checking is left to the verifier.
  /// Throws IRError in strict mode for unregistered opcodes, and
  /// ValidationError for duplicate attribute names.
  static std::unique_ptr<Operation> create(Context &ctx, OperationState &&state);

  Operation(const Operation &) = delete;
  Operation &operator=(const Operation &) = delete;
  ~Operation();

  Context &getContext() const { return *ctx_; }
  uint64_t getId() const { return id_; }
  const std::string &getName() const { return name_; }
  std::string_view getDialectNamespace() const;
  const OpDefinition *getDefinition() const { return def_; }
  bool isRegistered() const { return def_ != nullptr; }
  /// Unregistered ops carry no traits.
  bool hasTrait(Trait t) const { return def_ && def_->hasTrait(t); }

  const Location &getLoc() const { return loc_; }
  void setLoc(Location loc) { loc_ = std::move(loc); }

  Block *getBlock() const { return block_; }
  Region *getParentRegion() const;
  Operation *getParentOp() const;
  /// True if `other` is nested (transitively) inside this op.
  bool isProperAncestor(const Operation *other) const;
  /// Nearest ancestor (or self) with the IsolatedFromAbove trait.
  Operation *getIsolationScope();
  /// True if this op precedes `other` in the same block.
  bool isBeforeInBlock(const Operation *other) const;

  // Operands (excluding successor operands).
  unsigned getNumOperands() const { return numOperands_; }
  Value *getOperand(unsigned i) const { return operands_[i]->get(); }
  std::vector<Value *> getOperands() const;
  std::vector<Type> getOperandTypes() const;
  OpOperand &getOpOperand(unsigned i) { return *operands_[i]; }
  void setOperand(unsigned i, Value *v) { operands_[i]->set(v); }
  /// Replaces the regular operand list, keeping successor operands.
  void setOperands(std::span<Value *const> values);
  /// Every operand slot, regular then successor operands.
  std::vector<OpOperand *> getAllOperandSlots() const;

  // Results.
  unsigned getNumResults() const { return static_cast<unsigned>(results_.size()); }
  Value *getResult(unsigned i) const { return results_[i].get(); }
  std::vector<Value *> getResults() const;
  std::vector<Type> getResultTypes() const;
  bool use_empty() const;

  // Attributes (stored as a sorted, interned dictionary).
  Attribute getAttrDictionary() const { return attrs_; }
  const std::vector<NamedAttribute> &getAttrs() const { return attrs_.getDictionary(); }
  Attribute getAttr(std::string_view name) const { return attrs_.get(name); }
  void setAttr(std::string_view name, Attribute value);
  void removeAttr(std::string_view name);
  void setAttrs(std::vector<NamedAttribute> attrs);

  // Regions.
  unsigned getNumRegions() const { return static_cast<unsigned>(regions_.size()); }
  Region &getRegion(unsigned i) const { return *regions_[i]; }

  // Successors.
  unsigned getNumSuccessors() const { return static_cast<unsigned>(successors_.size()); }
  Block *getSuccessor(unsigned i) const { return successors_[i].block; }
  void setSuccessor(unsigned i, Block *block) { successors_[i].block = block; }
  std::vector<Value *> getSuccessorOperands(unsigned i) const;
  void setSuccessorOperands(unsigned i, std::span<Value *const> values);

  /// Erases this op: unlinks it from its block and destroys it with its
  /// regions. Throws IRError listing users if any result still has uses.
  void erase();
  /// Unlinks from the parent block and returns ownership.
  std::unique_ptr<Operation> removeFromParent();
  void moveBefore(Operation *other);
  void moveAfter(Operation *other);
  void moveToEnd(Block *block);

  /// Unlinks every operand of this op and all nested ops.
  void dropAllReferences();

  /// Deep copy. Operands not in `mapping` are kept; results, nested blocks
  /// and values are recorded in `mapping`.
  std::unique_ptr<Operation> clone(IRMapping &mapping) const;
  std::unique_ptr<Operation> clone() const;

private:
  Operation(Context &ctx, std::string name, const OpDefinition *def, Location loc);
  void rebuildOperands(std::vector<Value *> regular,
                       std::vector<std::vector<Value *>> successorOperands);

  struct SuccessorSlot {
    Block *block;
    unsigned begin;
    unsigned count;
  };

  Context *ctx_;
  uint64_t id_;
  std::string name_;
  const OpDefinition *def_;
  Location loc_;
  Block *block_ = nullptr;
  mutable unsigned order_ = 0;
  unsigned numOperands_ = 0;
  std::vector<std::unique_ptr<OpOperand>> operands_;
  std::vector<SuccessorSlot> successors_;
  std::vector<std::unique_ptr<Value>> results_;
  Attribute attrs_;
  std::vector<std::unique_ptr<Region>> regions_;

  friend class Block;
};

//===----------------------------------------------------------------------===//
// Traversal
//===----------------------------------------------------------------------===//

enum class WalkOrder { PreOrder, PostOrder };

/// Visits `root` and every nested op in region, block, op order. In
/// post-order the visitor may erase the op it is given.
void walk(Operation *root, WalkOrder order, const std::function<void(Operation *)> &visitor);

/// Pre-order walk where the visitor returns false to skip an op's regions.
void walkWithSkip(Operation *root, const std::function<bool(Operation *)> &visitor);

/// Collects the walk order into a vector.
std::vector<Operation *> collectOps(Operation *root, WalkOrder order);

/// Checks that every value's use list matches the operand slots that
/// reference it, for all values defined under `root`. Returns a
/// description of the first inconsistency, or an empty string.
std::string auditUseDefConsistency(Operation *root);

} // namespace mir

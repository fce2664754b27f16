//===- Operation.cpp - Operations, blocks, regions and values -------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/Operation.h"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace mir {

//===----------------------------------------------------------------------===//
// Value / OpOperand
//===----------------------------------------------------------------------===//

Value::~Value() {
  for (OpOperand *use : uses_)
    use->value_ = nullptr;
}

std::unique_ptr<Value> Value::createPlaceholder(Context &ctx, Type type) {
  return std::unique_ptr<Value>(
      new Value(Kind::Placeholder, type, ctx.allocateValueId(), nullptr, 0));
}

Operation *Value::getDefiningOp() const {
  return kind_ == Kind::OpResult ? static_cast<Operation *>(owner_) : nullptr;
}

Block *Value::getOwnerBlock() const {
  return kind_ == Kind::BlockArgument ? static_cast<Block *>(owner_) : nullptr;
}

Block *Value::getParentBlock() const {
  if (Operation *op = getDefiningOp())
    return op->getBlock();
  return getOwnerBlock();
}

Region *Value::getParentRegion() const {
  Block *block = getParentBlock();
  return block ? block->getParent() : nullptr;
}

std::vector<Operation *> Value::getUsers() const {
  std::vector<Operation *> users;
  for (OpOperand *use : uses_)
    if (std::find(users.begin(), users.end(), use->getOwner()) == users.end())
      users.push_back(use->getOwner());
  return users;
}

size_t Value::replaceAllUsesWith(Value *replacement) {
  return replaceUsesIf(replacement, [](OpOperand &) { return true; });
}

size_t Value::replaceUsesIf(Value *replacement,
                            const std::function<bool(OpOperand &)> &shouldReplace) {
  if (!replacement)
    throw IRError("cannot replace uses with a null value");
  if (replacement->getType() != type_)
    throw IRError("type mismatch in replacement: " + type_.str() + " vs " +
                  replacement->getType().str());
  if (replacement == this)
    return uses_.size();
  std::vector<OpOperand *> uses = uses_;
  size_t count = 0;
  for (OpOperand *use : uses) {
    if (!shouldReplace(*use))
      continue;
    use->set(replacement);
    ++count;
  }
  return count;
}

void OpOperand::set(Value *value) {
  if (value_ == value)
    return;
  if (value_) {
    auto &uses = value_->uses_;
    uses.erase(std::find(uses.begin(), uses.end(), this));
  }
  value_ = value;
  if (value_)
    value_->uses_.push_back(this);
}

//===----------------------------------------------------------------------===//
// Block
//===----------------------------------------------------------------------===//

Block::Block(Context &ctx) : ctx_(&ctx), id_(ctx.allocateBlockId()) {}

Block::~Block() = default;

Operation *Block::getParentOp() const { return parent_ ? parent_->getParentOp() : nullptr; }

bool Block::isEntryBlock() const { return parent_ && parent_->front() == this; }

Value *Block::addArgument(Type type) {
  if (!type)
    throw IRError("block argument requires a type");
  args_.push_back(std::unique_ptr<Value>(
      new Value(Value::Kind::BlockArgument, type, ctx_->allocateValueId(), this,
                static_cast<unsigned>(args_.size()))));
  return args_.back().get();
}

std::vector<Value *> Block::getArguments() const {
  std::vector<Value *> out;
  for (const auto &arg : args_)
    out.push_back(arg.get());
  return out;
}

std::vector<Type> Block::getArgumentTypes() const {
  std::vector<Type> out;
  for (const auto &arg : args_)
    out.push_back(arg->getType());
  return out;
}

void Block::eraseArgument(unsigned i) {
  if (!args_[i]->use_empty())
    throw IRError("cannot erase block argument #" + std::to_string(i) + " with uses");
  args_.erase(args_.begin() + i);
  for (unsigned j = i; j < args_.size(); ++j)
    args_[j]->index_ = j;
}

Operation *Block::push_back(std::unique_ptr<Operation> op) { return insert(nullptr, std::move(op)); }

Operation *Block::push_front(std::unique_ptr<Operation> op) {
  return insert(ops_.front(), std::move(op));
}

Operation *Block::insert(Operation *before, std::unique_ptr<Operation> op) {
  if (op->block_)
    throw IRError("operation is already in a block");
  op->block_ = this;
  invalidateOrder();
  return ops_.insert(before, std::move(op));
}

std::unique_ptr<Operation> Block::remove(Operation *op) {
  invalidateOrder();
  op->block_ = nullptr;
  return ops_.remove(op);
}

std::vector<Operation *> Block::getOpsSnapshot() const {
  std::vector<Operation *> out;
  out.reserve(ops_.size());
  for (Operation &op : ops_)
    out.push_back(&op);
  return out;
}

Operation *Block::getTerminator() const {
  Operation *last = ops_.back();
  return last && last->hasTrait(Trait::Terminator) ? last : nullptr;
}

std::vector<Block *> Block::getSuccessors() const {
  std::vector<Block *> out;
  if (Operation *last = ops_.back())
    for (unsigned i = 0; i < last->getNumSuccessors(); ++i)
      out.push_back(last->getSuccessor(i));
  return out;
}

std::vector<Block *> Block::getPredecessors() const {
  std::vector<Block *> preds;
  if (!parent_)
    return preds;
  for (Block &block : parent_->getBlocks())
    for (Block *succ : block.getSuccessors())
      if (succ == this)
        preds.push_back(&block);
  return preds;
}

Block *Block::splitBlock(Operation *splitBefore) {
  if (!parent_)
    throw IRError("cannot split a block that is not in a region");
  auto fresh = std::make_unique<Block>(*ctx_);
  Block *newBlock = parent_->insert(getNextNode(), std::move(fresh));
  Operation *op = splitBefore;
  while (op) {
    Operation *next = op->getNextNode();
    newBlock->push_back(remove(op));
    op = next;
  }
  return newBlock;
}

void Block::dropAllReferences() {
  for (Operation &op : ops_)
    op.dropAllReferences();
}

unsigned Block::getOpOrder(const Operation *op) const {
  if (!orderValid_) {
    unsigned i = 0;
    for (Operation &o : ops_)
      o.order_ = i++;
    orderValid_ = true;
  }
  return op->order_;
}

//===----------------------------------------------------------------------===//
// Region
//===----------------------------------------------------------------------===//

Region::~Region() = default;

Region *Region::getParentRegion() const { return parent_ ? parent_->getParentRegion() : nullptr; }

unsigned Region::getRegionNumber() const {
  for (unsigned i = 0; i < parent_->getNumRegions(); ++i)
    if (&parent_->getRegion(i) == this)
      return i;
  return 0;
}

std::vector<Block *> Region::getBlocksSnapshot() const {
  std::vector<Block *> out;
  for (Block &b : blocks_)
    out.push_back(&b);
  return out;
}

Block *Region::push_back(std::unique_ptr<Block> block) { return insert(nullptr, std::move(block)); }

Block *Region::insert(Block *before, std::unique_ptr<Block> block) {
  block->parent_ = this;
  return blocks_.insert(before, std::move(block));
}

std::unique_ptr<Block> Region::remove(Block *block) {
  block->parent_ = nullptr;
  return blocks_.remove(block);
}

bool Region::isAncestor(const Region *other) const {
  while (other) {
    if (other == this)
      return true;
    other = other->getParentRegion();
  }
  return false;
}

void Region::cloneInto(Region *dest, Block *before, IRMapping &mapping) const {
  std::vector<std::pair<const Block *, Block *>> pairs;
  for (Block &block : blocks_) {
    auto fresh = std::make_unique<Block>(block.getContext());
    for (unsigned i = 0; i < block.getNumArguments(); ++i)
      mapping.map(block.getArgument(i), fresh->addArgument(block.getArgument(i)->getType()));
    mapping.map(const_cast<Block *>(&block), fresh.get());
    pairs.emplace_back(&block, dest->insert(before, std::move(fresh)));
  }
  for (auto [oldBlock, newBlock] : pairs)
    for (Operation &op : oldBlock->getOperations())
      newBlock->push_back(op.clone(mapping));
  // Operands that referred to values defined later in the region (CFG
  // forward references) still point at the originals.
  for (auto [oldBlock, newBlock] : pairs) {
    (void)oldBlock;
    for (Operation &op : newBlock->getOperations()) {
      walk(&op, WalkOrder::PreOrder, [&](Operation *nested) {
        for (OpOperand *slot : nested->getAllOperandSlots())
          if (Value *mapped = mapping.lookupOrNull(slot->get()))
            slot->set(mapped);
      });
    }
  }
}

void Region::takeBody(Region &other) {
  while (!other.empty())
    push_back(other.remove(other.front()));
}

void Region::dropAllReferences() {
  for (Block &block : blocks_)
    block.dropAllReferences();
}

//===----------------------------------------------------------------------===//
// Operation
//===----------------------------------------------------------------------===//

Operation::Operation(Context &ctx, std::string name, const OpDefinition *def, Location loc)
    : ctx_(&ctx), id_(ctx.allocateOpId()), name_(std::move(name)), def_(def),
      loc_(std::move(loc)) {}

Operation::~Operation() = default;

std::unique_ptr<Operation> Operation::create(Context &ctx, OperationState &&state) {
  const OpDefinition *def = ctx.lookupOp(state.name);
  if (!def && ctx.isStrict())
    throw IRError("unregistered operation '" + state.name + "' in strict mode");
  for (Value *v : state.operands)
    if (!v)
      throw IRError("null operand for '" + state.name + "'");
  Attribute attrs = ctx.getDictionaryAttr(std::move(state.attributes));

  std::unique_ptr<Operation> op(
      new Operation(ctx, std::move(state.name), def, std::move(state.location)));
  op->attrs_ = attrs;
  for (Type t : state.types) {
    if (!t)
      throw IRError("null result type for '" + op->name_ + "'");
    op->results_.push_back(std::unique_ptr<Value>(
        new Value(Value::Kind::OpResult, t, ctx.allocateValueId(), op.get(),
                  static_cast<unsigned>(op->results_.size()))));
  }
  std::vector<std::vector<Value *>> succOperands;
  for (auto &[block, args] : state.successors) {
    op->successors_.push_back({block, 0, 0});
    succOperands.push_back(std::move(args));
  }
  op->rebuildOperands(std::move(state.operands), std::move(succOperands));
  for (auto &region : state.regions) {
    region->parent_ = op.get();
    op->regions_.push_back(std::move(region));
  }
  return op;
}

std::string_view Operation::getDialectNamespace() const {
  std::string_view name = name_;
  size_t dot = name.find('.');
  return dot == std::string_view::npos ? std::string_view() : name.substr(0, dot);
}

Region *Operation::getParentRegion() const { return block_ ? block_->getParent() : nullptr; }

Operation *Operation::getParentOp() const {
  Region *region = getParentRegion();
  return region ? region->getParentOp() : nullptr;
}

bool Operation::isProperAncestor(const Operation *other) const {
  for (Operation *p = other->getParentOp(); p; p = p->getParentOp())
    if (p == this)
      return true;
  return false;
}

Operation *Operation::getIsolationScope() {
  for (Operation *op = this; op; op = op->getParentOp())
    if (op->hasTrait(Trait::IsolatedFromAbove))
      return op;
  return nullptr;
}

bool Operation::isBeforeInBlock(const Operation *other) const {
  return block_->getOpOrder(this) < block_->getOpOrder(other);
}

void Operation::rebuildOperands(std::vector<Value *> regular,
                                std::vector<std::vector<Value *>> successorOperands) {
  operands_.clear();
  unsigned index = 0;
  for (Value *v : regular)
    operands_.push_back(std::make_unique<OpOperand>(this, index++, v));
  numOperands_ = static_cast<unsigned>(regular.size());
  for (size_t i = 0; i < successors_.size(); ++i) {
    successors_[i].begin = index;
    successors_[i].count = static_cast<unsigned>(successorOperands[i].size());
    for (Value *v : successorOperands[i])
      operands_.push_back(std::make_unique<OpOperand>(this, index++, v));
  }
}

std::vector<Value *> Operation::getOperands() const {
  std::vector<Value *> out;
  out.reserve(numOperands_);
  for (unsigned i = 0; i < numOperands_; ++i)
    out.push_back(operands_[i]->get());
  return out;
}

std::vector<Type> Operation::getOperandTypes() const {
  std::vector<Type> out;
  for (unsigned i = 0; i < numOperands_; ++i)
    out.push_back(operands_[i]->get() ? operands_[i]->get()->getType() : Type());
  return out;
}

void Operation::setOperands(std::span<Value *const> values) {
  std::vector<std::vector<Value *>> succ;
  for (unsigned i = 0; i < successors_.size(); ++i)
    succ.push_back(getSuccessorOperands(i));
  rebuildOperands(std::vector<Value *>(values.begin(), values.end()), std::move(succ));
}

std::vector<OpOperand *> Operation::getAllOperandSlots() const {
  std::vector<OpOperand *> out;
  for (const auto &slot : operands_)
    out.push_back(slot.get());
  return out;
}

std::vector<Value *> Operation::getResults() const {
  std::vector<Value *> out;
  for (const auto &r : results_)
    out.push_back(r.get());
  return out;
}

std::vector<Type> Operation::getResultTypes() const {
  std::vector<Type> out;
  for (const auto &r : results_)
    out.push_back(r->getType());
  return out;
}

bool Operation::use_empty() const {
  for (const auto &r : results_)
    if (!r->use_empty())
      return false;
  return true;
}

void Operation::setAttr(std::string_view name, Attribute value) {
  std::vector<NamedAttribute> attrs;
  bool replaced = false;
  for (const NamedAttribute &entry : getAttrs()) {
    if (entry.name == name) {
      replaced = true;
      if (value)
        attrs.push_back({entry.name, value});
    } else {
      attrs.push_back(entry);
    }
  }
  if (!replaced && value)
    attrs.push_back({std::string(name), value});
  attrs_ = ctx_->getDictionaryAttr(std::move(attrs));
}

void Operation::removeAttr(std::string_view name) { setAttr(name, Attribute()); }

void Operation::setAttrs(std::vector<NamedAttribute> attrs) {
  attrs_ = ctx_->getDictionaryAttr(std::move(attrs));
}

std::vector<Value *> Operation::getSuccessorOperands(unsigned i) const {
  std::vector<Value *> out;
  const SuccessorSlot &slot = successors_[i];
  for (unsigned j = 0; j < slot.count; ++j)
    out.push_back(operands_[slot.begin + j]->get());
  return out;
}

void Operation::setSuccessorOperands(unsigned i, std::span<Value *const> values) {
  std::vector<std::vector<Value *>> succ;
  for (unsigned j = 0; j < successors_.size(); ++j)
    succ.push_back(j == i ? std::vector<Value *>(values.begin(), values.end())
                          : getSuccessorOperands(j));
  rebuildOperands(getOperands(), std::move(succ));
}

void Operation::erase() {
  for (const auto &result : results_) {
    if (result->use_empty())
      continue;
    std::ostringstream msg;
    msg << "cannot erase '" << name_ << "': result #" << result->getIndex() << " still has "
        << result->getNumUses() << " use(s) by";
    for (Operation *user : result->getUsers())
      msg << " '" << user->getName() << "'";
    throw IRError(msg.str());
  }
  if (!block_)
    throw IRError("cannot erase '" + name_ + "': operation is not in a block");
  block_->remove(this).reset();
}

std::unique_ptr<Operation> Operation::removeFromParent() {
  if (!block_)
    throw IRError("operation is not in a block");
  return block_->remove(this);
}

void Operation::moveBefore(Operation *other) {
  if (other == this)
    return;
  Block *dest = other->getBlock();
  dest->insert(other, removeFromParent());
}

void Operation::moveAfter(Operation *other) {
  if (other == this)
    return;
  Block *dest = other->getBlock();
  Operation *next = other->getNextNode();
  auto self = removeFromParent();
  dest->insert(next == this ? getNextNode() : next, std::move(self));
}

void Operation::moveToEnd(Block *block) { block->push_back(removeFromParent()); }

void Operation::dropAllReferences() {
  for (auto &slot : operands_)
    slot->set(nullptr);
  for (auto &region : regions_)
    region->dropAllReferences();
}

std::unique_ptr<Operation> Operation::clone(IRMapping &mapping) const {
  OperationState state(name_, loc_);
  for (unsigned i = 0; i < numOperands_; ++i)
    state.operands.push_back(mapping.lookupOrDefault(getOperand(i)));
  state.types = getResultTypes();
  state.attributes = getAttrs();
  for (unsigned i = 0; i < successors_.size(); ++i) {
    std::vector<Value *> args;
    for (Value *v : getSuccessorOperands(i))
      args.push_back(mapping.lookupOrDefault(v));
    state.addSuccessor(mapping.lookupOrDefault(successors_[i].block), std::move(args));
  }
  for (const auto &region : regions_) {
    Region *fresh = state.addRegion();
    region->cloneInto(fresh, nullptr, mapping);
  }
  // Clones of existing ops bypass the strict-mode check.
  bool strict = ctx_->isStrict();
  std::unique_ptr<Operation> op;
  if (strict && !def_) {
    ctx_->setStrict(false);
    op = create(*ctx_, std::move(state));
    ctx_->setStrict(true);
  } else {
    op = create(*ctx_, std::move(state));
  }
  for (unsigned i = 0; i < results_.size(); ++i)
    mapping.map(results_[i].get(), op->getResult(i));
  return op;
}

std::unique_ptr<Operation> Operation::clone() const {
  IRMapping mapping;
  return clone(mapping);
}

//===----------------------------------------------------------------------===//
// Traversal
//===----------------------------------------------------------------------===//

static void walkImpl(Operation *op, WalkOrder order,
                     const std::function<void(Operation *)> &visitor) {
  if (order == WalkOrder::PreOrder)
    visitor(op);
  for (unsigned r = 0; r < op->getNumRegions(); ++r) {
    Region &region = op->getRegion(r);
    for (Block *block = region.front(); block; block = block->getNextNode()) {
      for (Operation *child = block->front(); child;) {
        Operation *next = child->getNextNode();
        walkImpl(child, order, visitor);
        child = next;
      }
    }
  }
  if (order == WalkOrder::PostOrder)
    visitor(op);
}

void walk(Operation *root, WalkOrder order, const std::function<void(Operation *)> &visitor) {
  walkImpl(root, order, visitor);
}

void walkWithSkip(Operation *root, const std::function<bool(Operation *)> &visitor) {
  if (!visitor(root))
    return;
  for (unsigned r = 0; r < root->getNumRegions(); ++r)
    for (Block &block : root->getRegion(r).getBlocks())
      for (Operation *child = block.front(); child;) {
        Operation *next = child->getNextNode();
        walkWithSkip(child, visitor);
        child = next;
      }
}

std::vector<Operation *> collectOps(Operation *root, WalkOrder order) {
  std::vector<Operation *> ops;
  walk(root, order, [&](Operation *op) { ops.push_back(op); });
  return ops;
}

std::string auditUseDefConsistency(Operation *root) {
  std::vector<Value *> values;
  std::unordered_set<const OpOperand *> slots;
  walk(root, WalkOrder::PreOrder, [&](Operation *op) {
    for (Value *r : op->getResults())
      values.push_back(r);
    for (unsigned i = 0; i < op->getNumRegions(); ++i)
      for (Block &block : op->getRegion(i).getBlocks())
        for (Value *arg : block.getArguments())
          values.push_back(arg);
    for (OpOperand *slot : op->getAllOperandSlots())
      slots.insert(slot);
  });

  for (const OpOperand *slot : slots) {
    Value *v = slot->get();
    if (!v)
      continue;
    const auto &uses = v->getUses();
    if (std::count(uses.begin(), uses.end(), slot) != 1)
      return "operand #" + std::to_string(slot->getOperandNumber()) + " of '" +
             slot->getOwner()->getName() + "' is not registered exactly once in its value's use list";
  }
  for (Value *v : values) {
    for (OpOperand *use : v->getUses()) {
      if (use->get() != v)
        return "use list of value #" + std::to_string(v->getId()) +
               " contains a slot referencing another value";
      auto all = use->getOwner()->getAllOperandSlots();
      if (std::find(all.begin(), all.end(), use) == all.end())
        return "use list of value #" + std::to_string(v->getId()) +
               " contains a slot its owner does not have";
    }
  }
  return "";
}

} // namespace mir

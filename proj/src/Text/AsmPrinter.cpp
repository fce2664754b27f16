//===- AsmPrinter.cpp - Textual IR printer --------------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Text/AsmPrinter.h"

#include <sstream>

namespace mir {

static const std::string kNullValue = "<<NULL VALUE>>";
static const std::string kUnknownValue = "<<UNKNOWN SSA VALUE>>";
static const std::string kUnknownBlock = "^<<UNKNOWN BLOCK>>";

namespace {
struct NameScope {
  unsigned nextValue = 0;
  unsigned nextArg = 0;
};
} // namespace

OpAsmPrinter::OpAsmPrinter(std::ostream &os, Operation *root, const PrintOptions &options)
    : os_(&os), options_(options) {
  assignNames(root);
  std::unordered_map<Attribute, unsigned> counts;
  std::vector<Attribute> order;
  walk(root, WalkOrder::PreOrder, [&](Operation *op) {
    for (const NamedAttribute &attr : op->getAttrs())
      collectAliases(attr.value, counts, order);
  });
  for (Attribute attr : order) {
    if (counts[attr] < 2)
      continue;
    aliases_[attr] = "#map" + std::to_string(aliasOrder_.size());
    aliasOrder_.push_back(attr);
  }
}

void OpAsmPrinter::collectAliases(Attribute attr, std::unordered_map<Attribute, unsigned> &counts,
                                  std::vector<Attribute> &order) {
  switch (attr.getKind()) {
  case AttrKind::AffineMap:
    if (attr.getAffineMap().isSingleConstant())
      return;
    if (counts[attr]++ == 0)
      order.push_back(attr);
    return;
  case AttrKind::Array:
    for (Attribute e : attr.getArray())
      collectAliases(e, counts, order);
    return;
  case AttrKind::Dictionary:
    for (const NamedAttribute &e : attr.getDictionary())
      collectAliases(e.value, counts, order);
    return;
  default:
    return;
  }
}

void OpAsmPrinter::assignNames(Operation *root) {
  std::function<void(Operation *, NameScope &)> nameOp;
  std::function<void(Region &, NameScope &)> nameRegion = [&](Region &region, NameScope &scope) {
    unsigned blockIndex = 0;
    for (Block &block : region.getBlocks()) {
      blockNames_[&block] = "^bb" + std::to_string(blockIndex++);
      bool entry = &block == region.front();
      for (Value *arg : block.getArguments())
        valueNames_[arg] = entry ? "%arg" + std::to_string(scope.nextArg++)
                                 : "%" + std::to_string(scope.nextValue++);
      for (Operation &op : block.getOperations())
        nameOp(&op, scope);
    }
  };
  nameOp = [&](Operation *op, NameScope &scope) {
    for (Value *r : op->getResults())
      valueNames_[r] = "%" + std::to_string(scope.nextValue++);
    bool isolated = op->hasTrait(Trait::IsolatedFromAbove);
    for (unsigned i = 0; i < op->getNumRegions(); ++i) {
      if (isolated) {
        NameScope inner;
        nameRegion(op->getRegion(i), inner);
      } else {
        nameRegion(op->getRegion(i), scope);
      }
    }
  };
  NameScope top;
  nameOp(root, top);
}

const std::string &OpAsmPrinter::getValueName(Value *value) {
  if (!value)
    return kNullValue;
  auto it = valueNames_.find(value);
  return it == valueNames_.end() ? kUnknownValue : it->second;
}

void OpAsmPrinter::printOperand(Value *value) { *os_ << getValueName(value); }

void OpAsmPrinter::printOperands(std::span<Value *const> values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i)
      *os_ << ", ";
    printOperand(values[i]);
  }
}

void OpAsmPrinter::printType(Type type) { *os_ << (type ? type.str() : "<<NULL TYPE>>"); }

void OpAsmPrinter::printTypes(std::span<const Type> types) {
  for (size_t i = 0; i < types.size(); ++i) {
    if (i)
      *os_ << ", ";
    printType(types[i]);
  }
}

void OpAsmPrinter::printAttribute(Attribute attr) {
  if (!attr) {
    *os_ << "<<NULL ATTRIBUTE>>";
    return;
  }
  if (auto it = aliases_.find(attr); it != aliases_.end()) {
    *os_ << it->second;
    return;
  }
  switch (attr.getKind()) {
  case AttrKind::Array: {
    *os_ << "[";
    const auto &elems = attr.getArray();
    for (size_t i = 0; i < elems.size(); ++i) {
      if (i)
        *os_ << ", ";
      printAttribute(elems[i]);
    }
    *os_ << "]";
    return;
  }
  case AttrKind::Dictionary: {
    *os_ << "{";
    const auto &entries = attr.getDictionary();
    for (size_t i = 0; i < entries.size(); ++i) {
      if (i)
        *os_ << ", ";
      *os_ << (isBareIdentifier(entries[i].name) ? entries[i].name : quoteString(entries[i].name))
           << " = ";
      printAttribute(entries[i].value);
    }
    *os_ << "}";
    return;
  }
  default:
    *os_ << attr.str();
  }
}

void OpAsmPrinter::printFunctionalType(std::span<const Type> inputs,
                                       std::span<const Type> results) {
  *os_ << "(";
  printTypes(inputs);
  *os_ << ") -> ";
  if (results.size() == 1 && results[0] && !results[0].isFunction()) {
    printType(results[0]);
    return;
  }
  *os_ << "(";
  printTypes(results);
  *os_ << ")";
}

void OpAsmPrinter::printAttrDict(const Operation &op, std::span<const std::string_view> elided,
                                 bool withKeyword) {
  std::vector<const NamedAttribute *> kept;
  for (const NamedAttribute &attr : op.getAttrs()) {
    bool skip = false;
    for (std::string_view name : elided)
      skip |= attr.name == name;
    if (!skip)
      kept.push_back(&attr);
  }
  if (kept.empty())
    return;
  *os_ << (withKeyword ? " attributes {" : " {");
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i)
      *os_ << ", ";
    *os_ << (isBareIdentifier(kept[i]->name) ? kept[i]->name : quoteString(kept[i]->name))
         << " = ";
    printAttribute(kept[i]->value);
  }
  *os_ << "}";
}

void OpAsmPrinter::printArgument(Value *arg) {
  printOperand(arg);
  *os_ << ": ";
  printType(arg->getType());
}

void OpAsmPrinter::printSuccessor(Block *block) {
  auto it = block ? blockNames_.find(block) : blockNames_.end();
  *os_ << (it == blockNames_.end() ? kUnknownBlock : it->second);
}

void OpAsmPrinter::printSuccessorAndOperands(const Operation &op, unsigned index) {
  printSuccessor(op.getSuccessor(index));
  std::vector<Value *> args = op.getSuccessorOperands(index);
  if (args.empty())
    return;
  *os_ << "(";
  printOperands(args);
  *os_ << " : ";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i)
      *os_ << ", ";
    printType(args[i] ? args[i]->getType() : Type());
  }
  *os_ << ")";
}

void OpAsmPrinter::indent() {
  for (unsigned i = 0; i < indent_; ++i)
    *os_ << "  ";
}

void OpAsmPrinter::printRegion(Region &region, bool printEntryArgs, bool printTerminators) {
  *os_ << "{\n";
  ++indent_;
  for (Block &block : region.getBlocks()) {
    bool entry = &block == region.front();
    bool label = !entry || (printEntryArgs && (block.getNumArguments() > 0 || block.empty()));
    if (label) {
      for (unsigned i = 1; i < indent_; ++i)
        *os_ << "  ";
      printSuccessor(&block);
      if (block.getNumArguments() > 0) {
        *os_ << "(";
        for (unsigned i = 0; i < block.getNumArguments(); ++i) {
          if (i)
            *os_ << ", ";
          printArgument(block.getArgument(i));
        }
        *os_ << ")";
      }
      *os_ << ":\n";
    }
    for (Operation &op : block.getOperations()) {
      if (!printTerminators && &op == block.back())
        break;
      printOperation(&op);
    }
  }
  --indent_;
  indent();
  *os_ << "}";
}

void OpAsmPrinter::printGeneric(Operation *op) {
  *os_ << quoteString(op->getName()) << "(";
  printOperands(op->getOperands());
  *os_ << ")";
  if (op->getNumSuccessors() > 0) {
    *os_ << " [";
    for (unsigned i = 0; i < op->getNumSuccessors(); ++i) {
      if (i)
        *os_ << ", ";
      printSuccessorAndOperands(*op, i);
    }
    *os_ << "]";
  }
  printAttrDict(*op);
  if (op->getNumRegions() > 0) {
    *os_ << " (";
    for (unsigned i = 0; i < op->getNumRegions(); ++i) {
      if (i)
        *os_ << ", ";
      printRegion(op->getRegion(i));
    }
    *os_ << ")";
  }
  *os_ << " : ";
  std::vector<Type> inputs;
  for (Value *v : op->getOperands())
    inputs.push_back(v ? v->getType() : Type());
  printFunctionalType(inputs, op->getResultTypes());
}

void OpAsmPrinter::printOperation(Operation *op) {
  indent();
  if (op->getNumResults() > 0) {
    printOperands(op->getResults());
    *os_ << " = ";
  }
  const OpDefinition *def = op->getDefinition();
  bool printed = false;
  if (!options_.generic && def && def->print) {
    std::ostringstream custom;
    std::ostream *saved = os_;
    unsigned savedIndent = indent_;
    os_ = &custom;
    custom << op->getName();
    bool ok = def->print(*op, *this);
    os_ = saved;
    indent_ = savedIndent;
    if (ok) {
      *os_ << custom.str();
      printed = true;
    }
  }
  if (!printed)
    printGeneric(op);
  if (options_.printLocations)
    *os_ << " " << op->getLoc().toAsm();
  *os_ << "\n";
}

void OpAsmPrinter::printAliases() {
  for (Attribute attr : aliasOrder_)
    *os_ << aliases_[attr] << " = " << attr.str() << "\n";
  if (!aliasOrder_.empty())
    *os_ << "\n";
}

void printOp(Operation *op, std::ostream &os, const PrintOptions &options) {
  OpAsmPrinter printer(os, op, options);
  printer.printAliases();
  printer.printOperation(op);
}

std::string printOp(Operation *op, const PrintOptions &options) {
  std::ostringstream os;
  printOp(op, os, options);
  return os.str();
}

} // namespace mir

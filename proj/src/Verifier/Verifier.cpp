//===- Verifier.cpp - IR invariant checking -------------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Verifier/Verifier.h"
#include "mir/IR/Context.h"
#include "mir/IR/Dominance.h"
#include "mir/IR/SymbolTable.h"

#include <map>

namespace mir {

namespace {

class Verifier {
public:
  explicit Verifier(Operation *root) : root_(root), ops_(collectOps(root, WalkOrder::PreOrder)) {}

  DiagnosticList run() {
    for (auto phase : {&Verifier::verifyStructure, &Verifier::verifySSA,
                       &Verifier::verifySymbols, &Verifier::verifyDefinitions,
                       &Verifier::verifyDialectAttrs}) {
      for (Operation *op : ops_)
        (this->*phase)(*op);
      if (hasErrors(diags_))
        break;
    }
    return std::move(diags_);
  }

private:
  void error(Operation &op, const std::string &msg) {
    diags_.push_back(Diagnostic::error(op.getLoc(), "'" + op.getName() + "' op " + msg));
  }

  //===--------------------------------------------------------------------===//
  // Phase 1: structure
  //===--------------------------------------------------------------------===//

  void verifyStructure(Operation &op) {
    for (unsigned i = 0; i < op.getNumOperands(); ++i)
      if (!op.getOperand(i))
        error(op, "operand #" + std::to_string(i) + " is null");
    for (unsigned r = 0; r < op.getNumRegions(); ++r)
      for (Block &block : op.getRegion(r).getBlocks())
        verifyBlock(op, block);
    verifySuccessors(op);
  }

  void verifyBlock(Operation &parent, Block &block) {
    if (block.empty())
      return;
    for (Operation &op : block.getOperations())
      if (&op != block.back() && op.hasTrait(Trait::Terminator))
        error(op, "terminator not at end of block");
    Operation *last = block.back();
    // An unregistered op may be a terminator we know nothing about.
    if (last->isRegistered() && !last->hasTrait(Trait::Terminator))
      diags_.push_back(Diagnostic::error(
          last->getLoc(), "block missing terminator: '" + last->getName() +
                              "' is the last op of a block in '" + parent.getName() + "'"));
  }

  void verifySuccessors(Operation &op) {
    for (unsigned s = 0; s < op.getNumSuccessors(); ++s) {
      Block *succ = op.getSuccessor(s);
      if (!succ) {
        error(op, "successor #" + std::to_string(s) + " is null");
        continue;
      }
      if (succ->getParent() != op.getParentRegion()) {
        error(op, "successor #" + std::to_string(s) + " is not in the same region");
        continue;
      }
      std::vector<Value *> args = op.getSuccessorOperands(s);
      if (args.size() != succ->getNumArguments()) {
        error(op, "successor operand mismatch: successor #" + std::to_string(s) + " passes " +
                      std::to_string(args.size()) + " operands but the block expects " +
                      std::to_string(succ->getNumArguments()));
        continue;
      }
      for (unsigned i = 0; i < args.size(); ++i) {
        if (!args[i]) {
          error(op, "successor #" + std::to_string(s) + " operand #" + std::to_string(i) +
                        " is null");
        } else if (args[i]->getType() != succ->getArgument(i)->getType()) {
          error(op, "successor operand mismatch: successor #" + std::to_string(s) +
                        " operand #" + std::to_string(i) + " has type " +
                        args[i]->getType().str() + " but the block argument has type " +
                        succ->getArgument(i)->getType().str());
        }
      }
    }
  }

  //===--------------------------------------------------------------------===//
  // Phase 2: SSA
  //===--------------------------------------------------------------------===//

  void verifySSA(Operation &op) {
    std::vector<OpOperand *> slots = op.getAllOperandSlots();
    for (unsigned i = 0; i < slots.size(); ++i) {
      Value *value = slots[i]->get();
      if (value->getKind() == Value::Kind::Placeholder) {
        error(op, "operand #" + std::to_string(i) + " refers to an unresolved value");
        continue;
      }
      if (dom_.properlyDominates(value, &op))
        continue;
      if (crossesIsolationBarrier(value, &op))
        error(op, "use crosses isolation barrier: operand #" + std::to_string(i) +
                      " is defined above an IsolatedFromAbove op");
      else
        error(op, "operand #" + std::to_string(i) + " does not dominate this use");
    }
  }

  //===--------------------------------------------------------------------===//
  // Phase 3: symbols
  //===--------------------------------------------------------------------===//

  void verifySymbols(Operation &op) {
    if (op.hasTrait(Trait::SymbolTableHolder) && op.getNumRegions() > 0) {
      std::map<std::string, Operation *> seen;
      for (Block &block : op.getRegion(0).getBlocks())
        for (Operation &child : block.getOperations()) {
          if (!child.hasTrait(Trait::SymbolDefiner))
            continue;
          std::optional<std::string> name = getSymbolName(&child);
          if (!name)
            continue;
          if (!seen.emplace(*name, &child).second)
            error(child, "redefinition of symbol '@" + *name + "'");
        }
    }
    for (const NamedAttribute &attr : op.getAttrs())
      checkSymbolRefs(op, attr.value);
  }

  void checkSymbolRefs(Operation &op, Attribute attr) {
    if (attr.isa(AttrKind::SymbolRef)) {
      if (!lookupNearestSymbol(&op, attr.getSymbol()))
        error(op, "symbol reference '" + attr.str() +
                      "' does not resolve in the nearest symbol table");
    } else if (attr.isa(AttrKind::Array)) {
      for (Attribute e : attr.getArray())
        checkSymbolRefs(op, e);
    } else if (attr.isa(AttrKind::Dictionary)) {
      for (const NamedAttribute &e : attr.getDictionary())
        checkSymbolRefs(op, e.value);
    }
  }

  //===--------------------------------------------------------------------===//
  // Phase 4: op definitions
  //===--------------------------------------------------------------------===//

  static std::string countText(size_t n, const char *noun) {
    return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
  }

  bool checkCount(Operation &op, const char *noun, size_t actual, size_t declared,
                  bool variadic) {
    if (variadic ? actual + 1 >= declared : actual == declared)
      return true;
    error(op, std::string(noun) + " count mismatch: expects " + (variadic ? "at least " : "") +
                  countText(variadic ? declared - 1 : declared, noun) + ", got " +
                  std::to_string(actual));
    return false;
  }

  void verifyDefinitions(Operation &op) {
    const OpDefinition *def = op.getDefinition();
    if (!def) {
      if (op.getContext().isStrict())
        error(op, "unregistered operation in strict mode");
      return;
    }
    size_t before = diags_.size();
    std::vector<Type> operandTypes = op.getOperandTypes();
    bool operandsOk =
        checkCount(op, "operand", operandTypes.size(), def->operands.size(), def->variadicOperands);
    bool resultsOk = checkCount(op, "result", op.getNumResults(), def->results.size(),
                                def->variadicResults);
    if (def->numRegions && op.getNumRegions() != *def->numRegions)
      error(op, "region count mismatch: expects " + countText(*def->numRegions, "region") +
                    ", got " + std::to_string(op.getNumRegions()));
    if (def->numSuccessors && op.getNumSuccessors() != *def->numSuccessors)
      error(op, "successor count mismatch: expects " +
                    countText(*def->numSuccessors, "successor") + ", got " +
                    std::to_string(op.getNumSuccessors()));

    if (operandsOk)
      for (size_t i = 0; i < operandTypes.size(); ++i) {
        const TypeConstraint &c = def->operands[std::min(i, def->operands.size() - 1)];
        if (!c.matches(operandTypes[i], operandTypes))
          error(op, "type constraint violated: operand #" + std::to_string(i) + " must be " +
                        c.describe() + ", got " + operandTypes[i].str());
      }
    if (resultsOk && operandsOk)
      for (unsigned i = 0; i < op.getNumResults(); ++i) {
        const TypeConstraint &c = def->results[std::min<size_t>(i, def->results.size() - 1)];
        Type type = op.getResult(i)->getType();
        if (!c.matches(type, operandTypes))
          error(op, "type constraint violated: result #" + std::to_string(i) + " must be " +
                        c.describe() + ", got " + type.str());
      }

    for (const AttrConstraint &c : def->attributes) {
      Attribute attr = op.getAttr(c.name);
      if (!attr) {
        if (c.required)
          error(op, "requires attribute '" + c.name + "'");
        continue;
      }
      if (c.kind && attr.getKind() != *c.kind)
        error(op, "attribute kind mismatch: '" + c.name + "' must be a " +
                      std::string(attrKindName(*c.kind)) + " attribute, got " + attr.str());
    }

    verifyTraits(op, *def);
    if (diags_.size() == before && def->verify)
      def->verify(op, diags_);
  }

  void verifyTraits(Operation &op, const OpDefinition &def) {
    if (def.hasTrait(Trait::SameOperandsAndResultType)) {
      std::vector<Type> types = op.getOperandTypes();
      for (Value *r : op.getResults())
        types.push_back(r->getType());
      for (Type t : types)
        if (t != types.front()) {
          error(op, "requires the same type for all operands and results");
          break;
        }
    }
    if (def.hasTrait(Trait::SingleRegionSingleBlock))
      for (unsigned r = 0; r < op.getNumRegions(); ++r)
        if (op.getRegion(r).size() != 1)
          error(op, "expects region #" + std::to_string(r) + " to have a single block, got " +
                        std::to_string(op.getRegion(r).size()));
    if (def.hasTrait(Trait::SymbolDefiner) && !getSymbolName(&op))
      error(op, "requires a string 'sym_name' attribute");
    if (def.hasTrait(Trait::Terminator) && op.getNumResults() != 0)
      error(op, "terminator must not produce results");
  }

  //===--------------------------------------------------------------------===//
  // Phase 5: dialect attributes
  //===--------------------------------------------------------------------===//

  void verifyDialectAttrs(Operation &op) {
    for (const NamedAttribute &attr : op.getAttrs()) {
      size_t dot = attr.name.find('.');
      if (dot == std::string::npos)
        continue;
      const DialectDescriptor *dialect =
          op.getContext().getDialect(std::string_view(attr.name).substr(0, dot));
      if (dialect && dialect->verifyAttribute)
        dialect->verifyAttribute(op, attr, diags_);
    }
  }

  Operation *root_;
  std::vector<Operation *> ops_;
  DominanceInfo dom_;
  DiagnosticList diags_;
};

} // namespace

DiagnosticList verify(Operation *root) { return Verifier(root).run(); }

bool verifies(Operation *root) { return !hasErrors(verify(root)); }

} // namespace mir

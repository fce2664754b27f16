//===- PatternDSL.cpp - Declarative source-to-target rewrites -------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Rewrite/PatternDSL.h"
#include "mir/Text/Parser.h"

#include <algorithm>
#include <set>

namespace mir {

//===----------------------------------------------------------------------===//
// Matching and rewriting
//===----------------------------------------------------------------------===//

DeclarativePattern::DeclarativePattern(std::string name, unsigned benefit, DagNode source,
                                       std::vector<DslPredicate> predicates,
                                       std::vector<TargetOp> targets,
                                       std::vector<TargetOperand> replacements,
                                       std::map<std::string, CaptureInfo> captures)
    : RewritePattern(source.opcode, benefit, std::move(name)), source_(std::move(source)),
      predicates_(std::move(predicates)), targets_(std::move(targets)),
      replacements_(std::move(replacements)), captures_(std::move(captures)) {}

static bool matchNode(const DagNode &node, Operation *op, Bindings &b,
                      std::vector<Operation *> *matched) {
  if (op->getName() != node.opcode || op->getNumOperands() != node.operands.size())
    return false;
  for (const DagAttr &attr : node.attrs) {
    Attribute actual = op->getAttr(attr.name);
    if (!actual)
      return false;
    if (attr.literal && actual != attr.literal)
      return false;
    if (!attr.capture.empty())
      b.attrs[attr.capture] = actual;
  }
  for (unsigned i = 0; i < node.operands.size(); ++i) {
    const DagOperand &operand = node.operands[i];
    Value *value = op->getOperand(i);
    switch (operand.kind) {
    case DagOperand::Kind::Wildcard:
      break;
    case DagOperand::Kind::Capture:
      b.values[operand.name] = value;
      break;
    case DagOperand::Kind::Nested: {
      Operation *def = value->getDefiningOp();
      if (!def || def->getNumResults() != 1)
        return false;
      if (matched)
        matched->push_back(def);
      if (!matchNode(*operand.nested, def, b, matched))
        return false;
      break;
    }
    }
  }
  return true;
}

bool DeclarativePattern::match(Operation *op, Bindings &bindings) const {
  bindings = Bindings();
  if (!matchNode(source_, op, bindings, nullptr))
    return false;
  for (const DslPredicate &pred : predicates_) {
    switch (pred.kind) {
    case DslPredicate::Kind::Same:
      if (bindings.values.at(pred.lhs) != bindings.values.at(pred.rhs))
        return false;
      break;
    case DslPredicate::Kind::AttrEq:
      if (bindings.attrs.at(pred.lhs) != pred.attr)
        return false;
      break;
    case DslPredicate::Kind::TypeIs:
      if (bindings.values.at(pred.lhs)->getType() != pred.type)
        return false;
      break;
    }
  }
  return true;
}

void DeclarativePattern::rewrite(Operation *op, const Bindings &bindings,
                                 PatternRewriter &rewriter) const {
  std::vector<Operation *> matched;
  Bindings scratch;
  matchNode(source_, op, scratch, &matched);

  rewriter.setInsertionPoint(op);
  std::map<std::string, Value *> locals;
  auto resolve = [&](const TargetOperand &operand) -> Value * {
    if (operand.isCapture)
      return bindings.values.at(operand.name);
    return locals.at(operand.name);
  };
  for (const TargetOp &target : targets_) {
    std::vector<Value *> operands;
    for (const TargetOperand &operand : target.operands)
      operands.push_back(resolve(operand));
    std::vector<NamedAttribute> attrs;
    for (const TargetAttr &attr : target.attrs)
      attrs.push_back({attr.name, attr.capture.empty() ? attr.literal
                                                       : bindings.attrs.at(attr.capture)});
    Type type = target.typeOf.empty() ? target.type : bindings.values.at(target.typeOf)->getType();
    Operation *created = rewriter.create(target.opcode, operands, {type}, attrs, op->getLoc());
    locals[target.result] = created->getResult(0);
  }
  std::vector<Value *> replacements;
  for (const TargetOperand &operand : replacements_)
    replacements.push_back(resolve(operand));
  rewriter.replaceOp(op, replacements);

  // Matched producers whose values became unused go away with the root.
  std::set<Operation *> erased;
  for (bool progress = true; progress;) {
    progress = false;
    for (Operation *m : matched) {
      if (erased.count(m) || !isTriviallyDead(m))
        continue;
      erased.insert(m);
      rewriter.eraseOp(m);
      progress = true;
    }
  }
}

bool DeclarativePattern::matchAndRewrite(Operation *op, PatternRewriter &rewriter) const {
  Bindings bindings;
  if (!match(op, bindings))
    return false;
  rewrite(op, bindings, rewriter);
  return true;
}

static std::vector<const DeclarativePattern *>
orderPatterns(const PatternSet &set, const std::string *opcode) {
  std::vector<const DeclarativePattern *> out;
  for (const auto &p : set.patterns)
    if (!opcode || p->getRootName() == *opcode)
      out.push_back(p.get());
  std::stable_sort(out.begin(), out.end(), [](const auto *a, const auto *b) {
    return a->getBenefit() > b->getBenefit();
  });
  return out;
}

std::vector<const DeclarativePattern *> PatternSet::getOrdered(const std::string &opcode) const {
  return orderPatterns(*this, &opcode);
}

std::vector<const DeclarativePattern *> PatternSet::getOrdered() const {
  return orderPatterns(*this, nullptr);
}

//===----------------------------------------------------------------------===//
// Parsing
//===----------------------------------------------------------------------===//

namespace {

class PatternFileParser {
public:
  PatternFileParser(Context &ctx, std::string_view text, std::string filename)
      : ctx_(ctx), p_(ctx, text, std::move(filename)) {}

  PatternSet parseFile() {
    PatternSet set;
    std::set<std::string> names;
    while (!p_.atEnd()) {
      Location loc = p_.getCurrentLocation();
      auto pattern = parsePattern();
      if (!names.insert(pattern->getName()).second)
        p_.emitError(loc, "duplicate pattern name '" + pattern->getName() + "'");
      set.patterns.push_back(std::move(pattern));
    }
    return set;
  }

private:
  std::string parseCaptureName(std::string_view sigil) {
    p_.parsePunct(sigil);
    return p_.parseIdentifier();
  }

  std::string parseOpcode() {
    Location loc = p_.getCurrentLocation();
    std::string opcode = p_.parseStringLiteral();
    if (ctx_.isStrict() && !ctx_.lookupOp(opcode))
      p_.emitError(loc, "unknown opcode '" + opcode + "' in strict mode");
    return opcode;
  }

  void addCapture(const std::string &name, CaptureInfo info, Location loc) {
    if (!captures_.emplace(name, std::move(info)).second)
      p_.emitError(loc, "duplicate capture " + name);
  }

  DagNode parseDag(const std::string &path) {
    DagNode node;
    node.opcode = parseOpcode();
    p_.parsePunct("(");
    unsigned slot = 0;
    while (!p_.parseOptionalPunct(")")) {
      if (slot > 0)
        p_.parseOptionalPunct(",");
      DagOperand operand;
      Location loc = p_.getCurrentLocation();
      std::string childPath = path + "." + std::to_string(slot);
      if (p_.peekPunct("\"")) {
        operand.kind = DagOperand::Kind::Nested;
        operand.nested = std::make_unique<DagNode>(parseDag(childPath));
      } else if (p_.peekPunct("$")) {
        operand.kind = DagOperand::Kind::Capture;
        operand.name = parseCaptureName("$");
        addCapture(operand.name, {false, path, slot, ""}, loc);
      } else if (p_.peekPunct("%")) {
        operand.kind = DagOperand::Kind::Wildcard;
        operand.name = parseCaptureName("%");
      } else {
        p_.emitError("expected nested op, '$' capture or '%' operand");
      }
      node.operands.push_back(std::move(operand));
      ++slot;
    }
    if (p_.parseOptionalPunct("{")) {
      do {
        DagAttr attr;
        attr.name = p_.parseIdentifier();
        p_.parsePunct("=");
        Location loc = p_.getCurrentLocation();
        if (p_.peekPunct("$")) {
          attr.capture = parseCaptureName("$");
          addCapture(attr.capture, {true, path, 0, attr.name}, loc);
        } else {
          attr.literal = p_.parseAttribute();
        }
        node.attrs.push_back(std::move(attr));
      } while (p_.parseOptionalPunct(","));
      p_.parsePunct("}");
    }
    return node;
  }

  const CaptureInfo &useCapture(const std::string &name, Location loc) {
    auto it = captures_.find(name);
    if (it == captures_.end())
      p_.emitError(loc, "unbound capture " + name);
    return it->second;
  }

  std::string parseValueCaptureUse() {
    Location loc = p_.getCurrentLocation();
    std::string name = parseCaptureName("$");
    if (useCapture(name, loc).isAttr)
      p_.emitError(loc, "capture " + name + " is an attribute, expected a value");
    return name;
  }

  std::string parseAttrCaptureUse() {
    Location loc = p_.getCurrentLocation();
    std::string name = parseCaptureName("$");
    if (!useCapture(name, loc).isAttr)
      p_.emitError(loc, "capture " + name + " is a value, expected an attribute");
    return name;
  }

  DslPredicate parsePredicate() {
    DslPredicate pred;
    if (p_.parseOptionalKeyword("same")) {
      pred.kind = DslPredicate::Kind::Same;
      p_.parsePunct("(");
      pred.lhs = parseValueCaptureUse();
      p_.parsePunct(",");
      pred.rhs = parseValueCaptureUse();
    } else if (p_.parseOptionalKeyword("attr_eq")) {
      pred.kind = DslPredicate::Kind::AttrEq;
      p_.parsePunct("(");
      pred.lhs = parseAttrCaptureUse();
      p_.parsePunct(",");
      pred.attr = p_.parseAttribute();
    } else if (p_.parseOptionalKeyword("type_is")) {
      pred.kind = DslPredicate::Kind::TypeIs;
      p_.parsePunct("(");
      pred.lhs = parseValueCaptureUse();
      p_.parsePunct(",");
      pred.type = p_.parseType();
    } else {
      p_.emitError("expected predicate 'same', 'attr_eq' or 'type_is'");
    }
    p_.parsePunct(")");
    return pred;
  }

  TargetOperand parseTargetValue() {
    Location loc = p_.getCurrentLocation();
    if (p_.peekPunct("$"))
      return {true, parseValueCaptureUse()};
    std::string name = parseCaptureName("%");
    if (!locals_.count(name))
      p_.emitError(loc, "use of undefined target value %" + name);
    return {false, name};
  }

  TargetOp parseTarget() {
    TargetOp target;
    Location loc = p_.getCurrentLocation();
    target.result = parseCaptureName("%");
    if (locals_.count(target.result))
      p_.emitError(loc, "redefinition of target value %" + target.result);
    p_.parsePunct("=");
    target.opcode = parseOpcode();
    p_.parsePunct("(");
    while (!p_.parseOptionalPunct(")")) {
      if (!target.operands.empty())
        p_.parseOptionalPunct(",");
      target.operands.push_back(parseTargetValue());
    }
    if (p_.parseOptionalPunct("{")) {
      do {
        TargetAttr attr;
        attr.name = p_.parseIdentifier();
        p_.parsePunct("=");
        if (p_.peekPunct("$"))
          attr.capture = parseAttrCaptureUse();
        else
          attr.literal = p_.parseAttribute();
        target.attrs.push_back(std::move(attr));
      } while (p_.parseOptionalPunct(","));
      p_.parsePunct("}");
    }
    p_.parsePunct(":");
    if (p_.parseOptionalKeyword("type")) {
      p_.parsePunct("(");
      target.typeOf = parseValueCaptureUse();
      p_.parsePunct(")");
    } else {
      target.type = p_.parseType();
    }
    locals_.insert(target.result);
    return target;
  }

  std::shared_ptr<DeclarativePattern> parsePattern() {
    captures_.clear();
    locals_.clear();
    p_.parseKeyword("pattern");
    std::string name = p_.parseIdentifier();
    p_.parseKeyword("benefit");
    p_.parsePunct("(");
    int64_t benefit = p_.parseInteger();
    if (benefit < 0)
      p_.emitError("benefit must be non-negative");
    p_.parsePunct(")");
    p_.parsePunct("{");
    p_.parseKeyword("match");
    p_.parsePunct(":");
    DagNode source = parseDag("r");
    std::vector<DslPredicate> preds;
    if (p_.parseOptionalKeyword("where")) {
      do
        preds.push_back(parsePredicate());
      while (p_.parseOptionalPunct(","));
    }
    p_.parseKeyword("rewrite");
    p_.parsePunct(":");
    std::vector<TargetOp> targets;
    while (p_.peekPunct("%"))
      targets.push_back(parseTarget());
    p_.parseKeyword("replace");
    p_.parsePunct(":");
    std::vector<TargetOperand> replacements;
    if (!p_.peekPunct("}")) {
      do
        replacements.push_back(parseTargetValue());
      while (p_.parseOptionalPunct(","));
    }
    p_.parsePunct("}");
    return std::make_shared<DeclarativePattern>(name, static_cast<unsigned>(benefit),
                                                std::move(source), std::move(preds),
                                                std::move(targets), std::move(replacements),
                                                captures_);
  }

  Context &ctx_;
  OpAsmParser p_;
  std::map<std::string, CaptureInfo> captures_;
  std::set<std::string> locals_;
};

} // namespace

PatternParseResult parsePatternFile(Context &ctx, std::string_view text, std::string filename) {
  PatternParseResult result;
  try {
    PatternFileParser parser(ctx, text, std::move(filename));
    result.patterns = parser.parseFile();
  } catch (const ParseError &e) {
    result.diagnostics.push_back(Diagnostic::error(e.loc, e.message));
  } catch (const ValidationError &e) {
    result.diagnostics.push_back(Diagnostic::error(Location(), e.what()));
  }
  return result;
}

} // namespace mir

//===- Parser.cpp - Textual IR parser -------------------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Text/Parser.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdlib>

namespace mir {

static bool isIdStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
static bool isIdChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '.';
}
static bool isDigit(char c) { return c >= '0' && c <= '9'; }

OpAsmParser::OpAsmParser(Context &ctx, std::string_view text, std::string filename)
    : ctx_(&ctx), text_(text), filename_(std::move(filename)) {
  lineStarts_.push_back(0);
  for (size_t i = 0; i < text_.size(); ++i)
    if (text_[i] == '\n')
      lineStarts_.push_back(i + 1);
}

//===----------------------------------------------------------------------===//
// Lexical helpers
//===----------------------------------------------------------------------===//

Location OpAsmParser::locAt(size_t pos) {
  auto it = std::upper_bound(lineStarts_.begin(), lineStarts_.end(), pos);
  size_t line = static_cast<size_t>(it - lineStarts_.begin());
  size_t col = pos - lineStarts_[line - 1] + 1;
  return Location::fileLineCol(filename_, static_cast<unsigned>(line), static_cast<unsigned>(col));
}

Location OpAsmParser::getCurrentLocation() {
  skipTrivia();
  return locAt(pos_);
}

void OpAsmParser::emitError(const std::string &message) { emitError(getCurrentLocation(), message); }

void OpAsmParser::emitError(Location loc, const std::string &message) {
  throw ParseError{std::move(loc), message};
}

void OpAsmParser::skipTrivia() {
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos_;
    } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
      while (pos_ < text_.size() && text_[pos_] != '\n')
        ++pos_;
    } else {
      break;
    }
  }
}

char OpAsmParser::peekChar() {
  skipTrivia();
  return pos_ < text_.size() ? text_[pos_] : '\0';
}

bool OpAsmParser::atEnd() {
  skipTrivia();
  return pos_ >= text_.size();
}

bool OpAsmParser::peekPunct(std::string_view punct) {
  skipTrivia();
  return text_.substr(pos_, punct.size()) == punct;
}

bool OpAsmParser::parseOptionalPunct(std::string_view punct) {
  if (!peekPunct(punct))
    return false;
  pos_ += punct.size();
  return true;
}

void OpAsmParser::parsePunct(std::string_view punct) {
  if (!parseOptionalPunct(punct))
    emitError("expected '" + std::string(punct) + "'");
}

bool OpAsmParser::parseOptionalKeyword(std::string_view keyword) {
  if (!peekPunct(keyword))
    return false;
  size_t end = pos_ + keyword.size();
  if (end < text_.size() && isIdChar(text_[end]))
    return false;
  pos_ = end;
  return true;
}

void OpAsmParser::parseKeyword(std::string_view keyword) {
  if (!parseOptionalKeyword(keyword))
    emitError("expected '" + std::string(keyword) + "'");
}

std::string OpAsmParser::parseBareId() {
  skipTrivia();
  if (pos_ >= text_.size() || !isIdStart(text_[pos_]))
    emitError("expected identifier");
  size_t start = pos_;
  while (pos_ < text_.size() && isIdChar(text_[pos_]))
    ++pos_;
  return std::string(text_.substr(start, pos_ - start));
}

std::optional<std::string> OpAsmParser::parseOptionalIdentifier() {
  skipTrivia();
  if (pos_ >= text_.size() || !isIdStart(text_[pos_]))
    return std::nullopt;
  return parseBareId();
}

std::string OpAsmParser::parseIdentifier() { return parseBareId(); }

std::string OpAsmParser::parseSuffixId(char sigil) {
  skipTrivia();
  if (pos_ >= text_.size() || text_[pos_] != sigil)
    emitError(std::string("expected '") + sigil + "'");
  size_t start = pos_++;
  while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                 text_[pos_] == '_' || text_[pos_] == '$' || text_[pos_] == '.'))
    ++pos_;
  if (pos_ == start + 1)
    emitError(locAt(start), std::string("expected identifier after '") + sigil + "'");
  return std::string(text_.substr(start, pos_ - start));
}

bool OpAsmParser::parseOptionalInteger(BigInt &value) {
  skipTrivia();
  size_t p = pos_;
  bool negative = false;
  if (p < text_.size() && text_[p] == '-') {
    negative = true;
    ++p;
  }
  if (p >= text_.size() || !isDigit(text_[p]))
    return false;
  size_t start = p;
  bool hex = text_.substr(p, 2) == "0x";
  if (hex) {
    p += 2;
    while (p < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[p])))
      ++p;
  } else {
    while (p < text_.size() && isDigit(text_[p]))
      ++p;
  }
  value = BigInt(std::string(text_.substr(start, p - start)));
  if (negative)
    value = -value;
  pos_ = p;
  return true;
}

int64_t OpAsmParser::parseInteger() {
  BigInt value;
  Location loc = getCurrentLocation();
  if (!parseOptionalInteger(value))
    emitError("expected integer");
  if (value > INT64_MAX || value < INT64_MIN)
    emitError(loc, "integer out of range");
  return static_cast<int64_t>(value);
}

std::string OpAsmParser::parseStringLiteral() {
  skipTrivia();
  if (pos_ >= text_.size() || text_[pos_] != '"')
    emitError("expected string literal");
  size_t start = pos_++;
  std::string out;
  while (true) {
    if (pos_ >= text_.size() || text_[pos_] == '\n')
      emitError(locAt(start), "unterminated string literal");
    char c = text_[pos_++];
    if (c == '"')
      break;
    if (c != '\\') {
      out += c;
      continue;
    }
    if (pos_ >= text_.size())
      emitError(locAt(start), "unterminated string literal");
    char e = text_[pos_++];
    switch (e) {
    case '"':
    case '\\':
      out += e;
      break;
    case 'n':
      out += '\n';
      break;
    case 't':
      out += '\t';
      break;
    default:
      if (pos_ < text_.size() && std::isxdigit(static_cast<unsigned char>(e)) &&
          std::isxdigit(static_cast<unsigned char>(text_[pos_]))) {
        out += static_cast<char>(std::stoi(std::string{e, text_[pos_]}, nullptr, 16));
        ++pos_;
      } else {
        emitError(locAt(pos_ - 2), "unknown escape in string literal");
      }
    }
  }
  return out;
}

std::string OpAsmParser::parseSymbolName() {
  skipTrivia();
  if (pos_ >= text_.size() || text_[pos_] != '@')
    emitError("expected symbol name");
  ++pos_;
  if (pos_ < text_.size() && text_[pos_] == '"')
    return parseStringLiteral();
  size_t start = pos_;
  while (pos_ < text_.size() && isIdChar(text_[pos_]))
    ++pos_;
  if (start == pos_)
    emitError("expected symbol name");
  return std::string(text_.substr(start, pos_ - start));
}

//===----------------------------------------------------------------------===//
// Types
//===----------------------------------------------------------------------===//

std::optional<Type> OpAsmParser::parseOptionalType() {
  skipTrivia();
  if (pos_ >= text_.size())
    return std::nullopt;
  Location loc = locAt(pos_);
  try {
    if (text_[pos_] == '(')
      return parseFunctionType();
    if (!isIdStart(text_[pos_]))
      return std::nullopt;
    size_t start = pos_;
    size_t end = pos_;
    while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end])))
      ++end;
    std::string_view word = text_.substr(start, end - start);
    if (word.size() > 1 && word[0] == 'i' &&
        std::all_of(word.begin() + 1, word.end(), isDigit)) {
      pos_ = end;
      if (word.size() > 4)
        emitError(loc, "integer width out of range");
      return ctx_->getIntegerType(static_cast<unsigned>(std::stoul(std::string(word.substr(1)))));
    }
    if (word == "f32" || word == "f64" || word == "index") {
      pos_ = end;
      if (word == "f32")
        return ctx_->getF32Type();
      if (word == "f64")
        return ctx_->getF64Type();
      return ctx_->getIndexType();
    }
    if ((word == "memref" || word == "tensor") && end < text_.size() && text_[end] == '<') {
      pos_ = end + 1;
      std::vector<int64_t> shape;
      Type element;
      while (true) {
        skipTrivia();
        if (pos_ < text_.size() && text_[pos_] == '?') {
          ++pos_;
          shape.push_back(kDynamicDim);
        } else if (pos_ < text_.size() && isDigit(text_[pos_])) {
          size_t s = pos_;
          while (pos_ < text_.size() && isDigit(text_[pos_]))
            ++pos_;
          shape.push_back(std::stoll(std::string(text_.substr(s, pos_ - s))));
        } else {
          element = parseType();
          break;
        }
        if (pos_ >= text_.size() || text_[pos_] != 'x')
          emitError("expected 'x' in shape");
        ++pos_;
      }
      parsePunct(">");
      return word == "memref" ? ctx_->getMemRefType(shape, element)
                              : ctx_->getTensorType(shape, element);
    }
  } catch (const ValidationError &e) {
    emitError(loc, e.what());
  }
  return std::nullopt;
}

Type OpAsmParser::parseType() {
  Location loc = getCurrentLocation();
  if (auto t = parseOptionalType())
    return *t;
  emitError(loc, "expected type");
}

std::vector<Type> OpAsmParser::parseTypeList() {
  std::vector<Type> types{parseType()};
  while (parseOptionalPunct(","))
    types.push_back(parseType());
  return types;
}

std::vector<Type> OpAsmParser::parseResultTypes() {
  if (parseOptionalPunct("(")) {
    std::vector<Type> types;
    if (!parseOptionalPunct(")")) {
      types = parseTypeList();
      parsePunct(")");
    }
    return types;
  }
  return {parseType()};
}

Type OpAsmParser::parseFunctionType() {
  parsePunct("(");
  std::vector<Type> inputs;
  if (!parseOptionalPunct(")")) {
    inputs = parseTypeList();
    parsePunct(")");
  }
  parsePunct("->");
  return ctx_->getFunctionType(std::move(inputs), parseResultTypes());
}

//===----------------------------------------------------------------------===//
// Affine maps
//===----------------------------------------------------------------------===//

AffineExpr OpAsmParser::parseAffineUnary(const std::vector<std::string> &dims,
                                         const std::vector<std::string> &syms) {
  skipTrivia();
  if (peekPunct("-") && !peekPunct("->")) {
    ++pos_;
    skipTrivia();
    if (pos_ < text_.size() && isDigit(text_[pos_]))
      return AffineExpr::constant(-parseInteger());
    AffineExpr inner = parseAffineUnary(dims, syms);
    return AffineExpr::binary(AffineExprKind::Mul, inner, AffineExpr::constant(-1));
  }
  if (parseOptionalPunct("(")) {
    AffineExpr e = parseAffineExpr(dims, syms);
    parsePunct(")");
    return e;
  }
  if (pos_ < text_.size() && isDigit(text_[pos_]))
    return AffineExpr::constant(parseInteger());
  Location loc = getCurrentLocation();
  std::string id = parseBareId();
  for (unsigned i = 0; i < dims.size(); ++i)
    if (dims[i] == id)
      return AffineExpr::dim(i);
  for (unsigned i = 0; i < syms.size(); ++i)
    if (syms[i] == id)
      return AffineExpr::symbol(i);
  emitError(loc, "use of undeclared identifier '" + id + "' in affine map");
}

AffineExpr OpAsmParser::parseAffineTerm(const std::vector<std::string> &dims,
                                        const std::vector<std::string> &syms) {
  AffineExpr lhs = parseAffineUnary(dims, syms);
  while (true) {
    Location loc = getCurrentLocation();
    AffineExprKind kind;
    if (parseOptionalPunct("*"))
      kind = AffineExprKind::Mul;
    else if (parseOptionalKeyword("mod"))
      kind = AffineExprKind::Mod;
    else if (parseOptionalKeyword("floordiv"))
      kind = AffineExprKind::FloorDiv;
    else if (parseOptionalKeyword("ceildiv"))
      kind = AffineExprKind::CeilDiv;
    else
      return lhs;
    AffineExpr rhs = parseAffineUnary(dims, syms);
    if (rhs.getKind() != AffineExprKind::Constant) {
      if (kind == AffineExprKind::Mul && lhs.getKind() == AffineExprKind::Constant)
        std::swap(lhs, rhs);
      else
        emitError(loc, "non-affine expression: right operand must be a constant");
    }
    if (kind != AffineExprKind::Mul && rhs.getValue() <= 0)
      emitError(loc, "non-affine expression: divisor must be positive");
    lhs = AffineExpr::binary(kind, lhs, rhs);
  }
}

AffineExpr OpAsmParser::parseAffineExpr(const std::vector<std::string> &dims,
                                        const std::vector<std::string> &syms) {
  AffineExpr lhs = parseAffineTerm(dims, syms);
  while (true) {
    if (parseOptionalPunct("+")) {
      lhs = AffineExpr::binary(AffineExprKind::Add, lhs, parseAffineTerm(dims, syms));
    } else if (peekPunct("-") && !peekPunct("->")) {
      ++pos_;
      AffineExpr rhs = parseAffineTerm(dims, syms);
      if (rhs.getKind() == AffineExprKind::Constant)
        rhs = AffineExpr::constant(-rhs.getValue());
      else
        rhs = AffineExpr::binary(AffineExprKind::Mul, rhs, AffineExpr::constant(-1));
      lhs = AffineExpr::binary(AffineExprKind::Add, lhs, rhs);
    } else {
      return lhs;
    }
  }
}

AffineMap OpAsmParser::parseAffineMapBody() {
  Location loc = getCurrentLocation();
  auto parseIds = [&](std::string_view close) {
    std::vector<std::string> ids;
    if (parseOptionalPunct(close))
      return ids;
    do {
      ids.push_back(parseBareId());
    } while (parseOptionalPunct(","));
    parsePunct(close);
    return ids;
  };
  parsePunct("(");
  std::vector<std::string> dims = parseIds(")");
  std::vector<std::string> syms;
  if (parseOptionalPunct("["))
    syms = parseIds("]");
  parsePunct("->");
  parsePunct("(");
  std::vector<AffineExpr> results;
  if (!parseOptionalPunct(")")) {
    do {
      results.push_back(parseAffineExpr(dims, syms));
    } while (parseOptionalPunct(","));
    parsePunct(")");
  }
  AffineMap map(static_cast<unsigned>(dims.size()), static_cast<unsigned>(syms.size()),
                std::move(results));
  if (std::string err = map.validate(); !err.empty())
    emitError(loc, err);
  return map;
}

//===----------------------------------------------------------------------===//
// Attributes
//===----------------------------------------------------------------------===//

std::optional<Attribute> OpAsmParser::parseOptionalAttribute() {
  skipTrivia();
  if (pos_ >= text_.size())
    return std::nullopt;
  Location loc = locAt(pos_);
  char c = text_[pos_];
  try {
    if (c == '#') {
      std::string name = parseSuffixId('#');
      auto it = aliases_.find(name);
      if (it == aliases_.end())
        emitError(loc, "undefined attribute alias '" + name + "'");
      return it->second;
    }
    if (c == '"')
      return ctx_->getStringAttr(parseStringLiteral());
    if (c == '@')
      return ctx_->getSymbolRefAttr(parseSymbolName());
    if (c == '[') {
      ++pos_;
      std::vector<Attribute> elems;
      if (!parseOptionalPunct("]")) {
        do {
          elems.push_back(parseAttribute());
        } while (parseOptionalPunct(","));
        parsePunct("]");
      }
      return ctx_->getArrayAttr(std::move(elems));
    }
    if (c == '{') {
      std::vector<NamedAttribute> entries;
      parseOptionalAttrDict(entries);
      return ctx_->getDictionaryAttr(std::move(entries));
    }
    if (isDigit(c) || (c == '-' && pos_ + 1 < text_.size() && isDigit(text_[pos_ + 1]))) {
      size_t start = pos_;
      size_t p = pos_ + (c == '-' ? 1 : 0);
      bool hex = text_.substr(p, 2) == "0x";
      bool isFloat = false;
      if (hex) {
        p += 2;
        while (p < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[p])))
          ++p;
      } else {
        while (p < text_.size() && isDigit(text_[p]))
          ++p;
        if (p < text_.size() && text_[p] == '.') {
          isFloat = true;
          ++p;
          while (p < text_.size() && isDigit(text_[p]))
            ++p;
        }
        if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
          size_t q = p + 1;
          if (q < text_.size() && (text_[q] == '+' || text_[q] == '-'))
            ++q;
          if (q < text_.size() && isDigit(text_[q])) {
            isFloat = true;
            p = q;
            while (p < text_.size() && isDigit(text_[p]))
              ++p;
          }
        }
      }
      std::string literal(text_.substr(start, p - start));
      pos_ = p;
      Type type;
      if (parseOptionalPunct(":"))
        type = parseType();
      if (isFloat) {
        if (!type)
          type = ctx_->getF64Type();
        if (!type.isFloat())
          emitError(loc, "floating point literal requires a float type");
        return ctx_->getFloatAttr(type, std::strtod(literal.c_str(), nullptr));
      }
      if (!type)
        type = ctx_->getIntegerType(64);
      if (type.isFloat()) {
        if (hex) {
          uint64_t bits = std::stoull(literal, nullptr, 16);
          double v = type.isF32() ? static_cast<double>(std::bit_cast<float>(
                                        static_cast<uint32_t>(bits)))
                                  : std::bit_cast<double>(bits);
          return ctx_->getFloatAttr(type, v);
        }
        return ctx_->getFloatAttr(type, std::strtod(literal.c_str(), nullptr));
      }
      bool neg = literal[0] == '-';
      BigInt value(neg ? literal.substr(1) : literal);
      if (neg)
        value = -value;
      return ctx_->getIntegerAttr(type, value);
    }
    if (parseOptionalKeyword("true"))
      return ctx_->getBoolAttr(true);
    if (parseOptionalKeyword("false"))
      return ctx_->getBoolAttr(false);
    if (parseOptionalKeyword("unit"))
      return ctx_->getUnitAttr();
    if (parseOptionalKeyword("affine_map")) {
      parsePunct("<");
      AffineMap map = parseAffineMapBody();
      parsePunct(">");
      return ctx_->getAffineMapAttr(std::move(map));
    }
    if (auto type = parseOptionalType())
      return ctx_->getTypeAttr(*type);
  } catch (const ValidationError &e) {
    emitError(loc, e.what());
  }
  return std::nullopt;
}

Attribute OpAsmParser::parseAttribute() {
  Location loc = getCurrentLocation();
  if (auto attr = parseOptionalAttribute())
    return *attr;
  emitError(loc, "expected attribute value");
}

bool OpAsmParser::parseOptionalAttrDict(std::vector<NamedAttribute> &attrs) {
  if (!parseOptionalPunct("{"))
    return false;
  if (parseOptionalPunct("}"))
    return true;
  do {
    skipTrivia();
    std::string key = peekChar() == '"' ? parseStringLiteral() : parseBareId();
    Attribute value = parseOptionalPunct("=") ? parseAttribute() : ctx_->getUnitAttr();
    for (const NamedAttribute &existing : attrs)
      if (existing.name == key)
        emitError("duplicate attribute name '" + key + "'");
    attrs.push_back({std::move(key), value});
  } while (parseOptionalPunct(","));
  parsePunct("}");
  return true;
}

bool OpAsmParser::parseOptionalAttrDictWithKeyword(std::vector<NamedAttribute> &attrs) {
  if (!parseOptionalKeyword("attributes"))
    return false;
  if (!peekPunct("{"))
    emitError("expected '{' after 'attributes'");
  return parseOptionalAttrDict(attrs);
}

Location OpAsmParser::parseLocationBody() {
  if (parseOptionalKeyword("unknown"))
    return Location::unknown();
  std::string text = parseStringLiteral();
  if (parseOptionalPunct("(")) {
    Location child = parseLocationBody();
    parsePunct(")");
    return Location::named(std::move(text), std::move(child));
  }
  parsePunct(":");
  int64_t line = parseInteger();
  parsePunct(":");
  int64_t col = parseInteger();
  return Location::fileLineCol(std::move(text), static_cast<unsigned>(line),
                               static_cast<unsigned>(col));
}

Location OpAsmParser::parseLocation() {
  parseKeyword("loc");
  parsePunct("(");
  Location loc = parseLocationBody();
  parsePunct(")");
  return loc;
}

//===----------------------------------------------------------------------===//
// Values, blocks and scopes
//===----------------------------------------------------------------------===//

bool OpAsmParser::peekOperand() { return peekChar() == '%'; }

OpAsmParser::UnresolvedOperand OpAsmParser::parseOperand() {
  Location loc = getCurrentLocation();
  return {parseSuffixId('%'), loc};
}

std::vector<OpAsmParser::UnresolvedOperand> OpAsmParser::parseOperandList() {
  std::vector<UnresolvedOperand> operands;
  if (!peekOperand())
    return operands;
  do {
    operands.push_back(parseOperand());
  } while (parseOptionalPunct(","));
  return operands;
}

OpAsmParser::Argument OpAsmParser::parseArgument() {
  Argument arg;
  arg.name = parseOperand();
  parsePunct(":");
  arg.type = parseType();
  return arg;
}

OpAsmParser::ValueEntry *OpAsmParser::lookupValue(const std::string &name) {
  for (size_t i = scopes_.size(); i-- > 0;) {
    auto it = scopes_[i].values.find(name);
    if (it != scopes_[i].values.end())
      return &it->second;
    if (scopes_[i].isolated)
      break;
  }
  return nullptr;
}

Value *OpAsmParser::resolveOperand(const UnresolvedOperand &operand, Type type) {
  if (ValueEntry *entry = lookupValue(operand.name)) {
    if (entry->value->getType() != type)
      emitError(operand.loc, "use of value '" + operand.name +
                                 "' expects different type than prior uses: '" + type.str() +
                                 "' vs '" + entry->value->getType().str() + "'");
    return entry->value;
  }
  auto placeholder = Value::createPlaceholder(*ctx_, type);
  Value *raw = placeholder.get();
  placeholders_.push_back(std::move(placeholder));
  ValueEntry entry;
  entry.value = raw;
  entry.forward = true;
  entry.useLoc = operand.loc;
  entry.useBlock = blockStack_.empty() ? nullptr : blockStack_.back();
  scopes_.back().values[operand.name] = entry;
  return raw;
}

std::vector<Value *> OpAsmParser::resolveOperands(const std::vector<UnresolvedOperand> &operands,
                                                  const std::vector<Type> &types, Location loc) {
  if (operands.size() != types.size())
    emitError(loc, std::to_string(operands.size()) + " operands present, but expected " +
                       std::to_string(types.size()));
  std::vector<Value *> values;
  for (size_t i = 0; i < operands.size(); ++i)
    values.push_back(resolveOperand(operands[i], types[i]));
  return values;
}

void OpAsmParser::defineValue(const std::string &name, Value *value, Location loc) {
  for (size_t i = scopes_.size(); i-- > 0;) {
    auto it = scopes_[i].values.find(name);
    if (it != scopes_[i].values.end()) {
      ValueEntry &entry = it->second;
      if (!entry.forward)
        emitError(loc, "redefinition of value '" + name + "'");
      if (entry.value->getType() != value->getType())
        emitError(entry.useLoc, "use of value '" + name + "' expects type '" +
                                    entry.value->getType().str() + "' but it is defined as '" +
                                    value->getType().str() + "'");
      if (entry.useBlock && entry.useBlock == value->getParentBlock())
        emitError(entry.useLoc, "use of undefined value '" + name + "'");
      entry.value->replaceAllUsesWith(value);
      scopes_[i].values.erase(it);
      break;
    }
    if (scopes_[i].isolated)
      break;
  }
  ValueEntry entry;
  entry.value = value;
  scopes_.back().values[name] = entry;
}

Block *OpAsmParser::getBlockRef(const std::string &name, Location loc) {
  BlockEntry &entry = scopes_.back().blocks[name];
  if (!entry.block) {
    entry.pending = std::make_unique<Block>(*ctx_);
    entry.block = entry.pending.get();
    entry.loc = loc;
  }
  return entry.block;
}

Block *OpAsmParser::defineBlock(const std::string &name, Location loc, Region &region) {
  BlockEntry &entry = scopes_.back().blocks[name];
  if (entry.defined)
    emitError(loc, "redefinition of block '" + name + "'");
  entry.defined = true;
  entry.loc = loc;
  if (entry.pending)
    return region.push_back(std::move(entry.pending));
  entry.block = region.addBlock(*ctx_);
  return entry.block;
}

void OpAsmParser::pushScope(bool isolated) {
  scopes_.emplace_back();
  scopes_.back().isolated = isolated;
}

void OpAsmParser::popScope() {
  Scope &scope = scopes_.back();
  for (auto &[name, entry] : scope.blocks)
    if (!entry.defined)
      emitError(entry.loc, "reference to an undefined block '" + name + "'");
  std::vector<std::pair<std::string, ValueEntry>> forwards;
  for (auto &[name, entry] : scope.values)
    if (entry.forward)
      forwards.emplace_back(name, entry);
  bool isolated = scope.isolated;
  // Blocks referenced but kept pending die with the scope; the checks above
  // guarantee none are left.
  scopes_.pop_back();
  for (auto &[name, entry] : forwards) {
    if (isolated || scopes_.empty())
      emitError(entry.useLoc, "use of undefined value '" + name + "'");
    auto &parentValues = scopes_.back().values;
    auto it = parentValues.find(name);
    if (it == parentValues.end()) {
      parentValues[name] = entry;
      continue;
    }
    if (it->second.value->getType() != entry.value->getType())
      emitError(entry.useLoc, "use of value '" + name + "' expects different type than prior uses");
    entry.value->replaceAllUsesWith(it->second.value);
  }
}

void OpAsmParser::parseRegion(Region &region, const std::vector<Argument> *entryArgs) {
  parsePunct("{");
  bool isolated = false;
  if (!opStack_.empty())
    if (const OpDefinition *def = ctx_->lookupOp(opStack_.back()))
      isolated = def->hasTrait(Trait::IsolatedFromAbove);
  pushScope(isolated);
  Block *current = nullptr;
  if (entryArgs) {
    current = region.addBlock(*ctx_);
    for (const Argument &arg : *entryArgs)
      defineValue(arg.name.name, current->addArgument(arg.type), arg.name.loc);
  }
  blockStack_.push_back(current);
  while (!parseOptionalPunct("}")) {
    if (atEnd())
      emitError("expected '}' to close region");
    if (peekChar() == '^') {
      Location loc = getCurrentLocation();
      std::string name = parseSuffixId('^');
      if (entryArgs && current == region.front() && current->empty() && region.size() == 1)
        emitError(loc, "entry block arguments were already defined");
      Block *block = defineBlock(name, loc, region);
      if (parseOptionalPunct("(")) {
        if (!parseOptionalPunct(")")) {
          do {
            Argument arg = parseArgument();
            defineValue(arg.name.name, block->addArgument(arg.type), arg.name.loc);
          } while (parseOptionalPunct(","));
          parsePunct(")");
        }
      }
      parsePunct(":");
      current = block;
      blockStack_.back() = current;
      continue;
    }
    if (!current) {
      current = region.addBlock(*ctx_);
      blockStack_.back() = current;
    }
    parseOperation(current);
  }
  blockStack_.pop_back();
  popScope();
}

Block *OpAsmParser::parseSuccessor() {
  Location loc = getCurrentLocation();
  return getBlockRef(parseSuffixId('^'), loc);
}

void OpAsmParser::parseSuccessorAndOperands(OperationState &state) {
  Block *block = parseSuccessor();
  std::vector<Value *> args;
  if (parseOptionalPunct("(")) {
    Location loc = getCurrentLocation();
    auto operands = parseOperandList();
    parsePunct(":");
    auto types = parseTypeList();
    parsePunct(")");
    args = resolveOperands(operands, types, loc);
  }
  state.addSuccessor(block, std::move(args));
}

//===----------------------------------------------------------------------===//
// Operations
//===----------------------------------------------------------------------===//

void OpAsmParser::parseGenericBody(OperationState &state) {
  parsePunct("(");
  Location operandLoc = getCurrentLocation();
  auto operands = parseOperandList();
  parsePunct(")");
  if (parseOptionalPunct("[")) {
    do {
      parseSuccessorAndOperands(state);
    } while (parseOptionalPunct(","));
    parsePunct("]");
  }
  parseOptionalAttrDict(state.attributes);
  if (parseOptionalPunct("(")) {
    do {
      parseRegion(*state.addRegion());
    } while (parseOptionalPunct(","));
    parsePunct(")");
  }
  parsePunct(":");
  Type fnType = parseFunctionType();
  state.operands = resolveOperands(operands, fnType.getInputs(), operandLoc);
  state.types = fnType.getResults();
}

Operation *OpAsmParser::parseOperation(Block *block) {
  Location opLoc = getCurrentLocation();
  std::vector<UnresolvedOperand> resultNames;
  if (peekOperand()) {
    do {
      resultNames.push_back(parseOperand());
    } while (parseOptionalPunct(","));
    parsePunct("=");
  }

  OperationState state;
  bool generic = peekChar() == '"';
  Location nameLoc = getCurrentLocation();
  state.name = generic ? parseStringLiteral() : parseBareId();
  const OpDefinition *def = ctx_->lookupOp(state.name);
  if (!def && ctx_->isStrict())
    emitError(nameLoc, "unregistered operation '" + state.name + "' in strict mode");
  if (!generic) {
    if (!def)
      emitError(nameLoc, "unknown operation '" + state.name + "' (use the generic form)");
    if (!def->parse)
      emitError(nameLoc, "operation '" + state.name + "' has no custom assembly form");
  }

  opStack_.push_back(state.name);
  if (generic)
    parseGenericBody(state);
  else
    def->parse(*this, state);
  opStack_.pop_back();

  if (peekPunct("loc("))
    state.location = parseLocation();
  else
    state.location = opLoc;

  if (state.types.size() != resultNames.size())
    emitError(opLoc, "operation defines " + std::to_string(state.types.size()) +
                         " results but was provided " + std::to_string(resultNames.size()) +
                         " to bind");

  std::unique_ptr<Operation> op;
  try {
    op = Operation::create(*ctx_, std::move(state));
  } catch (const std::exception &e) {
    emitError(opLoc, e.what());
  }
  Operation *raw = block->push_back(std::move(op));
  for (size_t i = 0; i < resultNames.size(); ++i)
    defineValue(resultNames[i].name, raw->getResult(static_cast<unsigned>(i)),
                resultNames[i].loc);
  return raw;
}

void OpAsmParser::parseAliasDefinition() {
  Location loc = getCurrentLocation();
  std::string name = parseSuffixId('#');
  parsePunct("=");
  Attribute value = parseAttribute();
  if (!aliases_.emplace(name, value).second)
    emitError(loc, "redefinition of attribute alias '" + name + "'");
}

std::unique_ptr<Operation> OpAsmParser::parseTopLevel() {
  pushScope(true);
  auto top = std::make_unique<Block>(*ctx_);
  blockStack_.push_back(top.get());
  while (!atEnd()) {
    if (peekChar() == '#')
      parseAliasDefinition();
    else
      parseOperation(top.get());
  }
  blockStack_.pop_back();
  popScope();

  if (top->size() == 1 && top->front()->getName() == "builtin.module")
    return top->remove(top->front());

  OperationState state("builtin.module", Location::fileLineCol(filename_, 1, 1));
  Region *region = state.addRegion();
  Block *body = region->addBlock(*ctx_);
  while (!top->empty())
    body->push_back(top->remove(top->front()));
  if (ctx_->lookupOp("builtin.module_end"))
    body->push_back(Operation::create(*ctx_, OperationState("builtin.module_end", state.location)));
  try {
    return Operation::create(*ctx_, std::move(state));
  } catch (const std::exception &e) {
    emitError(Location::fileLineCol(filename_, 1, 1), e.what());
  }
}

//===----------------------------------------------------------------------===//
// Entry points
//===----------------------------------------------------------------------===//

ParseResult parseSource(Context &ctx, std::string_view text, std::string filename) {
  ParseResult result;
  OpAsmParser parser(ctx, text, filename);
  try {
    result.module = parser.parseTopLevel();
  } catch (const ParseError &e) {
    result.diagnostics.push_back(Diagnostic::error(e.loc, e.message));
  } catch (const std::exception &e) {
    result.diagnostics.push_back(Diagnostic::error(parser.getCurrentLocation(), e.what()));
  }
  return result;
}

template <typename Fn> static auto parseFragment(Context &ctx, std::string_view text, Fn fn) {
  OpAsmParser parser(ctx, text, "<string>");
  try {
    auto value = fn(parser);
    if (!parser.atEnd())
      parser.emitError("unexpected trailing characters");
    return value;
  } catch (const ParseError &e) {
    throw ValidationError(e.loc.toDiagnosticPrefix() + ": " + e.message);
  }
}

AffineMap parseAffineMap(std::string_view text) {
  Context ctx;
  return parseFragment(ctx, text, [](OpAsmParser &p) {
    bool wrapped = p.parseOptionalKeyword("affine_map");
    if (wrapped)
      p.parsePunct("<");
    AffineMap map = p.parseAffineMapBody();
    if (wrapped)
      p.parsePunct(">");
    return map;
  });
}

Type parseType(Context &ctx, std::string_view text) {
  return parseFragment(ctx, text, [](OpAsmParser &p) { return p.parseType(); });
}

Attribute parseAttribute(Context &ctx, std::string_view text) {
  return parseFragment(ctx, text, [](OpAsmParser &p) { return p.parseAttribute(); });
}

} // namespace mir

//===- Context.cpp - Interning and registries -----------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/Context.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace mir {

Context::Context() = default;
Context::~Context() = default;

//===----------------------------------------------------------------------===//
// Text helpers
//===----------------------------------------------------------------------===//

bool isBareIdentifier(std::string_view name) {
  if (name.empty())
    return false;
  auto isStart = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  if (!isStart(name[0]))
    return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '$')
      return false;
  return true;
}

std::string quoteString(std::string_view text) {
  std::string out = "\"";
  for (unsigned char c : text) {
    switch (c) {
    case '"':
      out += "\\\"";
      break;
    case '\\':
      out += "\\\\";
      break;
    case '\n':
      out += "\\n";
      break;
    case '\t':
      out += "\\t";
      break;
    default:
      if (c < 0x20 || c == 0x7f) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "\\%02X", c);
        out += buf;
      } else {
        out += static_cast<char>(c);
      }
    }
  }
  return out + "\"";
}

std::string formatFloat(double value, FloatKind kind) {
  char buf[64];
  if (!std::isfinite(value)) {
    if (kind == FloatKind::F32) {
      uint32_t bits = std::bit_cast<uint32_t>(static_cast<float>(value));
      std::snprintf(buf, sizeof(buf), "0x%08X", bits);
    } else {
      uint64_t bits = std::bit_cast<uint64_t>(value);
      std::snprintf(buf, sizeof(buf), "0x%016llX", static_cast<unsigned long long>(bits));
    }
    return buf;
  }
  std::to_chars_result res;
  if (kind == FloatKind::F32)
    res = std::to_chars(buf, buf + sizeof(buf), static_cast<float>(value));
  else
    res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string text(buf, res.ptr);
  if (text.find_first_of(".e") == std::string::npos)
    text += ".0";
  return text;
}

std::string_view attrKindName(AttrKind kind) {
  switch (kind) {
  case AttrKind::Integer:
    return "integer";
  case AttrKind::Float:
    return "float";
  case AttrKind::String:
    return "string";
  case AttrKind::Type:
    return "type";
  case AttrKind::AffineMap:
    return "affine-map";
  case AttrKind::Array:
    return "array";
  case AttrKind::Dictionary:
    return "dictionary";
  case AttrKind::SymbolRef:
    return "symbol-ref";
  case AttrKind::Unit:
    return "unit";
  }
  return "?";
}

int64_t Attribute::getInt64() const {
  const BigInt &v = getInt();
  // Wrap modulo 2^64 so oversized literals still produce a defined value.
  BigInt mask = (BigInt(1) << 64) - 1;
  BigInt low = v & mask;
  if (v < 0)
    low = ((BigInt(1) << 64) - ((-v) & mask)) & mask;
  auto u = low.convert_to<uint64_t>();
  return static_cast<int64_t>(u);
}

Attribute Attribute::get(std::string_view name) const {
  for (const NamedAttribute &entry : getDictionary())
    if (entry.name == name)
      return entry.value;
  return Attribute();
}

//===----------------------------------------------------------------------===//
// Types
//===----------------------------------------------------------------------===//

static std::string typeText(const TypeDesc &d) {
  std::ostringstream os;
  switch (d.kind) {
  case TypeKind::Integer:
    os << "i" << d.width;
    break;
  case TypeKind::Float:
    os << (d.floatKind == FloatKind::F32 ? "f32" : "f64");
    break;
  case TypeKind::Index:
    os << "index";
    break;
  case TypeKind::Function: {
    os << "(";
    for (size_t i = 0; i < d.inputs.size(); ++i)
      os << (i ? ", " : "") << d.inputs[i].str();
    os << ") -> ";
    if (d.results.size() == 1 && !d.results[0].isFunction()) {
      os << d.results[0].str();
    } else {
      os << "(";
      for (size_t i = 0; i < d.results.size(); ++i)
        os << (i ? ", " : "") << d.results[i].str();
      os << ")";
    }
    break;
  }
  case TypeKind::Tensor:
  case TypeKind::MemRef:
    os << (d.kind == TypeKind::MemRef ? "memref<" : "tensor<");
    for (int64_t dim : d.shape) {
      if (dim == kDynamicDim)
        os << "?";
      else
        os << dim;
      os << "x";
    }
    os << d.element.str() << ">";
    break;
  }
  return os.str();
}

bool Type::hasStaticShape() const {
  for (int64_t d : getShape())
    if (d == kDynamicDim)
      return false;
  return true;
}

int64_t Type::getNumElements() const {
  int64_t n = 1;
  for (int64_t d : getShape())
    n *= d;
  return n;
}

Type Context::intern(const TypeDesc &desc) {
  switch (desc.kind) {
  case TypeKind::Integer:
    if (desc.width == 0 || desc.width > 128)
      throw ValidationError("integer width must be in [1, 128], got " +
                            std::to_string(desc.width));
    break;
  case TypeKind::Function:
    for (Type t : desc.inputs)
      if (!t)
        throw ValidationError("null function input type");
    for (Type t : desc.results)
      if (!t)
        throw ValidationError("null function result type");
    break;
  case TypeKind::Tensor:
  case TypeKind::MemRef:
    for (int64_t d : desc.shape)
      if (d < 0 && d != kDynamicDim)
        throw ValidationError("negative static dimension " + std::to_string(d));
    if (!desc.element || !desc.element.isScalar())
      throw ValidationError("shaped type element must be integer, float or index");
    break;
  default:
    break;
  }

  // Normalize so irrelevant descriptor fields do not affect identity.
  TypeDesc norm;
  norm.kind = desc.kind;
  switch (desc.kind) {
  case TypeKind::Integer:
    norm.width = desc.width;
    break;
  case TypeKind::Float:
    norm.floatKind = desc.floatKind;
    break;
  case TypeKind::Function:
    norm.inputs = desc.inputs;
    norm.results = desc.results;
    break;
  case TypeKind::Tensor:
  case TypeKind::MemRef:
    norm.shape = desc.shape;
    norm.element = desc.element;
    break;
  case TypeKind::Index:
    break;
  }
  std::string text = typeText(norm);

  std::lock_guard<std::mutex> lock(internMutex_);
  auto &slot = types_[text];
  if (!slot) {
    slot = std::make_unique<TypeStorage>();
    slot->context = this;
    slot->desc = std::move(norm);
    slot->text = std::move(text);
  }
  return Type(slot.get());
}

//===----------------------------------------------------------------------===//
// Attributes
//===----------------------------------------------------------------------===//

static std::string attrText(const AttrDesc &d) {
  switch (d.kind) {
  case AttrKind::Integer:
    return d.intValue.str() + " : " + d.type.str();
  case AttrKind::Float:
    return formatFloat(d.floatValue, d.type.getFloatKind()) + " : " + d.type.str();
  case AttrKind::String:
    return quoteString(d.text);
  case AttrKind::Type:
    return d.type.str();
  case AttrKind::AffineMap:
    return "affine_map<" + d.map.str() + ">";
  case AttrKind::Array: {
    std::string out = "[";
    for (size_t i = 0; i < d.elements.size(); ++i)
      out += (i ? ", " : "") + d.elements[i].str();
    return out + "]";
  }
  case AttrKind::Dictionary: {
    std::string out = "{";
    for (size_t i = 0; i < d.entries.size(); ++i) {
      const NamedAttribute &e = d.entries[i];
      out += (i ? ", " : "");
      out += isBareIdentifier(e.name) ? e.name : quoteString(e.name);
      out += " = " + e.value.str();
    }
    return out + "}";
  }
  case AttrKind::SymbolRef:
    return "@" + (isBareIdentifier(d.text) ? d.text : quoteString(d.text));
  case AttrKind::Unit:
    return "unit";
  }
  return "";
}

Attribute Context::intern(const AttrDesc &desc) {
  AttrDesc norm;
  norm.kind = desc.kind;
  switch (desc.kind) {
  case AttrKind::Integer:
    if (!desc.type || !desc.type.isIntOrIndex())
      throw ValidationError("integer attribute requires an integer or index type");
    norm.intValue = desc.intValue;
    norm.type = desc.type;
    break;
  case AttrKind::Float:
    if (!desc.type || !desc.type.isFloat())
      throw ValidationError("float attribute requires a float type");
    norm.type = desc.type;
    norm.floatValue = desc.type.isF32()
                          ? static_cast<double>(static_cast<float>(desc.floatValue))
                          : desc.floatValue;
    break;
  case AttrKind::String:
    norm.text = desc.text;
    break;
  case AttrKind::Type:
    if (!desc.type)
      throw ValidationError("type attribute requires a type");
    norm.type = desc.type;
    break;
  case AttrKind::AffineMap: {
    std::string err = desc.map.validate();
    if (!err.empty())
      throw ValidationError(err);
    norm.map = desc.map;
    break;
  }
  case AttrKind::Array:
    for (Attribute a : desc.elements)
      if (!a)
        throw ValidationError("null array element");
    norm.elements = desc.elements;
    break;
  case AttrKind::Dictionary: {
    norm.entries = desc.entries;
    std::stable_sort(norm.entries.begin(), norm.entries.end(),
                     [](const NamedAttribute &a, const NamedAttribute &b) {
                       return a.name < b.name;
                     });
    for (size_t i = 0; i < norm.entries.size(); ++i) {
      if (norm.entries[i].name.empty())
        throw ValidationError("empty attribute name");
      if (!norm.entries[i].value)
        throw ValidationError("null value for attribute '" + norm.entries[i].name + "'");
      if (i && norm.entries[i].name == norm.entries[i - 1].name)
        throw ValidationError("duplicate attribute name '" + norm.entries[i].name + "'");
    }
    break;
  }
  case AttrKind::SymbolRef:
    if (desc.text.empty())
      throw ValidationError("empty symbol reference");
    norm.text = desc.text;
    break;
  case AttrKind::Unit:
    break;
  }

  std::string text = attrText(norm);
  std::string key = std::to_string(static_cast<int>(norm.kind)) + ":" + text;

  std::lock_guard<std::mutex> lock(internMutex_);
  auto &slot = attrs_[key];
  if (!slot) {
    slot = std::make_unique<AttributeStorage>();
    slot->desc = std::move(norm);
    slot->text = std::move(text);
  }
  return Attribute(slot.get());
}

//===----------------------------------------------------------------------===//
// Registries
//===----------------------------------------------------------------------===//

DialectDescriptor &Context::registerDialect(std::string name) {
  if (!isBareIdentifier(name) || name.find('.') != std::string::npos)
    throw ValidationError("invalid dialect namespace '" + name + "'");
  std::unique_lock lock(registryMutex_);
  auto [it, inserted] = dialects_.try_emplace(name);
  if (!inserted)
    throw ValidationError("dialect '" + name + "' is already registered");
  it->second = std::make_unique<DialectDescriptor>();
  it->second->name = name;
  return *it->second;
}

const DialectDescriptor *Context::getDialect(std::string_view name) const {
  std::shared_lock lock(registryMutex_);
  auto it = dialects_.find(name);
  return it == dialects_.end() ? nullptr : it->second.get();
}

DialectDescriptor *Context::getMutableDialect(std::string_view name) {
  std::shared_lock lock(registryMutex_);
  auto it = dialects_.find(name);
  return it == dialects_.end() ? nullptr : it->second.get();
}

std::vector<std::string> Context::getDialectNames() const {
  std::shared_lock lock(registryMutex_);
  std::vector<std::string> names;
  for (const auto &entry : dialects_)
    names.push_back(entry.first);
  return names;
}

const OpDefinition &Context::registerOp(OpDefinition def) {
  size_t dot = def.name.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == def.name.size())
    throw ValidationError("opcode '" + def.name + "' must have the form dialect.name");
  std::string ns = def.name.substr(0, dot);
  std::unique_lock lock(registryMutex_);
  auto dialectIt = dialects_.find(ns);
  if (dialectIt == dialects_.end())
    throw ValidationError("opcode '" + def.name + "' names unregistered dialect '" + ns + "'");
  if (ops_.count(def.name))
    throw ValidationError("opcode '" + def.name + "' is already registered");
  if (def.traits.has(Trait::Terminator) && (!def.results.empty() || def.variadicResults))
    throw ValidationError("terminator '" + def.name + "' must have zero results");
  def.dialect = dialectIt->second.get();
  std::string name = def.name;
  auto stored = std::make_unique<OpDefinition>(std::move(def));
  const OpDefinition &ref = *stored;
  ops_.emplace(std::move(name), std::move(stored));
  return ref;
}

const OpDefinition *Context::lookupOp(std::string_view name) const {
  std::shared_lock lock(registryMutex_);
  auto it = ops_.find(name);
  return it == ops_.end() ? nullptr : it->second.get();
}

OpDefinition *Context::lookupMutableOp(std::string_view name) {
  std::shared_lock lock(registryMutex_);
  auto it = ops_.find(name);
  return it == ops_.end() ? nullptr : it->second.get();
}

std::vector<const OpDefinition *> Context::getRegisteredOps() const {
  std::shared_lock lock(registryMutex_);
  std::vector<const OpDefinition *> defs;
  for (const auto &entry : ops_)
    defs.push_back(entry.second.get());
  return defs;
}

//===----------------------------------------------------------------------===//
// Traits and constraints
//===----------------------------------------------------------------------===//

static constexpr std::pair<Trait, std::string_view> kTraitNames[] = {
    {Trait::Terminator, "Terminator"},
    {Trait::IsolatedFromAbove, "IsolatedFromAbove"},
    {Trait::NoSideEffect, "NoSideEffect"},
    {Trait::Commutative, "Commutative"},
    {Trait::SameOperandsAndResultType, "SameOperandsAndResultType"},
    {Trait::SymbolDefiner, "SymbolDefiner"},
    {Trait::SymbolTableHolder, "SymbolTableHolder"},
    {Trait::SingleRegionSingleBlock, "SingleRegionSingleBlock"},
    {Trait::ConstantLike, "ConstantLike"},
};

std::optional<Trait> traitFromName(std::string_view name) {
  for (auto [trait, text] : kTraitNames)
    if (text == name)
      return trait;
  return std::nullopt;
}

std::string_view traitName(Trait trait) {
  for (auto [t, text] : kTraitNames)
    if (t == trait)
      return text;
  return "?";
}

bool TypeConstraint::matches(Type type, std::span<const Type> operandTypes) const {
  if (!type)
    return false;
  switch (kind) {
  case Kind::Any:
    return true;
  case Kind::IntegerLike:
    return type.isIntOrIndex();
  case Kind::FloatLike:
    return type.isFloat();
  case Kind::Index:
    return type.isIndex();
  case Kind::MemRef:
    return type.isMemRef();
  case Kind::Tensor:
    return type.isTensor();
  case Kind::Function:
    return type.isFunction();
  case Kind::SameAs:
    return slot < operandTypes.size() && operandTypes[slot] == type;
  case Kind::Exact:
    return type == exact;
  }
  return false;
}

std::string TypeConstraint::describe() const {
  switch (kind) {
  case Kind::Any:
    return "any type";
  case Kind::IntegerLike:
    return "integer-like";
  case Kind::FloatLike:
    return "float-like";
  case Kind::Index:
    return "index";
  case Kind::MemRef:
    return "memref";
  case Kind::Tensor:
    return "tensor";
  case Kind::Function:
    return "function";
  case Kind::SameAs:
    return "same type as operand #" + std::to_string(slot);
  case Kind::Exact:
    return exact ? exact.str() : "<null>";
  }
  return "?";
}

} // namespace mir

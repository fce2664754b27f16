//===- Attributes.h - Interned compile-time attributes ----------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/AffineMap.h"
#include "mir/IR/Types.h"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mir {

using BigInt = boost::multiprecision::cpp_int;

struct AttributeStorage;

enum class AttrKind {
  Integer,
  Float,
  String,
  Type,
  AffineMap,
  Array,
  Dictionary,
  SymbolRef,
  Unit
};

std::string_view attrKindName(AttrKind kind);

class Attribute;
struct NamedAttribute;

/// Handle to an interned, immutable attribute. Handle equality is
/// structural equality.
class Attribute {
public:
  Attribute() = default;
  explicit Attribute(const AttributeStorage *impl) : impl_(impl) {}

  explicit operator bool() const { return impl_ != nullptr; }
  bool operator==(const Attribute &o) const { return impl_ == o.impl_; }
  bool operator!=(const Attribute &o) const { return impl_ != o.impl_; }
  const AttributeStorage *getImpl() const { return impl_; }

  AttrKind getKind() const;
  bool isa(AttrKind kind) const { return impl_ && getKind() == kind; }

  /// Integer and float attributes carry a type.
  Type getType() const;
  const BigInt &getInt() const;
  /// Integer value truncated to int64 (callers check range when it matters).
  int64_t getInt64() const;
  double getFloat() const;
  const std::string &getString() const;
  Type getTypeValue() const;
  const AffineMap &getAffineMap() const;
  const std::vector<Attribute> &getArray() const;
  const std::vector<NamedAttribute> &getDictionary() const;
  /// Dictionary lookup; null when absent.
  Attribute get(std::string_view name) const;
  const std::string &getSymbol() const;

  /// Canonical textual form, e.g. `1 : index` or `affine_map<() -> (0)>`.
  const std::string &str() const;

private:
  const AttributeStorage *impl_ = nullptr;
};

struct NamedAttribute {
  std::string name;
  Attribute value;
  bool operator==(const NamedAttribute &o) const {
    return name == o.name && value == o.value;
  }
};

/// Structural description of an attribute, the input to interning.
struct AttrDesc {
  AttrKind kind = AttrKind::Unit;
  BigInt intValue;
  double floatValue = 0.0;
  Type type;
  std::string text;
  AffineMap map;
  std::vector<Attribute> elements;
  std::vector<NamedAttribute> entries;

  static AttrDesc integer(BigInt value, Type type) {
    AttrDesc d;
    d.kind = AttrKind::Integer;
    d.intValue = std::move(value);
    d.type = type;
    return d;
  }
  static AttrDesc floating(double value, Type type) {
    AttrDesc d;
    d.kind = AttrKind::Float;
    d.floatValue = value;
    d.type = type;
    return d;
  }
  static AttrDesc string(std::string text) {
    AttrDesc d;
    d.kind = AttrKind::String;
    d.text = std::move(text);
    return d;
  }
  static AttrDesc typeAttr(Type type) {
    AttrDesc d;
    d.kind = AttrKind::Type;
    d.type = type;
    return d;
  }
  static AttrDesc affineMap(AffineMap map) {
    AttrDesc d;
    d.kind = AttrKind::AffineMap;
    d.map = std::move(map);
    return d;
  }
  static AttrDesc array(std::vector<Attribute> elements) {
    AttrDesc d;
    d.kind = AttrKind::Array;
    d.elements = std::move(elements);
    return d;
  }
  static AttrDesc dictionary(std::vector<NamedAttribute> entries) {
    AttrDesc d;
    d.kind = AttrKind::Dictionary;
    d.entries = std::move(entries);
    return d;
  }
  static AttrDesc symbolRef(std::string name) {
    AttrDesc d;
    d.kind = AttrKind::SymbolRef;
    d.text = std::move(name);
    return d;
  }
  static AttrDesc unit() { return AttrDesc(); }
};

struct AttributeStorage {
  AttrDesc desc;
  std::string text;
};

inline AttrKind Attribute::getKind() const { return impl_->desc.kind; }
inline Type Attribute::getType() const { return impl_->desc.type; }
inline const BigInt &Attribute::getInt() const { return impl_->desc.intValue; }
inline double Attribute::getFloat() const { return impl_->desc.floatValue; }
inline const std::string &Attribute::getString() const { return impl_->desc.text; }
inline Type Attribute::getTypeValue() const { return impl_->desc.type; }
inline const AffineMap &Attribute::getAffineMap() const { return impl_->desc.map; }
inline const std::vector<Attribute> &Attribute::getArray() const {
  return impl_->desc.elements;
}
inline const std::vector<NamedAttribute> &Attribute::getDictionary() const {
  return impl_->desc.entries;
}
inline const std::string &Attribute::getSymbol() const { return impl_->desc.text; }
inline const std::string &Attribute::str() const { return impl_->text; }

/// Shortest decimal form that round-trips the value at the given float kind;
/// non-finite values use the `0x...` bit pattern.
std::string formatFloat(double value, FloatKind kind);

/// True if `name` can be printed without quotes (bare identifier).
bool isBareIdentifier(std::string_view name);

/// Quotes and escapes a string literal.
std::string quoteString(std::string_view text);

} // namespace mir

template <> struct std::hash<mir::Attribute> {
  size_t operator()(const mir::Attribute &a) const noexcept {
    return std::hash<const void *>()(a.getImpl());
  }
};

//===- Context.h - Owner of interned types, attributes, registries -*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Attributes.h"
#include "mir/IR/OpDefinition.h"
#include "mir/IR/Types.h"

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mir {

/// A Context owns every interned type and attribute and the dialect and op
/// registries. Interning and registry lookups are internally synchronized;
/// ids handed out by the allocators are monotone and never reused.
class Context {
public:
  Context();
  ~Context();
  Context(const Context &) = delete;
  Context &operator=(const Context &) = delete;

  //===--------------------------------------------------------------------===//
  // Interning
  //===--------------------------------------------------------------------===//

  /// Throws ValidationError for malformed descriptors.
  Type intern(const TypeDesc &desc);
  /// Dictionaries are sorted by key before interning; duplicate keys throw.
  Attribute intern(const AttrDesc &desc);

  Type getIntegerType(unsigned width) { return intern(TypeDesc::integer(width)); }
  Type getI1Type() { return getIntegerType(1); }
  Type getF32Type() { return intern(TypeDesc::floating(FloatKind::F32)); }
  Type getF64Type() { return intern(TypeDesc::floating(FloatKind::F64)); }
  Type getIndexType() { return intern(TypeDesc::index()); }
  Type getFunctionType(std::vector<Type> inputs, std::vector<Type> results) {
    return intern(TypeDesc::function(std::move(inputs), std::move(results)));
  }
  Type getMemRefType(std::vector<int64_t> shape, Type element) {
    return intern(TypeDesc::memref(std::move(shape), element));
  }
  Type getTensorType(std::vector<int64_t> shape, Type element) {
    return intern(TypeDesc::tensor(std::move(shape), element));
  }

  Attribute getIntegerAttr(Type type, BigInt value) {
    return intern(AttrDesc::integer(std::move(value), type));
  }
  Attribute getIndexAttr(int64_t value) {
    return getIntegerAttr(getIndexType(), value);
  }
  Attribute getBoolAttr(bool value) { return getIntegerAttr(getI1Type(), value ? 1 : 0); }
  Attribute getFloatAttr(Type type, double value) {
    return intern(AttrDesc::floating(value, type));
  }
  Attribute getStringAttr(std::string text) {
    return intern(AttrDesc::string(std::move(text)));
  }
  Attribute getTypeAttr(Type type) { return intern(AttrDesc::typeAttr(type)); }
  Attribute getAffineMapAttr(AffineMap map) {
    return intern(AttrDesc::affineMap(std::move(map)));
  }
  Attribute getArrayAttr(std::vector<Attribute> elements) {
    return intern(AttrDesc::array(std::move(elements)));
  }
  Attribute getDictionaryAttr(std::vector<NamedAttribute> entries) {
    return intern(AttrDesc::dictionary(std::move(entries)));
  }
  Attribute getSymbolRefAttr(std::string name) {
    return intern(AttrDesc::symbolRef(std::move(name)));
  }
  Attribute getUnitAttr() { return intern(AttrDesc::unit()); }

  //===--------------------------------------------------------------------===//
  // Registries
  //===--------------------------------------------------------------------===//

  /// Throws ValidationError if the namespace is empty, not an identifier, or
  /// already registered.
  DialectDescriptor &registerDialect(std::string name);
  const DialectDescriptor *getDialect(std::string_view name) const;
  DialectDescriptor *getMutableDialect(std::string_view name);
  std::vector<std::string> getDialectNames() const;

  /// Registers an op under its dialect. Throws ValidationError if the
  /// dialect namespace is unknown or the opcode is already registered.
  const OpDefinition &registerOp(OpDefinition def);
  const OpDefinition *lookupOp(std::string_view name) const;
  OpDefinition *lookupMutableOp(std::string_view name);
  std::vector<const OpDefinition *> getRegisteredOps() const;

  /// In strict mode, unregistered opcodes are rejected at creation and parse.
  bool isStrict() const { return strict_; }
  void setStrict(bool strict) { strict_ = strict; }

  uint64_t allocateOpId() { return nextOpId_.fetch_add(1, std::memory_order_relaxed); }
  uint64_t allocateBlockId() { return nextBlockId_.fetch_add(1, std::memory_order_relaxed); }
  uint64_t allocateValueId() { return nextValueId_.fetch_add(1, std::memory_order_relaxed); }

private:
  mutable std::mutex internMutex_;
  std::unordered_map<std::string, std::unique_ptr<TypeStorage>> types_;
  std::unordered_map<std::string, std::unique_ptr<AttributeStorage>> attrs_;

  mutable std::shared_mutex registryMutex_;
  std::map<std::string, std::unique_ptr<DialectDescriptor>, std::less<>> dialects_;
  std::map<std::string, std::unique_ptr<OpDefinition>, std::less<>> ops_;

  bool strict_ = false;
  std::atomic<uint64_t> nextOpId_{0};
  std::atomic<uint64_t> nextBlockId_{0};
  std::atomic<uint64_t> nextValueId_{0};
};

} // namespace mir

//===- Types.h - Interned builtin types -------------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mir {

class Context;
struct TypeStorage;

enum class TypeKind { Integer, Float, Index, Function, Tensor, MemRef };
enum class FloatKind { F32, F64 };

/// Marker for a dynamic dimension in a shaped type (`?`).
inline constexpr int64_t kDynamicDim = -1;

/// Handle to an interned, immutable type. Two handles compare equal iff the
/// types are structurally equal; there are no implicit conversions.
class Type {
public:
  Type() = default;
  explicit Type(const TypeStorage *impl) : impl_(impl) {}

  explicit operator bool() const { return impl_ != nullptr; }
  bool operator==(const Type &o) const { return impl_ == o.impl_; }
  bool operator!=(const Type &o) const { return impl_ != o.impl_; }
  const TypeStorage *getImpl() const { return impl_; }

  TypeKind getKind() const;
  Context &getContext() const;

  bool isInteger() const { return impl_ && getKind() == TypeKind::Integer; }
  bool isInteger(unsigned width) const { return isInteger() && getWidth() == width; }
  bool isIndex() const { return impl_ && getKind() == TypeKind::Index; }
  bool isIntOrIndex() const { return isInteger() || isIndex(); }
  bool isFloat() const { return impl_ && getKind() == TypeKind::Float; }
  bool isF32() const;
  bool isF64() const;
  bool isFunction() const { return impl_ && getKind() == TypeKind::Function; }
  bool isMemRef() const { return impl_ && getKind() == TypeKind::MemRef; }
  bool isTensor() const { return impl_ && getKind() == TypeKind::Tensor; }
  bool isShaped() const { return isMemRef() || isTensor(); }
  bool isScalar() const { return isIntOrIndex() || isFloat(); }

  /// Integer bit width.
  unsigned getWidth() const;
  FloatKind getFloatKind() const;
  const std::vector<Type> &getInputs() const;
  const std::vector<Type> &getResults() const;
  const std::vector<int64_t> &getShape() const;
  Type getElementType() const;
  unsigned getRank() const { return static_cast<unsigned>(getShape().size()); }
  bool hasStaticShape() const;
  int64_t getNumElements() const;

  /// Canonical textual form, e.g. `memref<3x?xf64>`.
  const std::string &str() const;

private:
  const TypeStorage *impl_ = nullptr;
};

/// Structural description of a type, the input to interning.
struct TypeDesc {
  TypeKind kind = TypeKind::Index;
  unsigned width = 0;
  FloatKind floatKind = FloatKind::F32;
  std::vector<Type> inputs;
  std::vector<Type> results;
  std::vector<int64_t> shape;
  Type element;

  static TypeDesc integer(unsigned width) {
    TypeDesc d;
    d.kind = TypeKind::Integer;
    d.width = width;
    return d;
  }
  static TypeDesc floating(FloatKind kind) {
    TypeDesc d;
    d.kind = TypeKind::Float;
    d.floatKind = kind;
    return d;
  }
  static TypeDesc index() { return TypeDesc(); }
  static TypeDesc function(std::vector<Type> inputs, std::vector<Type> results) {
    TypeDesc d;
    d.kind = TypeKind::Function;
    d.inputs = std::move(inputs);
    d.results = std::move(results);
    return d;
  }
  static TypeDesc memref(std::vector<int64_t> shape, Type element) {
    TypeDesc d;
    d.kind = TypeKind::MemRef;
    d.shape = std::move(shape);
    d.element = element;
    return d;
  }
  static TypeDesc tensor(std::vector<int64_t> shape, Type element) {
    TypeDesc d = memref(std::move(shape), element);
    d.kind = TypeKind::Tensor;
    return d;
  }
};

struct TypeStorage {
  Context *context = nullptr;
  TypeDesc desc;
  std::string text;
};

inline TypeKind Type::getKind() const { return impl_->desc.kind; }
inline Context &Type::getContext() const { return *impl_->context; }
inline bool Type::isF32() const { return isFloat() && getFloatKind() == FloatKind::F32; }
inline bool Type::isF64() const { return isFloat() && getFloatKind() == FloatKind::F64; }
inline unsigned Type::getWidth() const { return impl_->desc.width; }
inline FloatKind Type::getFloatKind() const { return impl_->desc.floatKind; }
inline const std::vector<Type> &Type::getInputs() const { return impl_->desc.inputs; }
inline const std::vector<Type> &Type::getResults() const { return impl_->desc.results; }
inline const std::vector<int64_t> &Type::getShape() const { return impl_->desc.shape; }
inline Type Type::getElementType() const { return impl_->desc.element; }
inline const std::string &Type::str() const { return impl_->text; }

} // namespace mir

template <> struct std::hash<mir::Type> {
  size_t operator()(const mir::Type &t) const noexcept {
    return std::hash<const void *>()(t.getImpl());
  }
};

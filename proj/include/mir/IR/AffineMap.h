//===- AffineMap.h - Quasi-affine expressions and maps ----------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Affine expressions are immutable trees over constants, dimension and symbol
// identifiers, `+`, and `*`, `mod`, `floordiv`, `ceildiv` by a constant.
// Division and modulus follow floor semantics: `a floordiv b` rounds toward
// negative infinity and `a mod b` lies in [0, b).
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mir {

enum class AffineExprKind { Constant, Dim, Symbol, Add, Mul, Mod, FloorDiv, CeilDiv };

class AffineExpr {
public:
  AffineExpr() = default;

  static AffineExpr constant(int64_t value);
  static AffineExpr dim(unsigned position);
  static AffineExpr symbol(unsigned position);
  /// Builds a binary node without checking the affine restriction; use
  /// AffineMap::validate (or the parser) to check it.
  static AffineExpr binary(AffineExprKind kind, AffineExpr lhs, AffineExpr rhs);

  explicit operator bool() const { return node_ != nullptr; }
  AffineExprKind getKind() const;
  bool isBinary() const { return getKind() >= AffineExprKind::Add; }
  int64_t getValue() const;
  unsigned getPosition() const { return static_cast<unsigned>(getValue()); }
  AffineExpr getLHS() const;
  AffineExpr getRHS() const;

  bool isConstant(int64_t v) const;

  AffineExpr operator+(AffineExpr other) const;
  AffineExpr operator*(AffineExpr other) const;

  std::string str() const;

  friend bool operator==(const AffineExpr &a, const AffineExpr &b);

private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

struct AffineExpr::Node {
  AffineExprKind kind;
  int64_t value = 0;
  AffineExpr lhs, rhs;
};

inline AffineExprKind AffineExpr::getKind() const { return node_->kind; }
inline int64_t AffineExpr::getValue() const { return node_->value; }
inline AffineExpr AffineExpr::getLHS() const { return node_->lhs; }
inline AffineExpr AffineExpr::getRHS() const { return node_->rhs; }
inline bool AffineExpr::isConstant(int64_t v) const {
  return node_ && node_->kind == AffineExprKind::Constant && node_->value == v;
}

/// Floor-division helpers shared by evaluation, folding and the interpreter.
int64_t floorDiv(int64_t lhs, int64_t rhs);
int64_t ceilDiv(int64_t lhs, int64_t rhs);
int64_t floorMod(int64_t lhs, int64_t rhs);

class AffineMap {
public:
  AffineMap() = default;
  AffineMap(unsigned numDims, unsigned numSymbols, std::vector<AffineExpr> results)
      : numDims_(numDims), numSymbols_(numSymbols), results_(std::move(results)) {}

  static AffineMap constant(int64_t value) {
    return AffineMap(0, 0, {AffineExpr::constant(value)});
  }

  unsigned getNumDims() const { return numDims_; }
  unsigned getNumSymbols() const { return numSymbols_; }
  unsigned getNumInputs() const { return numDims_ + numSymbols_; }
  unsigned getNumResults() const { return static_cast<unsigned>(results_.size()); }
  const std::vector<AffineExpr> &getResults() const { return results_; }
  AffineExpr getResult(unsigned i) const { return results_[i]; }

  /// True for maps like `() -> (c)`.
  bool isSingleConstant() const;

  /// Empty string when well formed; otherwise a description of the problem
  /// (out-of-range identifier, non-constant right operand, non-positive
  /// divisor).
  std::string validate() const;

  /// Throws ValidationError on arity mismatch or a non-positive divisor.
  std::vector<int64_t> evaluate(std::span<const int64_t> dims,
                                std::span<const int64_t> symbols) const;

  /// `(d0, d1)[s0] -> (d0 + s0, d1)`.
  std::string str() const;

  friend bool operator==(const AffineMap &a, const AffineMap &b) {
    return a.numDims_ == b.numDims_ && a.numSymbols_ == b.numSymbols_ &&
           a.results_ == b.results_;
  }

private:
  unsigned numDims_ = 0;
  unsigned numSymbols_ = 0;
  std::vector<AffineExpr> results_;
};

/// Evaluates one expression; throws ValidationError on out-of-range
/// identifiers or non-positive divisors.
int64_t evaluateAffineExpr(const AffineExpr &expr, std::span<const int64_t> dims,
                           std::span<const int64_t> symbols);

/// Folds constant subtrees and applies the identities x+0, x*1, x*0,
/// x mod 1, x floordiv 1, x ceildiv 1. Semantics are preserved.
AffineExpr simplifyAffineExpr(const AffineExpr &expr);
AffineMap simplifyAffineMap(const AffineMap &map);

} // namespace mir

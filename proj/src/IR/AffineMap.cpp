//===- AffineMap.cpp - Quasi-affine expressions and maps ------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/AffineMap.h"
#include "mir/IR/Diagnostic.h"

#include <sstream>

namespace mir {

AffineExpr AffineExpr::constant(int64_t value) {
  AffineExpr e;
  e.node_ = std::make_shared<const Node>(Node{AffineExprKind::Constant, value, {}, {}});
  return e;
}

AffineExpr AffineExpr::dim(unsigned position) {
  AffineExpr e;
  e.node_ = std::make_shared<const Node>(Node{AffineExprKind::Dim, position, {}, {}});
  return e;
}

AffineExpr AffineExpr::symbol(unsigned position) {
  AffineExpr e;
  e.node_ = std::make_shared<const Node>(Node{AffineExprKind::Symbol, position, {}, {}});
  return e;
}

AffineExpr AffineExpr::binary(AffineExprKind kind, AffineExpr lhs, AffineExpr rhs) {
  AffineExpr e;
  e.node_ = std::make_shared<const Node>(Node{kind, 0, std::move(lhs), std::move(rhs)});
  return e;
}

AffineExpr AffineExpr::operator+(AffineExpr other) const {
  return binary(AffineExprKind::Add, *this, std::move(other));
}

AffineExpr AffineExpr::operator*(AffineExpr other) const {
  return binary(AffineExprKind::Mul, *this, std::move(other));
}

bool operator==(const AffineExpr &a, const AffineExpr &b) {
  if (a.node_ == b.node_)
    return true;
  if (!a.node_ || !b.node_)
    return false;
  if (a.getKind() != b.getKind())
    return false;
  if (!a.isBinary())
    return a.getValue() == b.getValue();
  return a.getLHS() == b.getLHS() && a.getRHS() == b.getRHS();
}

int64_t floorDiv(int64_t lhs, int64_t rhs) {
  int64_t q = lhs / rhs;
  if ((lhs % rhs != 0) && ((lhs < 0) != (rhs < 0)))
    --q;
  return q;
}

int64_t ceilDiv(int64_t lhs, int64_t rhs) { return -floorDiv(-lhs, rhs); }

int64_t floorMod(int64_t lhs, int64_t rhs) { return lhs - rhs * floorDiv(lhs, rhs); }

//===----------------------------------------------------------------------===//
// Printing
//===----------------------------------------------------------------------===//

namespace {
// 0 = additive level, 1 = multiplicative level, 2 = atom/unary.
int precedence(const AffineExpr &e) {
  switch (e.getKind()) {
  case AffineExprKind::Add:
    return 0;
  case AffineExprKind::Mul:
    if (e.getRHS().isConstant(-1))
      return 2;
    return 1;
  case AffineExprKind::Mod:
  case AffineExprKind::FloorDiv:
  case AffineExprKind::CeilDiv:
    return 1;
  case AffineExprKind::Constant:
    return e.getValue() < 0 ? 2 : 3;
  default:
    return 3;
  }
}

void printExpr(const AffineExpr &e, std::ostream &os);

void printWrapped(const AffineExpr &e, int minPrec, std::ostream &os) {
  if (precedence(e) < minPrec) {
    os << "(";
    printExpr(e, os);
    os << ")";
  } else {
    printExpr(e, os);
  }
}

void printExpr(const AffineExpr &e, std::ostream &os) {
  switch (e.getKind()) {
  case AffineExprKind::Constant:
    os << e.getValue();
    return;
  case AffineExprKind::Dim:
    os << "d" << e.getPosition();
    return;
  case AffineExprKind::Symbol:
    os << "s" << e.getPosition();
    return;
  case AffineExprKind::Add: {
    printExpr(e.getLHS(), os);
    AffineExpr rhs = e.getRHS();
    if (rhs.getKind() == AffineExprKind::Constant && rhs.getValue() < 0 &&
        rhs.getValue() != INT64_MIN) {
      os << " - " << -rhs.getValue();
      return;
    }
    if (rhs.getKind() == AffineExprKind::Mul && rhs.getRHS().isConstant(-1) &&
        rhs.getLHS().getKind() != AffineExprKind::Constant) {
      os << " - ";
      printWrapped(rhs.getLHS(), 1, os);
      return;
    }
    os << " + ";
    printWrapped(rhs, 1, os);
    return;
  }
  case AffineExprKind::Mul:
    if (e.getRHS().isConstant(-1)) {
      // `-3` would re-parse as a constant, so negated literals keep parens.
      if (e.getLHS().getKind() == AffineExprKind::Constant) {
        os << "-(" << e.getLHS().getValue() << ")";
        return;
      }
      os << "-";
      printWrapped(e.getLHS(), 2, os);
      return;
    }
    [[fallthrough]];
  case AffineExprKind::Mod:
  case AffineExprKind::FloorDiv:
  case AffineExprKind::CeilDiv: {
    printWrapped(e.getLHS(), 1, os);
    switch (e.getKind()) {
    case AffineExprKind::Mul:
      os << " * ";
      break;
    case AffineExprKind::Mod:
      os << " mod ";
      break;
    case AffineExprKind::FloorDiv:
      os << " floordiv ";
      break;
    default:
      os << " ceildiv ";
      break;
    }
    printWrapped(e.getRHS(), 2, os);
    return;
  }
  }
}
} // namespace

std::string AffineExpr::str() const {
  std::ostringstream os;
  printExpr(*this, os);
  return os.str();
}

std::string AffineMap::str() const {
  std::ostringstream os;
  os << "(";
  for (unsigned i = 0; i < numDims_; ++i)
    os << (i ? ", " : "") << "d" << i;
  os << ")";
  if (numSymbols_) {
    os << "[";
    for (unsigned i = 0; i < numSymbols_; ++i)
      os << (i ? ", " : "") << "s" << i;
    os << "]";
  }
  os << " -> (";
  for (size_t i = 0; i < results_.size(); ++i)
    os << (i ? ", " : "") << results_[i].str();
  os << ")";
  return os.str();
}

bool AffineMap::isSingleConstant() const {
  return numDims_ == 0 && numSymbols_ == 0 && results_.size() == 1 &&
         results_[0].getKind() == AffineExprKind::Constant;
}

//===----------------------------------------------------------------------===//
// Validation and evaluation
//===----------------------------------------------------------------------===//

static std::string validateExpr(const AffineExpr &e, unsigned numDims,
                                unsigned numSymbols) {
  switch (e.getKind()) {
  case AffineExprKind::Constant:
    return "";
  case AffineExprKind::Dim:
    return e.getPosition() < numDims ? ""
                                     : "dimension identifier d" +
                                           std::to_string(e.getPosition()) +
                                           " out of range";
  case AffineExprKind::Symbol:
    return e.getPosition() < numSymbols ? ""
                                        : "symbol identifier s" +
                                              std::to_string(e.getPosition()) +
                                              " out of range";
  case AffineExprKind::Add: {
    std::string err = validateExpr(e.getLHS(), numDims, numSymbols);
    return err.empty() ? validateExpr(e.getRHS(), numDims, numSymbols) : err;
  }
  default:
    break;
  }
  if (e.getRHS().getKind() != AffineExprKind::Constant)
    return "non-affine expression: right operand of '" + e.str() +
           "' must be a constant";
  if (e.getKind() != AffineExprKind::Mul && e.getRHS().getValue() <= 0)
    return "divisor in '" + e.str() + "' must be strictly positive";
  return validateExpr(e.getLHS(), numDims, numSymbols);
}

std::string AffineMap::validate() const {
  for (const AffineExpr &e : results_) {
    if (!e)
      return "null affine expression";
    std::string err = validateExpr(e, numDims_, numSymbols_);
    if (!err.empty())
      return err;
  }
  return "";
}

int64_t evaluateAffineExpr(const AffineExpr &e, std::span<const int64_t> dims,
                           std::span<const int64_t> symbols) {
  switch (e.getKind()) {
  case AffineExprKind::Constant:
    return e.getValue();
  case AffineExprKind::Dim:
    if (e.getPosition() >= dims.size())
      throw ValidationError("dimension d" + std::to_string(e.getPosition()) +
                            " out of range");
    return dims[e.getPosition()];
  case AffineExprKind::Symbol:
    if (e.getPosition() >= symbols.size())
      throw ValidationError("symbol s" + std::to_string(e.getPosition()) +
                            " out of range");
    return symbols[e.getPosition()];
  default:
    break;
  }
  int64_t lhs = evaluateAffineExpr(e.getLHS(), dims, symbols);
  int64_t rhs = evaluateAffineExpr(e.getRHS(), dims, symbols);
  switch (e.getKind()) {
  case AffineExprKind::Add:
    return lhs + rhs;
  case AffineExprKind::Mul:
    return lhs * rhs;
  default:
    break;
  }
  if (rhs <= 0)
    throw ValidationError("non-positive divisor in affine expression");
  switch (e.getKind()) {
  case AffineExprKind::Mod:
    return floorMod(lhs, rhs);
  case AffineExprKind::FloorDiv:
    return floorDiv(lhs, rhs);
  default:
    return ceilDiv(lhs, rhs);
  }
}

std::vector<int64_t> AffineMap::evaluate(std::span<const int64_t> dims,
                                         std::span<const int64_t> symbols) const {
  if (dims.size() != numDims_ || symbols.size() != numSymbols_)
    throw ValidationError("affine map " + str() + " expects " +
                          std::to_string(numDims_) + " dims and " +
                          std::to_string(numSymbols_) + " symbols, got " +
                          std::to_string(dims.size()) + " and " +
                          std::to_string(symbols.size()));
  std::vector<int64_t> out;
  out.reserve(results_.size());
  for (const AffineExpr &e : results_)
    out.push_back(evaluateAffineExpr(e, dims, symbols));
  return out;
}

//===----------------------------------------------------------------------===//
// Simplification
//===----------------------------------------------------------------------===//

AffineExpr simplifyAffineExpr(const AffineExpr &expr) {
  if (!expr.isBinary())
    return expr;
  AffineExpr lhs = simplifyAffineExpr(expr.getLHS());
  AffineExpr rhs = simplifyAffineExpr(expr.getRHS());
  AffineExprKind kind = expr.getKind();
  bool lhsConst = lhs.getKind() == AffineExprKind::Constant;
  bool rhsConst = rhs.getKind() == AffineExprKind::Constant;

  // Division by a non-positive constant is left alone: it has no defined
  // value, so there is nothing to preserve.
  bool validDivisor = rhsConst && rhs.getValue() > 0;
  if (lhsConst && rhsConst) {
    switch (kind) {
    case AffineExprKind::Add:
      return AffineExpr::constant(lhs.getValue() + rhs.getValue());
    case AffineExprKind::Mul:
      return AffineExpr::constant(lhs.getValue() * rhs.getValue());
    case AffineExprKind::Mod:
      if (validDivisor)
        return AffineExpr::constant(floorMod(lhs.getValue(), rhs.getValue()));
      break;
    case AffineExprKind::FloorDiv:
      if (validDivisor)
        return AffineExpr::constant(floorDiv(lhs.getValue(), rhs.getValue()));
      break;
    case AffineExprKind::CeilDiv:
      if (validDivisor)
        return AffineExpr::constant(ceilDiv(lhs.getValue(), rhs.getValue()));
      break;
    default:
      break;
    }
  }

  switch (kind) {
  case AffineExprKind::Add:
    if (rhs.isConstant(0))
      return lhs;
    if (lhs.isConstant(0))
      return rhs;
    break;
  case AffineExprKind::Mul:
    if (rhs.isConstant(1))
      return lhs;
    if (lhs.isConstant(1))
      return rhs;
    if (rhs.isConstant(0) || lhs.isConstant(0))
      return AffineExpr::constant(0);
    break;
  case AffineExprKind::Mod:
    if (rhs.isConstant(1))
      return AffineExpr::constant(0);
    break;
  case AffineExprKind::FloorDiv:
  case AffineExprKind::CeilDiv:
    if (rhs.isConstant(1))
      return lhs;
    break;
  default:
    break;
  }
  return AffineExpr::binary(kind, lhs, rhs);
}

AffineMap simplifyAffineMap(const AffineMap &map) {
  std::vector<AffineExpr> results;
  for (const AffineExpr &e : map.getResults())
    results.push_back(simplifyAffineExpr(e));
  return AffineMap(map.getNumDims(), map.getNumSymbols(), std::move(results));
}

} // namespace mir

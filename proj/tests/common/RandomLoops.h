//===- RandomLoops.h - Random affine loop nest programs ---------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Generates `@nest(%A: memref<16xi32>, %C: memref<16xi32>) -> memref<16xi32>`
// made of up to three nested affine.for loops with constant or iv-dependent
// bounds in [0, 6], and accesses through random quasi-affine index maps kept
// in bounds with `mod 16`.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <random>
#include <sstream>
#include <string>

namespace mir::randomloops {

class Generator {
public:
  explicit Generator(unsigned seed) : rng_(seed) {}

  std::string generate() {
    std::ostringstream os;
    os << "func.func @nest(%A: memref<16xi32>, %C: memref<16xi32>) -> memref<16xi32> {\n";
    os << "  %k = arith.constant " << pick(1, 5) << " : i32\n";
    int depth = pick(1, 3);
    emitLoop(os, 0, depth);
    os << "  func.return %C : memref<16xi32>\n}\n";
    return os.str();
  }

private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  static std::string ivs(int n) {
    std::string s;
    for (int i = 0; i < n; ++i)
      s += (i ? ", " : "") + std::string("%i") + std::to_string(i);
    return s;
  }
  static std::string dims(int n) {
    std::string s;
    for (int i = 0; i < n; ++i)
      s += (i ? ", " : "") + std::string("d") + std::to_string(i);
    return s;
  }

  /// A random in-bounds index expression over d0..d(n-1).
  std::string indexExpr(int n) {
    std::string e;
    for (int i = 0; i < n; ++i) {
      int c = pick(0, 3);
      if (c == 0)
        continue;
      std::string term = "d" + std::to_string(i) + (c > 1 ? " * " + std::to_string(c) : "");
      e += e.empty() ? term : " + " + term;
    }
    e = e.empty() ? std::to_string(pick(0, 15)) : "(" + e + " + " + std::to_string(pick(0, 4)) + ")";
    switch (pick(0, 2)) {
    case 0:
      return e + " mod 16";
    case 1:
      return "(" + e + " floordiv 2) mod 16";
    default:
      return "(" + e + " ceildiv 3) mod 16";
    }
  }

  std::string lowerBound(int level) {
    if (level > 0 && pick(0, 2) == 0)
      return "affine_map<(d0) -> (d0)>(%i" + std::to_string(level - 1) + ")";
    if (pick(0, 4) == 0)
      return "max affine_map<()[s0] -> (" + std::to_string(pick(0, 2)) + ", s0)>()[%s" +
             std::to_string(pick(0, 1)) + "]";
    return std::to_string(pick(0, 3));
  }

  std::string upperBound(int level) {
    if (level > 0 && pick(0, 2) == 0)
      return "affine_map<(d0) -> (d0 + " + std::to_string(pick(0, 3)) + ")>(%i" +
             std::to_string(level - 1) + ")";
    if (pick(0, 4) == 0)
      return "min affine_map<() -> (" + std::to_string(pick(2, 6)) + ", " +
             std::to_string(pick(2, 6)) + ")>()";
    return std::to_string(pick(0, 6));
  }

  void emitLoop(std::ostringstream &os, int level, int depth) {
    std::string pad(2 * (level + 1), ' ');
    if (level == 0) {
      os << pad << "%s0 = arith.constant " << pick(0, 3) << " : index\n";
      os << pad << "%s1 = arith.constant " << pick(1, 4) << " : index\n";
    }
    os << pad << "affine.for %i" << level << " = " << lowerBound(level) << " to "
       << upperBound(level) << " step " << pick(1, 2) << " {\n";
    if (level + 1 < depth && pick(0, 3) != 0) {
      emitLoop(os, level + 1, depth);
    } else {
      emitBody(os, level + 1);
    }
    os << pad << "}\n";
  }

  void emitBody(std::ostringstream &os, int n) {
    std::string pad(2 * (n + 1), ' ');
    std::string types;
    for (int i = 0; i < n; ++i)
      types += ", index";
    std::string map1 = "affine_map<(" + dims(n) + ") -> (" + indexExpr(n) + ")>";
    std::string map2 = "affine_map<(" + dims(n) + ") -> (" + indexExpr(n) + ")>";
    os << pad << "%a = \"affine.load\"(%A, " << ivs(n) << ") {map = " << map1
       << "} : (memref<16xi32>" << types << ") -> i32\n";
    os << pad << "%c = \"affine.load\"(%C, " << ivs(n) << ") {map = " << map2
       << "} : (memref<16xi32>" << types << ") -> i32\n";
    os << pad << "%s = \"arith.addi\"(%c, %a) : (i32, i32) -> i32\n";
    os << pad << "%t = \"arith.muli\"(%s, %k) : (i32, i32) -> i32\n";
    if (pick(0, 1)) {
      os << pad << "%x = \"affine.apply\"(" << ivs(n) << ") {map = affine_map<(" << dims(n)
         << ") -> (" << indexExpr(n) << ")>} : (" << types.substr(2) << ") -> index\n";
      os << pad << "\"affine.store\"(%t, %C, %x) {map = affine_map<(d0) -> (d0)>}"
         << " : (i32, memref<16xi32>, index) -> ()\n";
    } else {
      os << pad << "\"affine.store\"(%t, %C, " << ivs(n) << ") {map = " << map2
         << "} : (i32, memref<16xi32>" << types << ") -> ()\n";
    }
  }

  std::mt19937 rng_;
};

} // namespace mir::randomloops

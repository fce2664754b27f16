//===- Diagnostic.h - Diagnostics and error types ---------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Location.h"

#include <stdexcept>
#include <string>
#include <vector>

namespace mir {

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  Location location;
  std::vector<Diagnostic> notes;

  static Diagnostic error(Location loc, std::string msg) {
    return {Severity::Error, std::move(msg), std::move(loc), {}};
  }

  /// `file:line:col: error: message`, notes indented two spaces.
  std::string render() const;
};

using DiagnosticList = std::vector<Diagnostic>;

std::string renderDiagnostics(const DiagnosticList &diags);
bool hasErrors(const DiagnosticList &diags);

/// Thrown for malformed type/attribute descriptors and similar caller errors.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an IR mutation would break a structural invariant
/// (erasing a live op, replacing with a mistyped value, ...).
class IRError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace mir

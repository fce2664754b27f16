//===- Location.h - Source locations attached to operations -----*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <memory>
#include <optional>
#include <string>

namespace mir {

class Location {
public:
  enum class Kind { Unknown, FileLineCol, Named };

  Location() = default;

  static Location unknown() { return Location(); }
  static Location fileLineCol(std::string file, unsigned line, unsigned col);
  static Location named(std::string tag, Location child);

  Kind getKind() const { return kind_; }
  bool isUnknown() const { return kind_ == Kind::Unknown; }
  const std::string &getFile() const { return text_; }
  const std::string &getTag() const { return text_; }
  unsigned getLine() const { return line_; }
  unsigned getColumn() const { return col_; }
  const Location &getChild() const { return *child_; }

  /// The innermost file:line:col position, if any.
  std::optional<Location> getFilePosition() const;

  /// Renders as `file:line:col`, or `<unknown>` when no position exists.
  std::string toDiagnosticPrefix() const;

  /// Renders in the textual IR `loc(...)` syntax.
  std::string toAsm() const;

  bool operator==(const Location &other) const;

private:
  Kind kind_ = Kind::Unknown;
  std::string text_;
  unsigned line_ = 0;
  unsigned col_ = 0;
  std::shared_ptr<const Location> child_;
};

} // namespace mir

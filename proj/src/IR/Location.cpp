//===- Location.cpp - Source locations and diagnostics --------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/Diagnostic.h"
#include "mir/IR/Location.h"

#include <sstream>

namespace mir {

static std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out + "\"";
}

Location Location::fileLineCol(std::string file, unsigned line, unsigned col) {
  Location loc;
  loc.kind_ = Kind::FileLineCol;
  loc.text_ = std::move(file);
  loc.line_ = line;
  loc.col_ = col;
  return loc;
}

Location Location::named(std::string tag, Location child) {
  Location loc;
  loc.kind_ = Kind::Named;
  loc.text_ = std::move(tag);
  loc.child_ = std::make_shared<const Location>(std::move(child));
  return loc;
}

std::optional<Location> Location::getFilePosition() const {
  switch (kind_) {
  case Kind::FileLineCol:
    return *this;
  case Kind::Named:
    return child_->getFilePosition();
  case Kind::Unknown:
    break;
  }
  return std::nullopt;
}

std::string Location::toDiagnosticPrefix() const {
  auto pos = getFilePosition();
  if (!pos)
    return "<unknown>";
  return pos->text_ + ":" + std::to_string(pos->line_) + ":" +
         std::to_string(pos->col_);
}

static void printLocBody(const Location &loc, std::ostream &os) {
  switch (loc.getKind()) {
  case Location::Kind::Unknown:
    os << "unknown";
    break;
  case Location::Kind::FileLineCol:
    os << quote(loc.getFile()) << ":" << loc.getLine() << ":"
       << loc.getColumn();
    break;
  case Location::Kind::Named:
    os << quote(loc.getTag()) << "(";
    printLocBody(loc.getChild(), os);
    os << ")";
    break;
  }
}

std::string Location::toAsm() const {
  std::ostringstream os;
  os << "loc(";
  printLocBody(*this, os);
  os << ")";
  return os.str();
}

bool Location::operator==(const Location &other) const {
  if (kind_ != other.kind_ || text_ != other.text_ || line_ != other.line_ ||
      col_ != other.col_)
    return false;
  if (kind_ == Kind::Named)
    return *child_ == *other.child_;
  return true;
}

std::string Diagnostic::render() const {
  std::ostringstream os;
  os << location.toDiagnosticPrefix() << ": ";
  switch (severity) {
  case Severity::Error:
    os << "error: ";
    break;
  case Severity::Warning:
    os << "warning: ";
    break;
  case Severity::Note:
    os << "note: ";
    break;
  }
  os << message;
  for (const Diagnostic &note : notes) {
    std::istringstream lines(note.render());
    std::string line;
    while (std::getline(lines, line))
      os << "\n  " << line;
  }
  return os.str();
}

std::string renderDiagnostics(const DiagnosticList &diags) {
  std::string out;
  for (const Diagnostic &d : diags)
    out += d.render() + "\n";
  return out;
}

bool hasErrors(const DiagnosticList &diags) {
  for (const Diagnostic &d : diags)
    if (d.severity == Severity::Error)
      return true;
  return false;
}

} // namespace mir

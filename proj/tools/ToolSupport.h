//===- ToolSupport.h - Shared command-line plumbing -------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>

namespace mir::tool {

// Exit codes shared by every driver. 64 and 66 follow sysexits.h.
enum ExitCode : int {
  kSuccess = 0,
  kDiagnostics = 1,
  kTrap = 2,
  kUsage = 64,
  kNoInput = 66,
};

/// Reads `path`, or stdin for "-". Reports to stderr on failure.
inline std::optional<std::string> readInput(const std::string &path) {
  if (path == "-")
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return std::nullopt;
  }
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Parses argv. Returns an exit code when the tool should stop right away:
/// 0 after --help, 64 with usage on stderr for bad flags.
inline std::optional<int> parseArgs(CLI::App &app, int argc, char **argv) {
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    std::cout << app.help();
    return kSuccess;
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  return std::nullopt;
}

/// Writes `text` to `path`, or stdout when empty or "-".
inline bool writeOutput(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return true;
}

} // namespace mir::tool

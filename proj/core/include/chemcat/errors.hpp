// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chemcat {

// Bad argument that the caller could have checked (missing vertex, clash).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An operation was called outside its contract (e.g. a non-embedding).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col = 0)
      : std::runtime_error(where(line, col) + msg), line(line), col(col) {}
  int line;
  int col;

 private:
  static std::string where(int line, int col) {
    std::string s = "line " + std::to_string(line);
    if (col > 0) s += ", col " + std::to_string(col);
    return s + ": ";
  }
};

// Ill-typed term evaluation; `index` is the first failing generator.
struct TypeError : std::runtime_error {
  TypeError(const std::string& msg, std::size_t index)
      : std::runtime_error(msg), index(index) {}
  std::size_t index;
};

// Something that the theory says cannot happen did happen.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

struct Violation {
  std::string clause;
  std::vector<std::string> where;
  std::string detail;

  std::string str() const {
    std::string s = clause;
    if (!where.empty()) {
      s += " at";
      for (const auto& w : where) s += " " + w;
    }
    if (!detail.empty()) s += ": " + detail;
    return s;
  }
};

using Violations = std::vector<Violation>;

}  // namespace chemcat

#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace kerchain {

struct Check {
  std::string name;
  bool passed = false;
  std::string witness;
};

/// Named list of checks shared by the CLI and the tests.
struct Report {
  std::string suite;
  std::vector<Check> checks;

  void add(std::string name, bool passed, std::string witness = {}) {
    checks.push_back({std::move(name), passed, std::move(witness)});
  }

  void append(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
  }

  int exit_status() const { return ok() ? 0 : 1; }
};

inline std::ostream& operator<<(std::ostream& os, const Report& r) {
  for (const Check& c : r.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << r.suite << '/' << c.name;
    if (!c.witness.empty()) os << "  " << c.witness;
    os << '\n';
  }
  return os;
}

}  // namespace kerchain

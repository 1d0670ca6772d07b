#pragma once

// Verification suites. A suite is a JSON document listing what to check:
//
//   { "entries": [
//       { "kind": "squarefree", "max_m": 3, "window": [-8, 4] },
//       { "kind": "ideal", "ideal": "x1,x2", "m": 2, "indices": [2],
//         "window": [-6, 3], "box": 7 },
//       { "kind": "module", "file": "data/counterexample.json" } ] }
//
// "squarefree" expands to every squarefree monomial ideal on 1..max_m
// variables and every cohomological index. For "ideal", "m", "indices" (all
// by default) and "box" (the default box by default) are optional. Module
// files use the window-module schema and are resolved against the suite's
// directory.
//
// The report is a JSON document with "format": "lcg-verification-report",
// "version": 1, a "checks" list in a fixed order, a "skipped" list of checks
// whose preconditions do not hold, and a "summary".

#include "lcg/theorems.hpp"

#include <filesystem>

namespace lcg {

struct SuiteOptions {
  unsigned threads = 0;  // 0: LCG_THREADS, else the hardware concurrency
  bool timings = false;  // include per-check wall time in the report
};

struct SkippedCheck {
  std::string subject;
  std::string name;
  std::string reason;
};

struct SubjectChecks {
  std::string subject;
  nlohmann::json description;
  std::vector<CheckResult> checks;
  std::vector<SkippedCheck> skipped;
};

struct SuiteReport {
  std::vector<SubjectChecks> subjects;
  std::size_t passed = 0, failed = 0, inconclusive = 0, skipped = 0;

  std::string summary_line() const;
  nlohmann::json to_json(bool with_timing = false) const;
};

/// Throws std::invalid_argument when the document does not describe a suite.
/// Failures inside a subject are recorded as FAIL checks and never abort.
SuiteReport run_suite(const nlohmann::json& config, const std::filesystem::path& base_dir, SuiteOptions options = {});

/// All checks applicable to one module assembled from an ideal.
SubjectChecks check_ideal_module(const MonomialIdeal& ideal, std::size_t i, int lo, int hi, const Box& box);
/// All checks applicable to a module given directly.
SubjectChecks check_module(const std::string& subject, const WindowModule& m);

/// Every squarefree monomial ideal on m variables, in a fixed order.
std::vector<MonomialIdeal> squarefree_ideals(std::size_t m);

}  // namespace lcg

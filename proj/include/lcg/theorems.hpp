#pragma once

// Executable forms of the structural statements about graded local
// cohomology: vanishing, tameness, rigidity, Koszul concentration, torsion
// vanishing ranges and injectivity of linear forms. Every check quantifies
// only over degrees that the data certifies and answers PASS, FAIL or
// INCONCLUSIVE with machine-readable evidence.

#include "lcg/cech.hpp"
#include "lcg/window_module.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace lcg {

enum class DegreeState { Nonzero, Zero, Boundary };
std::string to_string(DegreeState s);

struct DegreePattern {
  std::size_t m = 0;
  int lo = 0;
  int hi = -1;
  std::vector<DegreeState> states;  // one per degree of [lo, hi]
  bool complete_below = false;      // zero at every degree < lo
  bool complete_above = false;      // zero at every degree > hi

  DegreeState at(int n) const;
  static DegreePattern parse(std::size_t m, int lo, std::string_view states);  // e.g. "BNNZ" over [lo, ...]
};

/// From the degree scan: NONZERO stays, ZERO_CERTIFIED becomes ZERO, ZERO_IN_BOX becomes BOUNDARY.
DegreePattern pattern_from_statuses(std::size_t m, const std::vector<DegreeStatus>& statuses);
/// From a module: a nonzero component is NONZERO (a truncation is a subspace);
/// a zero component is ZERO only when exact.
DegreePattern pattern_from_module(const WindowModule& m);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct CheckResult {
  std::string name;
  std::string statement;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;  // why FAIL or INCONCLUSIVE; empty on PASS
  nlohmann::json evidence = nlohmann::json::object();
  double seconds = 0;
};

nlohmann::json to_json(const CheckResult& r, bool with_timing = false);

CheckResult check_generalized_eulerian_theorem(const WindowModule& m);
CheckResult check_vanishing(const DegreePattern& p);
CheckResult check_tameness(const DegreePattern& p);
CheckResult check_rigidity(const DegreePattern& p);
/// The certified pattern fits one of: empty, all n >= 0, all n <= -m, all of Z.
CheckResult check_pattern_shape(const DegreePattern& p);
/// Two patterns of the same object never certify opposite answers.
CheckResult check_pattern_agreement(const DegreePattern& scan, const DegreePattern& module);
CheckResult check_koszul_concentration(const WindowModule& m);
/// For m >= 2: Koszul homology of d_i (shifted by -1) and of X_i is again generalized Eulerian.
CheckResult check_koszul_eulerian(const WindowModule& m);
CheckResult check_gtam(const WindowModule& m);

/// Linear form sum_i b_i X_i (or sum_i b_i d_i) as its coefficient vector.
using LinearForm = std::vector<int>;
/// Unit vectors, the all-ones vector, then every other vector with entries
/// in [-h, h] ordered by height and lexicographically, where h is 3 for
/// m <= 4, 1 for m <= 8 and 0 beyond.
std::vector<LinearForm> candidate_ladder(std::size_t m);
CheckResult search_injective_form(const WindowModule& m, const std::vector<LinearForm>& candidates);

}  // namespace lcg

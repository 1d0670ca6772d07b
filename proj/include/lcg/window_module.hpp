#pragma once

// Graded modules over the Weyl algebra presented on a finite degree window
// [lo, hi]: one finite-dimensional component per degree and matrices for the
// actions of X_i (degree +1) and d_i (degree -1).
//
// Two kinds of partial knowledge are tracked explicitly.
//  * A component may be marked inexact: it is a truncation of a larger graded
//    piece, so statements about it are never certified.
//  * A column of an action matrix may be marked as escaping: the true image of
//    that basis vector has parts outside the stored basis, so the column is
//    only a projection and is excluded from every identity check.

#include "lcg/exactlinalg.hpp"
#include "lcg/weyl.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lcg {

struct Action {
  Matrix map;
  std::vector<bool> escapes;  // one flag per column; empty means none escape

  Action() = default;
  explicit Action(Matrix m) : map(std::move(m)), escapes(map.cols(), false) {}
  Action(Matrix m, std::vector<bool> e);

  bool escaping(std::size_t col) const { return col < escapes.size() && escapes[col]; }
  bool reliable() const;
  std::vector<std::size_t> reliable_columns() const;
};

/// second after first. A column escapes if it escaped in `first` or if its
/// image touches a column of `second` that escapes.
Action compose(const Action& second, const Action& first);
Action operator+(const Action& a, const Action& b);
Action scale(const Action& a, const Rational& c);

class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundaryIncomplete : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plain description of a window module, as supplied by a caller.
struct ModuleData {
  std::size_t m = 0;
  int lo = 0;
  int hi = 0;
  std::vector<std::size_t> dims;                      // hi - lo + 1 entries
  std::vector<bool> exact;                            // empty: all exact
  std::vector<std::vector<std::vector<int>>> labels;  // empty, or a multidegree per basis vector
  std::vector<std::vector<Action>> x;                 // x[i][k]: degree lo+k -> lo+k+1
  std::vector<std::vector<Action>> d;                 // d[i][k]: degree lo+k+1 -> lo+k
  bool complete_below = false;
  bool complete_above = false;
};

class WindowModule {
 public:
  /// Validates shapes, labels, commutation of the actions and the Weyl
  /// relation on every column where both sides are reliable. Throws
  /// InvariantError on violation.
  explicit WindowModule(ModuleData data);

  static WindowModule zero(std::size_t m, int lo, int hi);

  std::size_t variables() const { return data_.m; }
  int lo() const { return data_.lo; }
  int hi() const { return data_.hi; }
  bool complete_below() const { return data_.complete_below; }
  bool complete_above() const { return data_.complete_above; }
  bool in_window(int n) const { return n >= data_.lo && n <= data_.hi; }

  /// Dimension at n; zero outside the window on a complete side, unknown otherwise.
  std::optional<std::size_t> dim_at(int n) const;
  std::size_t dim(int n) const;  // in-window only
  bool exact(int n) const;       // in-window only
  bool box_complete() const;     // every component exact
  bool has_labels() const { return !data_.labels.empty(); }
  const std::vector<std::vector<int>>& labels(int n) const;

  /// Action of X_i (1-based) from degree n, or nullptr when not determined.
  const Action* x_action(std::size_t i, int n) const;
  /// Action of d_i (1-based) from degree n, or nullptr when not determined.
  const Action* d_action(std::size_t i, int n) const;

  const ModuleData& data() const { return data_; }

 private:
  ModuleData data_;
  // Zero actions across a complete side of the window, per variable.
  std::vector<std::optional<Action>> x_below_, x_above_, d_below_, d_above_;
  std::vector<std::vector<int>> no_labels_;

  void validate() const;
};

/// M(k)_n = M_{n+k}.
WindowModule shift(const WindowModule& m, int k);

/// sum_i X_i d_i on the component of degree n. Throws BoundaryIncomplete when
/// a needed action is not determined.
Matrix euler_matrix(const WindowModule& m, int n);
/// Same, with escape flags; nullopt when not determined.
std::optional<Action> euler_action(const WindowModule& m, int n);

enum class NilpotencyStatus { Index, NotNilpotent, Skipped };

struct EulerianDegree {
  int degree = 0;
  NilpotencyStatus status = NilpotencyStatus::Skipped;
  std::size_t index = 0;  // meaningful for Index
  std::size_t dim = 0;
  std::size_t certified_dim = 0;
  bool exact = true;
};

enum class EulerianVerdict { Eulerian, GeneralizedEulerian, NotGeneralizedEulerian };

struct EulerianReport {
  std::vector<EulerianDegree> degrees;
  EulerianVerdict verdict = EulerianVerdict::Eulerian;

  bool generalized() const { return verdict != EulerianVerdict::NotGeneralizedEulerian; }
  const EulerianDegree* at(int n) const;
};

/// Decides, degree by degree, whether eps - (n + offset) is nilpotent on the
/// reliable part of M_n, by powering up to the block size. The offset is the
/// degree shift under which M is expected to be Eulerian: shift(M, k) passes
/// with offset k exactly when M passes with offset 0.
EulerianReport check_generalized_eulerian(const WindowModule& m, int offset = 0);

std::string to_string(EulerianVerdict v);
std::string to_string(NilpotencyStatus s);

struct KoszulHomology {
  WindowModule h0;
  WindowModule h1;
};

/// Koszul homology of d_i (1-based): at degree n, H1 = ker(d_i: M_{n+1} -> M_n)
/// and H0 = coker of the same map, as modules over the other m-1 variables.
KoszulHomology koszul_d(const WindowModule& m, std::size_t i);
/// Koszul homology of X_i: at degree n, H1 = ker(X_i: M_{n-1} -> M_n), H0 = coker.
KoszulHomology koszul_x(const WindowModule& m, std::size_t i);

struct TorsionDegree {
  int degree = 0;
  std::size_t lower_dim = 0;
  std::size_t upper_dim = 0;
  bool certified = false;
};

struct TorsionResult {
  WindowModule module;  // spanned by the certified-torsion lower bound
  std::vector<TorsionDegree> degrees;
  const TorsionDegree* at(int n) const;
};

/// Torsion submodule for the ideal generated by `generators`, which must be
/// homogeneous and either all in X or all in d (std::invalid_argument otherwise).
/// The lower bound collects vectors provably killed by a power of the ideal;
/// the upper bound, available for monomial generators, comes from the identities
/// d^t X^t = prod_{k=1..t} (X d + k) and X^t d^t = prod_{k<t} (X d - k) for each
/// variable. A degree is certified when the two agree on an exact component.
TorsionResult torsion(const WindowModule& m, const std::vector<WeylElement>& generators);

enum class OperatorKind { X, D };

struct DivisibilityDegree {
  int degree = 0;
  enum Status { Surjective, NotSurjective, Boundary } status = Boundary;
};

struct DivisibilityReport {
  std::vector<DivisibilityDegree> degrees;
  bool module_is_torsion = false;  // the torsion part equals M on every certified degree
  bool surjective_everywhere = true;
};

/// Surjectivity of X_i (from n-1) or d_i (from n+1) onto each component of the
/// torsion part N of M for that single operator.
DivisibilityReport check_divisibility(const WindowModule& m, std::size_t i, OperatorKind kind);

/// A degreewise sequence 0 -> A -f-> B -g-> C -> 0 on a common window.
struct ShortExactSequence {
  WindowModule left;
  WindowModule middle;
  WindowModule right;
  std::vector<Matrix> f;  // per degree in the window
  std::vector<Matrix> g;
};

struct ExtensionReport {
  bool exact = false;
  bool equivariant = false;
  bool left_generalized = false;
  bool middle_generalized = false;
  bool right_generalized = false;
  bool closure_holds = false;  // middle passes iff both ends pass
  std::string problem;
};

ExtensionReport check_extension_closure(const ShortExactSequence& s);

}  // namespace lcg

#pragma once

// Local cohomology of monomial ideals through the Cech complex on the
// generators, one multidegree at a time.
//
// For T a set of generators, the localization R_{f_T} has a one-dimensional
// piece in multidegree a exactly when every negative coordinate of a lies in
// the union of the supports of the f_t, t in T. The Cech complex at a is then
// a complex of small unit-basis spaces indexed by those T.

#include "lcg/exactlinalg.hpp"
#include "lcg/window_module.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcg {

using Multidegree = std::vector<int>;

class MonomialIdeal {
 public:
  /// Drops duplicates and generators divisible by another, then orders the
  /// rest by exponent vector, largest first in lexicographic order.
  MonomialIdeal(std::size_t m, std::vector<std::vector<unsigned>> generators);

  std::size_t variables() const { return m_; }
  std::size_t size() const { return gens_.size(); }
  const std::vector<std::vector<unsigned>>& generators() const { return gens_; }
  /// Bit i is set when X_{i+1} divides generator t.
  std::uint32_t support(std::size_t t) const { return supports_.at(t); }
  bool squarefree() const;
  unsigned max_exponent() const;
  unsigned max_degree() const;

  friend bool operator==(const MonomialIdeal&, const MonomialIdeal&) = default;

 private:
  std::size_t m_;
  std::vector<std::vector<unsigned>> gens_;
  std::vector<std::uint32_t> supports_;
};

/// Parses "x1*x2, x2^2*x3". m defaults to the largest index present.
/// Throws ParseError (from weyl.hpp) on malformed text.
MonomialIdeal parse_ideal(std::string_view text, std::size_t m = 0);
std::string to_string(const MonomialIdeal& ideal);

/// Bit i set when a_{i+1} < 0.
std::uint32_t negative_mask(const Multidegree& a);

struct MultidegreeSlice {
  Multidegree a;
  /// present_sets[j]: subsets of size j (bitmasks over generators) whose
  /// localization is nonzero at a, in lexicographic order of sorted index tuples.
  std::vector<std::vector<std::uint32_t>> present_sets;
  FiniteComplex complex;
};

MultidegreeSlice slice(const MonomialIdeal& ideal, const Multidegree& a);

/// dim H^i_I(R)_a. Indices beyond the number of generators give 0; indices
/// beyond max(#generators, m) throw std::out_of_range.
std::size_t component_dim(const MonomialIdeal& ideal, std::size_t i, const Multidegree& a);

/// Matrix at spot j of multiplication by X_i (1-based) from slice(a) to slice(a + e_i).
Matrix x_chain(const MultidegreeSlice& from, const MultidegreeSlice& to, std::size_t j);
/// Matrix at spot j of d_i (1-based) from slice(a) to slice(a - e_i).
Matrix d_chain(const MultidegreeSlice& from, const MultidegreeSlice& to, std::size_t i, std::size_t j);

/// Per-axis bounds: multidegrees with |a_i| <= bound[i].
struct Box {
  std::vector<int> bound;
  bool contains(const Multidegree& a) const;
};

Box default_box(const MonomialIdeal& ideal, int lo, int hi);
Box uniform_box(std::size_t m, int b);
/// Throws std::invalid_argument when the box is too small for the window.
void validate_box(const MonomialIdeal& ideal, const Box& box, int lo, int hi);

/// All multidegrees in the box with total degree n, in lexicographic order.
std::vector<Multidegree> box_points(const Box& box, int n);

/// Whether some multidegree with the given set of negative coordinates has total degree n.
bool pattern_realizable(std::size_t m, std::uint32_t negatives, int n);

enum class ZStatus { Nonzero, ZeroInBox, ZeroCertified };
std::string to_string(ZStatus s);

struct DegreeStatus {
  int degree = 0;
  ZStatus status = ZStatus::ZeroInBox;
  std::optional<Multidegree> witness;  // smallest by (sum of |a_i|, then lexicographic)
  std::size_t witness_dim = 0;
};

/// Scans the box at total degree n. ZeroCertified requires a squarefree ideal,
/// every sign pattern realizable at n present in the box, and all box
/// representatives of each pattern giving the same slice homology.
DegreeStatus zdegree_status(const MonomialIdeal& ideal, std::size_t i, int n, const Box& box);
std::vector<DegreeStatus> zdegree_statuses(const MonomialIdeal& ideal, std::size_t i, int lo, int hi, const Box& box);

/// H^i_I(R) on the window [lo, hi], basis labelled by multidegree. Components
/// are exact (and the completeness flags set) only for squarefree ideals where
/// the sign-pattern analysis shows the box holds every nonzero multidegree.
WindowModule assemble_window_module(const MonomialIdeal& ideal, std::size_t i, int lo, int hi, const Box& box);

/// Closed form of H^m_{(X_1..X_m)}(R) on [lo, hi], hi <= -m: basis X^a with
/// a <= (-1,..,-1), d_i X^a = a_i X^(a-e_i), X_i X^a = X^(a+e_i) or 0 when a_i = -1.
WindowModule top_lc_oracle(std::size_t m, int lo, int hi);

}  // namespace lcg

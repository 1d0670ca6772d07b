#pragma once

// Exact linear algebra over Q: dense matrices, echelon forms, kernels,
// homology of finite cochain complexes and maps induced by chain maps.

#include "lcg/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcg {

/// Dense row-major rational matrix. Zero-sized dimensions are allowed and
/// show up constantly (empty slices, zero components).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static Matrix identity(std::size_t n);
  static Matrix scalar(std::size_t n, const Rational& c);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<Rational>& entries() const { return data_; }

  bool is_zero() const;
  bool column_is_zero(std::size_t c) const;

  Matrix transposed() const;
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  std::vector<Rational> column(std::size_t c) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(const Rational& c);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Rational& c) { return a *= c; }
  friend Matrix operator*(const Rational& c, Matrix a) { return a *= c; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::vector<Rational> apply(std::span<const Rational> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Horizontal concatenation; row counts must agree.
Matrix hstack(const Matrix& a, const Matrix& b);

std::string to_string(const Matrix& m);

struct Echelon {
  Matrix reduced;                   // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan with the deterministic rule: columns scanned left to right,
/// the pivot is the topmost nonzero entry among the unused rows.
Echelon rref(Matrix m);

std::size_t rank(const Matrix& m);

/// Columns form the canonical basis of ker(m): the basis vectors, stacked as
/// rows, are in reduced row echelon form.
Matrix kernel_basis(const Matrix& m);

/// A subspace given by a canonical basis (columns, reduced echelon when read
/// as rows). The coordinates of a vector in the span are its entries at the
/// pivot positions.
struct Subspace {
  Matrix basis;
  std::vector<std::size_t> pivots;

  std::size_t dimension() const { return basis.cols(); }
  std::size_t ambient() const { return basis.rows(); }
};

/// Canonical basis of the column span of `spanning`.
Subspace column_space(const Matrix& spanning, std::size_t ambient);
Subspace kernel_space(const Matrix& m);

/// Coordinates of every column of `vectors` in `space`; `inside[c]` is false
/// when column c is not in the span (its coordinates are then meaningless).
struct Coordinates {
  Matrix coords;            // dimension x vectors.cols()
  std::vector<bool> inside;  // per column
};
Coordinates coordinates(const Subspace& space, const Matrix& vectors);

/// Inverse of a square invertible matrix; throws std::invalid_argument otherwise.
Matrix inverse(const Matrix& a);

/// Cochain complex C^0 -> C^1 -> ... -> C^k. Construction checks the shape of
/// every differential and that consecutive differentials compose to zero.
class FiniteComplex {
 public:
  FiniteComplex(std::vector<std::size_t> dims, std::vector<Matrix> differentials);

  std::size_t length() const { return dims_.size(); }
  std::size_t dim(std::size_t j) const { return dims_.at(j); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  /// Differential from spot j to spot j+1.
  const Matrix& differential(std::size_t j) const { return diffs_.at(j); }

 private:
  std::vector<std::size_t> dims_;
  std::vector<Matrix> diffs_;
};

struct Homology {
  std::size_t dimension = 0;
  Matrix cycle_reps;   // C^j x dimension; columns lift the homology basis
  Matrix projection;   // dimension x C^j; defined on cycles, kills boundaries
};

/// H^j of the complex. Throws std::out_of_range for a bad index.
Homology homology(const FiniteComplex& c, std::size_t j);

class ChainMapError : public std::runtime_error {
 public:
  ChainMapError(std::size_t square, const std::string& what)
      : std::runtime_error(what), square_(square) {}
  /// Index j of the first square d_D^j f^j = f^{j+1} d_C^j that fails.
  std::size_t square() const { return square_; }

 private:
  std::size_t square_;
};

/// Throws ChainMapError unless `chain` (one matrix per spot, C^j -> D^j)
/// commutes with the differentials.
void check_chain_map(const FiniteComplex& c, const FiniteComplex& d, std::span<const Matrix> chain);

/// Matrix of H^j(C) -> H^j(D) in the canonical homology bases.
Matrix induced_map(const FiniteComplex& c, const FiniteComplex& d, std::span<const Matrix> chain,
                   std::size_t j);

/// Same, from already computed homologies and the degree-j component.
Matrix induced_map(const Homology& source, const Homology& target, const Matrix& chain_j);

}  // namespace lcg

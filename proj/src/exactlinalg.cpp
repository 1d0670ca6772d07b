#include "lcg/exactlinalg.hpp"

#include <numeric>
#include <sstream>
#include <utility>

namespace lcg {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) throw std::invalid_argument("matrix entry count does not match shape");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) { return scalar(n, 1); }

Matrix Matrix::scalar(std::size_t n, const Rational& c) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!lcg::is_zero(x)) return false;
  return true;
}

bool Matrix::column_is_zero(std::size_t c) const {
  for (std::size_t r = 0; r < rows_; ++r)
    if (!lcg::is_zero((*this)(r, c))) return false;
  return true;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols.size(); ++k) out(r, k) = (*this)(r, cols[k]);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t c = 0; c < cols_; ++c) out(k, c) = (*this)(rows[k], c);
  return out;
}

std::vector<Rational> Matrix::column(std::size_t c) const {
  std::vector<Rational> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix shape mismatch in +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix shape mismatch in -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(const Rational& c) {
  for (auto& x : data_) x *= c;
  return *this;
}

// Skips zero entries of the left factor; the matrices met in practice are
// block-sparse (one block per multidegree), so this dominates the cost.
Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in *");
  Matrix out(a.rows_, b.cols_);
  Rational t;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Rational& bkj = b(k, j);
        if (is_zero(bkj)) continue;
        t = aik * bkj;
        out(i, j) += t;
      }
    }
  }
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::vector<Rational> Matrix::apply(std::span<const Rational> v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  std::vector<Rational> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!lcg::is_zero(v[c]) && !lcg::is_zero((*this)(r, c))) out[r] += (*this)(r, c) * v[c];
  return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) os << ", ";
    os << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << to_string(m(r, c));
    os << ']';
  }
  os << ']';
  return os.str();
}

Echelon rref(Matrix m) {
  Echelon e;
  std::size_t row = 0;
  Rational factor;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && is_zero(m(pivot, col))) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
    Rational inv = 1 / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || is_zero(m(r, col))) continue;
      factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!is_zero(m(row, c))) m(r, c) -= factor * m(row, c);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

namespace {

// Canonical basis of the row space of `rows_as_vectors` (each row a vector),
// returned as columns together with their pivot positions.
Subspace canonical_from_rows(const Matrix& rows_as_vectors, std::size_t ambient) {
  Echelon e = rref(rows_as_vectors);
  Subspace s;
  s.basis = Matrix(ambient, e.pivots.size());
  for (std::size_t k = 0; k < e.pivots.size(); ++k)
    for (std::size_t r = 0; r < ambient; ++r) s.basis(r, k) = e.reduced(k, r);
  s.pivots = std::move(e.pivots);
  return s;
}

}  // namespace

Subspace kernel_space(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  // One raw kernel vector per free column, then canonicalised.
  Matrix raw(free.size(), m.cols());
  for (std::size_t k = 0; k < free.size(); ++k) {
    raw(k, free[k]) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) raw(k, e.pivots[r]) = -e.reduced(r, free[k]);
  }
  return canonical_from_rows(raw, m.cols());
}

Matrix kernel_basis(const Matrix& m) { return kernel_space(m).basis; }

Subspace column_space(const Matrix& spanning, std::size_t ambient) {
  if (spanning.rows() != ambient) throw std::invalid_argument("column_space: ambient mismatch");
  return canonical_from_rows(spanning.transposed(), ambient);
}

Coordinates coordinates(const Subspace& space, const Matrix& vectors) {
  if (vectors.rows() != space.ambient()) throw std::invalid_argument("coordinates: ambient mismatch");
  Coordinates out{vectors.select_rows(space.pivots), std::vector<bool>(vectors.cols(), true)};
  Matrix back = space.basis * out.coords;
  for (std::size_t c = 0; c < vectors.cols(); ++c)
    for (std::size_t r = 0; r < vectors.rows(); ++r)
      if (back(r, c) != vectors(r, c)) {
        out.inside[c] = false;
        break;
      }
  return out;
}

Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = a.rows();
  Echelon e = rref(hstack(a, Matrix::identity(n)));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1))
    throw std::invalid_argument("inverse of singular matrix");
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  return inv;
}

FiniteComplex::FiniteComplex(std::vector<std::size_t> dims, std::vector<Matrix> differentials)
    : dims_(std::move(dims)), diffs_(std::move(differentials)) {
  if (dims_.empty()) throw std::invalid_argument("complex needs at least one spot");
  if (diffs_.size() + 1 != dims_.size()) throw std::invalid_argument("complex needs one differential per gap");
  for (std::size_t j = 0; j < diffs_.size(); ++j)
    if (diffs_[j].rows() != dims_[j + 1] || diffs_[j].cols() != dims_[j])
      throw std::invalid_argument("differential " + std::to_string(j) + " has the wrong shape");
  for (std::size_t j = 0; j + 1 < diffs_.size(); ++j)
    if (!(diffs_[j + 1] * diffs_[j]).is_zero())
      throw std::invalid_argument("differentials " + std::to_string(j) + " and " + std::to_string(j + 1) +
                                  " do not compose to zero");
}

Homology homology(const FiniteComplex& c, std::size_t j) {
  if (j >= c.length()) throw std::out_of_range("homology index out of range");
  const std::size_t n = c.dim(j);

  Subspace cycles;
  if (j + 1 < c.length()) {
    cycles = kernel_space(c.differential(j));
  } else {
    cycles.basis = Matrix::identity(n);
    cycles.pivots.resize(n);
    std::iota(cycles.pivots.begin(), cycles.pivots.end(), 0);
  }
  const std::size_t z = cycles.dimension();
  Matrix boundaries = j > 0 ? c.differential(j - 1) : Matrix(n, 0);
  Matrix bc = coordinates(cycles, boundaries).coords;  // z x b

  // Complete a basis of the boundaries (in cycle coordinates) by unit vectors.
  Echelon e = rref(hstack(bc, Matrix::identity(z)));
  std::vector<std::size_t> image_cols, unit_cols;
  for (auto p : e.pivots) (p < bc.cols() ? image_cols : unit_cols).push_back(p);

  Homology h;
  h.dimension = unit_cols.size();
  Matrix w(z, z);
  for (std::size_t k = 0; k < image_cols.size(); ++k)
    for (std::size_t r = 0; r < z; ++r) w(r, k) = bc(r, image_cols[k]);
  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < unit_cols.size(); ++k) {
    std::size_t unit = unit_cols[k] - bc.cols();
    w(unit, image_cols.size() + k) = 1;
    chosen.push_back(unit);
  }
  h.cycle_reps = cycles.basis.select_columns(chosen);

  Matrix winv = inverse(w);
  Matrix selector(z, n);
  for (std::size_t k = 0; k < z; ++k) selector(k, cycles.pivots[k]) = 1;
  std::vector<std::size_t> tail(h.dimension);
  std::iota(tail.begin(), tail.end(), image_cols.size());
  h.projection = winv.select_rows(tail) * selector;
  return h;
}

void check_chain_map(const FiniteComplex& c, const FiniteComplex& d, std::span<const Matrix> chain) {
  if (c.length() != d.length() || chain.size() != c.length())
    throw std::invalid_argument("chain map length mismatch");
  for (std::size_t j = 0; j < chain.size(); ++j)
    if (chain[j].rows() != d.dim(j) || chain[j].cols() != c.dim(j))
      throw std::invalid_argument("chain map component " + std::to_string(j) + " has the wrong shape");
  for (std::size_t j = 0; j + 1 < chain.size(); ++j)
    if (!(d.differential(j) * chain[j] == chain[j + 1] * c.differential(j)))
      throw ChainMapError(j, "chain map does not commute with the differentials at square " + std::to_string(j));
}

Matrix induced_map(const FiniteComplex& c, const FiniteComplex& d, std::span<const Matrix> chain,
                   std::size_t j) {
  check_chain_map(c, d, chain);
  return induced_map(homology(c, j), homology(d, j), chain[j]);
}

Matrix induced_map(const Homology& source, const Homology& target, const Matrix& chain_j) {
  return target.projection * (chain_j * source.cycle_reps);
}

}  // namespace lcg

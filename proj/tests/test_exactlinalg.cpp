#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lcg/exactlinalg.hpp"

#include <random>

using namespace lcg;

namespace {

Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int spread = 2, int zero_bias = 2) {
  std::uniform_int_distribution<int> dist(-spread, spread + zero_bias);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      int v = dist(rng);
      m(i, j) = v > spread ? 0 : v;
    }
  return m;
}

// Rank by brute force: the largest k with some nonzero k x k minor, minors by cofactor expansion.
Rational det(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Rational total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a(0, c) == 0) continue;
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 1; i < n; ++i) rows.push_back(i);
    for (std::size_t j = 0; j < n; ++j)
      if (j != c) cols.push_back(j);
    Rational minor = det(a.select_rows(rows).select_columns(cols));
    total += (c % 2 ? -1 : 1) * a(0, c) * minor;
  }
  return total;
}

std::size_t brute_rank(const Matrix& a) {
  std::size_t best = 0;
  const std::size_t r = a.rows(), c = a.cols();
  for (std::uint32_t rm = 1; rm < (1u << r); ++rm)
    for (std::uint32_t cm = 1; cm < (1u << c); ++cm) {
      if (__builtin_popcount(rm) != __builtin_popcount(cm)) continue;
      std::size_t k = __builtin_popcount(rm);
      if (k <= best) continue;
      std::vector<std::size_t> rows, cols;
      for (std::size_t i = 0; i < r; ++i)
        if (rm >> i & 1) rows.push_back(i);
      for (std::size_t j = 0; j < c; ++j)
        if (cm >> j & 1) cols.push_back(j);
      if (det(a.select_rows(rows).select_columns(cols)) != 0) best = k;
    }
  return best;
}

}  // namespace

TEST_CASE("rank examples") {
  CHECK(rank(Matrix::identity(2)) == 2);
  CHECK(rank(Matrix{{1, 1}}) == 1);
  CHECK(rank(Matrix{{1, 2}, {2, 4}}) == 1);
  CHECK(rank(Matrix(0, 3)) == 0);
  CHECK(rank(Matrix(3, 0)) == 0);
}

TEST_CASE("kernel basis examples") {
  Matrix k = kernel_basis(Matrix{{1, 1}});
  REQUIRE(k.cols() == 1);
  CHECK(k(0, 0) == 1);
  CHECK(k(1, 0) == -1);
  CHECK(kernel_basis(Matrix(3, 3)) == Matrix::identity(3));
  CHECK(kernel_basis(Matrix::identity(2)).cols() == 0);
  CHECK(kernel_basis(Matrix::identity(2)).rows() == 2);
}

TEST_CASE("rank agrees with minors and rank-nullity holds") {
  std::mt19937 rng(7);
  for (int t = 0; t < 150; ++t) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    Matrix a = random_matrix(rng, r, c);
    std::size_t rk = rank(a);
    CHECK(rk == brute_rank(a));
    Matrix k = kernel_basis(a);
    CHECK(k.cols() + rk == c);
    CHECK((a * k).is_zero());
    CHECK(rank(k) == k.cols());
  }
}

TEST_CASE("rref is reduced") {
  std::mt19937 rng(11);
  for (int t = 0; t < 50; ++t) {
    Matrix a = random_matrix(rng, 4, 5);
    Echelon e = rref(a);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      CHECK(e.reduced(r, e.pivots[r]) == 1);
      for (std::size_t q = 0; q < e.reduced.rows(); ++q)
        if (q != r) CHECK(e.reduced(q, e.pivots[r]) == 0);
      if (r) CHECK(e.pivots[r] > e.pivots[r - 1]);
    }
    for (std::size_t r = e.pivots.size(); r < e.reduced.rows(); ++r)
      for (std::size_t c = 0; c < e.reduced.cols(); ++c) CHECK(e.reduced(r, c) == 0);
  }
}

TEST_CASE("inverse and coordinates") {
  Matrix a{{2, 1}, {1, 1}};
  CHECK(a * inverse(a) == Matrix::identity(2));
  CHECK_THROWS_AS(inverse(Matrix{{1, 2}, {2, 4}}), std::invalid_argument);

  Subspace s = column_space(Matrix{{1, 0}, {1, 1}, {0, 1}}, 3);
  CHECK(s.dimension() == 2);
  Coordinates co = coordinates(s, Matrix{{2, 1}, {3, 0}, {1, 0}});
  CHECK(co.inside[0]);
  CHECK_FALSE(co.inside[1]);
  CHECK(s.basis * co.coords.select_columns(std::vector<std::size_t>{0}) == Matrix{{2}, {3}, {1}});
}

TEST_CASE("finite complex validation") {
  CHECK_THROWS_AS(FiniteComplex({1, 1}, {Matrix(2, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteComplex({1, 1, 1}, {Matrix{{1}}, Matrix{{1}}}), std::invalid_argument);
  CHECK_NOTHROW(FiniteComplex({1, 1, 1}, {Matrix{{1}}, Matrix{{0}}}));
}

TEST_CASE("homology examples") {
  FiniteComplex iso({1, 1}, {Matrix{{1}}});
  CHECK(homology(iso, 0).dimension == 0);
  CHECK(homology(iso, 1).dimension == 0);

  FiniteComplex zero({1, 1}, {Matrix{{0}}});
  CHECK(homology(zero, 0).dimension == 1);
  CHECK(homology(zero, 1).dimension == 1);
  CHECK_THROWS_AS(homology(zero, 2), std::out_of_range);

  // Slice of the Cech complex of (X1, X2) at (-1,-1): C^0 = 0, C^1 = 0, C^2 = Q.
  FiniteComplex slice({0, 0, 1}, {Matrix(0, 0), Matrix(1, 0)});
  CHECK(homology(slice, 2).dimension == 1);
  CHECK(homology(slice, 1).dimension == 0);
}

TEST_CASE("projection kills boundaries and inverts representatives") {
  std::mt19937 rng(3);
  for (int t = 0; t < 80; ++t) {
    // Mapping-cone style complex: Q^a -f-> Q^b -g-> Q^c with g f = 0 built as g = h * (coker data).
    std::size_t a = rng() % 4, b = 1 + rng() % 4, c = rng() % 4;
    Matrix f = random_matrix(rng, b, a);
    Matrix left = kernel_basis(f.transposed()).transposed();  // rows annihilate im f
    Matrix h = random_matrix(rng, c, left.rows());
    Matrix g = h * left;
    FiniteComplex cx({a, b, c}, {f, g});
    long euler_dims = long(a) - long(b) + long(c);
    long euler_h = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      Homology h_j = homology(cx, j);
      euler_h += (j % 2 ? -1L : 1L) * long(h_j.dimension);
      CHECK(h_j.projection * h_j.cycle_reps == Matrix::identity(h_j.dimension));
      if (j == 1) CHECK((h_j.projection * f).is_zero());
      if (j == 1) CHECK((g * h_j.cycle_reps).is_zero());
    }
    CHECK(euler_dims == euler_h);
    CHECK(homology(cx, 1).dimension == b - rank(f) - rank(g));
  }
}

TEST_CASE("induced maps") {
  FiniteComplex c({1, 2, 1}, {Matrix{{1}, {1}}, Matrix{{1, -1}}});
  FiniteComplex z({0, 0, 1}, {Matrix(0, 0), Matrix(1, 0)});
  std::vector<Matrix> id{Matrix::identity(1), Matrix::identity(2), Matrix::identity(1)};
  for (std::size_t j = 0; j < 3; ++j) {
    Homology h = homology(c, j);
    CHECK(induced_map(c, c, id, j) == Matrix::identity(h.dimension));
  }
  std::vector<Matrix> zero{Matrix(1, 1), Matrix(2, 2), Matrix(1, 1)};
  CHECK(induced_map(c, c, zero, 0).is_zero());

  // Multiplication by X1 between the (X1,X2) slices at (-2,-1) and (-1,-1): both are Q in spot 2.
  std::vector<Matrix> x1{Matrix(0, 0), Matrix(0, 0), Matrix{{1}}};
  CHECK(induced_map(z, z, x1, 2) == Matrix{{1}});

  std::vector<Matrix> bad{Matrix{{1}}, Matrix{{1, 0}, {0, 0}}, Matrix{{1}}};
  try {
    check_chain_map(c, c, bad);
    FAIL("expected ChainMapError");
  } catch (const ChainMapError& e) {
    CHECK(e.square() == 0);
  }
}

TEST_CASE("induced map of a composite is the composite of induced maps") {
  std::mt19937 rng(5);
  int tested = 0;
  for (int t = 0; t < 200 && tested < 40; ++t) {
    // Complexes 0 -> Q^n -> 0 with chain maps arbitrary, plus a 2-term complex with zero differential.
    std::size_t n = 1 + rng() % 3;
    FiniteComplex cx({n, n}, {Matrix(n, n)});
    Matrix f0 = random_matrix(rng, n, n), f1 = random_matrix(rng, n, n);
    Matrix g0 = random_matrix(rng, n, n), g1 = random_matrix(rng, n, n);
    std::vector<Matrix> f{f0, f1}, g{g0, g1}, gf{g0 * f0, g1 * f1};
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(induced_map(cx, cx, gf, j) == induced_map(cx, cx, g, j) * induced_map(cx, cx, f, j));
    ++tested;
  }
  // A complex with nontrivial boundaries: Q -(1,1)-> Q^2 -> 0, chain maps preserving the image line.
  FiniteComplex line({1, 2}, {Matrix{{1}, {1}}});
  std::vector<Matrix> f{Matrix{{2}}, Matrix{{1, 1}, {0, 2}}}, g{Matrix{{3}}, Matrix{{3, 0}, {1, 2}}};
  std::vector<Matrix> gf{g[0] * f[0], g[1] * f[1]};
  CHECK(induced_map(line, line, gf, 1) == induced_map(line, line, g, 1) * induced_map(line, line, f, 1));
}

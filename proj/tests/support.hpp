#pragma once

// Test-side module builders that do not go through the Cech machinery.

#include "lcg/window_module.hpp"

#include <algorithm>
#include <functional>

namespace lcg::testing {

using Monomials = std::vector<std::vector<int>>;

/// Module spanned by Laurent monomials X^v: X_i v = v + e_i and d_i v = v_i (v - e_i),
/// with images outside the listed basis read as zero (a quotient for local
/// cohomology, a no-op for polynomial rings since those images vanish anyway).
inline WindowModule monomial_module(std::size_t m, int lo, int hi, const std::function<Monomials(int)>& basis_at,
                                    bool below, bool above) {
  ModuleData d;
  d.m = m;
  d.lo = lo;
  d.hi = hi;
  d.complete_below = below;
  d.complete_above = above;
  std::vector<Monomials> bases;
  for (int n = lo; n <= hi; ++n) {
    bases.push_back(basis_at(n));
    d.dims.push_back(bases.back().size());
    d.labels.push_back(bases.back());
  }
  auto index = [&](int n, const std::vector<int>& v) -> long {
    const auto& b = bases[static_cast<std::size_t>(n - lo)];
    auto it = std::find(b.begin(), b.end(), v);
    return it == b.end() ? -1 : it - b.begin();
  };
  d.x.resize(m);
  d.d.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    for (int n = lo; n < hi; ++n) {
      const auto& low = bases[static_cast<std::size_t>(n - lo)];
      const auto& high = bases[static_cast<std::size_t>(n + 1 - lo)];
      Matrix xm(high.size(), low.size()), dm(low.size(), high.size());
      for (std::size_t c = 0; c < low.size(); ++c) {
        auto v = low[c];
        v[i] += 1;
        long r = index(n + 1, v);
        if (r >= 0) xm(static_cast<std::size_t>(r), c) = 1;
      }
      for (std::size_t c = 0; c < high.size(); ++c) {
        auto v = high[c];
        int coeff = v[i];
        v[i] -= 1;
        long r = index(n, v);
        if (r >= 0 && coeff != 0) dm(static_cast<std::size_t>(r), c) = coeff;
      }
      d.x[i].push_back(Action(std::move(xm)));
      d.d[i].push_back(Action(std::move(dm)));
    }
  return WindowModule(std::move(d));
}

/// All v in Z^m with |v| = n and every coordinate in [low, high].
inline Monomials compositions(std::size_t m, int n, int low, int high) {
  Monomials out;
  std::vector<int> v(m);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rest) {
    if (i + 1 == m) {
      if (rest >= low && rest <= high) {
        v[i] = rest;
        out.push_back(v);
      }
      return;
    }
    for (int a = low; a <= high; ++a) {
      v[i] = a;
      rec(i + 1, rest - a);
    }
  };
  if (m > 0) rec(0, n);
  return out;
}

/// The polynomial ring K[X_1..X_m] on [lo, hi].
inline WindowModule polynomial_ring(std::size_t m, int lo, int hi) {
  return monomial_module(
      m, lo, hi, [m](int n) { return n < 0 ? Monomials{} : compositions(m, n, 0, n); }, lo <= 0, false);
}

/// H^m at the maximal ideal: X^a with a <= (-1, ..., -1).
inline WindowModule top_local_cohomology(std::size_t m, int lo, int hi) {
  return monomial_module(
      m, lo, hi, [m](int n) { return n > -static_cast<int>(m) ? Monomials{} : compositions(m, n, n, -1); }, false,
      hi >= -static_cast<int>(m));
}

/// Laurent polynomials K[X^{+-1}] in one variable.
inline WindowModule laurent_line(int lo, int hi) {
  return monomial_module(1, lo, hi, [](int n) { return Monomials{{n}}; }, false, false);
}

/// K[X^{+-1}] (+) K[X^{+-1}] L with d(X^n L) = n X^(n-1) L + X^(n-1): basis (X^n, X^n L).
inline WindowModule log_extension(int lo, int hi) {
  ModuleData d;
  d.m = 1;
  d.lo = lo;
  d.hi = hi;
  d.dims.assign(static_cast<std::size_t>(hi - lo) + 1, 2);
  d.x.resize(1);
  d.d.resize(1);
  for (int n = lo; n < hi; ++n) {
    d.x[0].push_back(Action(Matrix{{1, 0}, {0, 1}}));
    const int k = n + 1;  // d from degree k: X^k -> k X^(k-1), X^k L -> k X^(k-1) L + X^(k-1)
    d.d[0].push_back(Action(Matrix{{k, 1}, {0, k}}));
  }
  return WindowModule(std::move(d));
}

/// One-dimensional components on [-1, 1] where eps acts on degree 0 by 1.
inline ModuleData shifted_line_data() {
  ModuleData d;
  d.m = 1;
  d.lo = -1;
  d.hi = 1;
  d.dims = {1, 1, 1};
  d.x = {{Action(Matrix{{1}}), Action(Matrix{{1}})}};
  d.d = {{Action(Matrix{{1}}), Action(Matrix{{2}})}};
  return d;
}

}  // namespace lcg::testing

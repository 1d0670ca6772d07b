#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lcg/module_json.hpp"
#include "lcg/window_module.hpp"
#include "support.hpp"

using namespace lcg;
using namespace lcg::testing;

namespace {

std::size_t interior_dim(const WindowModule& m, int n) { return m.exact(n) ? m.dim(n) : 0; }

WeylElement xgen(std::size_t m, std::size_t i) { return WeylElement::x(m, i); }
WeylElement dgen(std::size_t m, std::size_t i) { return WeylElement::d(m, i); }

std::vector<WeylElement> all_x(std::size_t m) {
  std::vector<WeylElement> g;
  for (std::size_t i = 1; i <= m; ++i) g.push_back(xgen(m, i));
  return g;
}
std::vector<WeylElement> all_d(std::size_t m) {
  std::vector<WeylElement> g;
  for (std::size_t i = 1; i <= m; ++i) g.push_back(dgen(m, i));
  return g;
}

}  // namespace

TEST_CASE("constructor rejects broken invariants") {
  ModuleData bad = shifted_line_data();
  bad.d[0][1] = Action(Matrix{{3}});
  CHECK_THROWS_AS(WindowModule{bad}, InvariantError);

  ModuleData shape = shifted_line_data();
  shape.x[0][0] = Action(Matrix{{1, 0}});
  CHECK_THROWS_AS(WindowModule{shape}, InvariantError);

  // Two variables where X_1 and X_2 fail to commute.
  ModuleData nc;
  nc.m = 2;
  nc.lo = 0;
  nc.hi = 2;
  nc.dims = {1, 1, 1};
  nc.x = {{Action(Matrix{{1}}), Action(Matrix{{1}})}, {Action(Matrix{{1}}), Action(Matrix{{2}})}};
  nc.d = {{Action(Matrix{{0}}), Action(Matrix{{0}})}, {Action(Matrix{{0}}), Action(Matrix{{0}})}};
  CHECK_THROWS_AS(WindowModule{nc}, InvariantError);

  ModuleData empty_window = shifted_line_data();
  empty_window.lo = 2;
  CHECK_THROWS_AS(WindowModule{empty_window}, InvariantError);

  CHECK_NOTHROW(WindowModule(shifted_line_data()));
  CHECK_NOTHROW(polynomial_ring(2, 0, 4));
  CHECK_NOTHROW(top_local_cohomology(3, -7, -2));
}

TEST_CASE("escaping columns are exempt from identity checks") {
  ModuleData d = shifted_line_data();
  d.d[0][1] = Action(Matrix{{3}}, {true});
  CHECK_NOTHROW(WindowModule{d});
}

TEST_CASE("euler matrix examples") {
  WindowModule r = polynomial_ring(2, 0, 3);
  CHECK(euler_matrix(r, 2) == Matrix::scalar(3, 2));
  WindowModule e = top_local_cohomology(1, -4, -1);
  CHECK(euler_matrix(e, -2) == Matrix{{-2}});
  CHECK_THROWS_AS(euler_matrix(e, -4), BoundaryIncomplete);
  WindowModule z = WindowModule::zero(2, -1, 1);
  CHECK(euler_matrix(z, 0).rows() == 0);
}

TEST_CASE("generalized Eulerian examples") {
  EulerianReport r = check_generalized_eulerian(polynomial_ring(2, 0, 3));
  CHECK(r.verdict == EulerianVerdict::Eulerian);
  for (const auto& d : r.degrees) {
    CHECK(d.status == NilpotencyStatus::Index);
    CHECK(d.index == (d.dim ? 1u : 0u));
  }
  EulerianReport h = check_generalized_eulerian(top_local_cohomology(2, -5, -2));
  CHECK(h.verdict == EulerianVerdict::Eulerian);
  CHECK(h.at(-5)->status == NilpotencyStatus::Skipped);
  for (int n = -4; n <= -2; ++n) CHECK(h.at(n)->index == 1);

  EulerianReport bad = check_generalized_eulerian(WindowModule(shifted_line_data()));
  CHECK(bad.verdict == EulerianVerdict::NotGeneralizedEulerian);
  CHECK(bad.at(0)->status == NilpotencyStatus::NotNilpotent);

  EulerianReport logr = check_generalized_eulerian(log_extension(-3, 3));
  CHECK(logr.verdict == EulerianVerdict::GeneralizedEulerian);
  for (int n = -2; n <= 3; ++n) CHECK(logr.at(n)->index == 2);
}

TEST_CASE("shift reindexes and is invertible") {
  WindowModule e = top_local_cohomology(1, -4, -1);
  WindowModule s = shift(e, 1);
  CHECK(s.lo() == -5);
  CHECK(s.hi() == -2);
  CHECK(s.dim(-2) == 1);
  CHECK(shift(e, 0).data().dims == e.data().dims);
  WindowModule back = shift(shift(e, 3), -3);
  CHECK(back.lo() == e.lo());
  CHECK(to_json(back) == to_json(e));
  WindowModule left = shift(e, -1);
  CHECK(left.hi() == 0);
  CHECK(left.dim(0) == 1);
}

TEST_CASE("Eulerian reports are equivariant under shifts with the matching offset") {
  std::vector<WindowModule> mods{polynomial_ring(2, 0, 3), top_local_cohomology(2, -6, -2), log_extension(-2, 2),
                                 WindowModule(shifted_line_data())};
  for (const auto& m : mods)
    for (int k = -3; k <= 3; ++k) {
      EulerianReport base = check_generalized_eulerian(m);
      EulerianReport moved = check_generalized_eulerian(shift(m, k), k);
      CHECK(base.verdict == moved.verdict);
      for (const auto& d : base.degrees) {
        const EulerianDegree* e = moved.at(d.degree - k);
        REQUIRE(e);
        CHECK(e->status == d.status);
        CHECK(e->index == d.index);
      }
    }
  // The shifted line is the Laurent line moved by one: it passes with offset 1.
  CHECK(check_generalized_eulerian(WindowModule(shifted_line_data()), 1).generalized());
}

TEST_CASE("Koszul homology of d for m = 1") {
  WindowModule e = top_local_cohomology(1, -4, -1);
  KoszulHomology k = koszul_d(e, 1);
  for (int n = -4; n <= -1; ++n) {
    CHECK(interior_dim(k.h1, n) == 0);
    CHECK(interior_dim(k.h0, n) == (n == -1 ? 1u : 0u));
  }
  WindowModule r = polynomial_ring(1, -2, 4);
  KoszulHomology kr = koszul_d(r, 1);
  for (int n = -2; n <= 4; ++n) {
    CHECK(interior_dim(kr.h1, n) == (n == -1 ? 1u : 0u));
    CHECK(interior_dim(kr.h0, n) == 0);
  }
  CHECK_FALSE(kr.h0.exact(4));
  WindowModule z = WindowModule::zero(1, -3, 3);
  KoszulHomology kz = koszul_d(z, 1);
  for (int n = -3; n <= 3; ++n) CHECK(kz.h0.dim(n) + kz.h1.dim(n) == 0);
}

TEST_CASE("Koszul homology of X for m = 1") {
  WindowModule e = top_local_cohomology(1, -4, 1);
  KoszulHomology k = koszul_x(e, 1);
  for (int n = -3; n <= 1; ++n) {
    CHECK(interior_dim(k.h1, n) == (n == 0 ? 1u : 0u));
    CHECK(interior_dim(k.h0, n) == 0);
  }
  WindowModule r = polynomial_ring(1, -2, 4);
  KoszulHomology kr = koszul_x(r, 1);
  for (int n = -2; n <= 4; ++n) {
    CHECK(interior_dim(kr.h1, n) == 0);
    CHECK(interior_dim(kr.h0, n) == (n == 0 ? 1u : 0u));
  }
  WindowModule z = WindowModule::zero(1, -3, 3);
  KoszulHomology kz = koszul_x(z, 1);
  for (int n = -3; n <= 3; ++n) CHECK(kz.h0.dim(n) + kz.h1.dim(n) == 0);
}

TEST_CASE("Koszul outputs of m >= 2 Eulerian modules are generalized Eulerian") {
  std::vector<WindowModule> mods{polynomial_ring(2, -2, 4), polynomial_ring(3, -1, 3), top_local_cohomology(2, -7, 1),
                                 top_local_cohomology(3, -8, 0)};
  for (const auto& m : mods)
    for (std::size_t i = 1; i <= m.variables(); ++i) {
      KoszulHomology kd = koszul_d(m, i);
      CHECK(check_generalized_eulerian(shift(kd.h0, -1)).generalized());
      CHECK(check_generalized_eulerian(shift(kd.h1, -1)).generalized());
      KoszulHomology kx = koszul_x(m, i);
      CHECK(check_generalized_eulerian(kx.h0).generalized());
      CHECK(check_generalized_eulerian(kx.h1).generalized());
    }
  // The Koszul homology of d_2 on R = K[X1,X2] is K[X1] in the shifted grading.
  KoszulHomology kd = koszul_d(polynomial_ring(2, -2, 4), 2);
  for (int n = -1; n <= 2; ++n) CHECK(interior_dim(kd.h1, n) == 1);
}

TEST_CASE("torsion examples") {
  WindowModule e = top_local_cohomology(1, -4, -1);
  TorsionResult te = torsion(e, {xgen(1, 1)});
  for (int n = -4; n <= -1; ++n) {
    CHECK(te.at(n)->lower_dim == 1);
    CHECK(te.at(n)->certified);
  }
  WindowModule r = polynomial_ring(1, 0, 4);
  TorsionResult tr = torsion(r, {xgen(1, 1)});
  for (int n = 0; n <= 4; ++n) {
    CHECK(tr.at(n)->lower_dim == 0);
    CHECK(tr.at(n)->certified);
  }
  TorsionResult td = torsion(r, {dgen(1, 1)});
  for (int n = 0; n <= 4; ++n) {
    CHECK(td.at(n)->lower_dim == 1);
    CHECK(td.at(n)->certified);
  }
  CHECK_THROWS_AS(torsion(r, {xgen(1, 1), dgen(1, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(torsion(r, {xgen(1, 1) * dgen(1, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(torsion(r, {xgen(1, 1) + WeylElement::constant(1, 1)}), std::invalid_argument);
}

TEST_CASE("torsion of E by d is certified zero") {
  WindowModule e = top_local_cohomology(1, -4, -1);
  TorsionResult t = torsion(e, {dgen(1, 1)});
  CHECK_FALSE(t.at(-4)->certified);
  for (int n = -3; n <= -1; ++n) {
    CHECK(t.at(n)->upper_dim == 0);
    CHECK(t.at(n)->certified);
  }
}

TEST_CASE("torsion is a submodule and bounds are ordered") {
  std::vector<WindowModule> mods{polynomial_ring(2, 0, 4), top_local_cohomology(2, -7, -2), top_local_cohomology(3, -7, 0)};
  for (const auto& m : mods) {
    for (const auto& gens : {all_x(m.variables()), all_d(m.variables())}) {
      TorsionResult t = torsion(m, gens);
      for (const auto& d : t.degrees) CHECK(d.lower_dim <= d.upper_dim);
    }
  }
  // Non-monomial generator: only a lower bound.
  WindowModule h = top_local_cohomology(2, -6, -2);
  TorsionResult t = torsion(h, {xgen(2, 1) + xgen(2, 2)});
  for (int n = -6; n <= -2; ++n) CHECK(t.at(n)->lower_dim == h.dim(n));
}

TEST_CASE("X-torsion vanishes above -m and d-torsion vanishes at or below -m") {
  for (std::size_t m = 1; m <= 3; ++m) {
    const int lo = -static_cast<int>(m) - 4;
    std::vector<WindowModule> mods{top_local_cohomology(m, lo, 2), polynomial_ring(m, lo, 3)};
    for (const auto& mod : mods) {
      REQUIRE(check_generalized_eulerian(mod).generalized());
      TorsionResult tx = torsion(mod, all_x(m));
      TorsionResult td = torsion(mod, all_d(m));
      for (const auto& d : tx.degrees)
        if (d.certified && d.degree >= -static_cast<int>(m) + 1) CHECK(d.lower_dim == 0);
      for (const auto& d : td.degrees)
        if (d.certified && d.degree <= -static_cast<int>(m)) CHECK(d.lower_dim == 0);
    }
  }
}

TEST_CASE("divisibility") {
  WindowModule e = top_local_cohomology(1, -4, -1);
  DivisibilityReport rx = check_divisibility(e, 1, OperatorKind::X);
  CHECK(rx.module_is_torsion);
  CHECK(rx.surjective_everywhere);
  CHECK(rx.degrees.front().status == DivisibilityDegree::Boundary);
  for (std::size_t k = 1; k < rx.degrees.size(); ++k) CHECK(rx.degrees[k].status == DivisibilityDegree::Surjective);

  DivisibilityReport rd = check_divisibility(e, 1, OperatorKind::D);
  CHECK_FALSE(rd.module_is_torsion);
  CHECK(rd.surjective_everywhere);

  DivisibilityReport rz = check_divisibility(WindowModule::zero(1, -2, 2), 1, OperatorKind::X);
  CHECK(rz.surjective_everywhere);

  // K[X1] is d-torsion and d is onto every component below the top.
  DivisibilityReport rr = check_divisibility(polynomial_ring(1, 0, 5), 1, OperatorKind::D);
  CHECK(rr.module_is_torsion);
  CHECK(rr.surjective_everywhere);
  for (std::size_t k = 0; k + 1 < rr.degrees.size(); ++k) CHECK(rr.degrees[k].status == DivisibilityDegree::Surjective);
}

TEST_CASE("extension closure") {
  const int lo = -3, hi = 3;
  WindowModule left = laurent_line(lo, hi), right = laurent_line(lo, hi), mid = log_extension(lo, hi);
  std::vector<Matrix> f, g;
  for (int n = lo; n <= hi; ++n) {
    f.push_back(Matrix{{1}, {0}});
    g.push_back(Matrix{{0, 1}});
  }
  ExtensionReport r = check_extension_closure({left, mid, right, f, g});
  CHECK(r.exact);
  CHECK(r.equivariant);
  CHECK(r.left_generalized);
  CHECK(r.middle_generalized);
  CHECK(r.right_generalized);
  CHECK(r.closure_holds);

  // The split extension of the shifted line by itself fails on every term.
  WindowModule bad(shifted_line_data());
  std::vector<Matrix> fs, gs;
  ModuleData sum = shifted_line_data();
  sum.dims = {2, 2, 2};
  sum.x = {{Action(Matrix::identity(2)), Action(Matrix::identity(2))}};
  sum.d = {{Action(Matrix::identity(2)), Action(Matrix::scalar(2, 2))}};
  for (int n = -1; n <= 1; ++n) {
    fs.push_back(Matrix{{1}, {0}});
    gs.push_back(Matrix{{0, 1}});
  }
  ExtensionReport rb = check_extension_closure({bad, WindowModule(sum), bad, fs, gs});
  CHECK(rb.exact);
  CHECK(rb.equivariant);
  CHECK_FALSE(rb.middle_generalized);
  CHECK(rb.closure_holds);

  std::vector<Matrix> wrong = g;
  wrong[2] = Matrix{{1, 1}};
  CHECK_FALSE(check_extension_closure({left, mid, right, f, wrong}).exact);
  std::vector<Matrix> twisted = g;
  twisted[3] = Matrix{{0, 2}};
  ExtensionReport rt = check_extension_closure({left, mid, right, f, twisted});
  CHECK(rt.exact);
  CHECK_FALSE(rt.equivariant);
}

TEST_CASE("json round trip") {
  std::vector<WindowModule> mods{polynomial_ring(2, 0, 3), top_local_cohomology(2, -5, -2), log_extension(-1, 2)};
  for (const auto& m : mods) {
    auto j = to_json(m);
    WindowModule back = module_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.data().dims == m.data().dims);
  }
  auto j = to_json(polynomial_ring(1, 0, 2));
  CHECK(j["actions"][0]["matrix"][0][0] == "1");
  j["actions"][1]["matrix"][0][0] = "5";
  CHECK_THROWS_AS(module_from_json(j), InvariantError);
  CHECK_THROWS_AS(module_from_json(nlohmann::json::parse(R"({"m": 1})")), std::invalid_argument);
  nlohmann::json esc = to_json(WindowModule(shifted_line_data()));
  esc["actions"][3]["escapes"] = {true};
  esc["actions"][3]["matrix"] = {{"7"}};
  WindowModule withesc = module_from_json(esc);
  CHECK(withesc.d_action(1, 1)->escaping(0));
}

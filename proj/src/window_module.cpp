#include "lcg/window_module.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace lcg {

Action::Action(Matrix m, std::vector<bool> e) : map(std::move(m)), escapes(std::move(e)) {
  if (escapes.empty()) escapes.assign(map.cols(), false);
  if (escapes.size() != map.cols()) throw std::invalid_argument("escape flags do not match the column count");
}

bool Action::reliable() const { return std::none_of(escapes.begin(), escapes.end(), [](bool b) { return b; }); }

std::vector<std::size_t> Action::reliable_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < map.cols(); ++c)
    if (!escaping(c)) out.push_back(c);
  return out;
}

Action compose(const Action& second, const Action& first) {
  if (second.map.cols() != first.map.rows()) throw std::invalid_argument("composing actions of incompatible shape");
  Action out(second.map * first.map);
  for (std::size_t c = 0; c < first.map.cols(); ++c) {
    bool esc = first.escaping(c);
    for (std::size_t r = 0; r < first.map.rows() && !esc; ++r)
      if (second.escaping(r) && !is_zero(first.map(r, c))) esc = true;
    out.escapes[c] = esc;
  }
  return out;
}

Action operator+(const Action& a, const Action& b) {
  Action out(a.map + b.map);
  for (std::size_t c = 0; c < out.map.cols(); ++c) out.escapes[c] = a.escaping(c) || b.escaping(c);
  return out;
}

Action scale(const Action& a, const Rational& c) { return Action(a.map * c, a.escapes); }

namespace {

std::string degree_text(int n) { return std::to_string(n); }

bool equal_on_reliable(const Action& a, const Action& b, const Matrix* plus_identity = nullptr) {
  for (std::size_t c = 0; c < a.map.cols(); ++c) {
    if (a.escaping(c) || b.escaping(c)) continue;
    for (std::size_t r = 0; r < a.map.rows(); ++r) {
      Rational lhs = a.map(r, c);
      Rational rhs = b.map(r, c);
      if (plus_identity) rhs += (*plus_identity)(r, c);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

// Nonzero entries of an action, column by column.
struct SparseAction {
  const Action* action = nullptr;
  std::vector<std::vector<std::pair<std::size_t, const Rational*>>> cols;

  explicit SparseAction(const Action& a) : action(&a), cols(a.map.cols()) {
    for (std::size_t r = 0; r < a.map.rows(); ++r)
      for (std::size_t c = 0; c < a.map.cols(); ++c)
        if (!is_zero(a.map(r, c))) cols[c].emplace_back(r, &a.map(r, c));
  }
};

class SparseCache {
 public:
  const SparseAction& operator()(const Action& a) {
    auto it = cache_.find(&a);
    if (it == cache_.end()) it = cache_.emplace(&a, SparseAction(a)).first;
    return it->second;
  }

 private:
  std::map<const Action*, SparseAction> cache_;
};

struct SparseColumn {
  bool escapes = false;
  std::map<std::size_t, Rational> entries;
};

// Column c of second * first.
SparseColumn composed_column(const SparseAction& second, const SparseAction& first, std::size_t c) {
  SparseColumn out;
  out.escapes = first.action->escaping(c);
  for (const auto& [r, f] : first.cols[c]) {
    if (second.action->escaping(r)) out.escapes = true;
    for (const auto& [i, v] : second.cols[r]) out.entries[i] += *v * *f;
  }
  std::erase_if(out.entries, [](const auto& e) { return is_zero(e.second); });
  return out;
}

/// a2 a1 = b2 b1 (+ identity when asked) on every column reliable on both sides.
bool relation_holds(SparseCache& sp, const Action& a2, const Action& a1, const Action& b2, const Action& b1,
                    bool plus_identity = false) {
  const SparseAction &sa2 = sp(a2), &sa1 = sp(a1), &sb2 = sp(b2), &sb1 = sp(b1);
  for (std::size_t c = 0; c < a1.map.cols(); ++c) {
    SparseColumn lhs = composed_column(sa2, sa1, c);
    SparseColumn rhs = composed_column(sb2, sb1, c);
    if (lhs.escapes || rhs.escapes) continue;
    if (plus_identity) {
      rhs.entries[c] += 1;
      if (is_zero(rhs.entries[c])) rhs.entries.erase(c);
    }
    if (lhs.entries != rhs.entries) return false;
  }
  return true;
}

}  // namespace

WindowModule::WindowModule(ModuleData data) : data_(std::move(data)) {
  auto& D = data_;
  if (D.lo > D.hi) throw InvariantError("window lower bound exceeds upper bound");
  const std::size_t len = static_cast<std::size_t>(D.hi - D.lo) + 1;
  if (D.dims.size() != len) throw InvariantError("expected one dimension per degree of the window");
  if (D.exact.empty()) D.exact.assign(len, true);
  if (D.exact.size() != len) throw InvariantError("expected one exactness flag per degree");
  if (!D.labels.empty()) {
    if (D.labels.size() != len) throw InvariantError("expected labels for every degree");
    // Labels may be offset from the degree by a constant (after shifts), never by a varying amount.
    std::optional<int> offset;
    for (std::size_t k = 0; k < len; ++k) {
      if (D.labels[k].size() != D.dims[k]) throw InvariantError("label count differs from dimension at degree " + degree_text(D.lo + static_cast<int>(k)));
      for (const auto& l : D.labels[k]) {
        if (l.size() != D.m) throw InvariantError("label of wrong length");
        const int gap = std::accumulate(l.begin(), l.end(), 0) - (D.lo + static_cast<int>(k));
        if (offset && *offset != gap)
          throw InvariantError("label total degrees are inconsistent with the grading at degree " + degree_text(D.lo + static_cast<int>(k)));
        offset = gap;
      }
    }
  }
  if (D.x.size() != D.m || D.d.size() != D.m) throw InvariantError("expected X and d actions for every variable");
  x_below_.assign(D.m, std::nullopt);
  x_above_.assign(D.m, std::nullopt);
  d_below_.assign(D.m, std::nullopt);
  d_above_.assign(D.m, std::nullopt);
  for (std::size_t i = 0; i < D.m; ++i) {
    if (D.x[i].size() != len - 1 || D.d[i].size() != len - 1)
      throw InvariantError("expected one action per adjacent pair of degrees");
    for (std::size_t k = 0; k + 1 < len; ++k) {
      Action& xa = D.x[i][k];
      Action& da = D.d[i][k];
      if (xa.escapes.empty()) xa.escapes.assign(xa.map.cols(), false);
      if (da.escapes.empty()) da.escapes.assign(da.map.cols(), false);
      if (xa.map.rows() != D.dims[k + 1] || xa.map.cols() != D.dims[k] || xa.escapes.size() != xa.map.cols())
        throw InvariantError("X_" + std::to_string(i + 1) + " from degree " + degree_text(D.lo + static_cast<int>(k)) + " has the wrong shape");
      if (da.map.rows() != D.dims[k] || da.map.cols() != D.dims[k + 1] || da.escapes.size() != da.map.cols())
        throw InvariantError("d_" + std::to_string(i + 1) + " from degree " + degree_text(D.lo + static_cast<int>(k) + 1) + " has the wrong shape");
    }
    if (D.complete_below) {
      x_below_[i] = Action(Matrix(D.dims[0], 0));
      d_below_[i] = Action(Matrix(0, D.dims[0]));
    }
    if (D.complete_above) {
      x_above_[i] = Action(Matrix(0, D.dims[len - 1]));
      d_above_[i] = Action(Matrix(D.dims[len - 1], 0));
    }
  }
  validate();
}

WindowModule WindowModule::zero(std::size_t m, int lo, int hi) {
  ModuleData d;
  d.m = m;
  d.lo = lo;
  d.hi = hi;
  const std::size_t len = static_cast<std::size_t>(hi - lo) + 1;
  d.dims.assign(len, 0);
  d.x.assign(m, std::vector<Action>(len - 1, Action(Matrix(0, 0))));
  d.d.assign(m, std::vector<Action>(len - 1, Action(Matrix(0, 0))));
  d.complete_below = d.complete_above = true;
  return WindowModule(std::move(d));
}

std::optional<std::size_t> WindowModule::dim_at(int n) const {
  if (in_window(n)) return data_.dims[static_cast<std::size_t>(n - data_.lo)];
  if (n < data_.lo && data_.complete_below) return 0;
  if (n > data_.hi && data_.complete_above) return 0;
  return std::nullopt;
}

std::size_t WindowModule::dim(int n) const {
  if (!in_window(n)) throw std::out_of_range("degree outside the window");
  return data_.dims[static_cast<std::size_t>(n - data_.lo)];
}

bool WindowModule::exact(int n) const {
  if (!in_window(n)) throw std::out_of_range("degree outside the window");
  return data_.exact[static_cast<std::size_t>(n - data_.lo)];
}

bool WindowModule::box_complete() const {
  return std::all_of(data_.exact.begin(), data_.exact.end(), [](bool b) { return b; });
}

const std::vector<std::vector<int>>& WindowModule::labels(int n) const {
  if (data_.labels.empty()) return no_labels_;
  return data_.labels.at(static_cast<std::size_t>(n - data_.lo));
}

const Action* WindowModule::x_action(std::size_t i, int n) const {
  if (i == 0 || i > data_.m) throw std::out_of_range("axis out of range");
  if (n >= data_.lo && n < data_.hi) return &data_.x[i - 1][static_cast<std::size_t>(n - data_.lo)];
  const std::optional<Action>* edge = nullptr;
  if (n == data_.lo - 1) edge = &x_below_[i - 1];
  if (n == data_.hi) edge = &x_above_[i - 1];
  return edge && *edge ? &**edge : nullptr;
}

const Action* WindowModule::d_action(std::size_t i, int n) const {
  if (i == 0 || i > data_.m) throw std::out_of_range("axis out of range");
  if (n > data_.lo && n <= data_.hi) return &data_.d[i - 1][static_cast<std::size_t>(n - data_.lo - 1)];
  const std::optional<Action>* edge = nullptr;
  if (n == data_.lo) edge = &d_below_[i - 1];
  if (n == data_.hi + 1) edge = &d_above_[i - 1];
  return edge && *edge ? &**edge : nullptr;
}

void WindowModule::validate() const {
  const std::size_t m = data_.m;
  SparseCache sparse;
  if (has_labels()) {
    for (std::size_t i = 1; i <= m; ++i)
      for (int n = data_.lo; n < data_.hi; ++n) {
        const Matrix& xm = x_action(i, n)->map;
        const Matrix& dm = d_action(i, n + 1)->map;
        for (std::size_t r = 0; r < xm.rows(); ++r)
          for (std::size_t c = 0; c < xm.cols(); ++c) {
            if (is_zero(xm(r, c))) continue;
            auto want = labels(n)[c];
            want[i - 1] += 1;
            if (labels(n + 1)[r] != want)
              throw InvariantError("X_" + std::to_string(i) + " does not raise the multidegree by e_" + std::to_string(i) + " at degree " + degree_text(n));
          }
        for (std::size_t r = 0; r < dm.rows(); ++r)
          for (std::size_t c = 0; c < dm.cols(); ++c) {
            if (is_zero(dm(r, c))) continue;
            auto want = labels(n + 1)[c];
            want[i - 1] -= 1;
            if (labels(n)[r] != want)
              throw InvariantError("d_" + std::to_string(i) + " does not lower the multidegree by e_" + std::to_string(i) + " at degree " + degree_text(n + 1));
          }
      }
  }
  for (int n = data_.lo; n <= data_.hi; ++n) {
    for (std::size_t i = 1; i <= m; ++i) {
      for (std::size_t j = i + 1; j <= m; ++j) {
        const Action *xi = x_action(i, n), *xj = x_action(j, n), *xi1 = x_action(i, n + 1), *xj1 = x_action(j, n + 1);
        if (xi && xj && xi1 && xj1 && !relation_holds(sparse, *xj1, *xi, *xi1, *xj))
          throw InvariantError("X_" + std::to_string(i) + " and X_" + std::to_string(j) + " do not commute at degree " + degree_text(n));
        const Action *di = d_action(i, n), *dj = d_action(j, n), *di1 = d_action(i, n - 1), *dj1 = d_action(j, n - 1);
        if (di && dj && di1 && dj1 && !relation_holds(sparse, *dj1, *di, *di1, *dj))
          throw InvariantError("d_" + std::to_string(i) + " and d_" + std::to_string(j) + " do not commute at degree " + degree_text(n));
      }
      for (std::size_t j = 1; j <= m; ++j) {
        if (i == j) continue;
        const Action *xj = x_action(j, n), *di_up = d_action(i, n + 1), *di = d_action(i, n), *xj_down = x_action(j, n - 1);
        if (xj && di_up && di && xj_down && !relation_holds(sparse, *di_up, *xj, *xj_down, *di))
          throw InvariantError("d_" + std::to_string(i) + " and X_" + std::to_string(j) + " do not commute at degree " + degree_text(n));
      }
      const Action *xi = x_action(i, n), *di_up = d_action(i, n + 1), *di = d_action(i, n), *xi_down = x_action(i, n - 1);
      if (xi && di_up && di && xi_down) {
        if (!relation_holds(sparse, *di_up, *xi, *xi_down, *di, true))
          throw InvariantError("Weyl relation d_" + std::to_string(i) + " X_" + std::to_string(i) + " - X_" + std::to_string(i) + " d_" + std::to_string(i) + " = 1 fails at degree " + degree_text(n));
      }
    }
  }
}

WindowModule shift(const WindowModule& m, int k) {
  ModuleData d = m.data();
  d.lo -= k;
  d.hi -= k;
  return WindowModule(std::move(d));
}

std::optional<Action> euler_action(const WindowModule& m, int n) {
  auto dn = m.dim_at(n);
  if (!dn) return std::nullopt;
  Action total(Matrix(*dn, *dn));
  for (std::size_t i = 1; i <= m.variables(); ++i) {
    const Action* down = m.d_action(i, n);
    const Action* up = m.x_action(i, n - 1);
    if (!down || !up) return std::nullopt;
    total = total + compose(*up, *down);
  }
  return total;
}

Matrix euler_matrix(const WindowModule& m, int n) {
  auto a = euler_action(m, n);
  if (!a) throw BoundaryIncomplete("Euler operator at degree " + degree_text(n) + " needs actions outside the window");
  return a->map;
}

const EulerianDegree* EulerianReport::at(int n) const {
  for (const auto& d : degrees)
    if (d.degree == n) return &d;
  return nullptr;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Smallest a <= size with a^a = 0, or nullopt.
std::optional<std::size_t> nilpotency_index(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 0;
  Matrix p = a;
  for (std::size_t k = 1; k <= n; ++k) {
    if (p.is_zero()) return k;
    if (k < n) p = p * a;
  }
  return std::nullopt;
}

}  // namespace

EulerianReport check_generalized_eulerian(const WindowModule& m, int offset) {
  EulerianReport report;
  SparseCache sparse;
  std::size_t max_index = 0;
  bool failed = false;
  for (int n = m.lo(); n <= m.hi(); ++n) {
    EulerianDegree deg;
    deg.degree = n;
    deg.dim = m.dim(n);
    deg.exact = m.exact(n);
    // eps column by column from the sparse actions.
    const std::size_t d = deg.dim;
    std::vector<SparseColumn> eps(d);
    bool determined = true;
    for (std::size_t i = 1; i <= m.variables() && determined; ++i) {
      const Action* down = m.d_action(i, n);
      const Action* up = m.x_action(i, n - 1);
      if (!down || !up) {
        determined = false;
        break;
      }
      const SparseAction &su = sparse(*up), &sd = sparse(*down);
      for (std::size_t c = 0; c < d; ++c) {
        SparseColumn part = composed_column(su, sd, c);
        eps[c].escapes = eps[c].escapes || part.escapes;
        for (auto& [r, v] : part.entries) eps[c].entries[r] += v;
      }
    }
    if (!determined) {
      deg.status = NilpotencyStatus::Skipped;
      report.degrees.push_back(deg);
      continue;
    }
    for (auto& col : eps) std::erase_if(col.entries, [](const auto& e) { return is_zero(e.second); });
    // Keep reliable columns whose images stay among kept columns.
    std::vector<bool> keep(d);
    std::vector<std::vector<std::size_t>> users(d);
    std::vector<std::size_t> dropped;
    for (std::size_t c = 0; c < d; ++c) {
      keep[c] = !eps[c].escapes;
      if (!keep[c]) dropped.push_back(c);
      for (const auto& [r, v] : eps[c].entries) users[r].push_back(c);
    }
    while (!dropped.empty()) {
      const std::size_t r = dropped.back();
      dropped.pop_back();
      for (std::size_t c : users[r])
        if (keep[c]) {
          keep[c] = false;
          dropped.push_back(c);
        }
    }
    UnionFind uf(d);
    for (std::size_t c = 0; c < d; ++c)
      if (keep[c])
        for (const auto& [r, v] : eps[c].entries) uf.unite(r, c);
    std::map<std::size_t, std::vector<std::size_t>> blocks;
    for (std::size_t c = 0; c < d; ++c)
      if (keep[c]) blocks[uf.find(c)].push_back(c);
    std::size_t index = 0;
    bool nilpotent = true;
    for (const auto& [root, cols] : blocks) {
      deg.certified_dim += cols.size();
      Matrix block = Matrix::scalar(cols.size(), Rational(-(n + offset)));
      for (std::size_t b = 0; b < cols.size(); ++b)
        for (const auto& [r, v] : eps[cols[b]].entries) {
          const std::size_t a = static_cast<std::size_t>(std::lower_bound(cols.begin(), cols.end(), r) - cols.begin());
          block(a, b) += v;
        }
      auto idx = nilpotency_index(block);
      if (!idx) {
        nilpotent = false;
        break;
      }
      index = std::max(index, *idx);
    }
    if (!nilpotent) {
      deg.certified_dim = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
      deg.status = NilpotencyStatus::NotNilpotent;
      failed = true;
    } else {
      deg.status = NilpotencyStatus::Index;
      deg.index = index;
      max_index = std::max(max_index, index);
    }
    report.degrees.push_back(deg);
  }
  report.verdict = failed ? EulerianVerdict::NotGeneralizedEulerian
                   : max_index <= 1 ? EulerianVerdict::Eulerian
                                    : EulerianVerdict::GeneralizedEulerian;
  return report;
}

std::string to_string(EulerianVerdict v) {
  switch (v) {
    case EulerianVerdict::Eulerian: return "eulerian";
    case EulerianVerdict::GeneralizedEulerian: return "generalized_eulerian";
    case EulerianVerdict::NotGeneralizedEulerian: return "not_generalized_eulerian";
  }
  return "";
}

std::string to_string(NilpotencyStatus s) {
  switch (s) {
    case NilpotencyStatus::Index: return "index";
    case NilpotencyStatus::NotNilpotent: return "not_nilpotent";
    case NilpotencyStatus::Skipped: return "skipped";
  }
  return "";
}

namespace {

struct KoszulPiece {
  bool known = false;
  Homology h1;
  Homology h0;
};

// Induced action on a subquotient: tgt.projection * a * src.cycle_reps.
Action induced_action(const KoszulPiece& src, const KoszulPiece& tgt, const Action* a, bool kernel_side) {
  const Homology& s = kernel_side ? src.h1 : src.h0;
  const Homology& t = kernel_side ? tgt.h1 : tgt.h0;
  const std::size_t sd = src.known ? s.dimension : 0;
  const std::size_t td = tgt.known ? t.dimension : 0;
  if (!src.known || !tgt.known || !a) return Action(Matrix(td, sd), std::vector<bool>(sd, true));
  Matrix map = t.projection * a->map * s.cycle_reps;
  std::vector<bool> esc(sd, false);
  for (std::size_t c = 0; c < sd; ++c)
    for (std::size_t r = 0; r < s.cycle_reps.rows(); ++r)
      if (a->escaping(r) && !is_zero(s.cycle_reps(r, c))) esc[c] = true;
  return Action(std::move(map), std::move(esc));
}

KoszulHomology koszul(const WindowModule& m, std::size_t i, OperatorKind kind) {
  if (i == 0 || i > m.variables()) throw std::invalid_argument("axis out of range");
  const int lo = m.lo(), hi = m.hi();
  const std::size_t len = static_cast<std::size_t>(hi - lo) + 1;
  const int step = kind == OperatorKind::D ? 1 : -1;  // source degree = n + step
  std::vector<KoszulPiece> pieces(len);
  for (int n = lo; n <= hi; ++n) {
    KoszulPiece& p = pieces[static_cast<std::size_t>(n - lo)];
    const int s = n + step;
    const Action* a = kind == OperatorKind::D ? m.d_action(i, s) : m.x_action(i, s);
    if (!a || !a->reliable() || !m.exact(n)) continue;
    if (m.in_window(s) && !m.exact(s)) continue;
    FiniteComplex cx({a->map.cols(), a->map.rows()}, {a->map});
    p.h1 = homology(cx, 0);
    p.h0 = homology(cx, 1);
    p.known = true;
  }
  auto piece = [&](int n) -> const KoszulPiece& { return pieces[static_cast<std::size_t>(n - lo)]; };

  std::vector<std::size_t> others;
  for (std::size_t j = 1; j <= m.variables(); ++j)
    if (j != i) others.push_back(j);

  auto build = [&](bool kernel_side) {
    ModuleData d;
    d.m = m.variables() - 1;
    d.lo = lo;
    d.hi = hi;
    for (int n = lo; n <= hi; ++n) {
      const KoszulPiece& p = piece(n);
      d.dims.push_back(p.known ? (kernel_side ? p.h1.dimension : p.h0.dimension) : 0);
      d.exact.push_back(p.known);
    }
    d.x.resize(others.size());
    d.d.resize(others.size());
    for (std::size_t k = 0; k < others.size(); ++k) {
      const std::size_t j = others[k];
      for (int n = lo; n < hi; ++n) {
        // The kernel of the map out of degree n + step sits inside M_{n+step}; the cokernel is a quotient of M_n.
        const int base_up = kernel_side ? n + step : n;
        const int base_down = kernel_side ? n + 1 + step : n + 1;
        d.x[k].push_back(induced_action(piece(n), piece(n + 1), m.x_action(j, base_up), kernel_side));
        d.d[k].push_back(induced_action(piece(n + 1), piece(n), m.d_action(j, base_down), kernel_side));
      }
    }
    const bool lo_zero = m.dim(lo) == 0, hi_zero = m.dim(hi) == 0;
    if (kind == OperatorKind::D) {
      d.complete_below = m.complete_below() && (!kernel_side || lo_zero);
      d.complete_above = m.complete_above();
    } else {
      d.complete_below = m.complete_below();
      d.complete_above = m.complete_above() && (!kernel_side || hi_zero);
    }
    return WindowModule(std::move(d));
  };
  return KoszulHomology{build(false), build(true)};
}

}  // namespace

KoszulHomology koszul_d(const WindowModule& m, std::size_t i) { return koszul(m, i, OperatorKind::D); }
KoszulHomology koszul_x(const WindowModule& m, std::size_t i) { return koszul(m, i, OperatorKind::X); }

const TorsionDegree* TorsionResult::at(int n) const {
  for (const auto& d : degrees)
    if (d.degree == n) return &d;
  return nullptr;
}

namespace {

struct Generator {
  OperatorKind kind;
  int degree;
  WeylElement element;
  bool monomial;
};

std::vector<Generator> classify(const WindowModule& m, const std::vector<WeylElement>& gens) {
  std::vector<Generator> out;
  std::optional<OperatorKind> kind;
  for (const WeylElement& g : gens) {
    if (g.variables() != m.variables()) throw std::invalid_argument("generator has the wrong variable count");
    if (g.is_zero()) throw std::invalid_argument("zero generator");
    GradedDegree deg = degree(g);
    if (!deg.homogeneous()) throw std::invalid_argument("generator " + to_string(g) + " is not homogeneous");
    if (*deg.value == 0) throw std::invalid_argument("generator " + to_string(g) + " has degree 0");
    bool has_x = false, has_d = false;
    for (const auto& [mono, c] : g.terms()) {
      for (unsigned e : mono.x) has_x |= e > 0;
      for (unsigned e : mono.d) has_d |= e > 0;
    }
    if (has_x && has_d) throw std::invalid_argument("generator " + to_string(g) + " mixes X and d letters");
    OperatorKind k = has_x ? OperatorKind::X : OperatorKind::D;
    if (kind && *kind != k) throw std::invalid_argument("generators mix X-words and d-words");
    kind = k;
    out.push_back({k, *deg.value, g, g.terms().size() == 1});
  }
  return out;
}

// Matrix of a generator from degree n, or nullopt when it needs undetermined data.
std::optional<Action> evaluate(const WindowModule& m, const Generator& g, int n) {
  auto sdim = m.dim_at(n);
  auto tdim = m.dim_at(n + g.degree);
  if (!sdim || !tdim) return std::nullopt;
  Action total(Matrix(*tdim, *sdim));
  for (const auto& [mono, c] : g.element.terms()) {
    const Exponents& ex = g.kind == OperatorKind::X ? mono.x : mono.d;
    Action acc(Matrix::identity(*sdim));
    int cur = n;
    bool vanished = false;
    for (std::size_t i = 0; i < ex.size() && !vanished; ++i)
      for (unsigned k = 0; k < ex[i]; ++k) {
        auto here = m.dim_at(cur);
        if (here && *here == 0) {
          vanished = true;
          break;
        }
        const Action* a = g.kind == OperatorKind::X ? m.x_action(i + 1, cur) : m.d_action(i + 1, cur);
        if (!a) return std::nullopt;
        acc = compose(*a, acc);
        cur += g.kind == OperatorKind::X ? 1 : -1;
      }
    if (vanished) continue;
    total = total + scale(acc, c);
  }
  return total;
}

// Rows spanning the annihilator of a subspace: ker of the result is the subspace.
Matrix constraints_of(const Subspace& s) {
  if (s.ambient() == 0) return Matrix(0, 0);
  return kernel_basis(s.basis.transposed()).transposed();
}

// theta_i = X_i d_i on degree n.
std::optional<Action> theta(const WindowModule& m, std::size_t i, int n) {
  const Action* down = m.d_action(i, n);
  const Action* up = m.x_action(i, n - 1);
  if (!down || !up) return std::nullopt;
  return compose(*up, *down);
}

Rational infinity_norm(const Matrix& a) {
  Rational best = 0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) s += abs(a(r, c));
    if (s > best) best = s;
  }
  return best;
}

std::optional<Matrix> upper_bound_constraints(const WindowModule& m, const std::vector<Generator>& gens, int n) {
  const std::size_t dn = m.dim(n);
  Matrix stacked(0, dn);
  for (const Generator& g : gens) {
    if (!g.monomial) return std::nullopt;
    const WeylMonomial& mono = g.element.terms().begin()->first;
    const Exponents& ex = g.kind == OperatorKind::X ? mono.x : mono.d;
    Matrix product = Matrix::identity(dn);
    for (std::size_t i = 0; i < ex.size(); ++i) {
      if (ex[i] == 0) continue;
      auto th = theta(m, i + 1, n);
      if (!th || !th->reliable()) return std::nullopt;
      Rational norm = infinity_norm(th->map);
      mpz_class bound = norm.get_num() / norm.get_den() + 1;
      const long limit = bound.get_si();
      if (g.kind == OperatorKind::X) {
        for (long k = 1; k <= limit; ++k) product = product * (th->map + Matrix::scalar(dn, Rational(k)));
      } else {
        for (long k = 0; k <= limit; ++k) product = product * (th->map - Matrix::scalar(dn, Rational(k)));
      }
    }
    Matrix next(stacked.rows() + product.rows(), dn);
    for (std::size_t r = 0; r < stacked.rows(); ++r)
      for (std::size_t c = 0; c < dn; ++c) next(r, c) = stacked(r, c);
    for (std::size_t r = 0; r < product.rows(); ++r)
      for (std::size_t c = 0; c < dn; ++c) next(stacked.rows() + r, c) = product(r, c);
    stacked = std::move(next);
  }
  return stacked;
}

Matrix vstack(const std::vector<Matrix>& parts, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.rows();
  Matrix out(rows, cols);
  std::size_t at = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < p.rows(); ++r)
      for (std::size_t c = 0; c < cols; ++c) out(at + r, c) = p(r, c);
    at += p.rows();
  }
  return out;
}

}  // namespace

TorsionResult torsion(const WindowModule& m, const std::vector<WeylElement>& generators) {
  const std::vector<Generator> gens = classify(m, generators);
  const int lo = m.lo(), hi = m.hi();
  const std::size_t len = static_cast<std::size_t>(hi - lo) + 1;

  std::vector<std::vector<std::optional<Action>>> evals(gens.size(), std::vector<std::optional<Action>>(len));
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (int n = lo; n <= hi; ++n) evals[j][static_cast<std::size_t>(n - lo)] = evaluate(m, gens[j], n);

  // K_t(n): vectors killed by every word of length t, restricted to reliable data.
  std::vector<std::optional<Subspace>> current(len), best(len);
  for (int n = lo; n <= hi; ++n) {
    Subspace zero{Matrix(m.dim(n), 0), {}};
    current[static_cast<std::size_t>(n - lo)] = zero;
    best[static_cast<std::size_t>(n - lo)] = zero;
  }
  auto constraint_at = [&](const std::vector<std::optional<Subspace>>& k, int n) -> std::optional<Matrix> {
    if (m.in_window(n)) {
      const auto& s = k[static_cast<std::size_t>(n - lo)];
      if (!s) return std::nullopt;
      return constraints_of(*s);
    }
    auto dn = m.dim_at(n);
    if (dn && *dn == 0) return Matrix(0, 0);
    return std::nullopt;
  };
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<std::optional<Subspace>> next(len);
    bool changed = false;
    for (int n = lo; n <= hi; ++n) {
      const std::size_t dn = m.dim(n);
      std::vector<Matrix> rows;
      bool ok = true;
      std::vector<bool> forced(dn, false);
      for (std::size_t j = 0; j < gens.size() && ok; ++j) {
        const auto& g = evals[j][static_cast<std::size_t>(n - lo)];
        auto c = constraint_at(current, n + gens[j].degree);
        if (!g || !c) {
          ok = false;
          break;
        }
        if (c->rows() > 0) rows.push_back(*c * g->map);
        for (std::size_t col = 0; col < dn; ++col)
          if (g->escaping(col)) forced[col] = true;
      }
      if (!ok) continue;
      for (std::size_t col = 0; col < dn; ++col)
        if (forced[col]) {
          Matrix unit(1, dn);
          unit(0, col) = 1;
          rows.push_back(unit);
        }
      Subspace k = kernel_space(vstack(rows, dn));
      auto& slot = next[static_cast<std::size_t>(n - lo)];
      slot = k;
      auto& b = best[static_cast<std::size_t>(n - lo)];
      if (!b || b->basis.cols() != k.basis.cols() || !(b->basis == k.basis)) changed = true;
      b = k;
    }
    current = std::move(next);
    if (!changed) break;
    if (std::none_of(current.begin(), current.end(), [](const auto& s) { return s.has_value(); })) break;
  }

  TorsionResult result{WindowModule::zero(m.variables(), lo, hi), {}};
  ModuleData d;
  d.m = m.variables();
  d.lo = lo;
  d.hi = hi;
  d.complete_below = m.complete_below();
  d.complete_above = m.complete_above();
  std::vector<Subspace> lower(len);
  for (int n = lo; n <= hi; ++n) {
    const std::size_t k = static_cast<std::size_t>(n - lo);
    lower[k] = best[k] ? *best[k] : Subspace{Matrix(m.dim(n), 0), {}};
    TorsionDegree td;
    td.degree = n;
    td.lower_dim = lower[k].dimension();
    auto upper = upper_bound_constraints(m, gens, n);
    td.upper_dim = upper ? kernel_basis(*upper).cols() : m.dim(n);
    if (upper && upper->rows() == 0) td.upper_dim = m.dim(n);
    td.certified = m.exact(n) && td.lower_dim == td.upper_dim;
    result.degrees.push_back(td);
    d.dims.push_back(td.lower_dim);
    d.exact.push_back(td.certified);
  }
  auto restrict = [&](const Action* a, int from, int to) {
    const Subspace& src = lower[static_cast<std::size_t>(from - lo)];
    const Subspace& tgt = lower[static_cast<std::size_t>(to - lo)];
    Matrix image = a->map * src.basis;
    Coordinates co = coordinates(tgt, image);
    std::vector<bool> esc(src.dimension(), false);
    for (std::size_t c = 0; c < src.dimension(); ++c) {
      esc[c] = !co.inside[c];
      for (std::size_t r = 0; r < src.basis.rows() && !esc[c]; ++r)
        if (a->escaping(r) && !is_zero(src.basis(r, c))) esc[c] = true;
    }
    Matrix map = co.coords;
    for (std::size_t c = 0; c < esc.size(); ++c)
      if (esc[c])
        for (std::size_t r = 0; r < map.rows(); ++r) map(r, c) = 0;
    return Action(std::move(map), std::move(esc));
  };
  d.x.resize(m.variables());
  d.d.resize(m.variables());
  for (std::size_t i = 1; i <= m.variables(); ++i)
    for (int n = lo; n < hi; ++n) {
      d.x[i - 1].push_back(restrict(m.x_action(i, n), n, n + 1));
      d.d[i - 1].push_back(restrict(m.d_action(i, n + 1), n + 1, n));
    }
  result.module = WindowModule(std::move(d));
  return result;
}

DivisibilityReport check_divisibility(const WindowModule& m, std::size_t i, OperatorKind kind) {
  if (i == 0 || i > m.variables()) throw std::invalid_argument("axis out of range");
  WeylElement op = kind == OperatorKind::X ? WeylElement::x(m.variables(), i) : WeylElement::d(m.variables(), i);
  TorsionResult t = torsion(m, {op});
  const WindowModule& n_mod = t.module;
  DivisibilityReport report;
  report.module_is_torsion = true;
  for (const auto& td : t.degrees)
    if (td.certified && td.lower_dim != m.dim(td.degree)) report.module_is_torsion = false;
  for (int n = m.lo(); n <= m.hi(); ++n) {
    DivisibilityDegree dd;
    dd.degree = n;
    const int s = kind == OperatorKind::X ? n - 1 : n + 1;
    const Action* a = kind == OperatorKind::X ? n_mod.x_action(i, s) : n_mod.d_action(i, s);
    bool usable = a && a->reliable() && t.at(n)->certified && (!m.in_window(s) || t.at(s)->certified);
    if (usable) {
      dd.status = rank(a->map) == n_mod.dim(n) ? DivisibilityDegree::Surjective : DivisibilityDegree::NotSurjective;
      if (dd.status == DivisibilityDegree::NotSurjective) report.surjective_everywhere = false;
    }
    report.degrees.push_back(dd);
  }
  return report;
}

ExtensionReport check_extension_closure(const ShortExactSequence& s) {
  ExtensionReport r;
  const WindowModule &a = s.left, &b = s.middle, &c = s.right;
  if (a.lo() != b.lo() || b.lo() != c.lo() || a.hi() != b.hi() || b.hi() != c.hi() ||
      a.variables() != b.variables() || b.variables() != c.variables()) {
    r.problem = "modules do not share a window and variable count";
    return r;
  }
  const std::size_t len = static_cast<std::size_t>(b.hi() - b.lo()) + 1;
  if (s.f.size() != len || s.g.size() != len) {
    r.problem = "expected one matrix per degree for each map";
    return r;
  }
  r.exact = true;
  for (int n = b.lo(); n <= b.hi() && r.exact; ++n) {
    const Matrix& f = s.f[static_cast<std::size_t>(n - b.lo())];
    const Matrix& g = s.g[static_cast<std::size_t>(n - b.lo())];
    if (f.rows() != b.dim(n) || f.cols() != a.dim(n) || g.rows() != c.dim(n) || g.cols() != b.dim(n)) {
      r.exact = false;
      r.problem = "map of the wrong shape at degree " + degree_text(n);
      break;
    }
    if (rank(f) != a.dim(n) || rank(g) != c.dim(n) || !(g * f).is_zero() || b.dim(n) != a.dim(n) + c.dim(n)) {
      r.exact = false;
      r.problem = "sequence is not exact at degree " + degree_text(n);
    }
  }
  if (!r.exact) return r;
  r.equivariant = true;
  auto commutes = [&](const WindowModule& src, const WindowModule& tgt, const std::vector<Matrix>& phi) {
    for (std::size_t i = 1; i <= b.variables(); ++i)
      for (int n = b.lo(); n < b.hi(); ++n) {
        const std::size_t k = static_cast<std::size_t>(n - b.lo());
        Action lx = compose(*tgt.x_action(i, n), Action(phi[k]));
        Action rx = compose(Action(phi[k + 1]), *src.x_action(i, n));
        Action ld = compose(*tgt.d_action(i, n + 1), Action(phi[k + 1]));
        Action rd = compose(Action(phi[k]), *src.d_action(i, n + 1));
        if (!equal_on_reliable(lx, rx) || !equal_on_reliable(ld, rd)) return false;
      }
    return true;
  };
  if (!commutes(a, b, s.f) || !commutes(b, c, s.g)) {
    r.equivariant = false;
    r.problem = "maps do not commute with the actions";
    return r;
  }
  r.left_generalized = check_generalized_eulerian(a).generalized();
  r.middle_generalized = check_generalized_eulerian(b).generalized();
  r.right_generalized = check_generalized_eulerian(c).generalized();
  r.closure_holds = r.middle_generalized == (r.left_generalized && r.right_generalized);
  return r;
}

}  // namespace lcg

#include "lcg/cech.hpp"

#include "lcg/weyl.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>

namespace lcg {

namespace {

bool divides(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

MonomialIdeal::MonomialIdeal(std::size_t m, std::vector<std::vector<unsigned>> generators) : m_(m) {
  if (m == 0 || m > 31) throw std::invalid_argument("variable count must be between 1 and 31");
  if (generators.empty()) throw std::invalid_argument("a monomial ideal needs at least one generator");
  for (const auto& g : generators) {
    if (g.size() != m) throw std::invalid_argument("generator of wrong length");
    if (std::all_of(g.begin(), g.end(), [](unsigned e) { return e == 0; }))
      throw std::invalid_argument("the constant monomial is not allowed as a generator");
  }
  std::sort(generators.begin(), generators.end(), std::greater<>());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  for (std::size_t t = 0; t < generators.size(); ++t) {
    bool redundant = false;
    for (std::size_t u = 0; u < generators.size() && !redundant; ++u)
      if (u != t && divides(generators[u], generators[t])) redundant = true;
    if (!redundant) gens_.push_back(generators[t]);
  }
  if (gens_.size() > 20) throw std::invalid_argument("at most 20 minimal generators are supported");
  for (const auto& g : gens_) {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (g[i] > 0) s |= 1u << i;
    supports_.push_back(s);
  }
}

bool MonomialIdeal::squarefree() const {
  for (const auto& g : gens_)
    for (unsigned e : g)
      if (e > 1) return false;
  return true;
}

unsigned MonomialIdeal::max_exponent() const {
  unsigned best = 0;
  for (const auto& g : gens_)
    for (unsigned e : g) best = std::max(best, e);
  return best;
}

unsigned MonomialIdeal::max_degree() const {
  unsigned best = 0;
  for (const auto& g : gens_) best = std::max(best, std::accumulate(g.begin(), g.end(), 0u));
  return best;
}

MonomialIdeal parse_ideal(std::string_view text, std::size_t m) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty ideal");
  std::vector<std::map<std::size_t, unsigned>> parsed;
  std::size_t pos = 0, max_index = 0;
  auto number = [&](const char* what) {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw ParseError(std::string("expected ") + what + " at position " + std::to_string(pos) + " in '" + s + "'");
    unsigned long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + static_cast<unsigned long>(s[pos++] - '0');
      if (v > 1000) throw ParseError("number too large in '" + s + "'");
    }
    return static_cast<unsigned>(v);
  };
  while (true) {
    std::map<std::size_t, unsigned> mono;
    while (true) {
      if (pos >= s.size() || s[pos] != 'x')
        throw ParseError("expected a variable x<i> at position " + std::to_string(pos) + " in '" + s + "'");
      ++pos;
      unsigned idx = number("a variable index");
      if (idx == 0) throw ParseError("variable indices start at 1");
      unsigned e = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        e = number("an exponent");
      }
      mono[idx] += e;
      max_index = std::max<std::size_t>(max_index, idx);
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    parsed.push_back(std::move(mono));
    if (pos == s.size()) break;
    if (s[pos] != ',') throw ParseError("expected ',' at position " + std::to_string(pos) + " in '" + s + "'");
    ++pos;
  }
  if (m == 0) m = max_index;
  if (m < max_index) throw ParseError("ideal mentions x" + std::to_string(max_index) + " but m = " + std::to_string(m));
  std::vector<std::vector<unsigned>> gens;
  for (const auto& mono : parsed) {
    std::vector<unsigned> g(m, 0);
    for (const auto& [i, e] : mono) g[i - 1] = e;
    gens.push_back(std::move(g));
  }
  try {
    return MonomialIdeal(m, std::move(gens));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string to_string(const MonomialIdeal& ideal) {
  std::string out;
  for (const auto& g : ideal.generators()) {
    if (!out.empty()) out += ", ";
    std::string mono;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += "x" + std::to_string(i + 1);
      if (g[i] > 1) mono += "^" + std::to_string(g[i]);
    }
    out += mono;
  }
  return out;
}

std::uint32_t negative_mask(const Multidegree& a) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < 0) mask |= 1u << i;
  return mask;
}

namespace {

// Subsets of {0..s-1} of size j, in lexicographic order of their sorted index tuples.
std::vector<std::uint32_t> subsets_of_size(std::size_t s, std::size_t j) {
  std::vector<std::uint32_t> out;
  std::vector<std::size_t> idx(j);
  std::iota(idx.begin(), idx.end(), 0);
  if (j > s) return out;
  while (true) {
    std::uint32_t mask = 0;
    for (std::size_t v : idx) mask |= 1u << v;
    out.push_back(mask);
    std::size_t k = j;
    while (k > 0 && idx[k - 1] == s - j + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t t = k; t < j; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

struct SliceShape {
  std::vector<std::vector<std::uint32_t>> present;
  std::vector<Matrix> diffs;
};

SliceShape slice_shape(const MonomialIdeal& ideal, std::uint32_t negatives) {
  const std::size_t s = ideal.size();
  SliceShape shape;
  shape.present.resize(s + 1);
  for (std::size_t j = 0; j <= s; ++j)
    for (std::uint32_t t : subsets_of_size(s, j)) {
      std::uint32_t covered = 0;
      for (std::size_t g = 0; g < s; ++g)
        if (t >> g & 1) covered |= ideal.support(g);
      if ((negatives & ~covered) == 0) shape.present[j].push_back(t);
    }
  for (std::size_t j = 0; j < s; ++j) {
    const auto& src = shape.present[j];
    const auto& tgt = shape.present[j + 1];
    Matrix d(tgt.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c)
      for (std::size_t r = 0; r < tgt.size(); ++r) {
        std::uint32_t added = tgt[r] & ~src[c];
        if ((tgt[r] & src[c]) != src[c] || std::popcount(added) != 1) continue;
        int below = std::popcount(src[c] & (added - 1));
        d(r, c) = below % 2 ? -1 : 1;
      }
    shape.diffs.push_back(std::move(d));
  }
  return shape;
}

Matrix inclusion(const std::vector<std::uint32_t>& from, const std::vector<std::uint32_t>& to) {
  Matrix out(to.size(), from.size());
  std::size_t r = 0;
  for (std::size_t c = 0; c < from.size(); ++c) {
    while (r < to.size() && to[r] != from[c]) ++r;
    if (r == to.size()) throw std::logic_error("localization present at a source multidegree is missing at the target");
    out(r, c) = 1;
  }
  return out;
}

}  // namespace

MultidegreeSlice slice(const MonomialIdeal& ideal, const Multidegree& a) {
  if (a.size() != ideal.variables()) throw std::invalid_argument("multidegree of wrong length");
  SliceShape shape = slice_shape(ideal, negative_mask(a));
  std::vector<std::size_t> dims;
  for (const auto& p : shape.present) dims.push_back(p.size());
  return MultidegreeSlice{a, std::move(shape.present), FiniteComplex(std::move(dims), std::move(shape.diffs))};
}

std::size_t component_dim(const MonomialIdeal& ideal, std::size_t i, const Multidegree& a) {
  if (i > std::max(ideal.size(), ideal.variables())) throw std::out_of_range("cohomological index out of range");
  if (i > ideal.size()) return 0;
  return homology(slice(ideal, a).complex, i).dimension;
}

Matrix x_chain(const MultidegreeSlice& from, const MultidegreeSlice& to, std::size_t j) {
  return inclusion(from.present_sets.at(j), to.present_sets.at(j));
}

Matrix d_chain(const MultidegreeSlice& from, const MultidegreeSlice& to, std::size_t i, std::size_t j) {
  const int scalar = from.a.at(i - 1);
  if (scalar == 0) return Matrix(to.present_sets.at(j).size(), from.present_sets.at(j).size());
  return inclusion(from.present_sets.at(j), to.present_sets.at(j)) * Rational(scalar);
}

bool Box::contains(const Multidegree& a) const {
  if (a.size() != bound.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i]) > bound[i]) return false;
  return true;
}

Box uniform_box(std::size_t m, int b) { return Box{std::vector<int>(m, b)}; }

bool pattern_realizable(std::size_t m, std::uint32_t negatives, int n) {
  const std::size_t k = static_cast<std::size_t>(std::popcount(negatives));
  if (k == 0) return n >= 0;
  if (k == m) return n <= -static_cast<int>(m);
  return true;
}

namespace {

// Some point of the box with this sign pattern has total degree n.
bool pattern_in_box(const Box& box, std::uint32_t negatives, int n) {
  long min_sum = 0, max_sum = 0;
  for (std::size_t i = 0; i < box.bound.size(); ++i) {
    if (negatives >> i & 1) {
      if (box.bound[i] < 1) return false;
      min_sum -= box.bound[i];
      max_sum -= 1;
    } else {
      max_sum += box.bound[i];
    }
  }
  return n >= min_sum && n <= max_sum;
}

std::string check_box(const MonomialIdeal& ideal, const Box& box, int lo, int hi) {
  const std::size_t m = ideal.variables();
  if (box.bound.size() != m) return "box has the wrong number of axes";
  for (int b : box.bound)
    if (b < 1) return "box bounds must be at least 1";
  const int radius = std::max(std::abs(lo), std::abs(hi));
  if (!ideal.squarefree()) {
    for (int b : box.bound)
      if (b < static_cast<int>(ideal.max_exponent()) + radius)
        return "box bound must be at least the largest exponent plus the window radius (" +
               std::to_string(ideal.max_exponent() + static_cast<unsigned>(radius)) + ")";
  }
  for (int n = lo; n <= hi; ++n)
    for (std::uint32_t p = 0; p < (1u << m); ++p)
      if (pattern_realizable(m, p, n) && !pattern_in_box(box, p, n))
        return "box misses a sign pattern realizable at degree " + std::to_string(n);
  return "";
}

}  // namespace

void validate_box(const MonomialIdeal& ideal, const Box& box, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("empty window");
  std::string problem = check_box(ideal, box, lo, hi);
  if (!problem.empty()) throw std::invalid_argument(problem);
}

Box default_box(const MonomialIdeal& ideal, int lo, int hi) {
  const int m = static_cast<int>(ideal.variables());
  const int radius = std::max(std::abs(lo), std::abs(hi));
  int b = std::max(radius + static_cast<int>(ideal.max_degree()), m + 2);
  if (!ideal.squarefree()) b = std::max(b, radius + static_cast<int>(ideal.max_exponent()));
  while (!check_box(ideal, uniform_box(ideal.variables(), b), lo, hi).empty()) ++b;
  return uniform_box(ideal.variables(), b);
}

std::vector<Multidegree> box_points(const Box& box, int n) {
  const std::size_t m = box.bound.size();
  std::vector<Multidegree> out;
  if (m == 0) return out;
  Multidegree a(m);
  // Suffix bounds let the recursion prune coordinates that cannot reach n.
  std::vector<long> suffix(m + 1, 0);
  for (std::size_t i = m; i-- > 0;) suffix[i] = suffix[i + 1] + box.bound[i];
  auto rec = [&](auto&& self, std::size_t i, long remaining) -> void {
    if (i + 1 == m) {
      if (std::labs(remaining) <= box.bound[i]) {
        a[i] = static_cast<int>(remaining);
        out.push_back(a);
      }
      return;
    }
    for (int v = -box.bound[i]; v <= box.bound[i]; ++v) {
      long rest = remaining - v;
      if (std::labs(rest) > suffix[i + 1]) continue;
      a[i] = v;
      self(self, i + 1, rest);
    }
  };
  rec(rec, 0, n);
  return out;
}

std::string to_string(ZStatus s) {
  switch (s) {
    case ZStatus::Nonzero: return "NONZERO";
    case ZStatus::ZeroInBox: return "ZERO_IN_BOX";
    case ZStatus::ZeroCertified: return "ZERO_CERTIFIED";
  }
  return "";
}

namespace {

long l1(const Multidegree& a) {
  long s = 0;
  for (int v : a) s += std::abs(v);
  return s;
}

bool witness_before(const Multidegree& a, const Multidegree& b) {
  long la = l1(a), lb = l1(b);
  if (la != lb) return la < lb;
  return a < b;
}

}  // namespace

DegreeStatus zdegree_status(const MonomialIdeal& ideal, std::size_t i, int n, const Box& box) {
  validate_box(ideal, box, n, n);
  if (i > std::max(ideal.size(), ideal.variables())) throw std::out_of_range("cohomological index out of range");
  const std::size_t m = ideal.variables();
  DegreeStatus st;
  st.degree = n;
  std::map<std::uint32_t, std::size_t> pattern_dim;
  bool stable = true;
  for (const Multidegree& a : box_points(box, n)) {
    std::size_t dim = component_dim(ideal, i, a);
    std::uint32_t p = negative_mask(a);
    auto [it, inserted] = pattern_dim.try_emplace(p, dim);
    if (!inserted && it->second != dim) stable = false;
    if (dim > 0 && (!st.witness || witness_before(a, *st.witness))) {
      st.witness = a;
      st.witness_dim = dim;
    }
  }
  if (st.witness) {
    st.status = ZStatus::Nonzero;
    return st;
  }
  bool covered = true;
  for (std::uint32_t p = 0; p < (1u << m); ++p)
    if (pattern_realizable(m, p, n) && !pattern_dim.count(p)) covered = false;
  st.status = ideal.squarefree() && stable && covered ? ZStatus::ZeroCertified : ZStatus::ZeroInBox;
  return st;
}

std::vector<DegreeStatus> zdegree_statuses(const MonomialIdeal& ideal, std::size_t i, int lo, int hi, const Box& box) {
  validate_box(ideal, box, lo, hi);
  std::vector<DegreeStatus> out;
  for (int n = lo; n <= hi; ++n) out.push_back(zdegree_status(ideal, i, n, box));
  return out;
}

namespace {

struct PatternData {
  MultidegreeSlice slice;
  Homology h;
};

class SliceCache {
 public:
  SliceCache(const MonomialIdeal& ideal, std::size_t i) : ideal_(ideal), i_(i) {}

  // The complex depends only on the sign pattern; the multidegree is refreshed per call.
  const PatternData& at(const Multidegree& a) {
    std::uint32_t p = negative_mask(a);
    auto it = cache_.find(p);
    if (it == cache_.end()) {
      MultidegreeSlice s = slice(ideal_, a);
      Homology h = i_ < s.complex.length() ? homology(s.complex, i_) : Homology{};
      it = cache_.emplace(p, PatternData{std::move(s), std::move(h)}).first;
    }
    it->second.slice.a = a;
    return it->second;
  }

  std::size_t dim(const Multidegree& a) { return at(a).h.dimension; }

 private:
  const MonomialIdeal& ideal_;
  std::size_t i_;
  std::map<std::uint32_t, PatternData> cache_;
};

}  // namespace

WindowModule assemble_window_module(const MonomialIdeal& ideal, std::size_t i, int lo, int hi, const Box& box) {
  validate_box(ideal, box, lo, hi);
  const std::size_t m = ideal.variables();
  if (i > std::max(ideal.size(), m)) throw std::out_of_range("cohomological index out of range");
  SliceCache cache(ideal, i);
  const bool has_spot = i < ideal.size() + 1;

  // Basis per degree: box points with nonzero H^i, each repeated by its dimension.
  struct Point {
    Multidegree a;
    std::size_t offset;
    std::size_t dim;
  };
  const std::size_t len = static_cast<std::size_t>(hi - lo) + 1;
  std::vector<std::vector<Point>> points(len);
  std::vector<std::map<Multidegree, std::size_t>> where(len);
  ModuleData d;
  d.m = m;
  d.lo = lo;
  d.hi = hi;
  d.labels.resize(len);
  for (int n = lo; n <= hi; ++n) {
    const std::size_t k = static_cast<std::size_t>(n - lo);
    std::size_t offset = 0;
    if (has_spot)
      for (const Multidegree& a : box_points(box, n)) {
        std::size_t h = cache.dim(a);
        if (h == 0) continue;
        where[k][a] = points[k].size();
        points[k].push_back({a, offset, h});
        for (std::size_t t = 0; t < h; ++t) d.labels[k].push_back(a);
        offset += h;
      }
    d.dims.push_back(offset);
  }

  // Exactness and completeness from the nonzero sign patterns.
  std::vector<std::uint32_t> nonzero_patterns;
  if (has_spot)
    for (std::uint32_t p = 0; p < (1u << m); ++p) {
      Multidegree rep(m);
      for (std::size_t t = 0; t < m; ++t) rep[t] = (p >> t & 1) ? -1 : 0;
      if (cache.dim(rep) > 0) nonzero_patterns.push_back(p);
    }
  const bool squarefree = ideal.squarefree();
  bool all_negative = true, all_nonnegative = true, any_mixed = false;
  for (std::uint32_t p : nonzero_patterns) {
    const int k = std::popcount(p);
    if (k != static_cast<int>(m)) all_negative = false;
    if (k != 0) all_nonnegative = false;
    if (k != 0 && k != static_cast<int>(m)) any_mixed = true;
  }
  for (int n = lo; n <= hi; ++n) {
    bool exact = squarefree && !any_mixed;
    for (std::uint32_t p : nonzero_patterns) {
      if (!exact) break;
      if (!pattern_realizable(m, p, n)) continue;
      // Every point of a pure pattern at degree n must lie in the box.
      for (std::size_t t = 0; t < m; ++t) {
        const int need = p == 0 ? n : -(n + static_cast<int>(m) - 1);
        if (box.bound[t] < need) exact = false;
      }
    }
    d.exact.push_back(exact);
  }
  const bool zero = nonzero_patterns.empty();
  d.complete_below = squarefree && (zero || (all_nonnegative && lo <= 0));
  d.complete_above = squarefree && (zero || (all_negative && hi >= -static_cast<int>(m)));

  d.x.assign(m, {});
  d.d.assign(m, {});
  for (std::size_t ax = 1; ax <= m; ++ax) {
    for (int n = lo; n < hi; ++n) {
      const std::size_t k = static_cast<std::size_t>(n - lo);
      // X_ax from degree n to n+1.
      Matrix xm(d.dims[k + 1], d.dims[k]);
      std::vector<bool> xesc(d.dims[k], false);
      for (const Point& pt : points[k]) {
        Multidegree b = pt.a;
        b[ax - 1] += 1;
        auto hit = where[k + 1].find(b);
        if (hit == where[k + 1].end()) {
          if (!box.contains(b) && cache.dim(b) > 0)
            for (std::size_t t = 0; t < pt.dim; ++t) xesc[pt.offset + t] = true;
          continue;
        }
        const Point& tp = points[k + 1][hit->second];
        const PatternData& src = cache.at(pt.a);
        const MultidegreeSlice src_slice = src.slice;
        const Homology src_h = src.h;
        const PatternData& tgt = cache.at(b);
        Matrix block = induced_map(src_h, tgt.h, x_chain(src_slice, tgt.slice, i));
        for (std::size_t r = 0; r < block.rows(); ++r)
          for (std::size_t c = 0; c < block.cols(); ++c) xm(tp.offset + r, pt.offset + c) = block(r, c);
      }
      d.x[ax - 1].push_back(Action(std::move(xm), std::move(xesc)));

      // d_ax from degree n+1 to n.
      Matrix dm(d.dims[k], d.dims[k + 1]);
      std::vector<bool> desc(d.dims[k + 1], false);
      for (const Point& pt : points[k + 1]) {
        if (pt.a[ax - 1] == 0) continue;
        Multidegree b = pt.a;
        b[ax - 1] -= 1;
        auto hit = where[k].find(b);
        if (hit == where[k].end()) {
          if (!box.contains(b) && cache.dim(b) > 0)
            for (std::size_t t = 0; t < pt.dim; ++t) desc[pt.offset + t] = true;
          continue;
        }
        const Point& tp = points[k][hit->second];
        const PatternData& src = cache.at(pt.a);
        const MultidegreeSlice src_slice = src.slice;
        const Homology src_h = src.h;
        const PatternData& tgt = cache.at(b);
        Matrix block = induced_map(src_h, tgt.h, d_chain(src_slice, tgt.slice, ax, i));
        for (std::size_t r = 0; r < block.rows(); ++r)
          for (std::size_t c = 0; c < block.cols(); ++c) dm(tp.offset + r, pt.offset + c) = block(r, c);
      }
      d.d[ax - 1].push_back(Action(std::move(dm), std::move(desc)));
    }
  }
  return WindowModule(std::move(d));
}

WindowModule top_lc_oracle(std::size_t m, int lo, int hi) {
  if (m == 0) throw std::invalid_argument("m must be at least 1");
  if (lo > hi) throw std::invalid_argument("empty window");
  if (hi > -static_cast<int>(m)) throw std::invalid_argument("window must lie in degrees <= -m");
  const std::size_t len = static_cast<std::size_t>(hi - lo) + 1;
  ModuleData d;
  d.m = m;
  d.lo = lo;
  d.hi = hi;
  d.complete_above = hi == -static_cast<int>(m);
  std::vector<std::vector<Multidegree>> basis(len);
  for (int n = lo; n <= hi; ++n) {
    // All a <= (-1,...,-1) with |a| = n, lexicographic.
    std::vector<Multidegree>& out = basis[static_cast<std::size_t>(n - lo)];
    Multidegree a(m);
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
      const int slots = static_cast<int>(m - i - 1);
      if (slots == 0) {
        if (remaining <= -1) {
          a[i] = remaining;
          out.push_back(a);
        }
        return;
      }
      for (int v = remaining + slots; v <= -1; ++v) {
        a[i] = v;
        self(self, i + 1, remaining - v);
      }
    };
    rec(rec, 0, n);
    d.dims.push_back(out.size());
    d.labels.push_back(out);
  }
  auto index_of = [&](int n, const Multidegree& a) -> std::optional<std::size_t> {
    const auto& b = basis[static_cast<std::size_t>(n - lo)];
    auto it = std::find(b.begin(), b.end(), a);
    if (it == b.end()) return std::nullopt;
    return static_cast<std::size_t>(it - b.begin());
  };
  d.x.assign(m, {});
  d.d.assign(m, {});
  for (std::size_t i = 0; i < m; ++i)
    for (int n = lo; n < hi; ++n) {
      const auto& low = basis[static_cast<std::size_t>(n - lo)];
      const auto& high = basis[static_cast<std::size_t>(n + 1 - lo)];
      Matrix xm(high.size(), low.size());
      for (std::size_t c = 0; c < low.size(); ++c) {
        Multidegree b = low[c];
        if (b[i] == -1) continue;
        b[i] += 1;
        xm(*index_of(n + 1, b), c) = 1;
      }
      Matrix dm(low.size(), high.size());
      for (std::size_t c = 0; c < high.size(); ++c) {
        Multidegree b = high[c];
        b[i] -= 1;
        dm(*index_of(n, b), c) = high[c][i];
      }
      d.x[i].push_back(Action(std::move(xm)));
      d.d[i].push_back(Action(std::move(dm)));
    }
  return WindowModule(std::move(d));
}

}  // namespace lcg

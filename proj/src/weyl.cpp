#include "lcg/weyl.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace lcg {

unsigned WeylMonomial::order() const {
  return std::accumulate(x.begin(), x.end(), 0u) + std::accumulate(d.begin(), d.end(), 0u);
}

int WeylMonomial::degree() const {
  return static_cast<int>(std::accumulate(x.begin(), x.end(), 0u)) -
         static_cast<int>(std::accumulate(d.begin(), d.end(), 0u));
}

WeylElement WeylElement::constant(std::size_t m, const Rational& c) {
  WeylElement e(m);
  e.add_term({Exponents(m, 0), Exponents(m, 0)}, c);
  return e;
}

WeylElement WeylElement::x(std::size_t m, std::size_t i) {
  if (i == 0 || i > m) throw std::invalid_argument("variable index out of range");
  Exponents ex(m, 0);
  ex[i - 1] = 1;
  return monomial(std::move(ex), Exponents(m, 0));
}

WeylElement WeylElement::d(std::size_t m, std::size_t i) {
  if (i == 0 || i > m) throw std::invalid_argument("variable index out of range");
  Exponents ed(m, 0);
  ed[i - 1] = 1;
  return monomial(Exponents(m, 0), std::move(ed));
}

WeylElement WeylElement::monomial(Exponents x, Exponents d, const Rational& c) {
  if (x.size() != d.size()) throw std::invalid_argument("exponent vectors of different length");
  WeylElement e(x.size());
  e.add_term({std::move(x), std::move(d)}, c);
  return e;
}

void WeylElement::add_term(const WeylMonomial& mono, const Rational& c) {
  if (mono.x.size() != m_ || mono.d.size() != m_) throw std::invalid_argument("monomial has wrong variable count");
  if (lcg::is_zero(c)) return;
  auto [it, inserted] = terms_.try_emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (lcg::is_zero(it->second)) terms_.erase(it);
  }
}

WeylElement& WeylElement::operator+=(const WeylElement& other) {
  if (other.m_ != m_) throw std::invalid_argument("mismatched variable counts");
  for (const auto& [mono, c] : other.terms_) add_term(mono, c);
  return *this;
}

WeylElement& WeylElement::operator-=(const WeylElement& other) {
  if (other.m_ != m_) throw std::invalid_argument("mismatched variable counts");
  for (const auto& [mono, c] : other.terms_) add_term(mono, -c);
  return *this;
}

WeylElement& WeylElement::operator*=(const Rational& c) {
  if (lcg::is_zero(c)) {
    terms_.clear();
    return *this;
  }
  for (auto& [mono, coeff] : terms_) coeff *= c;
  return *this;
}

namespace {

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpz_class falling(unsigned n, unsigned k) {
  mpz_class r = 1;
  for (unsigned j = 0; j < k; ++j) r *= n - j;
  return r;
}

// (X^a d^b)(X^c d^e): per variable, d^b X^c = sum_k C(b,k) c!/(c-k)! X^(c-k) d^(b-k).
void multiply_monomials(const WeylMonomial& left, const WeylMonomial& right, const Rational& coeff,
                        WeylElement& out) {
  const std::size_t m = left.x.size();
  WeylMonomial mono{Exponents(m), Exponents(m)};
  std::vector<unsigned> k(m, 0);
  // Odometer over k_i in [0, min(b_i, c_i)].
  while (true) {
    Rational c = coeff;
    for (std::size_t i = 0; i < m; ++i) {
      const unsigned b = left.d[i], cc = right.x[i];
      c *= binomial(b, k[i]) * falling(cc, k[i]);
      mono.x[i] = left.x[i] + cc - k[i];
      mono.d[i] = b - k[i] + right.d[i];
    }
    out.add_term(mono, c);
    std::size_t i = 0;
    for (; i < m; ++i) {
      if (k[i] < std::min(left.d[i], right.x[i])) {
        ++k[i];
        break;
      }
      k[i] = 0;
    }
    if (i == m) break;
  }
}

}  // namespace

WeylElement operator*(const WeylElement& a, const WeylElement& b) {
  if (a.m_ != b.m_) throw std::invalid_argument("mismatched variable counts");
  WeylElement out(a.m_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) multiply_monomials(ma, mb, ca * cb, out);
  return out;
}

WeylElement multiply(const WeylElement& a, const WeylElement& b) { return a * b; }

WeylElement power(const WeylElement& a, unsigned k) {
  WeylElement r = WeylElement::constant(a.variables(), 1);
  for (unsigned j = 0; j < k; ++j) r = r * a;
  return r;
}

GradedDegree degree(const WeylElement& a) {
  if (a.is_zero()) return {0};
  std::optional<int> deg;
  for (const auto& [mono, c] : a.terms()) {
    int d = mono.degree();
    if (deg && *deg != d) return {std::nullopt};
    deg = d;
  }
  return {deg};
}

WeylElement euler(std::size_t m) {
  if (m == 0) throw std::invalid_argument("euler operator needs m >= 1");
  WeylElement e(m);
  for (std::size_t i = 1; i <= m; ++i) e += WeylElement::x(m, i) * WeylElement::d(m, i);
  return e;
}

namespace {

// Image of X^a d^b under the automorphism sending X_i -> x_image(i), d_i -> d_image(i).
template <class XImage, class DImage>
WeylElement substitute(const WeylElement& a, XImage x_image, DImage d_image) {
  const std::size_t m = a.variables();
  WeylElement out(m);
  for (const auto& [mono, c] : a.terms()) {
    WeylElement t = WeylElement::constant(m, c);
    for (std::size_t i = 0; i < m; ++i) t = t * power(x_image(i + 1), mono.x[i]);
    for (std::size_t i = 0; i < m; ++i) t = t * power(d_image(i + 1), mono.d[i]);
    out += t;
  }
  return out;
}

}  // namespace

WeylElement fourier(const WeylElement& a) {
  const std::size_t m = a.variables();
  return substitute(
      a, [m](std::size_t i) { return WeylElement::d(m, i); },
      [m](std::size_t i) { return -WeylElement::x(m, i); });
}

WeylElement inverse_fourier(const WeylElement& a) {
  const std::size_t m = a.variables();
  return substitute(
      a, [m](std::size_t i) { return -WeylElement::d(m, i); },
      [m](std::size_t i) { return WeylElement::x(m, i); });
}

namespace {

std::string monomial_text(const WeylMonomial& mono) {
  std::string s;
  auto factor = [&s](char letter, std::size_t i, unsigned e) {
    if (e == 0) return;
    if (!s.empty()) s += '*';
    s += letter + std::to_string(i + 1);
    if (e > 1) s += '^' + std::to_string(e);
  };
  for (std::size_t i = 0; i < mono.x.size(); ++i) factor('x', i, mono.x[i]);
  for (std::size_t i = 0; i < mono.d.size(); ++i) factor('d', i, mono.d[i]);
  return s;
}

}  // namespace

std::string to_string(const WeylElement& a) {
  if (a.is_zero()) return "0";
  std::vector<std::pair<const WeylMonomial*, const Rational*>> terms;
  for (const auto& [mono, c] : a.terms()) terms.emplace_back(&mono, &c);
  // Highest order first, then descending lexicographic on (x, d).
  std::sort(terms.begin(), terms.end(), [](const auto& l, const auto& r) {
    unsigned ol = l.first->order(), orr = r.first->order();
    if (ol != orr) return ol > orr;
    return *r.first < *l.first;
  });
  std::string out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Rational& c = *terms[k].second;
    const std::string mono = monomial_text(*terms[k].first);
    const bool negative = sgn(c) < 0;
    if (k == 0)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    Rational mag = abs(c);
    if (mono.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += mono;
    else
      out += to_string(mag) + "*" + mono;
  }
  return out;
}

namespace {

struct RawFactor {
  enum Kind { Number, X, D, Group } kind;
  Rational value;
  std::size_t index = 0;
};

class WeylParser {
 public:
  explicit WeylParser(std::string_view text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  // First pass only discovers the largest index so m can be inferred.
  std::size_t max_index() const {
    std::size_t best = 0;
    for (std::size_t k = 0; k < s_.size(); ++k) {
      if ((s_[k] == 'x' || s_[k] == 'd') && k + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k + 1]))) {
        std::size_t j = k + 1, v = 0;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) v = v * 10 + (s_[j++] - '0');
        best = std::max(best, v);
      }
    }
    return best;
  }

  WeylElement parse(std::size_t m) {
    m_ = m;
    pos_ = 0;
    if (s_.empty()) throw ParseError("empty expression");
    WeylElement e = expr();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  unsigned long number() {
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a number");
    unsigned long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(s_[pos_++] - '0');
      if (v > 1000000000UL) fail("number too large");
    }
    return v;
  }

  mpz_class big_number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return mpz_class(s_.substr(start, pos_ - start));
  }

  WeylElement expr() {
    WeylElement acc(m_);
    bool negative = false;
    if (peek('+') || peek('-')) negative = s_[pos_++] == '-';
    while (true) {
      WeylElement t = term();
      if (negative) acc -= t; else acc += t;
      if (peek('+') || peek('-')) {
        negative = s_[pos_++] == '-';
        continue;
      }
      return acc;
    }
  }

  WeylElement term() {
    WeylElement acc = factor();
    while (peek('*')) {
      ++pos_;
      acc = acc * factor();
    }
    return acc;
  }

  WeylElement factor() {
    WeylElement base = atom();
    if (peek('^')) {
      ++pos_;
      unsigned long e = number();
      if (e > 64) fail("exponent too large");
      base = power(base, static_cast<unsigned>(e));
    }
    return base;
  }

  WeylElement atom() {
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      WeylElement e = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return e;
    }
    if (c == 'x' || c == 'd') {
      ++pos_;
      unsigned long i = number();
      if (i == 0 || i > m_) fail("variable index out of range");
      return c == 'x' ? WeylElement::x(m_, i) : WeylElement::d(m_, i);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num = big_number();
      mpz_class den = 1;
      if (peek('/')) {
        ++pos_;
        den = big_number();
        if (den == 0) fail("zero denominator");
      }
      Rational q(num, den);
      q.canonicalize();
      return WeylElement::constant(m_, q);
    }
    fail("unexpected character");
  }

  std::string s_;
  std::size_t pos_ = 0;
  std::size_t m_ = 0;
};

}  // namespace

WeylElement parse_weyl(std::string_view text, std::size_t m) {
  WeylParser p(text);
  std::size_t needed = std::max<std::size_t>(p.max_index(), 1);
  if (m == 0) m = needed;
  if (m < needed) throw ParseError("expression mentions variable " + std::to_string(needed) + " but m = " + std::to_string(m));
  return p.parse(m);
}

LaurentBasis::LaurentBasis(std::size_t m, std::vector<std::vector<int>> monomials)
    : m_(m), monomials_(std::move(monomials)) {
  for (std::size_t k = 0; k < monomials_.size(); ++k) {
    if (monomials_[k].size() != m_) throw std::invalid_argument("Laurent monomial of wrong length");
    if (!index_.emplace(monomials_[k], k).second) throw std::invalid_argument("duplicate Laurent monomial");
  }
}

std::optional<std::size_t> LaurentBasis::index_of(const std::vector<int>& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Rational> apply(const WeylElement& a, const LaurentBasis& basis, std::span<const Rational> v) {
  if (a.variables() != basis.variables()) throw std::invalid_argument("variable count mismatch in apply");
  if (v.size() != basis.size()) throw std::invalid_argument("vector length does not match the basis");
  const std::size_t m = basis.variables();
  std::vector<Rational> out(basis.size());
  std::vector<int> target(m);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (is_zero(v[k])) continue;
    const auto& src = basis.monomial(k);
    for (const auto& [mono, c] : a.terms()) {
      // d^b X^v = prod_i v_i (v_i - 1) ... (v_i - b_i + 1) X^(v - b), then X^a shifts.
      Rational coeff = c * v[k];
      for (std::size_t i = 0; i < m && !is_zero(coeff); ++i) {
        for (unsigned j = 0; j < mono.d[i]; ++j) coeff *= src[i] - static_cast<int>(j);
        target[i] = src[i] - static_cast<int>(mono.d[i]) + static_cast<int>(mono.x[i]);
      }
      if (is_zero(coeff)) continue;
      auto idx = basis.index_of(target);
      if (!idx) {
        std::ostringstream os;
        os << "action leaves the basis window at X^(";
        for (std::size_t i = 0; i < m; ++i) os << (i ? "," : "") << target[i];
        os << ")";
        throw WindowOverflow(os.str());
      }
      out[*idx] += coeff;
    }
  }
  return out;
}

}  // namespace lcg

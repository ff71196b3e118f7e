#ifndef PPLAB_ZPOLY_HPP
#define PPLAB_ZPOLY_HPP

// Sparse polynomials in the fixed ring R[x,y,z,A,B,a,b,c].
//
// A monomial is packed into a 64-bit key, one byte per variable with x in the
// most significant byte, so that comparing keys as integers is lexicographic
// order with x > y > z > A > B > a > b > c. Terms are kept sorted in
// descending graded-lex order (total degree first, then key).
//
// The coefficient ring is a template parameter: mpz_class gives ZPoly, the
// exact integer ring; Mod61 gives the image used by probabilistic checks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "pplab/mod61.hpp"

namespace pplab {

enum class Var : std::uint8_t { x = 0, y, z, A, B, a, b, c };
inline constexpr int kNumVars = 8;
using Exponents = std::array<int, kNumVars>;

std::string_view var_name(Var v);
Var parse_var(std::string_view name);

namespace zdetail {

using Key = std::uint64_t;
inline constexpr int kMaxExp = 255;

constexpr int shift_of(Var v) { return 8 * (7 - static_cast<int>(v)); }

inline int exponent(Key k, Var v) { return static_cast<int>((k >> shift_of(v)) & 0xFF); }

inline int total_degree(Key k) {
  // byte sum via two SWAR folds
  std::uint64_t s = (k & 0x00FF00FF00FF00FFULL) + ((k >> 8) & 0x00FF00FF00FF00FFULL);
  s = (s & 0x0000FFFF0000FFFFULL) + ((s >> 16) & 0x0000FFFF0000FFFFULL);
  return static_cast<int>((s & 0xFFFFFFFFULL) + (s >> 32));
}

inline Key pack(const Exponents& e) {
  Key k = 0;
  for (int i = 0; i < kNumVars; ++i) {
    if (e[i] < 0) throw std::invalid_argument("negative exponent");
    if (e[i] > kMaxExp) throw std::overflow_error("exponent exceeds 255");
    k |= static_cast<Key>(e[i]) << shift_of(static_cast<Var>(i));
  }
  return k;
}

inline Exponents unpack(Key k) {
  Exponents e{};
  for (int i = 0; i < kNumVars; ++i) e[i] = exponent(k, static_cast<Var>(i));
  return e;
}

// a > b in graded lex.
inline bool grlex_greater(Key a, Key b) {
  const int da = total_degree(a), db = total_degree(b);
  return da != db ? da > db : a > b;
}

struct GrlexGreater {
  bool operator()(Key a, Key b) const { return grlex_greater(a, b); }
};

// Whether monomial b divides monomial a (byte-wise a >= b).
inline bool divides(Key b, Key a) {
  for (int i = 0; i < kNumVars; ++i)
    if (exponent(b, static_cast<Var>(i)) > exponent(a, static_cast<Var>(i))) return false;
  return true;
}

template <typename R>
struct Ring;

template <>
struct Ring<mpz_class> {
  static bool is_zero(const mpz_class& a) { return sgn(a) == 0; }
  static void addmul(mpz_class& acc, const mpz_class& a, const mpz_class& b) {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  // q = a / b when b | a.
  static bool try_divide(const mpz_class& a, const mpz_class& b, mpz_class& q) {
    if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) return false;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return true;
  }
  static std::string str(const mpz_class& a) { return a.get_str(); }
  static mpz_class parse(const std::string& s) { return mpz_class(s, 10); }
};

template <>
struct Ring<Mod61> {
  static bool is_zero(const Mod61& a) { return a.is_zero(); }
  static void addmul(Mod61& acc, const Mod61& a, const Mod61& b) { acc += a * b; }
  static bool try_divide(const Mod61& a, const Mod61& b, Mod61& q) {
    q = a / b;
    return true;
  }
  static std::string str(const Mod61& a) { return std::to_string(a.value()); }
  static Mod61 parse(const std::string& s) { return Mod61::from_mpz(mpz_class(s, 10)); }
};

}  // namespace zdetail

template <typename R>
class SparsePoly;

/// Thrown by exact_divide; carries the nonzero remainder.
template <typename R>
class InexactDivision : public std::domain_error {
 public:
  InexactDivision(const std::string& what, SparsePoly<R> rem)
      : std::domain_error(what), remainder_(std::move(rem)) {}
  const SparsePoly<R>& remainder() const noexcept { return remainder_; }

 private:
  SparsePoly<R> remainder_;
};

template <typename R>
class SparsePoly {
 public:
  using Key = zdetail::Key;
  using Term = std::pair<Key, R>;
  using RingT = zdetail::Ring<R>;

  SparsePoly() = default;
  SparsePoly(const R& c) {  // NOLINT: constants convert implicitly
    if (!RingT::is_zero(c)) terms_.emplace_back(0, c);
  }
  SparsePoly(long c) : SparsePoly(R(c)) {}  // NOLINT
  SparsePoly(int c) : SparsePoly(R(static_cast<long>(c))) {}  // NOLINT

  static SparsePoly var(Var v, int e = 1) {
    Exponents ex{};
    ex[static_cast<int>(v)] = e;
    return monomial(R(1L), ex);
  }
  static SparsePoly monomial(const R& c, const Exponents& e) {
    SparsePoly p;
    if (!RingT::is_zero(c)) p.terms_.emplace_back(zdetail::pack(e), c);
    return p;
  }
  /// Combines like terms, drops zeros and sorts.
  static SparsePoly from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& s, const Term& t) { return zdetail::grlex_greater(s.first, t.first); });
    SparsePoly p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == t.first) p.terms_.back().second += t.second;
      else {
        if (!p.terms_.empty() && RingT::is_zero(p.terms_.back().second)) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && RingT::is_zero(p.terms_.back().second)) p.terms_.pop_back();
    return p;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }
  R constant_value() const {
    if (!is_constant()) throw std::logic_error("polynomial is not constant");
    return terms_.empty() ? R(0L) : terms_[0].second;
  }
  const Term& lead_term() const {
    if (terms_.empty()) throw std::logic_error("zero polynomial has no leading term");
    return terms_.front();
  }
  int total_degree() const { return terms_.empty() ? -1 : zdetail::total_degree(terms_.front().first); }
  int degree(Var v) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& t : terms_) d = std::max(d, zdetail::exponent(t.first, v));
    return d;
  }
  /// Variables occurring with positive exponent.
  std::vector<Var> variables() const {
    std::vector<Var> out;
    for (int i = 0; i < kNumVars; ++i)
      if (degree(static_cast<Var>(i)) > 0) out.push_back(static_cast<Var>(i));
    return out;
  }

  friend SparsePoly operator+(const SparsePoly& f, const SparsePoly& g) { return merge(f, g, false); }
  friend SparsePoly operator-(const SparsePoly& f, const SparsePoly& g) { return merge(f, g, true); }
  SparsePoly operator-() const {
    SparsePoly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  SparsePoly& operator+=(const SparsePoly& g) { return *this = *this + g; }
  SparsePoly& operator-=(const SparsePoly& g) { return *this = *this - g; }
  SparsePoly& operator*=(const SparsePoly& g) { return *this = *this * g; }

  friend SparsePoly operator*(const SparsePoly& f, const SparsePoly& g) {
    if (f.is_zero() || g.is_zero()) return {};
    for (int i = 0; i < kNumVars; ++i)
      if (f.degree(static_cast<Var>(i)) + g.degree(static_cast<Var>(i)) > zdetail::kMaxExp)
        throw std::overflow_error("product exponent exceeds 255");
    if (g.terms_.size() == 1) return f.mul_term(g.terms_[0]);
    if (f.terms_.size() == 1) return g.mul_term(f.terms_[0]);
    std::unordered_map<Key, R> acc;
    acc.reserve(std::min<std::size_t>(f.terms_.size() * g.terms_.size(), 1u << 22) * 2);
    for (const auto& s : f.terms_)
      for (const auto& t : g.terms_) RingT::addmul(acc[s.first + t.first], s.second, t.second);
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& kv : acc)
      if (!RingT::is_zero(kv.second)) out.emplace_back(kv.first, std::move(kv.second));
    std::sort(out.begin(), out.end(),
              [](const Term& s, const Term& t) { return zdetail::grlex_greater(s.first, t.first); });
    SparsePoly r;
    r.terms_ = std::move(out);
    return r;
  }

  friend bool operator==(const SparsePoly& f, const SparsePoly& g) { return f.terms_ == g.terms_; }
  friend bool operator!=(const SparsePoly& f, const SparsePoly& g) { return !(f == g); }

  SparsePoly pow(unsigned e) const {
    SparsePoly r(1L), b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  /// Coefficients with respect to v: result[i] is the coefficient of v^i.
  std::vector<SparsePoly> coeffs_in(Var v) const {
    const int d = degree(v);
    std::vector<std::vector<Term>> buckets(d < 0 ? 0 : d + 1);
    const int sh = zdetail::shift_of(v);
    for (const auto& t : terms_) {
      const int e = zdetail::exponent(t.first, v);
      buckets[e].emplace_back(t.first & ~(Key{0xFF} << sh), t.second);
    }
    std::vector<SparsePoly> out(buckets.size());
    for (std::size_t i = 0; i < buckets.size(); ++i) out[i].terms_ = std::move(buckets[i]);  // order preserved
    return out;
  }
  /// Inverse of coeffs_in; the coefficients must be free of v.
  static SparsePoly from_coeffs_in(Var v, const std::vector<SparsePoly>& cs) {
    std::vector<Term> all;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs[i].degree(v) > 0) throw std::invalid_argument("coefficient depends on the main variable");
      if (i > static_cast<std::size_t>(zdetail::kMaxExp)) throw std::overflow_error("exponent exceeds 255");
      const Key add = static_cast<Key>(i) << zdetail::shift_of(v);
      for (const auto& t : cs[i].terms_) all.emplace_back(t.first + add, t.second);
    }
    return from_terms(std::move(all));
  }

  /// Renames variables: variable i becomes image[i]. image must be a permutation.
  SparsePoly permute_vars(const std::array<Var, kNumVars>& image) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Exponents e = zdetail::unpack(t.first), ne{};
      for (int i = 0; i < kNumVars; ++i) ne[static_cast<int>(image[i])] += e[i];
      out.emplace_back(zdetail::pack(ne), t.second);
    }
    return from_terms(std::move(out));
  }

  /// Replaces v by the polynomial r (Horner in v).
  SparsePoly substitute(Var v, const SparsePoly& r) const {
    const auto cs = coeffs_in(v);
    SparsePoly acc;
    for (std::size_t i = cs.size(); i-- > 0;) acc = acc * r + cs[i];
    return acc;
  }

  /// den^D · f(num/den) in the variable v, D ≥ deg_v f.
  SparsePoly substitute_fraction(Var v, const SparsePoly& num, const SparsePoly& den, int D) const {
    const auto cs = coeffs_in(v);
    if (static_cast<int>(cs.size()) - 1 > D) throw std::invalid_argument("homogenising degree too small");
    SparsePoly acc;
    SparsePoly np(1L);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (!cs[i].is_zero()) acc += cs[i] * np * den.pow(static_cast<unsigned>(D - static_cast<int>(i)));
      np *= num;
    }
    return acc;
  }

  SparsePoly specialize(Var v, const R& value) const {
    const auto cs = coeffs_in(v);
    SparsePoly acc;
    for (std::size_t i = cs.size(); i-- > 0;) acc = acc * SparsePoly(value) + cs[i];
    return acc;
  }

  R eval(const std::array<R, kNumVars>& point) const {
    // powers cached per variable
    std::array<std::vector<R>, kNumVars> pw;
    for (int i = 0; i < kNumVars; ++i) {
      const int d = std::max(degree(static_cast<Var>(i)), 0);
      pw[i].assign(d + 1, R(1L));
      for (int e = 1; e <= d; ++e) pw[i][e] = pw[i][e - 1] * point[i];
    }
    R acc(0L);
    for (const auto& t : terms_) {
      R m = t.second;
      for (int i = 0; i < kNumVars; ++i) {
        const int e = zdetail::exponent(t.first, static_cast<Var>(i));
        if (e) m = m * pw[i][e];
      }
      acc = acc + m;
    }
    return acc;
  }

  SparsePoly derivative(Var v) const {
    std::vector<Term> out;
    const int sh = zdetail::shift_of(v);
    for (const auto& t : terms_) {
      const int e = zdetail::exponent(t.first, v);
      if (e == 0) continue;
      out.emplace_back(t.first - (Key{1} << sh), t.second * R(static_cast<long>(e)));
    }
    return from_terms(std::move(out));
  }

  template <typename S, typename F>
  SparsePoly<S> map_coeffs(F&& fn) const {
    std::vector<typename SparsePoly<S>::Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.emplace_back(t.first, fn(t.second));
    return SparsePoly<S>::from_terms(std::move(out));
  }

  /// `coeff*x^i*y^j*...` terms in canonical order joined by " + " / " - ".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
      std::string c = RingT::str(t.second);
      if (!first) {
        if (c[0] == '-') {
          out += " - ";
          c.erase(0, 1);
        } else {
          out += " + ";
        }
      }
      first = false;
      out += c;
      const Exponents e = zdetail::unpack(t.first);
      for (int i = 0; i < kNumVars; ++i) {
        if (e[i] == 0) continue;
        out += '*';
        out += var_name(static_cast<Var>(i));
        if (e[i] > 1) out += '^' + std::to_string(e[i]);
      }
    }
    return out;
  }

  /// Inverse of str(); also accepts arbitrary whitespace, implicit unit
  /// coefficients ("x*y", "-A") and repeated factors.
  static SparsePoly parse(std::string_view text);

 private:
  template <typename S>
  friend class SparsePoly;

  static SparsePoly merge(const SparsePoly& f, const SparsePoly& g, bool negate) {
    SparsePoly r;
    r.terms_.reserve(f.terms_.size() + g.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < f.terms_.size() || j < g.terms_.size()) {
      if (j == g.terms_.size() || (i < f.terms_.size() && zdetail::grlex_greater(f.terms_[i].first, g.terms_[j].first))) {
        r.terms_.push_back(f.terms_[i++]);
      } else if (i == f.terms_.size() || zdetail::grlex_greater(g.terms_[j].first, f.terms_[i].first)) {
        r.terms_.emplace_back(g.terms_[j].first, negate ? R(-g.terms_[j].second) : g.terms_[j].second);
        ++j;
      } else {
        R c = negate ? R(f.terms_[i].second - g.terms_[j].second) : R(f.terms_[i].second + g.terms_[j].second);
        if (!RingT::is_zero(c)) r.terms_.emplace_back(f.terms_[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  SparsePoly mul_term(const Term& m) const {
    SparsePoly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.emplace_back(t.first + m.first, t.second * m.second);
    // multiplying by a monomial preserves grlex order; integral domain: no zeros
    return r;
  }

  std::vector<Term> terms_;
};

using ZPoly = SparsePoly<mpz_class>;
using ModPoly = SparsePoly<Mod61>;

/// Multivariate division by g in graded-lex order. Returns (quotient,
/// remainder) with f = q·g + r where no term of r is divisible by lt(g) with an
/// integral coefficient ratio.
template <typename R>
std::pair<SparsePoly<R>, SparsePoly<R>> divide(const SparsePoly<R>& f, const SparsePoly<R>& g);

/// f / g, certified exact; throws InexactDivision<R> carrying the remainder.
template <typename R>
SparsePoly<R> exact_divide(const SparsePoly<R>& f, const SparsePoly<R>& g);

/// Resultant with respect to v by the subresultant PRS. Sign convention: the
/// Sylvester determinant with the rows of f first, so Res(x-a, x-b, x) = a-b.
/// Throws std::invalid_argument if either input has degree 0 in v.
template <typename R>
SparsePoly<R> resultant(const SparsePoly<R>& f, const SparsePoly<R>& g, Var v);

/// Pseudo-remainder lc(g)^(deg f - deg g + 1)·f mod g with respect to v.
template <typename R>
SparsePoly<R> pseudo_remainder(const SparsePoly<R>& f, const SparsePoly<R>& g, Var v);

/// Rewrites every term divisible by v^d as (t / v^d)·r until none is left.
/// Requires deg_v r < d.
template <typename R>
SparsePoly<R> substitute_reduce(const SparsePoly<R>& pol, Var v, int d, const SparsePoly<R>& r);

/// Same, with the rewritten monomial given as a polynomial; it must be a
/// single power v^d with unit coefficient.
template <typename R>
SparsePoly<R> substitute_reduce(const SparsePoly<R>& pol, const SparsePoly<R>& m, const SparsePoly<R>& r);

/// For a univariate nonzero f: whether f is a k-th power in Q[v].
bool is_kth_power(const ZPoly& f, int k);
/// For a univariate nonzero f over F_P: whether f is a constant times a k-th
/// power (i.e. a k-th power over the algebraic closure).
bool is_kth_power(const ModPoly& f, int k);

/// Reduction of an integer polynomial modulo 2^61-1.
ModPoly reduce_mod61(const ZPoly& f);

extern template class SparsePoly<mpz_class>;
extern template class SparsePoly<Mod61>;

}  // namespace pplab

#endif  // PPLAB_ZPOLY_HPP

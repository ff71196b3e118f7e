#ifndef PPLAB_DETAIL_DENSE_POLY_HPP
#define PPLAB_DETAIL_DENSE_POLY_HPP

// Dense univariate polynomial kernels shared by the field tower construction
// and the UniPoly module. Coefficients are stored low degree first and the
// vectors are kept trimmed (no trailing zeros; the zero polynomial is empty).
//
// `Ops` supplies the coefficient field:
//   T zero(); T one(); bool is_zero(const T&);
//   T add(T, T); T sub(T, T); T mul(T, T); T neg(T); T inv(T);

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace pplab::detail {

template <typename Ops, typename T>
void trim(const Ops& ops, std::vector<T>& f) {
  while (!f.empty() && ops.is_zero(f.back())) f.pop_back();
}

template <typename T>
int degree(const std::vector<T>& f) {
  return static_cast<int>(f.size()) - 1;
}

template <typename Ops, typename T>
std::vector<T> add(const Ops& ops, const std::vector<T>& f, const std::vector<T>& g) {
  std::vector<T> r(std::max(f.size(), g.size()), ops.zero());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] = ops.add(r[i], g[i]);
  trim(ops, r);
  return r;
}

template <typename Ops, typename T>
std::vector<T> sub(const Ops& ops, const std::vector<T>& f, const std::vector<T>& g) {
  std::vector<T> r(std::max(f.size(), g.size()), ops.zero());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (std::size_t i = 0; i < g.size(); ++i) r[i] = ops.sub(r[i], g[i]);
  trim(ops, r);
  return r;
}

template <typename Ops, typename T>
std::vector<T> mul(const Ops& ops, const std::vector<T>& f, const std::vector<T>& g) {
  if (f.empty() || g.empty()) return {};
  std::vector<T> r(f.size() + g.size() - 1, ops.zero());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (ops.is_zero(f[i])) continue;
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] = ops.add(r[i + j], ops.mul(f[i], g[j]));
  }
  trim(ops, r);
  return r;
}

template <typename Ops, typename T>
std::vector<T> scale(const Ops& ops, const std::vector<T>& f, const T& c) {
  std::vector<T> r(f.size(), ops.zero());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = ops.mul(f[i], c);
  trim(ops, r);
  return r;
}

// Quotient and remainder; g must be nonzero.
template <typename Ops, typename T>
std::pair<std::vector<T>, std::vector<T>> divmod(const Ops& ops, std::vector<T> f,
                                                 const std::vector<T>& g) {
  if (g.empty()) throw std::domain_error("polynomial division by zero");
  if (f.size() < g.size()) return {{}, std::move(f)};
  const T lead_inv = ops.inv(g.back());
  std::vector<T> quot(f.size() - g.size() + 1, ops.zero());
  for (std::size_t k = f.size(); k >= g.size(); --k) {
    const std::size_t top = k - 1;
    if (ops.is_zero(f[top])) continue;
    const T c = ops.mul(f[top], lead_inv);
    const std::size_t shift = top - (g.size() - 1);
    quot[shift] = c;
    for (std::size_t j = 0; j < g.size(); ++j) f[shift + j] = ops.sub(f[shift + j], ops.mul(c, g[j]));
  }
  trim(ops, f);
  trim(ops, quot);
  return {std::move(quot), std::move(f)};
}

template <typename Ops, typename T>
std::vector<T> rem(const Ops& ops, const std::vector<T>& f, const std::vector<T>& g) {
  return divmod(ops, f, g).second;
}

template <typename Ops, typename T>
std::vector<T> make_monic(const Ops& ops, const std::vector<T>& f) {
  if (f.empty()) return f;
  return scale(ops, f, ops.inv(f.back()));
}

// Monic gcd (empty when both inputs are zero).
template <typename Ops, typename T>
std::vector<T> gcd(const Ops& ops, std::vector<T> f, std::vector<T> g) {
  while (!g.empty()) {
    auto r = rem(ops, f, g);
    f = std::move(g);
    g = std::move(r);
  }
  return make_monic(ops, f);
}

template <typename Ops, typename T>
std::vector<T> derivative(const Ops& ops, const std::vector<T>& f) {
  if (f.size() <= 1) return {};
  std::vector<T> r(f.size() - 1, ops.zero());
  for (std::size_t i = 1; i < f.size(); ++i) {
    T acc = ops.zero();
    for (std::size_t k = 0; k < i; ++k) acc = ops.add(acc, f[i]);
    r[i - 1] = acc;
  }
  trim(ops, r);
  return r;
}

// base^e mod modulus by square-and-multiply, e >= 0.
template <typename Ops, typename T>
std::vector<T> powmod(const Ops& ops, const std::vector<T>& base, const mpz_class& e,
                      const std::vector<T>& modulus) {
  std::vector<T> result{ops.one()};
  result = rem(ops, result, modulus);
  std::vector<T> b = rem(ops, base, modulus);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = rem(ops, mul(ops, result, result), modulus);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(ops, mul(ops, result, b), modulus);
  }
  return result;
}

}  // namespace pplab::detail

#endif  // PPLAB_DETAIL_DENSE_POLY_HPP

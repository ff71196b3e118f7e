#ifndef PPLAB_UPOLY_HPP
#define PPLAB_UPOLY_HPP

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pplab/ff.hpp"

namespace pplab {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2019ULL;

/// Dense univariate polynomial over one level of a field tower, low degree
/// first, always trimmed.
class UniPoly {
 public:
  UniPoly(const FieldCtx* ctx, Level level) : ctx_(ctx), level_(level) {}
  UniPoly(const FieldCtx* ctx, Level level, std::vector<FFElement> coeffs);
  static UniPoly from_ints(const FieldCtx* ctx, Level level, std::initializer_list<long long> coeffs);

  const FieldCtx* ctx() const noexcept { return ctx_; }
  Level level() const noexcept { return level_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<FFElement>& coeffs() const noexcept { return coeffs_; }
  FFElement coeff(int i) const;
  FFElement lead() const { return coeff(degree()); }

  /// Horner evaluation; x must share the context and level.
  FFElement eval(const FFElement& x) const;
  /// The same polynomial with coefficients embedded at a higher level.
  UniPoly lift(Level to) const;
  UniPoly derivative() const;
  UniPoly monic() const;

  friend UniPoly operator+(const UniPoly& f, const UniPoly& g);
  friend UniPoly operator-(const UniPoly& f, const UniPoly& g);
  friend UniPoly operator*(const UniPoly& f, const UniPoly& g);
  friend bool operator==(const UniPoly& f, const UniPoly& g);

  friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& f, const UniPoly& g);
  friend UniPoly gcd(const UniPoly& f, const UniPoly& g);
  /// base^e mod m.
  friend UniPoly powmod(const UniPoly& base, const mpz_class& e, const UniPoly& m);

  std::string str() const;

 private:
  void check_compatible(const UniPoly& g) const;

  const FieldCtx* ctx_;
  Level level_;
  std::vector<FFElement> coeffs_;
};

/// Distinct roots in the polynomial's own field, canonical order.
/// Restricted to 1 <= degree <= 4.
std::vector<FFElement> roots(const UniPoly& f, std::uint64_t seed = kDefaultSeed);

/// Roots in μ_{q^2+q+1} of a polynomial with F_q coefficients, found by
/// lifting to F_{q^3}; returned at the extension level.
std::vector<FFElement> roots_in_mu(const UniPoly& f, std::uint64_t seed = kDefaultSeed);

/// Number of distinct roots by scanning the whole field.
int count_roots_by_scan(const UniPoly& f);

/// Hessian of a cubic, normalised as -((b^2-3ac) T^2 + (bc-9ad) T + (c^2-3bd))
/// for F = a T^3 + b T^2 + c T + d.
UniPoly hessian(const UniPoly& cubic);

enum class SplitMethod { criterion, hessian_roots_outside, fallback };

struct HessianSplit {
  bool split = false;
  SplitMethod method = SplitMethod::criterion;
  std::optional<FFElement> beta1;
  std::optional<FFElement> beta2;
  std::optional<FFElement> ratio;
  std::string fallback_reason;
};

/// Decides whether a cubic over F_q (q ≡ 1 mod 3) has three roots in F_q from
/// its Hessian roots and a cubic-residue test on F(beta1)/F(beta2). Degenerate
/// inputs are answered by exhaustive root counting with method == fallback.
HessianSplit hessian_split(const UniPoly& cubic);

}  // namespace pplab

#endif  // PPLAB_UPOLY_HPP

#ifndef PPLAB_FF_HPP
#define PPLAB_FF_HPP

// Exact arithmetic in the tower F_p ⊂ F_q = F_{p^h} ⊂ F_{q^k}, k = 3 for the
// main context (k = 2 for the auxiliary quadratic context used by cube tests).
//
// Elements are stored as flat base-p digit vectors: a base-level element is a
// polynomial of degree < h over F_p, an extension element is a polynomial of
// degree < k over F_q whose coefficients are laid out one after another.
// Contexts are immutable once built; elements keep a raw pointer to their
// context, so the owning FieldPtr must outlive them.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pplab {

enum class Level : std::uint8_t { prime = 0, base = 1, extension = 2 };

std::string to_string(Level level);

inline constexpr int kMaxBaseDegree = 8;
inline constexpr int kMaxDigits = 3 * kMaxBaseDegree;

class FieldCtx;
using FieldPtr = std::shared_ptr<const FieldCtx>;

class FFElement {
 public:
  FFElement() = default;

  const FieldCtx* ctx() const noexcept { return ctx_; }
  Level level() const noexcept { return level_; }
  int size() const noexcept { return size_; }
  std::span<const std::uint32_t> digits() const noexcept { return {d_.data(), size_}; }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  /// Base-p integer encoding, digits low first. This is the canonical order.
  std::uint64_t index() const;

  /// Coordinates over the next field down (h prime elements at the base
  /// level, k base elements at the extension level).
  std::vector<FFElement> coords() const;

  FFElement& operator+=(const FFElement& rhs);
  FFElement& operator-=(const FFElement& rhs);
  FFElement& operator*=(const FFElement& rhs);
  FFElement operator-() const;

  /// Throws std::domain_error on zero.
  FFElement inv() const;
  /// Negative exponents are allowed for nonzero elements.
  FFElement pow(const mpz_class& e) const;
  FFElement pow(std::uint64_t e) const;

  friend FFElement operator+(FFElement a, const FFElement& b) { return a += b; }
  friend FFElement operator-(FFElement a, const FFElement& b) { return a -= b; }
  friend FFElement operator*(FFElement a, const FFElement& b) { return a *= b; }
  friend FFElement operator/(const FFElement& a, const FFElement& b) { return a * b.inv(); }

  friend bool operator==(const FFElement& a, const FFElement& b) noexcept;
  friend bool operator<(const FFElement& a, const FFElement& b);
  friend std::ostream& operator<<(std::ostream& os, const FFElement& x);

 private:
  friend class FieldCtx;
  const FieldCtx* ctx_ = nullptr;
  Level level_ = Level::prime;
  std::uint8_t size_ = 0;
  std::array<std::uint32_t, kMaxDigits> d_{};
};

class FieldCtx {
  struct Key {};

 public:
  /// Builds F_p ⊂ F_{p^h} ⊂ F_{p^{h·k}} with the lexicographically smallest
  /// monic irreducible moduli. Throws std::invalid_argument for composite p,
  /// p <= 3, h = 0 or an out-of-range degree.
  static FieldPtr make(std::uint32_t p, int h, int ext_degree = 3);

  /// Rebuilds a context from `header()` output and checks the moduli match.
  static FieldPtr from_header(const std::string& header);

  FieldCtx(Key, std::uint32_t p, int h, int ext_degree);
  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  std::uint32_t p() const noexcept { return p_; }
  int h() const noexcept { return h_; }
  int ext_degree() const noexcept { return k_; }
  std::uint64_t q() const noexcept { return q_; }
  int digits(Level level) const noexcept;
  mpz_class order(Level level) const;

  /// Monic, h+1 coefficients over F_p, low degree first.
  const std::vector<std::uint32_t>& base_modulus() const noexcept { return base_mod_; }
  /// Monic, k+1 base-level coefficients, low degree first.
  const std::vector<FFElement>& ext_modulus() const noexcept { return ext_mod_; }

  FFElement zero(Level level) const;
  FFElement one(Level level) const;
  FFElement from_int(long long v, Level level) const;
  FFElement from_digits(std::span<const std::uint32_t> digits, Level level) const;
  FFElement from_index(std::uint64_t index, Level level) const;
  /// Element with the given coordinates over the next field down.
  FFElement from_coords(std::span<const FFElement> coords, Level level) const;
  FFElement random(Level level, std::mt19937_64& rng) const;
  /// The class of the adjoined variable at `level` (base or extension).
  FFElement generator(Level level) const;

  FFElement embed(const FFElement& x, Level to) const;
  /// The element viewed in the smaller field, if it lies there.
  std::optional<FFElement> restrict_to(const FFElement& x, Level to) const;

  /// x^(q^k) for an extension element, via the precomputed F_q-linear map.
  FFElement frobenius(const FFElement& x, int k) const;
  /// x^((q^k - 1)/(q - 1)), returned at the base level.
  FFElement norm(const FFElement& x) const;

  /// x != 0 and x^(q^2+q+1) = 1 (kernel of the norm in general).
  bool in_mu(const FFElement& x) const;
  /// {c in F_q : c^(q^2+q+1) = 1} = {c in F_q : c^3 = 1}, canonical order.
  std::vector<FFElement> mu_intersect_base() const;
  /// Whether nonzero x is a cube in its own field. Throws on zero.
  bool is_cube(const FFElement& x) const;

  /// `p=<p> h=<h> base_modulus=<c0,..> cubic_modulus=<c0,..>`; extension
  /// coefficients are written as base-level indices.
  std::string header() const;

  // Raw kernels used by FFElement and the census fast paths.
  void add_into(Level level, const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const;
  void sub_into(Level level, const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const;
  void mul_into(Level level, const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const;

 private:
  void base_mul(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const;
  void ext_mul(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const;
  void check_same(const FFElement& a, const FFElement& b) const;
  FFElement make_raw(Level level) const;
  void build_base_modulus();
  void build_ext_modulus();
  void build_frobenius();

  friend class FFElement;

  std::uint32_t p_;
  int h_;
  int k_;
  std::uint64_t q_;
  std::vector<std::uint32_t> base_mod_;
  std::vector<FFElement> ext_mod_;
  // frob_[s][j] = (t^j)^(q^s), s = 1..k-1, as flat digit arrays.
  std::vector<std::vector<std::array<std::uint32_t, kMaxDigits>>> frob_;
};

/// Ben-Or irreducibility test for a monic polynomial over F_p.
bool is_irreducible_mod_p(const std::vector<std::uint32_t>& f, std::uint32_t p);

bool is_prime_u64(std::uint64_t n);

}  // namespace pplab

#endif  // PPLAB_FF_HPP

#ifndef PPLAB_MOD61_HPP
#define PPLAB_MOD61_HPP

// Arithmetic modulo the Mersenne prime P = 2^61 - 1, used as the image ring
// for evaluation-homomorphism checks. P ≡ 1 (mod 3) and P ≡ 3 (mod 4).

#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace pplab {

class Mod61 {
 public:
  static constexpr std::uint64_t P = (1ULL << 61) - 1;

  constexpr Mod61() = default;
  Mod61(long long v) {  // NOLINT: implicit by design, mirrors integer literals
    long long r = v % static_cast<long long>(P);
    v_ = static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(P) : r);
  }
  static Mod61 from_u64(std::uint64_t v) {
    Mod61 r;
    r.v_ = v % P;
    return r;
  }
  static Mod61 from_mpz(const mpz_class& z) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), P);
    return from_u64(r.get_ui());
  }
  static Mod61 random(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> d(0, P - 1);
    return from_u64(d(rng));
  }

  std::uint64_t value() const noexcept { return v_; }
  bool is_zero() const noexcept { return v_ == 0; }

  Mod61& operator+=(Mod61 o) noexcept {
    v_ += o.v_;
    if (v_ >= P) v_ -= P;
    return *this;
  }
  Mod61& operator-=(Mod61 o) noexcept {
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + P - o.v_;
    return *this;
  }
  Mod61& operator*=(Mod61 o) noexcept {
    const unsigned __int128 t = static_cast<unsigned __int128>(v_) * o.v_;
    std::uint64_t r = static_cast<std::uint64_t>(t & P) + static_cast<std::uint64_t>(t >> 61);
    if (r >= P) r -= P;
    v_ = r;
    return *this;
  }
  Mod61 operator-() const noexcept {
    Mod61 r;
    r.v_ = v_ == 0 ? 0 : P - v_;
    return r;
  }
  friend Mod61 operator+(Mod61 a, Mod61 b) noexcept { return a += b; }
  friend Mod61 operator-(Mod61 a, Mod61 b) noexcept { return a -= b; }
  friend Mod61 operator*(Mod61 a, Mod61 b) noexcept { return a *= b; }
  friend bool operator==(Mod61 a, Mod61 b) noexcept { return a.v_ == b.v_; }
  friend bool operator!=(Mod61 a, Mod61 b) noexcept { return a.v_ != b.v_; }

  Mod61 pow(std::uint64_t e) const noexcept {
    Mod61 r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }
  Mod61 inv() const {
    if (v_ == 0) throw std::domain_error("inverse of zero mod 2^61-1");
    return pow(P - 2);
  }
  friend Mod61 operator/(Mod61 a, Mod61 b) { return a * b.inv(); }

  friend std::ostream& operator<<(std::ostream& os, Mod61 a) { return os << a.v_; }

 private:
  std::uint64_t v_ = 0;
};

}  // namespace pplab

#endif  // PPLAB_MOD61_HPP

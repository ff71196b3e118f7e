#include "pplab/ff.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pplab/detail/dense_poly.hpp"

namespace pplab {

namespace {

struct PrimeOps {
  std::uint64_t p;
  std::uint64_t zero() const { return 0; }
  std::uint64_t one() const { return 1 % p; }
  bool is_zero(std::uint64_t a) const { return a == 0; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p; }
  std::uint64_t neg(std::uint64_t a) const { return (p - a) % p; }
  std::uint64_t inv(std::uint64_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    std::uint64_t r = 1, b = a, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }
};

struct ElementOps {
  const FieldCtx* ctx;
  Level level;
  FFElement zero() const { return ctx->zero(level); }
  FFElement one() const { return ctx->one(level); }
  bool is_zero(const FFElement& a) const { return a.is_zero(); }
  FFElement add(const FFElement& a, const FFElement& b) const { return a + b; }
  FFElement sub(const FFElement& a, const FFElement& b) const { return a - b; }
  FFElement mul(const FFElement& a, const FFElement& b) const { return a * b; }
  FFElement neg(const FFElement& a) const { return -a; }
  FFElement inv(const FFElement& a) const { return a.inv(); }
};

std::uint64_t checked_pow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > UINT64_MAX / b) throw std::overflow_error("field order does not fit in 64 bits");
    r *= b;
  }
  return r;
}

}  // namespace

std::string to_string(Level level) {
  switch (level) {
    case Level::prime: return "prime";
    case Level::base: return "base";
    case Level::extension: return "extension";
  }
  return "?";
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_irreducible_mod_p(const std::vector<std::uint32_t>& f, std::uint32_t p) {
  PrimeOps ops{p};
  std::vector<std::uint64_t> g(f.begin(), f.end());
  detail::trim(ops, g);
  const int n = detail::degree(g);
  if (n < 1) return false;
  if (n == 1) return true;
  // gcd(f, x^(p^d) - x) = 1 for all d <= n/2.
  std::vector<std::uint64_t> xpow{0, 1};
  const std::vector<std::uint64_t> x{0, 1};
  for (int d = 1; d <= n / 2; ++d) {
    xpow = detail::powmod(ops, xpow, mpz_class(p), g);
    auto diff = detail::sub(ops, xpow, x);
    if (detail::gcd(ops, g, diff).size() != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------- FFElement

bool FFElement::is_zero() const noexcept {
  for (int i = 0; i < size_; ++i)
    if (d_[i] != 0) return false;
  return true;
}

bool FFElement::is_one() const noexcept {
  if (size_ == 0 || d_[0] != 1) return false;
  for (int i = 1; i < size_; ++i)
    if (d_[i] != 0) return false;
  return true;
}

std::uint64_t FFElement::index() const {
  if (!ctx_) return 0;
  std::uint64_t r = 0;
  for (int i = size_; i-- > 0;) r = r * ctx_->p() + d_[i];
  return r;
}

std::vector<FFElement> FFElement::coords() const {
  if (!ctx_) throw std::logic_error("detached element");
  std::vector<FFElement> out;
  switch (level_) {
    case Level::prime: out.push_back(*this); break;
    case Level::base:
      for (int i = 0; i < size_; ++i) out.push_back(ctx_->from_int(d_[i], Level::prime));
      break;
    case Level::extension: {
      const int h = ctx_->h();
      for (int j = 0; j < ctx_->ext_degree(); ++j)
        out.push_back(ctx_->from_digits(std::span<const std::uint32_t>(d_.data() + j * h, h), Level::base));
      break;
    }
  }
  return out;
}

FFElement& FFElement::operator+=(const FFElement& rhs) {
  ctx_->check_same(*this, rhs);
  ctx_->add_into(level_, d_.data(), rhs.d_.data(), d_.data());
  return *this;
}

FFElement& FFElement::operator-=(const FFElement& rhs) {
  ctx_->check_same(*this, rhs);
  ctx_->sub_into(level_, d_.data(), rhs.d_.data(), d_.data());
  return *this;
}

FFElement& FFElement::operator*=(const FFElement& rhs) {
  ctx_->check_same(*this, rhs);
  std::array<std::uint32_t, kMaxDigits> out{};
  ctx_->mul_into(level_, d_.data(), rhs.d_.data(), out.data());
  d_ = out;
  return *this;
}

FFElement FFElement::operator-() const {
  if (!ctx_) throw std::logic_error("detached element");
  FFElement r = *this;
  const std::uint32_t p = ctx_->p();
  for (int i = 0; i < size_; ++i) r.d_[i] = d_[i] == 0 ? 0 : p - d_[i];
  return r;
}

FFElement FFElement::inv() const {
  if (!ctx_) throw std::logic_error("detached element");
  if (is_zero()) throw std::domain_error("inverse of zero");
  switch (level_) {
    case Level::prime: {
      PrimeOps ops{ctx_->p()};
      return ctx_->from_int(static_cast<long long>(ops.inv(d_[0])), Level::prime);
    }
    case Level::base:
      if (ctx_->h() == 1) return ctx_->embed(ctx_->restrict_to(*this, Level::prime)->inv(), Level::base);
      return pow(ctx_->q() - 2);
    case Level::extension: {
      // x^{-1} = conj(x) / N(x) with conj the product of the nontrivial conjugates.
      FFElement conj = ctx_->one(Level::extension);
      for (int s = 1; s < ctx_->ext_degree(); ++s) conj *= ctx_->frobenius(*this, s);
      const FFElement n = ctx_->restrict_to(*this * conj, Level::base).value();
      return conj * ctx_->embed(n.inv(), Level::extension);
    }
  }
  return *this;
}

FFElement FFElement::pow(std::uint64_t e) const {
  if (!ctx_) throw std::logic_error("detached element");
  FFElement r = ctx_->one(level_);
  FFElement b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

FFElement FFElement::pow(const mpz_class& e) const {
  if (!ctx_) throw std::logic_error("detached element");
  if (sgn(e) < 0) return inv().pow(mpz_class(-e));
  if (e.fits_ulong_p()) return pow(static_cast<std::uint64_t>(e.get_ui()));
  FFElement r = ctx_->one(level_);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r *= r;
    if (mpz_tstbit(e.get_mpz_t(), i)) r *= *this;
  }
  return r;
}

bool operator==(const FFElement& a, const FFElement& b) noexcept {
  if (a.ctx_ != b.ctx_ || a.level_ != b.level_ || a.size_ != b.size_) return false;
  return std::equal(a.d_.begin(), a.d_.begin() + a.size_, b.d_.begin());
}

bool operator<(const FFElement& a, const FFElement& b) {
  if (a.size_ != b.size_) return a.size_ < b.size_;
  for (int i = a.size_; i-- > 0;)
    if (a.d_[i] != b.d_[i]) return a.d_[i] < b.d_[i];
  return false;
}

std::ostream& operator<<(std::ostream& os, const FFElement& x) {
  os << '[';
  for (int i = 0; i < x.size_; ++i) os << (i ? ":" : "") << x.d_[i];
  return os << ']';
}

// ----------------------------------------------------------------- FieldCtx

FieldCtx::FieldCtx(Key, std::uint32_t p, int h, int ext_degree)
    : p_(p), h_(h), k_(ext_degree), q_(checked_pow(p, h)) {}

FieldPtr FieldCtx::make(std::uint32_t p, int h, int ext_degree) {
  if (p == 2 || p == 3) throw std::invalid_argument("characteristic must exceed 3");
  if (!is_prime_u64(p)) throw std::invalid_argument("p must be prime");
  if (h < 1) throw std::invalid_argument("extension degree h must be at least 1");
  if (h > kMaxBaseDegree) throw std::invalid_argument("extension degree h too large");
  if (ext_degree != 2 && ext_degree != 3) throw std::invalid_argument("top extension degree must be 2 or 3");
  if (static_cast<std::uint64_t>(p) >= (1ULL << 31)) throw std::invalid_argument("p must be below 2^31");
  auto ctx = std::make_shared<FieldCtx>(Key{}, p, h, ext_degree);
  ctx->build_base_modulus();
  ctx->build_ext_modulus();
  ctx->build_frobenius();
  return ctx;
}

FieldPtr FieldCtx::from_header(const std::string& header) {
  std::istringstream in(header);
  std::string tok;
  long long p = -1, h = -1;
  std::string base, cubic;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed field header: " + tok);
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "p") p = std::stoll(val);
    else if (key == "h") h = std::stoll(val);
    else if (key == "base_modulus") base = val;
    else if (key == "cubic_modulus") cubic = val;
    else throw std::invalid_argument("unknown field header key: " + key);
  }
  if (p < 0 || h < 0) throw std::invalid_argument("field header lacks p or h");
  auto ctx = make(static_cast<std::uint32_t>(p), static_cast<int>(h));
  if (ctx->header() != header) throw std::invalid_argument("field header moduli do not match the canonical construction");
  return ctx;
}

int FieldCtx::digits(Level level) const noexcept {
  switch (level) {
    case Level::prime: return 1;
    case Level::base: return h_;
    case Level::extension: return h_ * k_;
  }
  return 0;
}

mpz_class FieldCtx::order(Level level) const {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p_, static_cast<unsigned long>(digits(level)));
  return r;
}

FFElement FieldCtx::make_raw(Level level) const {
  FFElement x;
  x.ctx_ = this;
  x.level_ = level;
  x.size_ = static_cast<std::uint8_t>(digits(level));
  return x;
}

FFElement FieldCtx::zero(Level level) const { return make_raw(level); }

FFElement FieldCtx::one(Level level) const {
  FFElement x = make_raw(level);
  x.d_[0] = 1;
  return x;
}

FFElement FieldCtx::from_int(long long v, Level level) const {
  FFElement x = make_raw(level);
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += p_;
  x.d_[0] = static_cast<std::uint32_t>(r);
  return x;
}

FFElement FieldCtx::from_digits(std::span<const std::uint32_t> digits, Level level) const {
  if (static_cast<int>(digits.size()) != this->digits(level))
    throw std::invalid_argument("digit count does not match the field level");
  FFElement x = make_raw(level);
  for (std::size_t i = 0; i < digits.size(); ++i) x.d_[i] = digits[i] % p_;
  return x;
}

FFElement FieldCtx::from_index(std::uint64_t index, Level level) const {
  FFElement x = make_raw(level);
  for (int i = 0; i < x.size_; ++i) {
    x.d_[i] = static_cast<std::uint32_t>(index % p_);
    index /= p_;
  }
  if (index != 0) throw std::out_of_range("element index exceeds field order");
  return x;
}

FFElement FieldCtx::from_coords(std::span<const FFElement> coords, Level level) const {
  FFElement x = make_raw(level);
  const Level sub = level == Level::extension ? Level::base : Level::prime;
  const int width = digits(sub);
  if (level == Level::prime || static_cast<int>(coords.size()) * width != digits(level))
    throw std::invalid_argument("coordinate count does not match the field level");
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (coords[j].ctx() != this || coords[j].level() != sub) throw std::invalid_argument("coordinate from a different field");
    for (int i = 0; i < width; ++i) x.d_[j * width + i] = coords[j].d_[i];
  }
  return x;
}

FFElement FieldCtx::random(Level level, std::mt19937_64& rng) const {
  FFElement x = make_raw(level);
  std::uniform_int_distribution<std::uint32_t> dist(0, p_ - 1);
  for (int i = 0; i < x.size_; ++i) x.d_[i] = dist(rng);
  return x;
}

FFElement FieldCtx::generator(Level level) const {
  if (level == Level::prime) throw std::invalid_argument("prime level has no adjoined variable");
  if (level == Level::base) {
    if (h_ == 1) return from_int(static_cast<long long>(p_ - base_mod_[0]) % p_, Level::base);
    FFElement x = make_raw(Level::base);
    x.d_[1] = 1;
    return x;
  }
  FFElement x = make_raw(Level::extension);
  x.d_[h_] = 1;
  return x;
}

FFElement FieldCtx::embed(const FFElement& x, Level to) const {
  if (x.ctx_ != this) throw std::invalid_argument("element from a different field");
  if (static_cast<int>(x.level_) > static_cast<int>(to)) throw std::invalid_argument("cannot embed into a smaller field");
  FFElement r = make_raw(to);
  for (int i = 0; i < x.size_; ++i) r.d_[i] = x.d_[i];
  return r;
}

std::optional<FFElement> FieldCtx::restrict_to(const FFElement& x, Level to) const {
  if (x.ctx_ != this) throw std::invalid_argument("element from a different field");
  const int keep = digits(to);
  if (keep > x.size_) throw std::invalid_argument("cannot restrict to a larger field");
  for (int i = keep; i < x.size_; ++i)
    if (x.d_[i] != 0) return std::nullopt;
  FFElement r = make_raw(to);
  for (int i = 0; i < keep; ++i) r.d_[i] = x.d_[i];
  return r;
}

void FieldCtx::check_same(const FFElement& a, const FFElement& b) const {
  if (a.ctx_ == nullptr || b.ctx_ == nullptr) throw std::logic_error("detached element");
  if (a.ctx_ != b.ctx_) throw std::invalid_argument("mixed field contexts");
  if (a.level_ != b.level_) throw std::invalid_argument("mixed field levels");
}

void FieldCtx::add_into(Level level, const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const {
  const int n = digits(level);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t s = a[i] + b[i];
    out[i] = s >= p_ ? s - p_ : s;
  }
}

void FieldCtx::sub_into(Level level, const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const {
  const int n = digits(level);
  for (int i = 0; i < n; ++i) out[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p_ - b[i];
}

void FieldCtx::mul_into(Level level, const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const {
  switch (level) {
    case Level::prime: out[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[0]) * b[0] % p_); return;
    case Level::base: base_mul(a, b, out); return;
    case Level::extension: ext_mul(a, b, out); return;
  }
}

void FieldCtx::base_mul(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const {
  if (h_ == 1) {
    out[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[0]) * b[0] % p_);
    return;
  }
  std::array<std::uint64_t, 2 * kMaxBaseDegree> r{};
  for (int i = 0; i < h_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < h_; ++j) r[i + j] = (r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p_;
  }
  for (int i = 2 * h_ - 2; i >= h_; --i) {
    const std::uint64_t c = r[i];
    if (c == 0) continue;
    for (int j = 0; j < h_; ++j) r[i - h_ + j] = (r[i - h_ + j] + (p_ - c) * base_mod_[j]) % p_;
  }
  for (int i = 0; i < h_; ++i) out[i] = static_cast<std::uint32_t>(r[i]);
}

void FieldCtx::ext_mul(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const {
  using Coord = std::array<std::uint32_t, kMaxBaseDegree>;
  std::array<Coord, 5> r{};
  Coord t{};
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      base_mul(a + i * h_, b + j * h_, t.data());
      add_into(Level::base, r[i + j].data(), t.data(), r[i + j].data());
    }
  }
  for (int i = 2 * k_ - 2; i >= k_; --i) {
    bool nonzero = false;
    for (int d = 0; d < h_; ++d) nonzero |= r[i][d] != 0;
    if (!nonzero) continue;
    for (int j = 0; j < k_; ++j) {
      base_mul(r[i].data(), ext_mod_[j].d_.data(), t.data());
      sub_into(Level::base, r[i - k_ + j].data(), t.data(), r[i - k_ + j].data());
    }
  }
  for (int i = 0; i < k_; ++i)
    for (int d = 0; d < h_; ++d) out[i * h_ + d] = r[i][d];
}

void FieldCtx::build_base_modulus() {
  // Coefficient tuples (c0, ..., c_{h-1}) in lexicographic order, c0 first.
  const std::uint64_t count = q_;
  for (std::uint64_t n = 0; n < count; ++n) {
    std::vector<std::uint32_t> f(h_ + 1, 0);
    std::uint64_t m = n;
    for (int i = h_ - 1; i >= 0; --i) {
      f[i] = static_cast<std::uint32_t>(m % p_);
      m /= p_;
    }
    f[h_] = 1;
    if (is_irreducible_mod_p(f, p_)) {
      base_mod_ = std::move(f);
      return;
    }
  }
  throw std::logic_error("no irreducible base modulus found");
}

void FieldCtx::build_ext_modulus() {
  ElementOps ops{this, Level::base};
  const std::uint64_t total = checked_pow(q_, k_);
  const std::vector<FFElement> x{zero(Level::base), one(Level::base)};
  for (std::uint64_t n = 0; n < total; ++n) {
    std::vector<FFElement> f(k_ + 1);
    std::uint64_t m = n;
    for (int i = k_ - 1; i >= 0; --i) {
      f[i] = from_index(m % q_, Level::base);
      m /= q_;
    }
    f[k_] = one(Level::base);
    // Degree 2 or 3: irreducible iff no root in F_q, i.e. gcd(f, X^q - X) = 1.
    auto xq = detail::powmod(ops, x, mpz_class(static_cast<unsigned long>(q_)), f);
    auto g = detail::gcd(ops, f, detail::sub(ops, xq, x));
    if (g.size() == 1) {
      ext_mod_ = std::move(f);
      return;
    }
  }
  throw std::logic_error("no irreducible extension modulus found");
}

void FieldCtx::build_frobenius() {
  frob_.assign(k_, {});
  const FFElement t = generator(Level::extension);
  FFElement image = t.pow(q_);
  for (int s = 1; s < k_; ++s) {
    FFElement power = one(Level::extension);
    for (int j = 0; j < k_; ++j) {
      frob_[s].push_back(power.d_);
      power *= image;
    }
    image = image.pow(q_);
  }
}

FFElement FieldCtx::frobenius(const FFElement& x, int k) const {
  if (x.ctx_ != this || x.level_ != Level::extension) throw std::invalid_argument("frobenius needs an extension element of this field");
  if (k < 0) throw std::invalid_argument("frobenius power must be non-negative");
  const int s = k % k_;
  if (s == 0) return x;
  FFElement r = make_raw(Level::extension);
  std::array<std::uint32_t, kMaxDigits> term{};
  for (int j = 0; j < k_; ++j) {
    const std::uint32_t* cj = x.d_.data() + j * h_;
    bool nonzero = false;
    for (int d = 0; d < h_; ++d) nonzero |= cj[d] != 0;
    if (!nonzero) continue;
    const auto& img = frob_[s][j];
    for (int i = 0; i < k_; ++i) base_mul(cj, img.data() + i * h_, term.data() + i * h_);
    add_into(Level::extension, r.d_.data(), term.data(), r.d_.data());
  }
  return r;
}

FFElement FieldCtx::norm(const FFElement& x) const {
  FFElement n = x;
  for (int s = 1; s < k_; ++s) n *= frobenius(x, s);
  return restrict_to(n, Level::base).value();
}

bool FieldCtx::in_mu(const FFElement& x) const {
  if (x.ctx_ != this || x.level_ != Level::extension) throw std::invalid_argument("in_mu needs an extension element of this field");
  if (x.is_zero()) return false;
  return norm(x).is_one();
}

std::vector<FFElement> FieldCtx::mu_intersect_base() const {
  // For c in F_q, c^(q^2+q+1) = c^3, so this is the set of cube roots of 1.
  std::vector<FFElement> out{one(Level::base)};
  if (q_ % 3 != 1) return out;
  const mpz_class e(static_cast<unsigned long>((q_ - 1) / 3));
  for (std::uint64_t i = 2; i < q_; ++i) {
    const FFElement w = from_index(i, Level::base).pow(e);
    if (!w.is_one()) {
      out.push_back(w);
      out.push_back(w * w);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool FieldCtx::is_cube(const FFElement& x) const {
  if (x.ctx_ != this) throw std::invalid_argument("element from a different field");
  if (x.is_zero()) throw std::domain_error("cube class of zero");
  const mpz_class n1 = order(x.level_) - 1;
  if (n1 % 3 != 0) return true;
  return x.pow(mpz_class(n1 / 3)).is_one();
}

std::string FieldCtx::header() const {
  std::ostringstream os;
  os << "p=" << p_ << " h=" << h_ << " base_modulus=";
  for (std::size_t i = 0; i < base_mod_.size(); ++i) os << (i ? "," : "") << base_mod_[i];
  os << " cubic_modulus=";
  for (std::size_t i = 0; i < ext_mod_.size(); ++i) os << (i ? "," : "") << ext_mod_[i].index();
  return os.str();
}

}  // namespace pplab

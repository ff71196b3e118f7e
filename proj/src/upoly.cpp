#include "pplab/upoly.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pplab/detail/dense_poly.hpp"

namespace pplab {

namespace {

struct Ops {
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

constexpr std::uint64_t kScanLimit = 1ULL << 16;

}  // namespace

UniPoly::UniPoly(const FieldCtx* ctx, Level level, std::vector<FFElement> coeffs)
    : ctx_(ctx), level_(level), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_)
    if (c.ctx() != ctx_ || c.level() != level_) throw std::invalid_argument("coefficient from a different field or level");
  detail::trim(Ops{ctx_, level_}, coeffs_);
}

UniPoly UniPoly::from_ints(const FieldCtx* ctx, Level level, std::initializer_list<long long> coeffs) {
  std::vector<FFElement> c;
  for (long long v : coeffs) c.push_back(ctx->from_int(v, level));
  return UniPoly(ctx, level, std::move(c));
}

FFElement UniPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return ctx_->zero(level_);
  return coeffs_[i];
}

void UniPoly::check_compatible(const UniPoly& g) const {
  if (ctx_ != g.ctx_ || level_ != g.level_) throw std::invalid_argument("polynomials over different fields");
}

FFElement UniPoly::eval(const FFElement& x) const {
  if (x.ctx() != ctx_ || x.level() != level_) throw std::invalid_argument("evaluation point from a different field");
  FFElement acc = ctx_->zero(level_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

UniPoly UniPoly::lift(Level to) const {
  std::vector<FFElement> c;
  c.reserve(coeffs_.size());
  for (const auto& a : coeffs_) c.push_back(ctx_->embed(a, to));
  return UniPoly(ctx_, to, std::move(c));
}

UniPoly UniPoly::derivative() const {
  return UniPoly(ctx_, level_, detail::derivative(Ops{ctx_, level_}, coeffs_));
}

UniPoly UniPoly::monic() const {
  return UniPoly(ctx_, level_, detail::make_monic(Ops{ctx_, level_}, coeffs_));
}

UniPoly operator+(const UniPoly& f, const UniPoly& g) {
  f.check_compatible(g);
  return UniPoly(f.ctx_, f.level_, detail::add(Ops{f.ctx_, f.level_}, f.coeffs_, g.coeffs_));
}

UniPoly operator-(const UniPoly& f, const UniPoly& g) {
  f.check_compatible(g);
  return UniPoly(f.ctx_, f.level_, detail::sub(Ops{f.ctx_, f.level_}, f.coeffs_, g.coeffs_));
}

UniPoly operator*(const UniPoly& f, const UniPoly& g) {
  f.check_compatible(g);
  return UniPoly(f.ctx_, f.level_, detail::mul(Ops{f.ctx_, f.level_}, f.coeffs_, g.coeffs_));
}

bool operator==(const UniPoly& f, const UniPoly& g) {
  return f.ctx_ == g.ctx_ && f.level_ == g.level_ && f.coeffs_ == g.coeffs_;
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly& f, const UniPoly& g) {
  f.check_compatible(g);
  auto [q, r] = detail::divmod(Ops{f.ctx_, f.level_}, f.coeffs_, g.coeffs_);
  return {UniPoly(f.ctx_, f.level_, std::move(q)), UniPoly(f.ctx_, f.level_, std::move(r))};
}

UniPoly gcd(const UniPoly& f, const UniPoly& g) {
  f.check_compatible(g);
  return UniPoly(f.ctx_, f.level_, detail::gcd(Ops{f.ctx_, f.level_}, f.coeffs_, g.coeffs_));
}

UniPoly powmod(const UniPoly& base, const mpz_class& e, const UniPoly& m) {
  base.check_compatible(m);
  return UniPoly(base.ctx_, base.level_, detail::powmod(Ops{base.ctx_, base.level_}, base.coeffs_, e, m.coeffs_));
}

std::string UniPoly::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (coeffs_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << coeffs_[i];
    if (i > 0) os << "*T";
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

// ------------------------------------------------------------------ roots

namespace {

// Equal-degree splitting of a monic squarefree product of distinct linear
// factors (Cantor-Zassenhaus, odd characteristic).
void split_linear(const UniPoly& g, const mpz_class& half_order, std::mt19937_64& rng,
                  std::vector<FFElement>& out) {
  const FieldCtx* ctx = g.ctx();
  const Level level = g.level();
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(-(g.coeff(0) / g.coeff(1)));
    return;
  }
  const UniPoly one(ctx, level, {ctx->one(level)});
  for (;;) {
    const UniPoly shifted(ctx, level, {ctx->random(level, rng), ctx->one(level)});
    const UniPoly w = powmod(shifted, half_order, g) - one;
    const UniPoly d = gcd(g, w);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_linear(d, half_order, rng, out);
      split_linear(divmod(g, d).first.monic(), half_order, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<FFElement> roots(const UniPoly& f, std::uint64_t seed) {
  if (f.degree() < 1 || f.degree() > 4) throw std::invalid_argument("roots supports degrees 1 to 4");
  const FieldCtx* ctx = f.ctx();
  const Level level = f.level();
  const mpz_class order = ctx->order(level);
  const UniPoly x(ctx, level, {ctx->zero(level), ctx->one(level)});
  const UniPoly m = f.monic();
  const UniPoly g = gcd(m, powmod(x, order, m) - x);

  std::vector<FFElement> out;
  if (g.degree() <= 0) return out;
  if (order <= kScanLimit) {
    const std::uint64_t n = order.get_ui();
    for (std::uint64_t i = 0; i < n; ++i) {
      const FFElement c = ctx->from_index(i, level);
      if (g.eval(c).is_zero()) out.push_back(c);
    }
  } else {
    std::mt19937_64 rng(seed);
    split_linear(g, mpz_class((order - 1) / 2), rng, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FFElement> roots_in_mu(const UniPoly& f, std::uint64_t seed) {
  if (f.level() != Level::base) throw std::invalid_argument("roots_in_mu expects coefficients in F_q");
  std::vector<FFElement> out;
  for (auto& r : roots(f.lift(Level::extension), seed))
    if (f.ctx()->in_mu(r)) out.push_back(r);
  return out;
}

int count_roots_by_scan(const UniPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("zero polynomial has every element as a root");
  const FieldCtx* ctx = f.ctx();
  const std::uint64_t n = ctx->order(f.level()).get_ui();
  int count = 0;
  for (std::uint64_t i = 0; i < n; ++i) count += f.eval(ctx->from_index(i, f.level())).is_zero();
  return count;
}

UniPoly hessian(const UniPoly& cubic) {
  if (cubic.degree() != 3) throw std::invalid_argument("hessian expects a cubic");
  const FieldCtx* ctx = cubic.ctx();
  const Level lv = cubic.level();
  const FFElement a = cubic.coeff(3), b = cubic.coeff(2), c = cubic.coeff(1), d = cubic.coeff(0);
  const FFElement three = ctx->from_int(3, lv), nine = ctx->from_int(9, lv);
  const FFElement h2 = b * b - three * a * c;
  const FFElement h1 = b * c - nine * a * d;
  const FFElement h0 = c * c - three * b * d;
  return UniPoly(ctx, lv, {-h0, -h1, -h2});
}

HessianSplit hessian_split(const UniPoly& cubic) {
  if (cubic.degree() != 3) throw std::invalid_argument("hessian_split expects a cubic");
  if (cubic.level() != Level::base) throw std::invalid_argument("hessian_split expects coefficients in F_q");
  const FieldCtx* ctx = cubic.ctx();
  if (ctx->q() % 3 != 1) throw std::invalid_argument("hessian_split requires q = 1 mod 3");

  auto fallback = [&](std::string reason) {
    HessianSplit r;
    r.method = SplitMethod::fallback;
    r.fallback_reason = std::move(reason);
    const int n = ctx->q() <= (1ULL << 20) ? count_roots_by_scan(cubic) : static_cast<int>(roots(cubic).size());
    r.split = n == 3;
    return r;
  };

  if (gcd(cubic, cubic.derivative()).degree() > 0) return fallback("cubic not squarefree");
  const UniPoly hes = hessian(cubic);
  if (hes.degree() < 2) return fallback("Hessian leading coefficient vanishes");
  const FFElement disc = hes.coeff(1) * hes.coeff(1) - ctx->from_int(4, Level::base) * hes.coeff(2) * hes.coeff(0);
  if (disc.is_zero()) return fallback("Hessian has a double root");

  const auto betas = roots(hes);
  HessianSplit r;
  if (betas.size() != 2) {
    r.method = SplitMethod::hessian_roots_outside;
    r.split = false;
    return r;
  }
  const FFElement f1 = cubic.eval(betas[0]);
  const FFElement f2 = cubic.eval(betas[1]);
  if (f1.is_zero() || f2.is_zero()) return fallback("cubic vanishes at a Hessian root");
  r.beta1 = betas[0];
  r.beta2 = betas[1];
  r.ratio = f1 / f2;
  r.split = ctx->is_cube(*r.ratio);
  return r;
}

}  // namespace pplab

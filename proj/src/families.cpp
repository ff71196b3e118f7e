#include "pplab/families.hpp"

#include <chrono>
#include <random>
#include <sstream>

namespace pplab {

std::string to_string(Family f) {
  switch (f) {
    case Family::f1: return "f1";
    case Family::f2: return "f2";
    case Family::f3: return "f3";
    case Family::f4: return "f4";
  }
  return "?";
}

std::string to_string(Branch b) { return b == Branch::a_nonzero ? "a_nonzero" : "a_zero"; }

std::string to_string(VerifyMode m) { return m == VerifyMode::full ? "full" : "probabilistic"; }

Family parse_family(const std::string& s) {
  if (s == "f1") return Family::f1;
  if (s == "f2") return Family::f2;
  if (s == "f3") return Family::f3;
  if (s == "f4") return Family::f4;
  throw std::invalid_argument("unknown family '" + s + "' (expected f1..f4)");
}

Branch parse_branch(const std::string& s) {
  if (s == "a_nonzero") return Branch::a_nonzero;
  if (s == "a_zero") return Branch::a_zero;
  throw std::invalid_argument("unknown branch '" + s + "' (expected a_nonzero or a_zero)");
}

bool needs_q_1_mod_3(Family f) { return f == Family::f3 || f == Family::f4; }

TrinomialSpec::TrinomialSpec(Family f, FFElement a, FFElement b) : family(f), A(std::move(a)), B(std::move(b)) {
  if (A.ctx() == nullptr || A.ctx() != B.ctx()) throw std::invalid_argument("A and B must come from the same field");
  if (A.level() != Level::base || B.level() != Level::base) throw std::invalid_argument("A and B must lie in F_q");
}

mpz_class leading_exponent(std::uint64_t q) {
  const mpz_class Q(static_cast<unsigned long>(q));
  return Q * Q + Q - 1;
}

mpz_class middle_exponent(Family f, std::uint64_t q) {
  const mpz_class Q(static_cast<unsigned long>(q));
  switch (f) {
    case Family::f1: return Q * Q - Q + 1;
    case Family::f2: return Q * Q * Q - Q * Q + Q;
    case Family::f3: return Q * Q;
    case Family::f4: return Q;
  }
  return 0;
}

namespace {

bool minus_b(Family f) { return f == Family::f3 || f == Family::f4; }

}  // namespace

FFElement trinomial_eval(const TrinomialSpec& spec, const FFElement& x) {
  const FieldCtx* ctx = spec.ctx();
  if (x.ctx() != ctx || x.level() != Level::extension) throw std::invalid_argument("x must lie in F_{q^3} of the spec's field");
  if (x.is_zero()) return x;
  const FFElement y = ctx->frobenius(x, 1), z = ctx->frobenius(x, 2);
  const FFElement xinv = x.inv();
  const FFElement lead = z * y * xinv;
  FFElement mid;
  // exponents reduced mod q^3 - 1
  switch (spec.family) {
    case Family::f1: mid = z * x * y.inv(); break;    // q^2 - q + 1
    case Family::f2: mid = x * y * z.inv(); break;    // q^3 - q^2 + q ≡ 1 + q - q^2
    case Family::f3: mid = z; break;
    case Family::f4: mid = y; break;
  }
  const FFElement A = ctx->embed(spec.A, Level::extension), B = ctx->embed(spec.B, Level::extension);
  return minus_b(spec.family) ? lead + A * mid - B * x : lead + A * mid + B * x;
}

FFElement trinomial_eval_pow(const TrinomialSpec& spec, const FFElement& x) {
  const FieldCtx* ctx = spec.ctx();
  if (x.ctx() != ctx || x.level() != Level::extension) throw std::invalid_argument("x must lie in F_{q^3} of the spec's field");
  const FFElement A = ctx->embed(spec.A, Level::extension), B = ctx->embed(spec.B, Level::extension);
  const FFElement lead = x.pow(leading_exponent(ctx->q()));
  const FFElement mid = x.pow(middle_exponent(spec.family, ctx->q()));
  return minus_b(spec.family) ? lead + A * mid - B * x : lead + A * mid + B * x;
}

// ------------------------------------------------------------------ h1

const std::vector<ZPoly>& h1_factors() {
  static const std::vector<ZPoly> factors{
      ZPoly::var(Var::A),
      ZPoly::parse("A^22 + 9*A^19 + 18*A^18 + A^17 + 63*A^16 + 78*A^15 + 72*A^14 + 165*A^13 - 215*A^12"
                   " - 64*A^11 + 300*A^10 - 108*A^9 + 15*A^8 + 45*A^7 + 7*A^6 + 36*A^5 + 6*A^4 + 3*A^2 + 1"),
      ZPoly::parse("A^44 - A^42 + 3*A^41 - 18*A^40 - 7*A^39 + 22*A^38 - 50*A^37 + 118*A^36 + 145*A^35"
                   " - 254*A^34 + 218*A^33 - 112*A^32 - 726*A^31 + 627*A^30 - 217*A^29 - 16*A^28 + 258*A^27"
                   " + 996*A^26 - 611*A^25 - 161*A^24 - 691*A^23 - 392*A^22 + 1189*A^21 + 252*A^20 - 645*A^19"
                   " + 458*A^18 - 475*A^17 - 141*A^16 + 237*A^15 + 72*A^14 + 298*A^13 - 327*A^12 - 121*A^11"
                   " + 140*A^10 + 47*A^9 + 27*A^8 - 59*A^7 - 10*A^6 + 22*A^5 + 3*A^4 - 3*A^2 + 1"),
  };
  return factors;
}

namespace {

FFElement eval_in_A(const ZPoly& f, const FFElement& A) {
  const FieldCtx* ctx = A.ctx();
  const auto cs = f.coeffs_in(Var::A);
  FFElement acc = ctx->zero(A.level());
  for (std::size_t i = cs.size(); i-- > 0;) {
    acc *= A;
    if (!cs[i].is_zero()) {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), cs[i].constant_value().get_mpz_t(), ctx->p());
      acc += ctx->from_int(static_cast<long long>(r.get_ui()), A.level());
    }
  }
  return acc;
}

}  // namespace

FFElement h1_eval(const FFElement& A) {
  FFElement r = A.ctx()->one(A.level());
  for (const auto& f : h1_factors()) r *= eval_in_A(f, A);
  return r;
}

// ---------------------------------------------------------- conditions

std::optional<UniPoly> condition_cubic(const TrinomialSpec& spec) {
  const FieldCtx* ctx = spec.ctx();
  const FFElement& A = spec.A;
  const FFElement& B = spec.B;
  const FFElement one = ctx->one(Level::base);
  switch (spec.family) {
    case Family::f1:  // T^3 + A^2 T^2 + (AB + A) T - 1
      return UniPoly(ctx, Level::base, {-one, A * B + A, A * A, one});
    case Family::f2:  // T^3 - (AB + A) T^2 - A^2 T - 1
      return UniPoly(ctx, Level::base, {-one, -(A * A), -(A * B + A), one});
    case Family::f3: return std::nullopt;
    case Family::f4:  // B y^3 + A^2 y^2 + (A - AB) y - B
      return UniPoly(ctx, Level::base, {-B, A - A * B, A * A, B});
  }
  return std::nullopt;
}

ConditionResult check_conditions(const TrinomialSpec& spec) {
  const FieldCtx* ctx = spec.ctx();
  if (needs_q_1_mod_3(spec.family) && ctx->q() % 3 != 1)
    throw CongruenceError(to_string(spec.family) + " requires q = 1 mod 3 (q = " + std::to_string(ctx->q()) + ")");
  const FFElement& A = spec.A;
  const FFElement& B = spec.B;
  const FFElement one = ctx->one(Level::base);
  ConditionResult r;
  auto fail = [&](std::string why) {
    r.pass = false;
    r.reasons.push_back(std::move(why));
  };
  const FFElement A3 = A * A * A;
  switch (spec.family) {
    case Family::f1:
    case Family::f2: {
      if (!(A3 + B * B - B + one).is_zero()) fail("A^3+B^2-B+1 != 0");
      if (spec.family == Family::f1) {
        if (B.is_zero() || B == one) fail("B ∈ {0,1}");
      } else {
        if (B.is_zero() || B == -one) fail("B ∈ {0,-1}");
      }
      const UniPoly cubic = *condition_cubic(spec);
      if (!roots_in_mu(cubic).empty())
        fail(spec.family == Family::f1 ? "F(T) has a root in mu" : "G(T) has a root in mu");
      break;
    }
    case Family::f3:
      if (!(B * B + B + one).is_zero()) fail("B^2+B+1 != 0");
      if (h1_eval(A).is_zero()) fail("h1(A) = 0");
      if ((A3 + one).is_zero()) fail("A^3 = -1");
      break;
    case Family::f4: {
      if (!(B * B + B + one).is_zero()) fail("B^2+B+1 != 0");
      if ((A3 + one).is_zero()) fail("A^3 = -1");
      const UniPoly cubic = *condition_cubic(spec);
      if (cubic.degree() >= 1 && !roots_in_mu(cubic).empty()) fail("F(y) has a root in mu");
      break;
    }
  }
  return r;
}

// ----------------------------------------------------------- identities

namespace {

const ZPoly& X() {
  static const ZPoly v = ZPoly::var(Var::x);
  return v;
}
const ZPoly& Ap() {
  static const ZPoly v = ZPoly::var(Var::A);
  return v;
}
const ZPoly& Bp() {
  static const ZPoly v = ZPoly::var(Var::B);
  return v;
}

ZPoly pw(const ZPoly& p, unsigned e) { return p.pow(e); }

}  // namespace

ZPoly family_cubic_F() {
  const ZPoly &u = X(), &A = Ap(), &B = Bp();
  return pw(u, 3) + A * A * u * u + (A * B + A) * u - 1;
}

ZPoly family_cubic_G() {
  const ZPoly &T = X(), &A = Ap(), &B = Bp();
  return pw(T, 3) - A * B * T * T - A * T * T - A * A * T - 1;
}

bool verify_reciprocal_identity() {
  // T^3 G(1/T): reverse the coefficient list of the cubic in T
  auto cs = family_cubic_G().coeffs_in(Var::x);
  if (cs.size() != 4) return false;
  std::reverse(cs.begin(), cs.end());
  const ZPoly rev = ZPoly::from_coeffs_in(Var::x, cs);
  return rev == -family_cubic_F();
}

IdentityPolys identity_polys(Family f) {
  const ZPoly &u = X(), &A = Ap(), &B = Bp();
  IdentityPolys r;
  if (f == Family::f1) {
    r.left_low = -A * pw(u, 4) + B * B * pw(u, 3) - 2 * A * A * u * u + A * B * B * u - B + 1;
    r.left_high = (-B + 1) * pw(u, 8) + (-A * pw(B, 3) - 4 * A * B + 4 * A) * pw(u, 6) +
                  (-3 * A * A * pw(B, 3) - 2 * A * A * B * B - 6 * A * A * B + 6 * A * A) * pw(u, 4) +
                  (-3 * pw(A, 3) * pw(B, 3) - 4 * pw(A, 3) * B * B - 4 * pw(A, 3) * B + 4 * pw(A, 3) - pw(B, 5)) * u * u -
                  A * (pw(A, 3) * pw(B, 3) + 2 * pw(A, 3) * B * B + pw(A, 3) * B - pw(A, 3) + pw(B, 5) + pw(B, 4));
    r.cofactor = -pw(A, 4) * (B - 1) * pw(u, 4) - pw(A, 3) * (pw(B, 3) - B * B) * pw(u, 3) +
                 A * A * (-pw(A, 3) * pw(B, 3) - 2 * pw(A, 3) * B + 2 * pw(A, 3) - pw(B, 5) + pw(B, 4)) * u * u +
                 A * (-pw(A, 3) * pw(B, 5) - pw(A, 3) * pw(B, 3) + pw(A, 3) * B * B - pw(B, 7) + pw(B, 6)) * u -
                 pw(A, 6) * pw(B, 3) - 2 * pw(A, 6) * B * B - 2 * pw(A, 6) * B + 2 * pw(A, 6) - pw(A, 3) * pw(B, 7) +
                 pw(A, 3) * B * B - 2 * pw(A, 3) * B + pw(A, 3) - pw(B, 9) + pw(B, 8);
    r.multiplier = pw(A, 5);
    r.cubic = family_cubic_F();
  } else if (f == Family::f2) {
    const ZPoly& y = u;
    r.left_low = -A * A * pw(y, 4) - pw(B, 3) * pw(y, 3) - A * B * B * y * y - 2 * A * y * y - 1;
    r.left_high = -pw(A, 4) * pw(y, 8) + (-pw(A, 3) * pw(B, 4) - 2 * pw(A, 3) * B * B - 4 * pw(A, 3)) * pw(y, 6) +
                  A * pw(B, 6) * pw(y, 5) + (-3 * A * A * pw(B, 4) - 4 * A * A * B * B - 6 * A * A) * pw(y, 4) +
                  pw(B, 6) * pw(y, 3) + (-A * pw(B, 4) - 2 * A * B * B - 4 * A) * y * y - 1;
    r.cofactor = -pw(A, 8) * pw(y, 4) + pw(A, 6) * pw(B, 3) * pw(y, 3) +
                 pw(A, 4) * (-pw(A, 3) * pw(B, 4) - pw(A, 3) * B * B - 2 * pw(A, 3) - pw(B, 6)) * y * y -
                 A * A * pw(B, 6) * (-pw(A, 3) * B - pw(A, 3) - pw(B, 3)) * y +
                 (pw(A, 3) * B * B - pw(A, 3) * B + pw(A, 3) - pw(B, 6)) *
                     (pw(A, 3) * pw(B, 4) + pw(A, 3) * pw(B, 3) - pw(A, 3) * B - pw(A, 3) + pw(B, 6));
    r.multiplier = pw(A, 6);
    r.cubic = family_cubic_G();
  } else {
    throw std::invalid_argument("identities exist for f1 and f2 only");
  }
  return r;
}

namespace {

// A random point (A, B) of A^3 + B^2 - B + 1 = 0 over F_P: choose A, solve the
// quadratic in B (P ≡ 3 mod 4, so square roots are a single power).
std::pair<Mod61, Mod61> random_curve_point(std::mt19937_64& rng) {
  const Mod61 half = Mod61(2).inv();
  for (;;) {
    const Mod61 A = Mod61::random(rng);
    const Mod61 d = Mod61(-3) - Mod61(4) * A * A * A;
    const Mod61 s = d.pow((Mod61::P + 1) / 4);
    if (s * s != d) continue;
    return {A, (Mod61(1) + s) * half};
  }
}

}  // namespace

IdentityReport verify_identity(Family f, VerifyMode mode, std::uint64_t seed, long cofactor_perturbation) {
  IdentityPolys ip = identity_polys(f);
  if (cofactor_perturbation != 0) ip.cofactor += ZPoly(cofactor_perturbation);
  const ZPoly lhs = ip.multiplier * ip.left_high + ip.cofactor * ip.left_low;
  const ZPoly rhs = pw(Bp(), 6) * ip.cubic;
  IdentityReport r;
  r.family = f;
  r.mode = mode;
  if (mode == VerifyMode::full) {
    const ZPoly rel = -Bp() * Bp() + Bp() - 1;
    const ZPoly minus = substitute_reduce(lhs - rhs, Var::A, 3, rel);
    const ZPoly plus = substitute_reduce(lhs + rhs, Var::A, 3, rel);
    r.holds_as_displayed = minus.is_zero();
    r.holds_negated = plus.is_zero();
    r.residual_terms = minus.num_terms();
    return r;
  }
  std::mt19937_64 rng(seed);
  const ModPoly lm = reduce_mod61(lhs), rm = reduce_mod61(rhs);
  r.points = 40;
  r.holds_as_displayed = r.holds_negated = true;
  for (int i = 0; i < r.points; ++i) {
    const auto [A, B] = random_curve_point(rng);
    std::array<Mod61, kNumVars> pt{};
    pt[static_cast<int>(Var::x)] = Mod61::random(rng);
    pt[static_cast<int>(Var::A)] = A;
    pt[static_cast<int>(Var::B)] = B;
    const Mod61 l = lm.eval(pt), rr = rm.eval(pt);
    r.holds_as_displayed = r.holds_as_displayed && l == rr;
    r.holds_negated = r.holds_negated && l == -rr;
  }
  return r;
}

// ------------------------------------------------------------ pipelines

namespace {

template <typename R>
using Poly = SparsePoly<R>;

template <typename R>
using Specialisation = std::array<std::optional<R>, kNumVars>;

template <typename R>
Poly<R> lift(const ZPoly& f) {
  if constexpr (std::is_same_v<R, mpz_class>) return f;
  else return reduce_mod61(f);
}

template <typename R>
Poly<R> P(const char* text) {
  return lift<R>(ZPoly::parse(text));
}

template <typename R>
Poly<R> specialise_all(const Poly<R>& f, const Specialisation<R>& s) {
  Poly<R> r = f;
  for (int i = 0; i < kNumVars; ++i)
    if (s[i]) r = r.specialize(static_cast<Var>(i), *s[i]);
  return r;
}

template <typename R>
Poly<R> div_step(const Poly<R>& f, const Poly<R>& g, const std::string& step) {
  try {
    return exact_divide(f, g);
  } catch (const InexactDivision<R>& e) {
    throw PipelineError(step, "inexact division (remainder has " + std::to_string(e.remainder().num_terms()) + " terms)");
  }
}

template <typename R>
int divide_out(Poly<R>& f, const Poly<R>& g) {
  int m = 0;
  while (!f.is_zero()) {
    auto [q, r] = divide(f, g);
    if (!r.is_zero()) break;
    f = std::move(q);
    ++m;
  }
  return m;
}

template <typename R>
struct Core {
  Poly<R> raw, reduced;
  std::vector<std::string> steps;
};

template <typename R>
void log_step(Core<R>& c, const std::string& name, const Poly<R>& p) {
  std::ostringstream os;
  os << name << ": " << p.num_terms() << " terms, total degree " << p.total_degree();
  c.steps.push_back(os.str());
}

constexpr std::array<Var, kNumVars> kCycle{Var::y, Var::z, Var::x, Var::A, Var::B, Var::b, Var::c, Var::a};

template <typename R>
Core<R> core_a_nonzero(Family f, const Specialisation<R>& sp) {
  Core<R> c;
  const Poly<R> x = Poly<R>::var(Var::x), y = Poly<R>::var(Var::y), z = Poly<R>::var(Var::z);
  const char* p1_text = nullptr;
  switch (f) {
    case Family::f1: p1_text = "y^2*z + A*x^2*z + B*x^2*y - a*x*y"; break;
    case Family::f2: p1_text = "y*z^2 + A*x^2*y + B*x^2*z - a*x*z"; break;
    case Family::f3: p1_text = "z*y + A*z*x - B*x^2 - a*x"; break;
    case Family::f4: p1_text = "z*y + A*y*x - B*x^2 - a*x"; break;
  }
  const Poly<R> p1g = P<R>(p1_text);
  const Poly<R> p2g = p1g.permute_vars(kCycle), p3g = p2g.permute_vars(kCycle);
  const Poly<R> p1 = specialise_all(p1g, sp), p2 = specialise_all(p2g, sp), p3 = specialise_all(p3g, sp);
  if (f == Family::f1 || f == Family::f2) {
    const bool one = f == Family::f1;
    const Var v1 = one ? Var::z : Var::y, v2 = one ? Var::y : Var::z;
    const Poly<R> d1 = one ? x * y * y : x * x * z, d2 = one ? x * x * y : x * z * z;
    const std::string n1 = one ? "R1 = Res_z(p1,p2)/x/y^2" : "R1 = Res_y(p1,p2)/x^2/z";
    const std::string n2 = one ? "R2 = Res_z(p1,p3)/x^2/y" : "R2 = Res_y(p1,p3)/x/z^2";
    const Poly<R> R1 = div_step(resultant(p1, p2, v1), d1, n1);
    log_step(c, n1, R1);
    const Poly<R> R2 = div_step(resultant(p1, p3, v1), d2, n2);
    log_step(c, n2, R2);
    c.raw = resultant(R1, R2, v2);
    log_step(c, one ? "RR = Res_y(R1,R2)" : "RR = Res_z(R1,R2)", c.raw);
    c.reduced = substitute_reduce(c.raw, Var::A, 3, specialise_all(P<R>("-B^2 + B - 1"), sp));
    log_step(c, "RR = Substitution(RR, A^3, -B^2+B-1)", c.reduced);
  } else {
    const Poly<R> R1 = resultant(p1, p2, Var::z);
    log_step(c, "R1 = Res_z(p1,p2)", R1);
    const Poly<R> R2 = div_step(resultant(p1, p3, Var::z), x, "R2 = Res_z(p1,p3)/x");
    log_step(c, "R2 = Res_z(p1,p3)/x", R2);
    const Poly<R> xb = specialise_all(P<R>("x*B + a"), sp);
    c.raw = div_step(resultant(R1, R2, Var::y), x * x * xb.pow(3), "RR = Res_y(R1,R2)/x^2/(x*B+a)^3");
    log_step(c, "RR = Res_y(R1,R2)/x^2/(x*B+a)^3", c.raw);
    c.reduced = substitute_reduce(c.raw, Var::B, 2, P<R>("-B - 1"));
    log_step(c, "RR = Substitution(RR, B^2, -B-1)", c.reduced);
  }
  return c;
}

template <typename R>
Poly<R> hessian_of_cubic(const Poly<R>& f, Var v) {
  auto cs = f.coeffs_in(v);
  cs.resize(4);
  const Poly<R>&a = cs[3], &b = cs[2], &cc = cs[1], &d = cs[0];
  const Poly<R> h2 = b * b - 3 * a * cc, h1 = b * cc - 9 * a * d, h0 = cc * cc - 3 * b * d;
  return -Poly<R>::from_coeffs_in(v, {h0, h1, h2});
}

template <typename R>
Core<R> core_a_zero(Family f) {
  Core<R> c;
  const Poly<R> y = Poly<R>::var(Var::y), A = Poly<R>::var(Var::A), B = Poly<R>::var(Var::B);
  const Poly<R> B2 = P<R>("-B - 1");
  if (f == Family::f3) {
    // yq = B/(y(y+A)), yqq = y^2 (yA)^2 / (B + Ay(y+A)); yqq·yq·y = N/D
    const Poly<R> N = y * y * (y * A).pow(2) * B * y;
    const Poly<R> D = (B + A * y * (y + A)) * y * (y + A);
    const Poly<R> pre = (y + A) * (B + A * y * (y + A));
    const Poly<R> pol1 = div_step(pre * (N - D), D, "pol1 = (y+A)(B+Ay(y+A))(yqq*yq*y-1)");
    log_step(c, "pol1", pol1);
    Poly<R> pol2 = pol1.substitute_fraction(Var::y, B, y * (y + A), 4);
    log_step(c, "pol2 = (y+A)^4 y^4 pol1(yq)", pol2);
    pol2 = substitute_reduce(pol2, Var::B, 2, B2);
    log_step(c, "pol2 = Substitution(pol2, B^2, -B-1)", pol2);
    c.raw = resultant(pol1, pol2, Var::y);
    log_step(c, "RR = Res_y(pol1,pol2)", c.raw);
    c.reduced = resultant(c.raw, P<R>("B^2 + B + 1"), Var::B);
    log_step(c, "RR = Res_B(RR, B^2+B+1)", c.reduced);
  } else if (f == Family::f4) {
    // yq = (B - Ay)/y^2, yqq = (By^4 - A(B-Ay)y^2)/(B-Ay)^2; yqq·yq·y = N/D
    const Poly<R> w = B - A * y;
    const Poly<R> N = (B * y.pow(4) - A * w * y * y) * w * y;
    const Poly<R> D = w * w * y * y;
    const Poly<R> pol1 = div_step(w * y * (N - D), D, "pol1 = (B-Ay)y(yqq*yq*y-1)");
    log_step(c, "pol1", pol1);
    const Poly<R> F = div_step(pol1, y, "F = pol1/y");
    log_step(c, "F = pol1/y", F);
    if (F != P<R>("B*y^3 + A^2*y^2 - A*B*y + A*y - B"))
      throw PipelineError("F = pol1/y", "cubic differs from B y^3 + A^2 y^2 - AB y + A y - B");
    Poly<R> H = substitute_reduce(hessian_of_cubic(F, Var::y), Var::B, 2, B2);
    log_step(c, "H = Substitution(Hessian_y(F), B^2, -B-1)", H);
    if (H != substitute_reduce(P<R>("-A^4*y^2 + 6*A*B*y^2 + 3*A*y^2 + A^3*B*y - A^3*y + 9*B*y + 9*y"), Var::B, 2, B2))
      throw PipelineError("H", "Hessian differs from -y((A^4-6AB-3A)y - A^3B + A^3 - 9B - 9)");
    const Poly<R> lin = div_step(H, y, "H/y");
    log_step(c, "H/y", lin);
    c.raw = resultant(F, lin, Var::y);
    log_step(c, "RR = Res_y(F, H/y)", c.raw);
    c.reduced = substitute_reduce(c.raw, Var::B, 2, B2);
    log_step(c, "RR = Substitution(RR, B^2, -B-1)", c.reduced);
  } else {
    throw std::invalid_argument("the a = 0 pipeline exists for f3 and f4 only");
  }
  return c;
}

std::string short_text(const std::string& s) { return s.size() <= 400 ? s : s.substr(0, 400) + " ..."; }

// Structure certificate for the reduced eliminant.
template <typename R>
bool certify(Family f, Branch b, const Poly<R>& reduced, const Specialisation<R>& sp, std::vector<CertifiedFactor>& out,
             std::string& detail) {
  std::ostringstream os;
  Poly<R> rest = reduced;
  if (b == Branch::a_nonzero) {
    if (f == Family::f1 || f == Family::f2) {
      const Poly<R> x = Poly<R>::var(Var::x);
      const int mx = divide_out(rest, x);
      const Poly<R> lin = specialise_all(P<R>("B*x - a"), sp);
      const int ml = divide_out(rest, lin);
      const int dx = rest.degree(Var::x);
      out.push_back({"x", "x", mx});
      out.push_back({"B*x - a", "B*x - a", ml});
      out.push_back({"alpha*x + beta", short_text(rest.str()), 1});
      os << "x^" << mx << " * (B*x - a)^" << ml << " * L with deg_x L = " << dx;
      detail = os.str();
      return mx == 4 && ml >= 1 && dx == 1;
    }
    const int dx = rest.degree(Var::x);
    out.push_back({"alpha*x + beta", short_text(rest.str()), 1});
    os << "deg_x RR = " << dx << " after dividing by x^2 (x*B + a)^3";
    detail = os.str();
    return dx == 1;
  }
  if (f == Family::f3) {
    static const char* names[] = {"A", "h1 degree-22 factor", "h1 degree-44 factor"};
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      const Poly<R> fac = lift<R>(h1_factors()[i]);
      const int m = divide_out(rest, fac);
      out.push_back({names[i], short_text(h1_factors()[i].str()), m});
      ok = ok && m >= 1;
      os << (i ? " * " : "") << names[i] << "^" << m;
    }
    os << " * cofactor of degree " << rest.degree(Var::A) << " in A";
    detail = os.str();
    return ok;
  }
  const Poly<R> C = P<R>("A^12*B + 12*A^9*B + 24*A^9 - 162*A^6*B - 324*A^3*B - 648*A^3 + 729*B");
  const int m = divide_out(rest, C);
  out.push_back({"A^12 B + 12 A^9 B + 24 A^9 - 162 A^6 B - 324 A^3 B - 648 A^3 + 729 B", short_text(C.str()), m});
  os << "C^" << m << " * cofactor " << short_text(rest.str());
  detail = os.str();
  return m >= 1;
}

// Parameters specialised in the a != 0 images; the relation variable stays symbolic.
std::vector<Var> specialised_vars(Family f) {
  if (f == Family::f1 || f == Family::f2) return {Var::B, Var::a, Var::b, Var::c};
  return {Var::A, Var::a, Var::b, Var::c};
}

}  // namespace

PipelineReport run_resultant_pipeline(Family f, Branch b, VerifyMode mode, std::uint64_t seed, int points) {
  if (b == Branch::a_zero && (f == Family::f1 || f == Family::f2))
    throw std::invalid_argument("the a = 0 case of f1/f2 is covered by the identities, not a pipeline");
  if (points < 1) throw std::invalid_argument("points must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  PipelineReport rep;
  rep.family = f;
  rep.branch = b;
  rep.mode = mode;
  std::mt19937_64 rng(seed);
  auto random_spec = [&]() {
    Specialisation<Mod61> sp{};
    for (Var v : specialised_vars(f)) sp[static_cast<int>(v)] = Mod61::random(rng);
    return sp;
  };

  if (mode == VerifyMode::full) {
    Core<mpz_class> core = b == Branch::a_nonzero ? core_a_nonzero<mpz_class>(f, {}) : core_a_zero<mpz_class>(f);
    rep.steps = core.steps;
    rep.raw_resultant = core.raw;
    rep.reduced_resultant = core.reduced;
    rep.structure_ok = certify<mpz_class>(f, b, core.reduced, {}, rep.certified_factors, rep.structure_detail);
    // evaluation-homomorphism cross-check
    const ModPoly image = reduce_mod61(core.reduced);
    if (b == Branch::a_zero) {
      rep.points = 1;
      rep.homomorphism_ok = core_a_zero<Mod61>(f).reduced == image;
    } else {
      rep.points = points;
      for (int i = 0; i < points && rep.homomorphism_ok; ++i) {
        const auto sp = random_spec();
        rep.homomorphism_ok = core_a_nonzero<Mod61>(f, sp).reduced == specialise_all(image, sp);
      }
    }
  } else {
    rep.structure_ok = true;
    if (b == Branch::a_zero) {
      Core<Mod61> core = core_a_zero<Mod61>(f);
      rep.steps = core.steps;
      rep.points = 1;
      rep.structure_ok = certify<Mod61>(f, b, core.reduced, {}, rep.certified_factors, rep.structure_detail);
    } else {
      rep.points = points;
      for (int i = 0; i < points; ++i) {
        const auto sp = random_spec();
        Core<Mod61> core = core_a_nonzero<Mod61>(f, sp);
        std::vector<CertifiedFactor> factors;
        std::string detail;
        const bool ok = certify<Mod61>(f, b, core.reduced, sp, factors, detail);
        if (i == 0) {
          rep.steps = core.steps;
          rep.certified_factors = factors;
          rep.structure_detail = detail;
        }
        if (!ok) {
          rep.structure_ok = false;
          rep.structure_detail = "specialisation " + std::to_string(i) + ": " + detail;
          break;
        }
      }
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ----------------------------------------------------------- closed form

std::pair<ZPoly, ZPoly> closed_form_polys(Family f) {
  // a, b, c stand for a, a^q, a^{q^2}
  if (f == Family::f3)
    return {ZPoly::parse("A^2*B*c*b^2*a + A^2*c*b^2*a + A*B*c^2*b*a - A*c^2*b*a + A*B*c*b^3 - A*b^2*a^2"
                         " - B*c*b*a^2 - B*b^3*a - b^3*a - B*c^3*a - c^3*a - c^2*b^2"),
            ZPoly::parse("A^3*B*c*b*a + A^3*c*b*a - 3*B*c*b*a - 3*c*b*a + A^2*B*b*a^2 + A^2*B*c^2*a"
                         " + A^2*B*c*b^2 + A*B*c*a^2 - A*c*a^2 + A*B*b^2*a - A*b^2*a + A*B*c^2*b - A*c^2*b"
                         " - a^3 - b^3 - c^3")};
  if (f == Family::f4)
    return {ZPoly::parse("A^2*B*c^2*b*a + A^2*c^2*b*a + A*B*c*b^2*a - A*c*b^2*a + A*B*c^3*b - A*c^2*a^2"
                         " - B*b^3*a - b^3*a - B*c^3*a - c^3*a - c^2*b^2 - B*c*b*a^2"),
            ZPoly::parse("A^3*B*c*b*a + A^3*c*b*a - 3*B*c*b*a - 3*c*b*a + A^2*B*c*a^2 + A^2*B*b^2*a"
                         " + A^2*B*c^2*b + A*B*c*b^2 - A*c*b^2 + A*B*b*a^2 - A*b*a^2 + A*B*c^2*a - A*c^2*a"
                         " - a^3 - b^3 - c^3")};
  throw std::invalid_argument("closed-form preimages exist for f3 and f4 only");
}

namespace {

FFElement eval_ff(const ZPoly& f, const std::array<FFElement, kNumVars>& pt, const FieldCtx* ctx) {
  FFElement acc = ctx->zero(Level::extension);
  for (const auto& [key, coeff] : f.terms()) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), coeff.get_mpz_t(), ctx->p());
    FFElement m = ctx->from_int(static_cast<long long>(r.get_ui()), Level::extension);
    for (int i = 0; i < kNumVars; ++i) {
      const int e = zdetail::exponent(key, static_cast<Var>(i));
      if (e) m *= pt[i].pow(static_cast<std::uint64_t>(e));
    }
    acc += m;
  }
  return acc;
}

}  // namespace

std::optional<FFElement> closed_form_preimage(const TrinomialSpec& spec, const FFElement& a) {
  const FieldCtx* ctx = spec.ctx();
  if (a.ctx() != ctx || a.level() != Level::extension) throw std::invalid_argument("a must lie in F_{q^3}");
  if (a.is_zero()) throw std::invalid_argument("closed-form preimage needs a != 0");
  const auto [num, den] = closed_form_polys(spec.family);
  std::array<FFElement, kNumVars> pt;
  for (auto& v : pt) v = ctx->zero(Level::extension);
  pt[static_cast<int>(Var::A)] = ctx->embed(spec.A, Level::extension);
  pt[static_cast<int>(Var::B)] = ctx->embed(spec.B, Level::extension);
  pt[static_cast<int>(Var::a)] = a;
  pt[static_cast<int>(Var::b)] = ctx->frobenius(a, 1);
  pt[static_cast<int>(Var::c)] = ctx->frobenius(a, 2);
  const FFElement d = eval_ff(den, pt, ctx);
  if (d.is_zero()) return std::nullopt;
  return eval_ff(num, pt, ctx) / d;
}

}  // namespace pplab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pplab/zpoly.hpp"

using namespace pplab;

namespace {

ZPoly P(const char* s) { return ZPoly::parse(s); }
const ZPoly X = ZPoly::var(Var::x), Y = ZPoly::var(Var::y), Z = ZPoly::var(Var::z);
const ZPoly Av = ZPoly::var(Var::A), Bv = ZPoly::var(Var::B), av = ZPoly::var(Var::a), bv = ZPoly::var(Var::b);

using oracle::random_in;
using oracle::random_poly;
using oracle::sylvester_bareiss;

}  // namespace

TEST_CASE("packing and order") {
  CHECK(zdetail::total_degree(zdetail::pack({1, 2, 3, 4, 5, 6, 7, 8})) == 36);
  CHECK(zdetail::total_degree(zdetail::pack({255, 255, 255, 255, 255, 255, 255, 255})) == 2040);
  CHECK_THROWS_AS(zdetail::pack({256, 0, 0, 0, 0, 0, 0, 0}), std::overflow_error);
  // grlex: total degree first, then x > y > ... > c
  CHECK((X * X + Y * Y * Y).lead_term().first == (Y * Y * Y).lead_term().first);
  CHECK((X + Y).lead_term().first == X.lead_term().first);
  CHECK((Bv + ZPoly::var(Var::c)).lead_term().first == Bv.lead_term().first);
  CHECK_THROWS_AS(ZPoly::var(Var::x, 200) * ZPoly::var(Var::x, 100), std::overflow_error);
}

TEST_CASE("ring axioms on random sparse polynomials") {
  std::mt19937_64 rng(11);
  const std::vector<Var> all{Var::x, Var::y, Var::z, Var::A, Var::B, Var::a, Var::b, Var::c};
  for (int t = 0; t < 60; ++t) {
    auto f = random_poly(rng, all, 3, 12), g = random_poly(rng, all, 3, 12), h = random_poly(rng, all, 2, 6);
    CHECK((f + g) - g == f);
    CHECK(f * g == g * f);
    CHECK(f * (g + h) == f * g + f * h);
    CHECK((f * g) * h == f * (g * h));
    CHECK(f - f == ZPoly());
    if (!g.is_zero()) CHECK(exact_divide(f * g, g) == f);
  }
}

TEST_CASE("exact division") {
  CHECK(exact_divide(X * X - av * av, X - av) == X + av);
  try {
    exact_divide(X * X + 1, X - av);
    FAIL("expected inexact division");
  } catch (const InexactDivision<mpz_class>& e) {
    CHECK(e.remainder() == av * av + 1);
  }
  CHECK_THROWS_AS(exact_divide(2 * X + 1, ZPoly(2L)), InexactDivision<mpz_class>);
  CHECK_THROWS_AS(exact_divide(X, ZPoly()), std::domain_error);
  CHECK(exact_divide(6 * X * Y * Y, 3 * Y) == 2 * X * Y);
}

TEST_CASE("resultant examples") {
  CHECK(resultant(X - av, X - bv, Var::x) == av - bv);
  CHECK(resultant(X * X - 1, X - 1, Var::x).is_zero());
  CHECK(resultant(X * X + 1, X - av, Var::x) == av * av + 1);
  CHECK_THROWS_AS(resultant(av + 1, X, Var::x), std::invalid_argument);
  // discriminant-style check: Res(x^2+bx+c, 2x+b) = -(b^2-4c) (Sylvester with f first)
  const ZPoly c = ZPoly::var(Var::c);
  CHECK(resultant(X * X + bv * X + c, 2 * X + bv, Var::x) == sylvester_bareiss(X * X + bv * X + c, 2 * X + bv, Var::x));
}

TEST_CASE("resultant agrees with the Bareiss Sylvester determinant") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dd(1, 3);
  for (int t = 0; t < 100; ++t) {
    const ZPoly f = random_in(rng, Var::x, dd(rng), {Var::a, Var::b});
    const ZPoly g = random_in(rng, Var::x, dd(rng), {Var::a, Var::B});
    CHECK(resultant(f, g, Var::x) == sylvester_bareiss(f, g, Var::x));
  }
}

TEST_CASE("resultant symmetry and multiplicativity") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> dd(1, 3);
  for (int t = 0; t < 40; ++t) {
    const ZPoly f = random_in(rng, Var::y, dd(rng), {Var::x, Var::A});
    const ZPoly g = random_in(rng, Var::y, dd(rng), {Var::x, Var::a});
    const ZPoly h = random_in(rng, Var::y, dd(rng), {Var::A});
    const int sgn = (f.degree(Var::y) * g.degree(Var::y)) % 2 ? -1 : 1;
    const ZPoly rfg = resultant(f, g, Var::y);
    CHECK(resultant(g, f, Var::y) == (sgn > 0 ? rfg : -rfg));
    CHECK(resultant(f, g * h, Var::y) == rfg * resultant(f, h, Var::y));
  }
}

TEST_CASE("substitute_reduce") {
  const ZPoly rel = -Bv * Bv + Bv - 1;
  CHECK(substitute_reduce(Av.pow(4) + Av, Var::A, 3, rel) == -Av * Bv * Bv + Av * Bv);
  CHECK(substitute_reduce(Av.pow(4) + Av, Av.pow(3), rel) == -Av * Bv * Bv + Av * Bv);
  CHECK_THROWS_AS(substitute_reduce(Av, Var::A, 3, Av.pow(3)), std::invalid_argument);
  CHECK_THROWS_AS(substitute_reduce(Av, 2 * Av.pow(3), rel), std::invalid_argument);
  CHECK_THROWS_AS(substitute_reduce(Av, Av * Bv, rel), std::invalid_argument);
  std::mt19937_64 rng(14);
  for (int t = 0; t < 30; ++t) {
    const ZPoly f = random_poly(rng, {Var::A, Var::B, Var::x}, 9, 10);
    const ZPoly once = substitute_reduce(f, Var::A, 3, rel);
    CHECK(substitute_reduce(once, Var::A, 3, rel) == once);
    CHECK(once.degree(Var::A) < 3);
    // same class modulo A^3 + B^2 - B + 1
    const ZPoly diff = f - once;
    const ZPoly m = Av.pow(3) - rel;
    CHECK(divide(diff, m).second.is_zero() == true);
  }
}

TEST_CASE("substitute_reduce matches evaluation at a primitive cube root of unity") {
  // B -> w with w^2 + w + 1 = 0 over F_P.
  Mod61 w = 1;
  for (std::uint64_t g = 2; w == Mod61(1); ++g) w = Mod61(static_cast<long long>(g)).pow((Mod61::P - 1) / 3);
  REQUIRE((w * w + w + 1).is_zero());
  std::mt19937_64 rng(15);
  for (int t = 0; t < 30; ++t) {
    const ZPoly f = random_poly(rng, {Var::x, Var::B, Var::A}, 7, 12, 1000);
    const ZPoly r = substitute_reduce(f, Var::B, 2, -Bv - 1);
    std::array<Mod61, kNumVars> pt{};
    for (auto& v : pt) v = Mod61::random(rng);
    pt[static_cast<int>(Var::B)] = w;
    CHECK(reduce_mod61(f).eval(pt) == reduce_mod61(r).eval(pt));
  }
}

TEST_CASE("is_kth_power") {
  CHECK(is_kth_power((Y + 1).pow(2), 2));
  CHECK(is_kth_power(4 * (Y + 1).pow(2) * (Y - 3).pow(4), 2));
  CHECK_FALSE(is_kth_power(-(Y + 1).pow(2), 2));
  CHECK(is_kth_power(-8 * (Y + 1).pow(3), 3));
  CHECK_FALSE(is_kth_power(2 * (Y + 1).pow(2), 2));
  CHECK_FALSE(is_kth_power((Y + 1).pow(2) * (Y + 2), 2));
  CHECK_FALSE(is_kth_power(P("192*y^6 - 96*y^4 - 80*y^3 + 12*y^2 + 20*y + 11"), 2));
  CHECK(is_kth_power(ZPoly(9L), 2));
  CHECK_THROWS_AS(is_kth_power(X * Y, 2), std::invalid_argument);

  // the cubic-curve polynomial in x at both roots of B^2 + B + 1 over F_P
  const ZPoly curve = P("B*x^12 + 12*B*x^9 + 24*x^9 - 162*B*x^6 - 324*B*x^3 - 648*x^3 + 729*B");
  Mod61 w = 1;
  for (std::uint64_t g = 2; w == Mod61(1); ++g) w = Mod61(static_cast<long long>(g)).pow((Mod61::P - 1) / 3);
  for (Mod61 b : {w, w * w}) {
    const ModPoly s = reduce_mod61(curve).specialize(Var::B, b);
    CHECK_FALSE(is_kth_power(s, 3));
  }
  CHECK(is_kth_power(reduce_mod61(7 * (X + 3).pow(3)), 3));
}

TEST_CASE("text round trip") {
  std::mt19937_64 rng(16);
  const std::vector<Var> all{Var::x, Var::y, Var::z, Var::A, Var::B, Var::a, Var::b, Var::c};
  for (int t = 0; t < 50; ++t) {
    const ZPoly f = random_poly(rng, all, 4, 10, 1000000);
    CHECK(ZPoly::parse(f.str()) == f);
  }
  CHECK(ZPoly().str() == "0");
  CHECK(P("x^2 - a^2") == X * X - av * av);
  CHECK((X * X - 2 * av * Y + 3).str() == "1*x^2 - 2*y*a + 3");
  CHECK(P("-A*B + 2*A*2") == -Av * Bv + 4 * Av);
  CHECK_THROWS_AS(P("x^"), std::invalid_argument);
  CHECK_THROWS_AS(P("q"), std::invalid_argument);
  CHECK_THROWS_AS(P(""), std::invalid_argument);
}

TEST_CASE("evaluation homomorphism") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const ZPoly f = random_in(rng, Var::z, 2, {Var::x, Var::A, Var::a});
    const ZPoly g = random_in(rng, Var::z, 2, {Var::y, Var::B});
    std::array<Mod61, kNumVars> pt{};
    for (auto& v : pt) v = Mod61::random(rng);
    const ModPoly fm = reduce_mod61(f), gm = reduce_mod61(g);
    CHECK(reduce_mod61(f * g).eval(pt) == fm.eval(pt) * gm.eval(pt));
    CHECK(reduce_mod61(f - g).eval(pt) == fm.eval(pt) - gm.eval(pt));
    // leading coefficients are nonzero mod P for these small instances
    CHECK(reduce_mod61(resultant(f, g, Var::z)) == resultant(fm, gm, Var::z));
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "pplab/upoly.hpp"

using namespace pplab;

namespace {

std::set<std::uint64_t> scan_roots(const UniPoly& f) {
  std::set<std::uint64_t> s;
  const auto n = f.ctx()->order(f.level()).get_ui();
  for (std::uint64_t i = 0; i < n; ++i)
    if (f.eval(f.ctx()->from_index(i, f.level())).is_zero()) s.insert(i);
  return s;
}

std::set<std::uint64_t> as_set(const std::vector<FFElement>& v) {
  std::set<std::uint64_t> s;
  for (auto& x : v) s.insert(x.index());
  return s;
}

UniPoly random_poly(const FieldCtx* ctx, Level lv, int deg, std::mt19937_64& rng) {
  std::vector<FFElement> c;
  for (int i = 0; i < deg; ++i) c.push_back(ctx->random(lv, rng));
  FFElement lead = ctx->random(lv, rng);
  while (lead.is_zero()) lead = ctx->random(lv, rng);
  c.push_back(lead);
  return UniPoly(ctx, lv, c);
}

}  // namespace

TEST_CASE("eval") {
  auto f = FieldCtx::make(7, 1);
  auto c = f.get();
  CHECK(UniPoly::from_ints(c, Level::base, {-1, 0, 0, 1}).eval(c->one(Level::base)).is_zero());
  CHECK(UniPoly(c, Level::base).eval(c->from_int(5, Level::base)).is_zero());
  CHECK(UniPoly::from_ints(c, Level::base, {1, 0, 1}).eval(c->from_int(3, Level::base)) == c->from_int(3, Level::base));
  auto g = FieldCtx::make(11, 1);
  CHECK_THROWS_AS(UniPoly::from_ints(c, Level::base, {1, 1}).eval(g->one(Level::base)), std::invalid_argument);
}

TEST_CASE("roots examples") {
  auto f = FieldCtx::make(7, 1);
  auto c = f.get();
  auto r = roots(UniPoly::from_ints(c, Level::base, {-1, 0, 0, 1}));
  REQUIRE(r.size() == 3);
  CHECK(r[0].index() == 1);
  CHECK(r[1].index() == 2);
  CHECK(r[2].index() == 4);
  CHECK(roots(UniPoly::from_ints(c, Level::base, {1, 0, 1})).empty());
  auto sq = UniPoly::from_ints(c, Level::base, {-3, 1}) * UniPoly::from_ints(c, Level::base, {-3, 1});
  auto rs = roots(sq);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].index() == 3);
  CHECK_THROWS_AS(roots(UniPoly::from_ints(c, Level::base, {5})), std::invalid_argument);
  CHECK_THROWS_AS(roots(UniPoly::from_ints(c, Level::base, {1, 0, 0, 0, 0, 1})), std::invalid_argument);
}

TEST_CASE("roots match a full field scan") {
  std::mt19937_64 rng(3);
  for (auto [p, h] : {std::pair{7u, 1}, {5u, 2}, {7u, 2}, {13u, 1}}) {
    auto f = FieldCtx::make(p, h);
    for (Level lv : {Level::base, Level::extension}) {
      const int trials = lv == Level::base ? 60 : (f->order(lv) > 100000 ? 4 : 15);
      for (int t = 0; t < trials; ++t) {
        // products of linear factors exercise the splitting paths
        UniPoly g(f.get(), lv, {f->one(lv)});
        const int deg = 1 + t % 4;
        if (t % 2 == 0) {
          for (int i = 0; i < deg; ++i) g = g * UniPoly(f.get(), lv, {f->random(lv, rng), f->one(lv)});
        } else {
          g = random_poly(f.get(), lv, deg, rng);
        }
        CHECK(as_set(roots(g)) == scan_roots(g));
      }
    }
  }
}

TEST_CASE("roots_in_mu") {
  auto f = FieldCtx::make(7, 1);
  auto c = f.get();
  auto r = roots_in_mu(UniPoly::from_ints(c, Level::base, {-1, 0, 0, 1}));
  CHECK(r.size() == 3);
  for (auto& x : f->mu_intersect_base()) {
    bool found = false;
    for (auto& y : r) found |= y == f->embed(x, Level::extension);
    CHECK(found);
  }
  for (std::uint64_t i = 0; i < 7; ++i) {
    auto cc = f->from_index(i, Level::base);
    if (cc.pow(3).is_one()) continue;
    CHECK(roots_in_mu(UniPoly(c, Level::base, {-cc, f->one(Level::base)})).empty());
  }
}

TEST_CASE("roots_in_mu against a full mu iteration, family cubic") {
  for (std::uint32_t p : {7u, 13u}) {
    auto f = FieldCtx::make(p, 1);
    auto c = f.get();
    std::vector<FFElement> mu;
    for (std::uint64_t i = 1; i < f->order(Level::extension); ++i) {
      auto x = f->from_index(i, Level::extension);
      if (f->in_mu(x)) mu.push_back(x);
    }
    for (std::uint64_t b = 0; b < p; ++b)
      for (std::uint64_t a = 0; a < p; ++a) {
        auto A = f->from_index(a, Level::base), B = f->from_index(b, Level::base);
        if (!(A * A * A + B * B - B + f->one(Level::base)).is_zero()) continue;
        UniPoly F(c, Level::base, {-f->one(Level::base), A * B + A, A * A, f->one(Level::base)});
        auto lifted = F.lift(Level::extension);
        std::set<std::uint64_t> expect;
        for (auto& x : mu)
          if (lifted.eval(x).is_zero()) expect.insert(x.index());
        auto got = roots_in_mu(F);
        CHECK(as_set(got) == expect);
        auto all = as_set(roots(lifted));
        for (auto i : as_set(got)) CHECK(all.count(i) == 1);
      }
  }
}

TEST_CASE("Hessian of the family cubic matches the closed form") {
  for (std::uint32_t p : {7u, 13u, 19u, 31u}) {
    auto f = FieldCtx::make(p, 1);
    auto c = f.get();
    const auto one = f->one(Level::base);
    auto k = [&](long long v) { return f->from_int(v, Level::base); };
    auto alphas = roots(UniPoly(c, Level::base, {k(3), k(0), one}));
    REQUIRE(alphas.size() == 2);
    for (std::uint64_t b = 0; b < p; ++b)
      for (std::uint64_t a = 0; a < p; ++a) {
        auto A = f->from_index(a, Level::base), B = f->from_index(b, Level::base);
        if (!(A * A * A + B * B - B + one).is_zero()) continue;
        UniPoly F(c, Level::base, {-one, A * B + A, A * A, one});
        auto H = hessian(F);
        CHECK(H.coeff(2) == A * B * B + k(2) * A * B + k(4) * A);
        CHECK(H.coeff(1) == B * B * B - k(8));
        CHECK(H.coeff(0) == -(A * A * B * B) - k(2) * A * A * B - k(4) * A * A);
        auto s = hessian_split(F);
        if (s.method == SplitMethod::criterion) {
          const auto& al = alphas[0];
          auto num = k(2) * B * B - k(3) * B * al + B - k(4);
          auto den = k(2) * B * B + k(3) * B * al + B - k(4);
          if (!num.is_zero() && !den.is_zero()) {
            const bool matches = *s.ratio == num / den || *s.ratio == den / num;
            CHECK(matches);
          }
        }
      }
  }
}

TEST_CASE("hessian_split agrees with exhaustive root counts") {
  std::mt19937_64 rng(4);
  for (std::uint32_t p : {7u, 13u, 19u}) {
    auto f = FieldCtx::make(p, 1);
    for (int t = 0; t < 300; ++t) {
      auto F = random_poly(f.get(), Level::base, 3, rng);
      auto s = hessian_split(F);
      CHECK(s.split == (count_roots_by_scan(F) == 3));
    }
  }
  auto f5 = FieldCtx::make(5, 1);
  CHECK_THROWS_AS(hessian_split(UniPoly::from_ints(f5.get(), Level::base, {1, 0, 0, 1})), std::invalid_argument);
  auto f7 = FieldCtx::make(7, 1);
  // (T-1)^2 (T-2): not squarefree, answered by the fallback
  auto deg = UniPoly::from_ints(f7.get(), Level::base, {-1, 1}) * UniPoly::from_ints(f7.get(), Level::base, {-1, 1}) *
             UniPoly::from_ints(f7.get(), Level::base, {-2, 1});
  auto s = hessian_split(deg);
  CHECK(s.method == SplitMethod::fallback);
  CHECK_FALSE(s.split);
  CHECK_FALSE(s.beta1.has_value());
}

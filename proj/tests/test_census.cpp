#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <random>

#include "oracles.hpp"
#include "pplab/census.hpp"

using namespace pplab;

namespace {

using Float256 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

FFElement bf(const FieldPtr& f, long long v) { return f->from_int(v, Level::base); }

using oracle::first_base_root;

}  // namespace

TEST_CASE("bound tokens") {
  const auto b841 = lower_bound(Family::f1, 841);  // (841 - 638 - 79)/6 = 124/6
  CHECK(b841.satisfied_by(21));
  CHECK_FALSE(b841.satisfied_by(20));
  const auto b169 = lower_bound(Family::f4, 169);  // 15/3 = 5
  CHECK(b169.satisfied_by(5));
  CHECK_FALSE(b169.satisfied_by(4));
  CHECK(lower_bound(Family::f1, 49).satisfied_by(0));
  CHECK(lower_bound(Family::f2, 841).c1 == 22);
  CHECK_THROWS_AS(lower_bound(Family::f3, 49), std::invalid_argument);

  const auto w0 = hasse_weil_window(61, 0);
  CHECK(w0.contains(62));
  CHECK_FALSE(w0.contains(61));
  CHECK_FALSE(w0.contains(63));
  const auto w3 = hasse_weil_window(61, 3);  // about [15.1, 108.9]
  CHECK(w3.contains(16));
  CHECK(w3.contains(108));
  CHECK_FALSE(w3.contains(15));
  CHECK_FALSE(w3.contains(109));
  for (std::uint64_t q : {5, 25, 49, 121, 1000003}) CHECK(hasse_weil_window(q, 7).contains(q + 1));
}

TEST_CASE("exact comparator agrees with 256-bit floating point") {
  std::mt19937_64 rng(8);
  int ties = 0;
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t q = std::uniform_int_distribution<std::uint64_t>(5, 1u << 20)(rng);
    if (i % 3 == 0) q = q % 2000 * (q % 2000) + 1;  // perfect squares make exact ties possible
    if (i % 3 == 0) --q;
    const long a = std::uniform_int_distribution<long>(-5000, 5000)(rng);
    const long b = std::uniform_int_distribution<long>(-60, 60)(rng);
    const long c = std::uniform_int_distribution<long>(1, 9)(rng);
    const long long qa = static_cast<long long>(q) + a;
    const SqrtExpr e{mpz_class(static_cast<unsigned long>(q)), mpz_class(static_cast<long>(qa)), b, c};
    const Float256 v = (Float256(qa) + Float256(b) * sqrt(Float256(q))) / Float256(c);
    const long long base = static_cast<long long>(boost::multiprecision::floor(v));
    for (long long n : {base - 1, base, base + 1}) {
      const Float256 fn(n);
      CHECK(e.le(mpz_class(static_cast<long>(n))) == (fn >= v));
      CHECK(e.ge(mpz_class(static_cast<long>(n))) == (fn <= v));
      ties += fn == v;
    }
  }
  CHECK(ties > 0);
}

TEST_CASE("brute-force oracle on raw maps") {
  auto f = FieldCtx::make(7, 1);
  CHECK(is_permutation_bruteforce(*f, [](const FFElement& x) { return x; }));
  CHECK_FALSE(is_permutation_bruteforce(*f, [](const FFElement& x) { return x * x * x; }));
  CHECK(is_permutation_bruteforce(*f, [&](const FFElement& x) { return f->frobenius(x, 1); }));
  // x^5 permutes since gcd(5, 342) = 1
  CHECK(is_permutation_bruteforce(*f, [](const FFElement& x) { return x.pow(std::uint64_t{5}); }));
  CHECK_THROWS_AS(is_permutation_bruteforce(*f, [](const FFElement& x) { return x; }, 100), BudgetExceeded);
  const TrinomialSpec s(Family::f1, bf(f, 1), bf(f, 2));
  CHECK_THROWS_AS(is_permutation_bruteforce(s, 342), BudgetExceeded);
  CHECK_NOTHROW(is_permutation_bruteforce(s, 343));
}

TEST_CASE("table path, direct path and image cardinality agree") {
  for (auto [p, h] : {std::pair{13u, 1}, {5u, 2}}) {
    auto f = FieldCtx::make(p, h);
    const std::uint64_t n = f->q() * f->q() * f->q();
    for (Family fam : {Family::f1, Family::f2, Family::f3, Family::f4}) {
      const MonomialTables tables(f, fam);
      REQUIRE(tables.available());
      std::mt19937_64 rng(p * 10 + static_cast<int>(fam));
      int pp = 0;
      for (int i = 0; i < 12; ++i) {
        const TrinomialSpec s(fam, f->random(Level::base, rng), f->random(Level::base, rng));
        const bool fast = is_permutation_bruteforce(s, &tables);
        CHECK(fast == is_permutation_bruteforce(s));
        if (f->q() == 13) CHECK(fast == (image_size(s) == n));
        pp += fast;
      }
      // a few known members from the census
      CensusOptions o;
      o.bruteforce = true;
      if (needs_q_1_mod_3(fam) && f->q() % 3 != 1) continue;
      const auto rep = run_census(fam, p, h, o);
      for (const auto& r : rep.rows) {
        const TrinomialSpec s(fam, r.A, r.B);
        CHECK(*r.bruteforce_pp == is_permutation_bruteforce(s));
        if (f->q() == 13) CHECK(*r.bruteforce_pp == (image_size(s) == n));
      }
    }
  }
}

TEST_CASE("census soundness for f1, f2, f4") {
  CensusOptions o;
  o.bruteforce = true;
  for (auto [p, h] : {std::pair{7u, 1}, {13u, 1}, {19u, 1}, {5u, 2}, {31u, 1}})
    for (Family fam : {Family::f1, Family::f2, Family::f4}) {
      if (fam == Family::f4 && FieldCtx::make(p, h)->q() % 3 != 1) continue;
      const auto rep = run_census(fam, p, h, o);
      CAPTURE(to_string(fam));
      CAPTURE(rep.q);
      CHECK(rep.anomalies.empty());
      CHECK(rep.pairs_passing <= rep.pairs_on_curve);
      REQUIRE(rep.pairs_bruteforce_pp);
      CHECK(*rep.pairs_bruteforce_pp >= rep.pairs_passing);
      CHECK_FALSE(rep.bruteforce_partial);
    }
}

TEST_CASE("f3 counterexamples at q = 7") {
  // the conditions as stated admit non-permutations
  CensusOptions o;
  o.bruteforce = true;
  const auto rep = run_census(Family::f3, 7, 1, o);
  CHECK(rep.pairs_passing == 4);
  CHECK(rep.anomalies.size() == 4);
  CHECK_FALSE(rep.bound);
  CHECK(rep.bound_satisfied);
}

TEST_CASE("census enumeration") {
  auto f = FieldCtx::make(13, 1);
  const auto rep = run_census(Family::f1, 13, 1);
  // every row lies on A^3 + B^2 - B + 1 = 0, canonical B-then-A order
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    CHECK((r.A * r.A * r.A + r.B * r.B - r.B + r.A.ctx()->one(Level::base)).is_zero());
    if (i > 0) {
      const auto& s = rep.rows[i - 1];
      CHECK((s.B.index() < r.B.index() || (s.B == r.B && s.A.index() < r.A.index())));
    }
  }
  std::uint64_t on_curve = 0;
  for (long long a = 0; a < 13; ++a)
    for (long long b = 0; b < 13; ++b) on_curve += (bf(f, a) * bf(f, a) * bf(f, a) + bf(f, b) * bf(f, b) - bf(f, b) + bf(f, 1)).is_zero();
  CHECK(rep.pairs_on_curve == on_curve);
  CHECK_FALSE(rep.pairs_bruteforce_pp);

  const auto r4 = run_census(Family::f4, 13, 1);
  CHECK(r4.pairs_on_curve == 26);
  REQUIRE(r4.per_b.size() == 2);
  CHECK(r4.bound_count == std::min(r4.per_b[0].passing, r4.per_b[1].passing));
  for (const auto& pb : r4.per_b) CHECK(pb.split_passing <= pb.passing);
  CHECK_THROWS_AS(run_census(Family::f3, 5, 1), CongruenceError);
}

TEST_CASE("census is independent of the worker count") {
  CensusOptions one, three;
  one.bruteforce = three.bruteforce = true;
  three.workers = 3;
  for (Family fam : {Family::f2, Family::f4}) {
    const auto a = run_census(fam, 19, 1, one), b = run_census(fam, 19, 1, three);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].A.index() == b.rows[i].A.index());
      CHECK(a.rows[i].B.index() == b.rows[i].B.index());
      CHECK(a.rows[i].passes == b.rows[i].passes);
      CHECK(a.rows[i].bruteforce_pp == b.rows[i].bruteforce_pp);
    }
    CHECK(a.pairs_passing == b.pairs_passing);
  }
}

TEST_CASE("budget overflow is reported per pair") {
  CensusOptions o;
  o.bruteforce = true;
  o.budget = 1000;
  const auto rep = run_census(Family::f1, 13, 1, o);
  CHECK(rep.bruteforce_partial);
  for (const auto& r : rep.rows) CHECK(r.over_budget);
  CHECK(*rep.pairs_bruteforce_pp == 0);
}

// ------------------------------------------------------------------ curves

TEST_CASE("P2 sweep equals the naive triple loop") {
  for (std::uint32_t p : {7u, 13u}) {
    const std::uint64_t naive = oracle::p2_naive(p);
    CHECK(curve_point_count(CurveId::P2, p, 1).solution_count == naive);
    CHECK(curve_point_count(CurveId::P2, p, 1, 3).solution_count == naive);
  }
}

TEST_CASE("P3 sweep equals the naive double loop") {
  for (std::uint32_t p : {7u, 13u, 19u}) {
    auto f = FieldCtx::make(p, 1);
    const FFElement B = first_base_root(f, [&](const FFElement& e) { return (e * e + e + bf(f, 1)).is_zero(); });
    std::uint64_t naive = 0;
    for (std::uint64_t xi = 0; xi < p; ++xi)
      for (std::uint64_t yi = 0; yi < p; ++yi) {
        const FFElement x = f->from_index(xi, Level::base), y = f->from_index(yi, Level::base);
        const auto xp = [&](unsigned e) { return x.pow(std::uint64_t{e}); };
        const FFElement lhs = B * xp(12) + bf(f, 12) * B * xp(9) + bf(f, 24) * xp(9) - bf(f, 162) * B * xp(6) -
                              bf(f, 324) * B * xp(3) - bf(f, 648) * xp(3) + bf(f, 729) * B;
        naive += (lhs - B * y * y * y).is_zero();
      }
    CHECK(curve_point_count(CurveId::P3, p, 1).solution_count == naive);
  }
}

TEST_CASE("P1 sweep equals the naive quadruple loop") {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    auto f = FieldCtx::make(p, 1);
    std::uint64_t naive = 0, degenerate = 0;
    const auto c = [&](long long v) { return bf(f, v); };
    for (std::uint64_t xi = 0; xi < p; ++xi)
      for (std::uint64_t yi = 0; yi < p; ++yi) {
        const FFElement x = f->from_index(xi, Level::base), y = f->from_index(yi, Level::base);
        if (!(x * x + c(3) * y * y - c(1)).is_zero()) continue;
        const FFElement a2 = c(6) * x * x * y - c(6) * y * y * y;
        const FFElement a1 = c(3) * x * x * x + c(3) * x * x * y - c(27) * x * y * y - c(3) * y * y * y + c(3);
        const FFElement a0 = -c(12) * x * x * y + c(12) * y * y * y;
        if (a2.is_zero() && a1.is_zero() && a0.is_zero()) {
          ++degenerate;
          continue;
        }
        for (std::uint64_t zi = 0; zi < p; ++zi)
          for (std::uint64_t ui = 0; ui < p; ++ui) {
            const FFElement z = f->from_index(zi, Level::base), u = f->from_index(ui, Level::base);
            naive += (u * u * u + z * z - z + c(1)).is_zero() && (a2 * z * z + a1 * z + a0).is_zero();
          }
      }
    const auto rep = curve_point_count(CurveId::P1, p, 1);
    CHECK(rep.solution_count == naive);
    CHECK(rep.degenerate_fibres == degenerate);
  }
}

TEST_CASE("curve preconditions and windows") {
  CHECK_THROWS_AS(curve_point_count(CurveId::P2, 5, 1), CongruenceError);
  CHECK_THROWS_AS(curve_point_count(CurveId::P3, 11, 1), CongruenceError);
  const auto r = curve_point_count(CurveId::P2, 61, 1);
  CHECK(r.genus == 3);
  CHECK(r.lower_ok == r.stated_lower_bound.le(r.solution_count));
  CHECK(r.within_window());
  CHECK(parse_curve("P3") == CurveId::P3);
  CHECK_THROWS(parse_curve("P4"));
}

#include "pplab/zpoly.hpp"

#include <cctype>

#include "pplab/detail/dense_poly.hpp"

namespace pplab {

namespace {

constexpr std::array<std::string_view, kNumVars> kVarNames{"x", "y", "z", "A", "B", "a", "b", "c"};

}  // namespace

std::string_view var_name(Var v) { return kVarNames[static_cast<int>(v)]; }

Var parse_var(std::string_view name) {
  for (int i = 0; i < kNumVars; ++i)
    if (kVarNames[i] == name) return static_cast<Var>(i);
  throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
}

// ------------------------------------------------------------------ division

template <typename R>
std::pair<SparsePoly<R>, SparsePoly<R>> divide(const SparsePoly<R>& f, const SparsePoly<R>& g) {
  using Poly = SparsePoly<R>;
  using Ring = zdetail::Ring<R>;
  if (g.is_zero()) throw std::domain_error("polynomial division by zero");
  const auto& [gk, gc] = g.lead_term();
  std::map<zdetail::Key, R, zdetail::GrlexGreater> work;
  for (const auto& t : f.terms()) work.emplace_hint(work.end(), t.first, t.second);
  std::vector<typename Poly::Term> quot, rem;
  R qc;
  while (!work.empty()) {
    auto it = work.begin();
    const zdetail::Key k = it->first;
    if (!zdetail::divides(gk, k) || !Ring::try_divide(it->second, gc, qc)) {
      rem.emplace_back(k, std::move(it->second));
      work.erase(it);
      continue;
    }
    work.erase(it);
    const zdetail::Key qk = k - gk;
    for (std::size_t j = 1; j < g.terms().size(); ++j) {
      const auto& t = g.terms()[j];
      auto [pos, inserted] = work.try_emplace(qk + t.first);
      pos->second -= qc * t.second;
      if (Ring::is_zero(pos->second)) work.erase(pos);
    }
    quot.emplace_back(qk, qc);
  }
  // both sequences were produced in descending order
  return {Poly::from_terms(std::move(quot)), Poly::from_terms(std::move(rem))};
}

template <typename R>
SparsePoly<R> exact_divide(const SparsePoly<R>& f, const SparsePoly<R>& g) {
  auto [q, r] = divide(f, g);
  if (!r.is_zero()) throw InexactDivision<R>("inexact division: nonzero remainder", std::move(r));
  return q;
}

// ---------------------------------------------------------------- resultants

namespace {

template <typename R>
using Coeffs = std::vector<SparsePoly<R>>;

template <typename R>
void trim_top(Coeffs<R>& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

template <typename R>
Coeffs<R> prem_coeffs(Coeffs<R> r, const Coeffs<R>& b) {
  const auto& lb = b.back();
  int e = static_cast<int>(r.size()) - static_cast<int>(b.size()) + 1;
  while (!r.empty() && r.size() >= b.size()) {
    const std::size_t k = r.size() - b.size();
    const SparsePoly<R> lr = r.back();
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      SparsePoly<R> t = lb * r[i];
      if (i >= k) t -= lr * b[i - k];
      r[i] = std::move(t);
    }
    r.pop_back();
    trim_top(r);
    --e;
  }
  if (e > 0 && !r.empty()) {
    const SparsePoly<R> m = lb.pow(static_cast<unsigned>(e));
    for (auto& c : r) c *= m;
  }
  return r;
}

}  // namespace

template <typename R>
SparsePoly<R> pseudo_remainder(const SparsePoly<R>& f, const SparsePoly<R>& g, Var v) {
  if (g.is_zero()) throw std::domain_error("pseudo-remainder by zero");
  auto r = prem_coeffs<R>(f.coeffs_in(v), g.coeffs_in(v));
  return SparsePoly<R>::from_coeffs_in(v, r);
}

template <typename R>
SparsePoly<R> resultant(const SparsePoly<R>& f, const SparsePoly<R>& g, Var v) {
  using Poly = SparsePoly<R>;
  Coeffs<R> a = f.coeffs_in(v), b = g.coeffs_in(v);
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("resultant needs positive degree in the eliminated variable");
  int s = 1;
  if (a.size() < b.size()) {
    std::swap(a, b);
    if ((a.size() - 1) % 2 == 1 && (b.size() - 1) % 2 == 1) s = -1;
  }
  Poly gg(1L), hh(1L);
  for (;;) {
    const int da = static_cast<int>(a.size()) - 1, db = static_cast<int>(b.size()) - 1;
    const int delta = da - db;
    if (da % 2 == 1 && db % 2 == 1) s = -s;
    Coeffs<R> r = prem_coeffs<R>(a, b);
    a = std::move(b);
    if (r.empty()) return {};
    const Poly divisor = gg * hh.pow(static_cast<unsigned>(delta));
    if (divisor != Poly(1L))
      for (auto& c : r) c = exact_divide(c, divisor);
    b = std::move(r);
    gg = a.back();
    if (delta == 1) hh = gg;
    else if (delta > 1) hh = exact_divide(gg.pow(static_cast<unsigned>(delta)), hh.pow(static_cast<unsigned>(delta - 1)));
    if (b.size() == 1) break;
  }
  const int da = static_cast<int>(a.size()) - 1;
  Poly res = b.back().pow(static_cast<unsigned>(da));
  if (da > 1) res = exact_divide(res, hh.pow(static_cast<unsigned>(da - 1)));
  return s < 0 ? -res : res;
}

// ------------------------------------------------------- substitute_reduce

template <typename R>
SparsePoly<R> substitute_reduce(const SparsePoly<R>& pol, Var v, int d, const SparsePoly<R>& r) {
  if (d < 1) throw std::invalid_argument("substitute_reduce: rewritten power must be positive");
  if (r.degree(v) >= d) throw std::invalid_argument("substitute_reduce: replacement does not lower the degree (non-terminating rewrite)");
  auto cs = pol.coeffs_in(v);
  const auto rc = r.coeffs_in(v);
  for (int i = static_cast<int>(cs.size()) - 1; i >= d; --i) {
    if (cs[i].is_zero()) continue;
    const SparsePoly<R> c = std::move(cs[i]);
    cs[i] = SparsePoly<R>();
    for (std::size_t j = 0; j < rc.size(); ++j)
      if (!rc[j].is_zero()) cs[i - d + j] += c * rc[j];
  }
  trim_top(cs);
  return SparsePoly<R>::from_coeffs_in(v, cs);
}

template <typename R>
SparsePoly<R> substitute_reduce(const SparsePoly<R>& pol, const SparsePoly<R>& m, const SparsePoly<R>& r) {
  const auto vars = m.variables();
  if (m.num_terms() != 1 || vars.size() != 1 || m.lead_term().second != R(1L))
    throw std::invalid_argument("substitute_reduce: monomial must be a single variable power");
  return substitute_reduce(pol, vars[0], m.degree(vars[0]), r);
}

// ------------------------------------------------------------- k-th powers

namespace {

struct QOps {
  mpq_class zero() const { return 0; }
  mpq_class one() const { return 1; }
  bool is_zero(const mpq_class& a) const { return sgn(a) == 0; }
  mpq_class add(const mpq_class& a, const mpq_class& b) const { return a + b; }
  mpq_class sub(const mpq_class& a, const mpq_class& b) const { return a - b; }
  mpq_class mul(const mpq_class& a, const mpq_class& b) const { return a * b; }
  mpq_class neg(const mpq_class& a) const { return -a; }
  mpq_class inv(const mpq_class& a) const {
    if (sgn(a) == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
};

struct M61Ops {
  Mod61 zero() const { return 0; }
  Mod61 one() const { return 1; }
  bool is_zero(const Mod61& a) const { return a.is_zero(); }
  Mod61 add(const Mod61& a, const Mod61& b) const { return a + b; }
  Mod61 sub(const Mod61& a, const Mod61& b) const { return a - b; }
  Mod61 mul(const Mod61& a, const Mod61& b) const { return a * b; }
  Mod61 neg(const Mod61& a) const { return -a; }
  Mod61 inv(const Mod61& a) const { return a.inv(); }
};

template <typename R, typename T, typename Conv>
std::vector<T> to_dense(const SparsePoly<R>& f, Conv conv) {
  const auto vars = f.variables();
  if (vars.size() > 1) throw std::invalid_argument("is_kth_power expects a univariate polynomial");
  if (f.is_zero()) throw std::invalid_argument("is_kth_power expects a nonzero polynomial");
  if (vars.empty()) return {conv(f.constant_value())};
  const auto cs = f.coeffs_in(vars[0]);
  std::vector<T> out;
  for (const auto& c : cs) out.push_back(conv(c.is_zero() ? R(0L) : c.constant_value()));
  return out;
}

// Multiplicities of the squarefree decomposition (Yun); characteristic 0 or
// larger than the degree.
template <typename Ops, typename T>
std::vector<int> yun_multiplicities(const Ops& ops, const std::vector<T>& f) {
  std::vector<int> mult;
  if (detail::degree(f) < 1) return mult;
  const auto df = detail::derivative(ops, f);
  const auto a0 = detail::gcd(ops, f, df);
  auto b = detail::divmod(ops, f, a0).first;
  auto c = detail::divmod(ops, df, a0).first;
  auto d = detail::sub(ops, c, detail::derivative(ops, b));
  for (int i = 1; detail::degree(b) >= 1; ++i) {
    const auto a = detail::gcd(ops, b, d);
    if (detail::degree(a) >= 1) mult.push_back(i);
    b = detail::divmod(ops, b, a).first;
    c = detail::divmod(ops, d, a).first;
    d = detail::sub(ops, c, detail::derivative(ops, b));
  }
  return mult;
}

bool is_kth_power_z(const mpz_class& z, int k) {
  if (sgn(z) < 0) {
    if (k % 2 == 0) return false;
    return is_kth_power_z(mpz_class(-z), k);
  }
  return mpz_root(mpz_class().get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(k)) != 0;
}

}  // namespace

bool is_kth_power(const ZPoly& f, int k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  const auto dense = to_dense<mpz_class, mpq_class>(f, [](const mpz_class& z) { return mpq_class(z); });
  for (int m : yun_multiplicities(QOps{}, dense))
    if (m % k != 0) return false;
  const mpq_class lc = dense.back();
  return is_kth_power_z(lc.get_num(), k) && is_kth_power_z(lc.get_den(), k);
}

bool is_kth_power(const ModPoly& f, int k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  const auto dense = to_dense<Mod61, Mod61>(f, [](const Mod61& z) { return z; });
  for (int m : yun_multiplicities(M61Ops{}, dense))
    if (m % k != 0) return false;
  return true;
}

ModPoly reduce_mod61(const ZPoly& f) {
  return f.map_coeffs<Mod61>([](const mpz_class& z) { return Mod61::from_mpz(z); });
}

// ------------------------------------------------------------------ parsing

template <typename R>
SparsePoly<R> SparsePoly<R>::parse(std::string_view text) {
  using Ring = zdetail::Ring<R>;
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty polynomial text");
  std::vector<Term> terms;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("polynomial parse error at offset " + std::to_string(i) + ": " + why);
  };
  auto read_uint = [&]() {
    const std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) fail("expected digits");
    return s.substr(start, i - start);
  };
  while (i < s.size()) {
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
      neg = s[i] == '-';
      ++i;
    } else if (!terms.empty()) {
      fail("expected '+' or '-'");
    }
    R coeff(1L);
    Exponents e{};
    bool need_factor = true;
    while (need_factor) {
      if (i >= s.size()) fail("unexpected end of input");
      if (std::isdigit(static_cast<unsigned char>(s[i]))) {
        coeff = coeff * Ring::parse(read_uint());
      } else if (std::isalpha(static_cast<unsigned char>(s[i]))) {
        const Var v = parse_var(std::string_view(&s[i], 1));
        ++i;
        int ex = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          ex = std::stoi(read_uint());
        }
        e[static_cast<int>(v)] += ex;
      } else {
        fail(std::string("unexpected character '") + s[i] + "'");
      }
      need_factor = i < s.size() && s[i] == '*';
      if (need_factor) ++i;
    }
    terms.emplace_back(zdetail::pack(e), neg ? R(-coeff) : coeff);
  }
  return from_terms(std::move(terms));
}

#define PPLAB_INSTANTIATE(R)                                                                               \
  template std::pair<SparsePoly<R>, SparsePoly<R>> divide(const SparsePoly<R>&, const SparsePoly<R>&);    \
  template SparsePoly<R> exact_divide(const SparsePoly<R>&, const SparsePoly<R>&);                        \
  template SparsePoly<R> resultant(const SparsePoly<R>&, const SparsePoly<R>&, Var);                      \
  template SparsePoly<R> pseudo_remainder(const SparsePoly<R>&, const SparsePoly<R>&, Var);               \
  template SparsePoly<R> substitute_reduce(const SparsePoly<R>&, Var, int, const SparsePoly<R>&);         \
  template SparsePoly<R> substitute_reduce(const SparsePoly<R>&, const SparsePoly<R>&, const SparsePoly<R>&);

template class SparsePoly<mpz_class>;
template class SparsePoly<Mod61>;

PPLAB_INSTANTIATE(mpz_class)
PPLAB_INSTANTIATE(Mod61)

#undef PPLAB_INSTANTIATE

}  // namespace pplab

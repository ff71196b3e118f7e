#ifndef PPLAB_CENSUS_HPP
#define PPLAB_CENSUS_HPP

// Brute-force permutation oracle, (A,B) censuses with exact lower-bound
// comparison, and affine point counts for the auxiliary curve systems.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pplab/families.hpp"

namespace pplab {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ exact bounds

/// (a + b·√q)/c with integers a, b and c > 0. Comparisons against integers
/// are decided by sign analysis and one squaring, never in floating point.
struct SqrtExpr {
  mpz_class q, a, b, c = 1;

  /// n >= value
  bool le(const mpz_class& n) const;
  /// n <= value
  bool ge(const mpz_class& n) const;
  /// Rough value, for display only.
  double approx() const;
  /// "(a + b*sqrt(q))/c"
  std::string str() const;
};

/// The count bound (q - c1·√q - c2)/c3.
struct BoundToken {
  Family family;
  std::uint64_t q = 0;
  long c1 = 0, c2 = 0, c3 = 1;

  SqrtExpr value() const;
  bool satisfied_by(std::uint64_t count) const { return value().le(count); }
  std::string str() const;
};

/// f1/f2: (q - 22√q - 79)/6 pairs; f4: (q - 8√q - 50)/3 values of A per B.
/// Throws std::invalid_argument for f3, which has no count.
BoundToken lower_bound(Family f, std::uint64_t q);

struct Window {
  SqrtExpr lo, hi;
  bool contains(const mpz_class& n) const { return lo.le(n) && hi.ge(n); }
};

/// [q + 1 - 2g√q, q + 1 + 2g√q].
Window hasse_weil_window(std::uint64_t q, unsigned g);

// ------------------------------------------------------------ brute force

/// Precomputed monomial values x^{q^2+q-1} and the family's middle monomial
/// for every x in F_{q^3}, as base-level coordinate triples. Shared read-only
/// across workers; only built when q^3 is small (see `available`).
class MonomialTables {
 public:
  MonomialTables(const FieldPtr& field, Family f);
  bool available() const noexcept { return !lead_.empty(); }
  const FieldPtr& field() const noexcept { return field_; }
  Family family() const noexcept { return family_; }

 private:
  friend bool is_permutation_bruteforce(const TrinomialSpec&, const MonomialTables*, std::uint64_t);
  FieldPtr field_;
  Family family_;
  std::vector<std::uint16_t> lead_, mid_;  // 3 coordinates per element
  std::vector<std::uint16_t> add_;         // base addition table
};

/// True iff the trinomial permutes F_{q^3}: evaluates every element and marks
/// a bitset of images. Throws BudgetExceeded when q^3 > budget.
bool is_permutation_bruteforce(const TrinomialSpec& spec, const MonomialTables* tables = nullptr,
                               std::uint64_t budget = kDefaultBudget);
bool is_permutation_bruteforce(const TrinomialSpec& spec, std::uint64_t budget);

/// The same test for an arbitrary map on the extension field.
bool is_permutation_bruteforce(const FieldCtx& field, const std::function<FFElement(const FFElement&)>& map,
                               std::uint64_t budget = kDefaultBudget);

/// |f(F_{q^3})|, by a sorted image list (an independent cross-check).
std::uint64_t image_size(const TrinomialSpec& spec, std::uint64_t budget = kDefaultBudget);

// ----------------------------------------------------------------- census

struct CensusOptions {
  bool bruteforce = false;
  unsigned workers = 1;
  std::uint64_t budget = kDefaultBudget;
};

struct CensusRow {
  FFElement A, B;
  bool passes = false;
  std::vector<std::string> reasons;
  std::optional<bool> bruteforce_pp;  // empty when skipped or over budget
  bool over_budget = false;
  bool split = false;                 // f4: F(y) has three roots in F_q
};

struct PerB {
  FFElement B;
  std::uint64_t passing = 0;
  std::uint64_t split_passing = 0;  // passing and F(y) split over F_q
};

struct CensusReport {
  FieldPtr field;  // keeps the row elements valid
  Family family;
  std::uint32_t p = 0;
  int h = 0;
  std::uint64_t q = 0;
  std::uint64_t pairs_on_curve = 0;
  std::uint64_t pairs_passing = 0;
  std::optional<std::uint64_t> pairs_bruteforce_pp;  // over every candidate pair
  bool bruteforce_partial = false;
  std::optional<BoundToken> bound;
  /// The count compared with the bound: pairs_passing for f1/f2, the minimum
  /// over B of the passing A for f4.
  std::uint64_t bound_count = 0;
  bool bound_satisfied = true;
  std::vector<PerB> per_b;  // f3/f4 only
  std::vector<std::pair<FFElement, FFElement>> anomalies;  // pass but not PP
  std::vector<CensusRow> rows;  // canonical B-then-A order
  double seconds = 0;
};

/// Enumerates the candidate pairs of the family, checks the conditions,
/// optionally brute-forces every candidate and compares against the bound.
CensusReport run_census(Family f, std::uint32_t p, int h, const CensusOptions& opt = {});

// ----------------------------------------------------------------- curves

enum class CurveId { P1, P2, P3 };
std::string to_string(CurveId c);
CurveId parse_curve(const std::string& s);

struct CurveCountReport {
  CurveId curve;
  std::uint32_t p = 0;
  int h = 0;
  std::uint64_t q = 0;
  std::uint64_t solution_count = 0;
  unsigned genus = 0;       // upper bound used for the window
  unsigned slack = 0;       // total degree of the system
  SqrtExpr stated_lower_bound;
  SqrtExpr hasse_weil_upper;  // q + 1 + 2g√q + slack
  bool lower_ok = false, upper_ok = false;
  bool within_window() const noexcept { return lower_ok && upper_ok; }
  std::string parameter;  // alpha (P2) or B (P3)
  std::uint64_t degenerate_fibres = 0;  // P1: conic points where the z-equation vanishes
  std::string note;
  double seconds = 0;
};

/// Affine F_q-solutions of the system by direct sweep.
CurveCountReport curve_point_count(CurveId c, std::uint32_t p, int h, unsigned workers = 1);

/// Runs fn(i) for i in [0, n) over `workers` threads, contiguous blocks.
void parallel_for(std::uint64_t n, unsigned workers, const std::function<void(unsigned, std::uint64_t)>& fn);

}  // namespace pplab

#endif  // PPLAB_CENSUS_HPP

#ifndef PPLAB_FAMILIES_HPP
#define PPLAB_FAMILIES_HPP

// The four trinomial families over F_{q^3}
//   f1 = x^{q^2+q-1} + A x^{q^2-q+1} + B x
//   f2 = x^{q^2+q-1} + A x^{q^3-q^2+q} + B x
//   f3 = x^{q^2+q-1} + A x^{q^2} - B x
//   f4 = x^{q^2+q-1} + A x^{q} - B x
// with A, B in F_q: evaluation, sufficient-condition checkers, symbolic
// identities and the elimination pipelines behind the "at most one preimage"
// arguments.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pplab/ff.hpp"
#include "pplab/upoly.hpp"
#include "pplab/zpoly.hpp"

namespace pplab {

enum class Family { f1, f2, f3, f4 };
enum class Branch { a_nonzero, a_zero };
enum class VerifyMode { full, probabilistic };

std::string to_string(Family f);
std::string to_string(Branch b);
std::string to_string(VerifyMode m);
Family parse_family(const std::string& s);
Branch parse_branch(const std::string& s);

/// f3 and f4 need q ≡ 1 (mod 3).
bool needs_q_1_mod_3(Family f);

class CongruenceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TrinomialSpec {
  Family family;
  FFElement A;  // base level
  FFElement B;  // base level

  TrinomialSpec(Family f, FFElement a, FFElement b);
  const FieldCtx* ctx() const noexcept { return A.ctx(); }
};

/// Integer exponent of the middle monomial (q^2-q+1, q^3-q^2+q, q^2, q).
mpz_class middle_exponent(Family f, std::uint64_t q);
/// q^2+q-1.
mpz_class leading_exponent(std::uint64_t q);

/// Fast evaluation through the Frobenius maps: for x != 0, x^{q^2+q-1} = z·y/x
/// with y = x^q, z = x^{q^2}; 0 maps to 0.
FFElement trinomial_eval(const TrinomialSpec& spec, const FFElement& x);
/// Reference evaluation by square-and-multiply with the literal exponents.
FFElement trinomial_eval_pow(const TrinomialSpec& spec, const FFElement& x);

struct ConditionResult {
  bool pass = true;
  std::vector<std::string> reasons;  // every failed clause
};

/// The sufficient conditions for the family. Throws CongruenceError for f3/f4
/// when q ≢ 1 (mod 3).
ConditionResult check_conditions(const TrinomialSpec& spec);

/// The cubic whose roots in μ_{q^2+q+1} are excluded: F(T) for f1, G(T) for
/// f2, F(y) = B y^3 + A^2 y^2 - AB y + A y - B for f4. None for f3.
std::optional<UniPoly> condition_cubic(const TrinomialSpec& spec);

/// The displayed factors of h1 in the variable A: {A, degree-22, degree-44}.
const std::vector<ZPoly>& h1_factors();
/// h1 evaluated at A in F_q.
FFElement h1_eval(const FFElement& A);

// ------------------------------------------------------------- identities

struct IdentityReport {
  Family family;
  VerifyMode mode;
  /// LHS - B^6·P reduces to zero, P the displayed cubic (sign as printed).
  bool holds_as_displayed = false;
  /// LHS + B^6·P reduces to zero.
  bool holds_negated = false;
  /// The combination is a nonzero constant multiple of B^6·P; this is what
  /// the root argument needs.
  bool holds() const noexcept { return holds_as_displayed || holds_negated; }
  std::size_t residual_terms = 0;  // terms of LHS - B^6 P after reduction (full mode)
  int points = 0;                  // evaluation points (probabilistic mode)
};

/// Checks A^5 h + cof·g = ±B^6 (u^3+A^2u^2+(AB+A)u-1) for f1 and
/// A^6 L + cof·M = ±B^6 (y^3-ABy^2-Ay^2-A^2y-1) for f2, modulo
/// A^3+B^2-B+1. The single polynomial variable is stored in the x slot.
/// `cofactor_perturbation` is added to the cofactor's constant term (mutation
/// testing). Throws for f3/f4.
IdentityReport verify_identity(Family f, VerifyMode mode = VerifyMode::full, std::uint64_t seed = kDefaultSeed,
                               long cofactor_perturbation = 0);

/// The ingredients of the identities, in the x slot.
struct IdentityPolys {
  ZPoly left_low, left_high;  // g, h (f1) or M, L (f2)
  ZPoly cofactor;
  ZPoly multiplier;           // A^5 or A^6
  ZPoly cubic;                // the displayed cubic
};
IdentityPolys identity_polys(Family f);

/// F(T) and G(T) of f1/f2 in the x slot.
ZPoly family_cubic_F();
ZPoly family_cubic_G();
/// T^3 G(1/T) == -F(T) as an exact identity.
bool verify_reciprocal_identity();

// -------------------------------------------------------------- pipelines

struct CertifiedFactor {
  std::string name;
  std::string poly;  // text form
  int multiplicity = 1;
};

struct PipelineReport {
  Family family;
  Branch branch;
  VerifyMode mode;
  ZPoly raw_resultant;      // full mode only
  ZPoly reduced_resultant;  // full mode only
  bool structure_ok = false;
  std::vector<CertifiedFactor> certified_factors;
  std::vector<std::string> steps;  // one line per elimination step
  std::string structure_detail;
  int points = 0;                  // specialisations checked (both modes)
  bool homomorphism_ok = true;     // modular images agree with the exact result
  double seconds = 0;
};

class PipelineError : public std::runtime_error {
 public:
  PipelineError(const std::string& step, const std::string& what)
      : std::runtime_error("pipeline step '" + step + "': " + what), step_(step) {}
  const std::string& step() const noexcept { return step_; }

 private:
  std::string step_;
};

/// Reproduces the elimination for (family, branch). Full mode works over Z;
/// probabilistic mode runs the same steps over F_{2^61-1} after specialising
/// the parameters at `points` random values and certifies the structure at
/// each. Throws PipelineError on an inexact division.
PipelineReport run_resultant_pipeline(Family f, Branch b, VerifyMode mode = VerifyMode::full,
                                      std::uint64_t seed = kDefaultSeed, int points = 40);

/// The F_{q^3} closed-form candidate preimage of a != 0 for f3/f4; nullopt when
/// the denominator vanishes. Throws for a = 0 or other families.
std::optional<FFElement> closed_form_preimage(const TrinomialSpec& spec, const FFElement& a);

/// Numerator and denominator of the closed form as polynomials in A, B and
/// a, b, c standing for a, a^q, a^{q^2}.
std::pair<ZPoly, ZPoly> closed_form_polys(Family f);

}  // namespace pplab

#endif  // PPLAB_FAMILIES_HPP

#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fgc/series.hpp"

namespace fgc {

enum class LawKind { Universal, Multiplicative, Elliptic, Tate, Custom };

std::string law_kind_str(LawKind k);

/* A one-dimensional formal group law presented by its logarithm over R⊗Q:
   log = x + higher, exp = revert(log), F(x,y) = exp(log x + log y).
   Immutable after construction; the Bernoulli table fills lazily behind a
   mutex (idempotent, safe under concurrent calls).

   qprec > 0 marks a law over a q-truncated coefficient ring (Tate laws and
   their descendants): coefficients are only trusted modulo q^{qprec+1}, and
   consumers must q_truncate before comparing values. */
class FormalGroupLaw {
 public:
  /* exp, when supplied, must be the compositional inverse of log; it is
     accepted untested (used where revert is avoidable, e.g. substitution
     images of an already-inverted law). */
  FormalGroupLaw(LawKind kind, TruncSeries log, int qprec = 0,
                 std::optional<TruncSeries> exp = std::nullopt);

  LawKind kind() const { return kind_; }
  const TruncSeries& log() const { return log_; }
  const TruncSeries& exp() const { return exp_; }
  int trunc() const { return log_.trunc(); }
  int qprec() const { return qprec_; }

  /* B_n from 1/exp(x) - 1/x = sum_i B_{i+1}/(i+1)! x^i; defined for
     1 <= n <= trunc()-1, loud precision error beyond. */
  GradedPoly bernoulli(int n) const;
  GradedPoly reduced_bernoulli(int n) const;  // B_n / n

 private:
  LawKind kind_;
  TruncSeries log_;
  TruncSeries exp_;
  int qprec_;
  struct Memo {
    std::mutex mu;
    std::optional<TruncSeries> recip_exp;  // 1/exp, truncation trunc()-2
  };
  std::shared_ptr<Memo> memo_;
};

/* log = x + sum m_i x^{i+1} over the free graded generators m1..m_{N-1}. */
FormalGroupLaw mk_universal(int N);

/* log = log(1+ux)/u over Z[1/6][u]; F(x,y) = x + y + uxy. The unit generator
   is nameable so left/right copies of the law can coexist. */
FormalGroupLaw mk_multiplicative(int N, const std::string& unit = "u");

/* Weierstrass law over Q[c4,c6]: y^2 = x^3 + Ax + B with A = -c4/48,
   B = -c6/864; w = z^3 + Azw^2 + Bw^3 solved by fixed point, and the
   logarithm integrates the normalized invariant differential
   1 + z*W'/(2W) for w = z^3*W. Coordinate: z = -x/y. */
FormalGroupLaw mk_elliptic(int N, const std::string& c4 = "c4",
                           const std::string& c6 = "c6");

/* c4 |-> E4(q)u^4, c6 |-> -E6(q)u^6, coefficients truncated at q^Qprec.
   The sign on E6 is the one under which q |-> 0 gives the multiplicative
   reduction (split Tate torus): the strict isomorphism to G_{m,u} is then
   integral over Z[1/6], which the other sign fails already at z^7. */
FormalGroupLaw tate_specialize(const FormalGroupLaw& ell, int Qprec,
                               const std::string& c4 = "c4",
                               const std::string& c6 = "c6");

/* q |-> 0 of a Tate law: the multiplicative-reduction law over Z[1/6][u]. */
FormalGroupLaw q0_specialize(const FormalGroupLaw& tate);

/* Copy with log/exp coefficients truncated at q^qcap (cheap working copies
   of Tate laws; full-qprec bivariate arithmetic is expensive). */
FormalGroupLaw q_capped(const FormalGroupLaw& F, int qcap);

/* Bivariate F(S,T) = exp(log S + log T) at the law's truncation. */
TruncSeries group_law(const FormalGroupLaw& F);

GradedPoly bernoulli(const FormalGroupLaw& F, int n);
GradedPoly reduced_bernoulli(const FormalGroupLaw& F, int n);

/* Classical Bernoulli number (B_1 = -1/2), Pascal-row recurrence, memoized. */
Rat classical_bernoulli(int n);

/* Order of the reduced number B_n/n in Q/Z, i.e. its denominator. */
Int bernoulli_order(int n);

struct MillerReport {
  bool pass;
  std::string value;    // d_n * Bbar_n(F), stringified
  std::string witness;  // first non-integral term; empty when pass
};
/* d_n * Bbar_n(F) integral over the declared base ring (Z[1/6][u] for
   multiplicative, Z[1/6][c4,c6] for elliptic, Z[1/6][u][[q]] for Tate).
   Laws without a declared integral form (universal, custom) are a usage
   error. */
MillerReport miller_divisibility_check(const FormalGroupLaw& F, int n);

/* exp^to(log^from(x)): the strict isomorphism from -> to over a common
   coefficient ring. */
TruncSeries strict_iso(const FormalGroupLaw& from, const FormalGroupLaw& to);

struct FglCheckReport {
  bool pass;
  std::vector<std::string> failures;
};
/* Validates exp(log x) = x and log(exp x) = x exactly, with symbolic
   coefficient generators. The bivariate law F(x,y) = exp(log x + log y) is
   then built over a seeded random rational specialization of the generators
   (q stays symbolic for Tate laws, truncated at qcap) and checked there for
   units, commutativity, and associativity F(F(x,y),z) = F(x,F(y,z)).
   assoc_trunc = 0 picks the default trivariate window: the law's truncation,
   reduced to 12 for Tate laws. */
FglCheckReport fgl_check(const FormalGroupLaw& F, unsigned seed = 1,
                         int assoc_trunc = 0, int qcap = 6);

/* Drop q-powers above Qprec (the coefficient ring Z[[q]] truncation). */
GradedPoly q_truncate(const GradedPoly& p, int Qprec);
TruncSeries q_truncate(const TruncSeries& f, int Qprec);

}  // namespace fgc

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fgc/fgl.hpp"
#include "fgc/hopf.hpp"
#include "fgc/modular.hpp"
#include "fgc/poly.hpp"
#include "fgc/series.hpp"

namespace fgc {

/* gamma generates the unit group of Z/m (brute-force order check). */
bool is_primitive_root(long gamma, long m);

/* gamma generates the units mod p and mod p^2; p must be a prime >= 5. */
bool unit_generator_ok(long p, long gamma);

/* Smallest unit generator mod p and p^2: 5 -> 2, 7 -> 3, 11 -> 2, 13 -> 2. */
long default_gamma(long p);

/* The gamma-weighted double Bernoulli series
     sum_{i,j>=1} (B_i/i!)(B_j/j!) unit^{i+j}
                  (gamma^i - 1)/(gamma^{i+j} - 1) log(S)^{i-1} log(T)^{j-1}
   with B_n the classical Bernoulli numbers. The Bernoulli unit generator is
   named independently of the logarithm's own coefficient alphabet so the two
   can be kept distinct. Bivariate, truncation N. */
TruncSeries theta_prime_series(const TruncSeries& log, long gamma, int N,
                               const std::string& unit = "u");

struct ThetaSeries {
  long p = 0;
  long gamma = 0;
  TruncSeries value{2, 0};
};

/* Generating series of the rationalized unit-transfer operation over the
   multiplicative law: rows start at the bottom cell S^{-1} and
     value = (1/S)(1/log(T) - 1/T) + theta_prime_series(log, gamma, N). */
ThetaSeries theta_series(long p, long gamma, int N);

/* The transfer operation pushed to a left law and composed with the
   section that splits off the bottom cell: with
   b'(x) = exp^{mult}(log^{left}(x)),
     value = (1/b'(S) - 1/S)(1/log^{left}(T) - 1/b'(T))
             + theta_prime_series(log^{left}, gamma, N).
   Requires left.trunc() >= N + 2. */
ThetaSeries mu_theta_sigma(const FormalGroupLaw& left, long p, long gamma,
                           int N);

/* f''(p_s (x) p_t) in closed Bernoulli form over Q[u, c4, c6]:
     Bbar^{ell}_{s+1} Bbar^{mult}_{t+1}
       + Bbar^{mult}_{s+1} Bbar^{mult}_{t+1}
         * gamma^{s+1}(1 - gamma^{t+1})/(gamma^{s+t+2} - 1). */
GradedPoly fprime_invariant(int s, int t, long p, long gamma);

/* The same value by the substitution route: S -> exp^{ell}(S),
   T -> exp^{ell}(T) into mu_theta_sigma(elliptic law) and s! t! [S^s T^t].
   Shares no Bernoulli closed form with fprime_invariant. N = 0 picks the
   smallest sufficient truncation. */
GradedPoly fprime_via_substitution(int s, int t, long p, long gamma,
                                   int N = 0);

/* (terms containing the named generator, terms free of it). */
std::pair<GradedPoly, GradedPoly> split_by_generator(const GradedPoly& p,
                                                     const std::string& name);

/* Weight decomposition of a polynomial in u, c4, c6, Dinv: the monomial
   u^e c4^a c6^b Dinv^m contributes c4^a c6^b Dinv^m at weight 4a + 6b - 12m;
   the unit power is the periodicity identification and is dropped. Any
   other generator is a domain error. */
DividedCongruence dc_from_mixed(const GradedPoly& value, int qprec);

/* The transfer K-cocycle specialized to the (multiplicative, elliptic) pair
   and restricted to the primitives through exp^{mult}: entry (s,t) is
   (Bbar^{ell}_{s+1} - Bbar^{mult}_{s+1}) Bbar^{ell}_{t+1}, computed by the
   series pipeline (universal cocycle, base change, substitution), not from
   that closed form. N = 0 picks 2*maxDeg + 4. */
std::map<std::pair<int, int>, GradedPoly> f_substitution_table(int maxDeg,
                                                               int N = 0);

struct FClassReport {
  int s = 0, t = 0;
  /* -Bbar^{ell}_{t+1} Bbar^{mult}_{s+1}, the closed-form representative. */
  GradedPoly representative;
  /* +Bbar^{ell}_{s+1} Bbar^{mult}_{t+1}, the same class with the opposite
     sign convention on the swapped arguments. */
  GradedPoly symmetric_representative;
  /* Unit-carrying part of the substitution-table entry. */
  GradedPoly substitution_value;
  /* Unit-free part: a single weight-(s+t+2) class, dropped because the
     quotient kills the top weight. */
  GradedPoly discarded;
  bool paths_equal = false;
  std::string provenance;  // route that produced `representative`
  DividedCongruence representative_dc;
  std::map<long, bool> reduced_trivial;  // quotient_reduce verdict per prime
};

/* f(p_s (x) p_t) two ways: the Bernoulli closed form and the K-cocycle
   substitution route. `table` must hold entry (s,t) when supplied; otherwise
   the substitution pipeline runs locally at truncation N (0 = automatic). */
FClassReport f_invariant(
    int s, int t, int qprec,
    const std::vector<long>& primes = {5, 7, 11, 13},
    const std::map<std::pair<int, int>, GradedPoly>* table = nullptr,
    int N = 0);

struct RelateReport {
  int s = 0, t = 0;
  long p = 0, gamma = 0;
  /* fprime - symmetric representative of f: expected constant in q. */
  GradedPoly difference;
  bool constant_in_q = false;
  bool quotient_trivial = false;
  /* fprime minus the other representative of f; recorded, not asserted. */
  GradedPoly swapped_difference;
  bool swapped_constant = false;
};

/* Compare f''(p_s (x) p_t) with both representatives of f(p_s (x) p_t):
   the difference against the symmetric representative is a pure unit
   multiple (constant q-expansion) and reduces to zero in the weight-(s+t+2)
   quotient at p. */
RelateReport relate_check(int s, int t, long p, long gamma, int qprec);

struct KummerReport {
  long p = 0, gamma = 0;
  int nmax = 0;
  bool pass = false;
  int first_failure = -1;  // -1 when pass
  std::map<int, long> valuation;  // v_p((gamma^n - 1) B_n / n), nonzero B_n
};

/* Kummer integrality of the unit-twisted reduced Bernoulli numbers of the
   multiplicative law: v_p((gamma^n - 1) Bbar_n / u^n) >= 0 for n <= nmax. */
KummerReport kummer_integrality(long p, long gamma, int nmax);

struct BidegreeReport {
  long p = 0, gamma = 0;
  int max_bidegree = 0;
  bool all_pass = false;
  std::pair<int, int> first_failure{0, 0};  // meaningful when !all_pass
  /* (i,j) -> minimal p-valuation of the beta_i (x) beta_j coefficient. */
  std::map<std::pair<int, int>, long> valuation;
};

/* Integrality table for the unit action on the transfer series. The
   Bernoulli unit (uR) and the coefficient unit of the leftmost law (uL) are
   kept distinct, the action scales uR by gamma, both units are collapsed to
   u afterwards, and the minimal p-valuation of each beta_i (x) beta_j
   coefficient with i >= -1, j >= 0, i + j <= max_bidegree is recorded.
   Reports the table; asserts nothing. */
BidegreeReport theta_integrality(long p, long gamma, int maxBidegree);

}  // namespace fgc

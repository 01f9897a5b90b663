#pragma once

#include <map>
#include <utility>
#include <vector>

#include "fgc/poly.hpp"

namespace fgc {

/* Exact q-expansion window with a modular weight tag. coeffs holds the
   nonzero coefficients of q^n for qlow <= n <= qprec; powers below qlow are
   exact zeros, powers above qprec are untrusted (reading them is a Precision
   error). The series is implicitly scaled by u^weight; arithmetic on
   mixed-weight sums drops the tag to 0. */
struct QExpansion {
  int weight = 0;
  int qlow = 0;
  int qprec = -1;
  std::map<int, Rat> coeffs;

  Rat at(int n) const;  // Precision error beyond qprec
  bool is_zero() const;
  QExpansion truncated(int Q) const;  // only ever lowers qprec
  QExpansion scaled(const Rat& c) const;

  bool operator==(const QExpansion& o) const;
};

QExpansion qx_add(const QExpansion& a, const QExpansion& b);
QExpansion qx_mul(const QExpansion& a, const QExpansion& b);
QExpansion qx_pow(const QExpansion& a, int e);
/* Reciprocal of a series with finite q-valuation v; the result window is
   [-v, qprec - 2v], matching the loss of two leading rows per pole order. */
QExpansion qx_recip(const QExpansion& a);

/* Normalized Eisenstein series of weight 4 or 6 through q^Q. Memoized;
   concurrent calls fill the cache idempotently. */
QExpansion eisenstein(int k, int Q);

/* Discriminant cusp form through q^Q, computed as the eta-product
   q prod_{n>=1} (1 - q^n)^24. */
QExpansion delta_expansion(int Q);

/* q-expansion of a polynomial in c4, c6, Dinv through q^Q: c4 and c6 map to
   the weight-4 and (negated) weight-6 Eisenstein series and Dinv to the
   reciprocal of the discriminant, each carrying its u-power via the weight
   tag. Any other generator is a Domain error. Inhomogeneous inputs are
   expanded exactly with the mixed-weight tag 0. */
QExpansion qexpand(const GradedPoly& form, int Q);

/* Constant q-coefficient with the weight restored as a u-power. */
GradedPoly q0(const QExpansion& e);

/* Finite sum of modular forms of distinct weights, each recorded as its
   weight and a polynomial in c4, c6, Dinv homogeneous of that weight. The
   class it represents is detected through the realized expansion: the plain
   sum of the component expansions. */
struct DividedCongruence {
  std::vector<std::pair<int, GradedPoly>> components;
  int qprec = 0;
};

/* Append a component, merging an existing equal-weight entry and checking
   homogeneity of the form against the declared weight. */
void dc_add_component(DividedCongruence& dc, int weight, const GradedPoly& form);
QExpansion realize(const DividedCongruence& dc);

struct IntegralityReport {
  bool pass = true;
  int q_power = 0;    // first violating power when pass is false
  Rat coefficient{0};
};

/* p-integrality of every realized coefficient, reporting the first
   violation. */
IntegralityReport dc_integral(const DividedCongruence& dc, long p);

struct QuotientReport {
  bool trivial = false;
  long prime = 0;
  int top_weight = 0;
  int pole_bound = 0;
  int qprec = 0;
  /* Remainder after the rational elimination step, by q-power; empty when
     the class reduced to zero there. Informational only. */
  std::map<int, Rat> residue;
  /* First row where lattice membership failed (valid when !trivial). */
  int violation_row = 0;
  Rat violation{0};
};

/* Decide triviality of the class of dc in the quotient by p-integral sums,
   rational multiples of weight-0 and weight-k meromorphic forms of pole
   order <= M at the cusp. M <= 0 selects the default ceil(k/12) + 1; Q <= 0
   selects dc.qprec. Requires Q >= M + ceil(k/12) + 2 (Precision error
   otherwise, never a silent verdict). */
QuotientReport quotient_reduce(const DividedCongruence& dc, int k, long p,
                               int M = 0, int Q = 0);

/* q0-collapse of the left tensor factors: each (left, right) pair maps to
   (q0(qexpand(left)), right). Lefts are polynomials in c4, c6, Dinv; the
   collapsed left is a u-power multiple. Pairs whose left collapses to zero
   are dropped. */
std::vector<std::pair<GradedPoly, GradedPoly>> rho1_rational(
    const std::vector<std::pair<GradedPoly, GradedPoly>>& elem, int Q);

}  // namespace fgc

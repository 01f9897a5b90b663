#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fgc/poly.hpp"

namespace fgc {

/* Truncated Laurent series in one or two formal variables (S, T), each of
   degree -2, over GradedPoly coefficients. Truncation is by total degree:
   coefficients are stored and valid for exponent pairs with i + j <= trunc().
   At most a simple pole per variable (exponents >= -1). Reading a coefficient
   beyond the truncation order is a loud precision error, never a silent zero.

   Precision bookkeeping: operations return the truncation to which the result
   is actually correct (poles in an operand lower it; see each operation). */
class TruncSeries {
 public:
  TruncSeries(int nvars, int N);
  static TruncSeries x(int N);  // the 1-variable identity series S
  static TruncSeries constant(int nvars, int N, const GradedPoly& c);
  static TruncSeries monomial(int nvars, int N, int i, int j, const GradedPoly& c);

  int nvars() const { return nvars_; }
  int trunc() const { return N_; }
  bool is_zero() const { return c_.empty(); }
  const std::map<std::pair<int, int>, GradedPoly>& terms() const { return c_; }

  /* Lowest total degree among stored terms; N+1 for the zero series. */
  int valuation() const;
  /* 1 when some stored term has a negative exponent in the given variable. */
  int pole(int var) const;
  int pole_total() const { return pole(0) + pole(1); }

  void set(int i, int j, const GradedPoly& c);
  void add(int i, int j, const GradedPoly& c);
  GradedPoly coefficient(int i, int j = 0) const;

  TruncSeries truncated(int N2) const;
  TruncSeries operator+(const TruncSeries& o) const;
  TruncSeries operator-(const TruncSeries& o) const;
  TruncSeries operator-() const;
  TruncSeries operator*(const TruncSeries& o) const;
  TruncSeries scaled(const Rat& c) const;
  TruncSeries scaled(const GradedPoly& c) const;
  TruncSeries shifted(int di, int dj = 0) const;  // multiply by S^di T^dj
  TruncSeries mapped(const std::function<GradedPoly(const GradedPoly&)>& f) const;

  bool operator==(const TruncSeries& o) const;  // compares terms, not trunc
  bool operator!=(const TruncSeries& o) const { return !(*this == o); }

  std::string str() const;

 private:
  int nvars_;
  int N_;
  std::map<std::pair<int, int>, GradedPoly> c_;
};

/* outer(inner); outer univariate, inner of strictly positive valuation. A
   simple pole in outer is composed through inverse(inner), which requires a
   univariate inner. Result truncation: min of both (minus 2 with a pole). */
TruncSeries compose(const TruncSeries& outer, const TruncSeries& inner);

/* Compositional inverse of f = x + higher (leading coefficient exactly 1). */
TruncSeries revert(const TruncSeries& f);

/* Multiplicative inverse of a univariate f = c*x^v*(1 + ...) with v in {0,1}
   and scalar c != 0. Result truncation drops to N - 2v. */
TruncSeries inverse(const TruncSeries& f);

/* Formal antiderivative with zero constant term; pole input is an error. */
TruncSeries integrate(const TruncSeries& f);

/* d/dx of a pole-free univariate series. */
TruncSeries derivative(const TruncSeries& f);

/* Embeddings of univariate series into the bivariate ring. */
TruncSeries lift_S(const TruncSeries& f, int N);
TruncSeries lift_T(const TruncSeries& f, int N);

/* f(S) * g(T) for univariate f, g: the workhorse for separable bivariate
   values, built directly without a bivariate multiplication. */
TruncSeries outer_product(const TruncSeries& f, const TruncSeries& g, int N);

/* Substitute g (univariate, valuation >= 1) for variable `var` (0 = S, 1 = T)
   of a bivariate series; a pole of f in that variable goes through inverse(g). */
TruncSeries subst_var(const TruncSeries& f, int var, const TruncSeries& g);

/* Powers f^0..f^kmax, each truncated at f's order. */
std::vector<TruncSeries> power_table(const TruncSeries& f, int kmax);

/* Coefficient-wise generator substitution (poly images). */
TruncSeries subst_gens(const TruncSeries& f,
                       const std::map<std::string, GradedPoly>& assignment);

/* Polynomial -> series substitution: every generator of p needs an image. */
TruncSeries poly_to_series(const GradedPoly& p, int nvars, int N,
                           const std::function<const TruncSeries*(int)>& image);

}  // namespace fgc

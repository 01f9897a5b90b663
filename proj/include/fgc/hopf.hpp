#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fgc/fgl.hpp"
#include "fgc/poly.hpp"
#include "fgc/series.hpp"

namespace fgc {

/* A left logarithm together with a strict isomorphism b(x) = x + sum b_i
   x^{i+1} and the derived right logarithm log^R = log^L(b^{-1}(x)), so that
   log^R(b(x)) = log^L(x) mod truncation. The universal pair keeps both
   alphabets symbolic; specialized pairs substitute concrete laws. */
struct HopfPair {
  TruncSeries logL;
  TruncSeries b;
  TruncSeries logR;
  std::string ring;  // "universal" or "<left>/<right>"
};

/* log^L = x + sum m_i x^{i+1}, b free; N <= 65 (the generator families stop
   at index 64). */
HopfPair mk_universal_pair(int N);

/* log^L from `left`, b = exp^{right}(log^{left}(x)), log^R from `right`. Both
   laws are truncated to the smaller precision; q-coefficients are truncated
   to the smaller q-precision when either law carries one. */
HopfPair mk_pair(const FormalGroupLaw& left, const FormalGroupLaw& right);

/* log^L composed with the reversion of b, recomputed from scratch; equality
   with pair.logR is the definitional round-trip test. */
TruncSeries right_log(const HopfPair& P);

/* Image of m_i under the right unit: [x^{i+1}] log^R. */
GradedPoly eta_R(const HopfPair& P, int i);

/* b with its coefficients renamed into the left/right tensor-slot alphabet
   (b_i -> bL_i resp. bR_i). */
TruncSeries b_left(const HopfPair& P);
TruncSeries b_right(const HopfPair& P);

/* Coefficientwise comultiplication of b: Delta(b_i) = [x^{i+1}] b_R(b_L(x)).
   Closing the composition in the other order breaks closure of the transfer
   cocycle, first in the image involving b_3 (regression-tested). */
TruncSeries comultiplication_b(const HopfPair& P);

/* The beta_j-coefficient of the structure map on the Thom-shifted projective
   space: psi(beta-bar(S)) = beta-bar(b(S)), so the answer is b(S)^j as a
   series in S. j >= -1; j = -1 is 1/b(S). */
TruncSeries comodule_structure(const HopfPair& P, int j);

/* A module map out of one or two projective-space factors, recorded by the
   image of the beta generating series: value = g(beta-bar(S)) resp.
   g(beta-bar(S) (x) beta-bar(T)); the value on beta_m (or beta_m (x) beta_n)
   is the S^m (resp. S^m T^n) coefficient. When `components` is nonempty the
   map lands in (coefficient ring) (x) (projective space) and components[j]
   is the beta_j-coefficient of the value; `value` is unused then.
   degree_shift records the suspension offset of the codomain. */
struct CocycleSeries {
  int vars = 1;
  int degree_shift = 0;
  std::string ring;
  TruncSeries value{1, 0};
  std::vector<TruncSeries> components;
};

/* beta-bar_0(S) |-> 1/S - 1/b(S). */
CocycleSeries cocycle_e_tau(const HopfPair& P);

/* beta-bar_0(S) (x) beta-bar_0(T) |-> (1/S - 1/b(S)) beta-bar_0(b(T)):
   components[j] = (1/S - 1/b(S)) b(T)^j. */
CocycleSeries cocycle_E_tau(const HopfPair& P);

/* beta-bar_0(S) (x) beta-bar_0(T) |-> (1/S - 1/b(S))(1/log^L(T) - 1/b(T)). */
CocycleSeries cocycle_K(const HopfPair& P);

/* 1/log(S): the rationalized Thom-class composite on the bottom class
   beta-bar_{-1}(S) of the shifted projective space. */
TruncSeries thom_U_bottom(const TruncSeries& log);

/* 1/log(S) - 1/S: the rationalized Thom-class composite on the unshifted
   projective space. [S^n] = -B_{n+1}(F)/(n+1)! for the law with this log. */
TruncSeries thom_U_section(const TruncSeries& log);

/* Degree-0 cobar differential of an A-valued map g (coefficients in the
   m-alphabet only): g_{eta_R}(b(S)) - g(S), where g_{eta_R} rewrites the
   coefficients through eta_R; the subtracted term embeds g's value by the
   unit (coefficients untouched). This is the unique convention under which
   d1 o d0 = 0 for the closing d1 below. Accepts one- or two-variable
   domains (the structure map acts by b in every slot). */
TruncSeries cobar_d0(const HopfPair& P, const TruncSeries& g);

/* Degree-1 cobar differential of a Gamma-valued map: value in the
   two-sided tensor alphabet (m, bL, bR),
     d1 f = f^{(R)}(b_L args) - f^{Delta}(args) + f^{(L)}(args)
   where ^{(R)} pushes coefficients to the right slot (b -> bR, m -> eta_R(m)
   with b -> bL), ^{Delta} applies the comultiplication coefficientwise, and
   ^{(L)} renames b -> bL. Zero exactly on the transfer cocycle. */
TruncSeries cobar_d1(const HopfPair& P, const TruncSeries& f);

/* Degree-1 cobar differential of a (Gamma (x) projective-space)-valued map
   given by its component table; the third term routes through the structure
   map of the codomain factor. Returns the component table of the result. */
std::vector<TruncSeries> cobar_d1(const HopfPair& P,
                                  const std::vector<TruncSeries>& components);

/* Substitute m_i -> [x^{i+1}] log^{left}, b_i -> [x^{i+1}] b' with
   b' = exp^{right}(log^{left}(x)) throughout the value (and components). */
CocycleSeries base_change(const CocycleSeries& c, const FormalGroupLaw& left,
                          const FormalGroupLaw& right);

/* The beta_i-coefficient of the n-th comodule primitive: n! [T^n] (exp T)^i.
   p_0 = beta_0, p_1 = beta_1, p_2 = 2 beta_2 - 2 m_1 beta_1 (universal). */
GradedPoly primitive_coefficient(const TruncSeries& exp, int n, int i);

/* Evaluate a two-variable ring-valued cocycle on the primitives p_m (x) p_n:
   substitute S -> exp(S), T -> exp(T) into the value and read
   m! n! [S^m T^n], for m, n <= maxDeg. */
std::map<std::pair<int, int>, GradedPoly> restrict_primitives(
    const CocycleSeries& c, const TruncSeries& exp, int maxDeg);

/* (Bbar^R_{m+1} - Bbar^L_{m+1}) Bbar^R_{n+1} from the pair's two logarithms
   via the Bernoulli pipeline, for m, n <= maxDeg; the independent closed form
   for restrict_primitives of the K cocycle. */
std::map<std::pair<int, int>, GradedPoly> primitive_K_closed_form(
    const HopfPair& P, int maxDeg);

}  // namespace fgc

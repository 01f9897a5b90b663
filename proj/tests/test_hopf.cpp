#include <random>
#include <vector>

#include "doctest.h"
#include "fgc/hopf.hpp"

using namespace fgc;

TEST_SUITE_BEGIN("hopf");

static GradedPoly G(const std::string& n, int e = 1) {
  return GradedPoly::gen(n, e);
}

/* ---- oracles -------------------------------------------------------- */

/* 1/f for f = x(1 + w) by the geometric series, including the S^{-1} row.
   Shares nothing with inverse(). */
static TruncSeries oracle_reciprocal(const TruncSeries& f) {
  int N = f.trunc() - 2;
  TruncSeries w = f.shifted(-1) - TruncSeries::constant(1, f.trunc() - 1,
                                                        GradedPoly(1));
  TruncSeries geo = TruncSeries::constant(1, N + 1, GradedPoly(1));
  TruncSeries wp = TruncSeries::constant(1, N + 1, GradedPoly(1));
  for (int k = 1; k <= N + 1; ++k) {
    wp = wp * w.truncated(N + 1);
    geo = k % 2 ? geo - wp : geo + wp;
  }
  return geo.shifted(-1);
}

/* Triangular solve of r(b(x)) = logL(x) for r, coefficient by coefficient.
   Independent of revert(). */
static TruncSeries oracle_right_log(const TruncSeries& logL,
                                    const TruncSeries& b) {
  int N = b.trunc();
  std::vector<TruncSeries> pw = power_table(b, N);
  std::vector<GradedPoly> rk(static_cast<size_t>(N) + 1);
  TruncSeries r(1, N);
  for (int k = 1; k <= N; ++k) {
    GradedPoly acc = logL.coefficient(k, 0);
    for (int j = 1; j < k; ++j)
      acc = acc - rk[static_cast<size_t>(j)] *
                      pw[static_cast<size_t>(j)].coefficient(k, 0);
    rk[static_cast<size_t>(k)] = acc;
    if (!acc.is_zero()) r.set(k, 0, acc);
  }
  return r;
}

static TruncSeries pole_S(int N) {
  return TruncSeries::monomial(1, N, -1, 0, GradedPoly(1));
}

/* ---- structure maps -------------------------------------------------- */

TEST_CASE("universal pair: the right units in low degree") {
  HopfPair P = mk_universal_pair(10);
  CHECK(eta_R(P, 1) == G("m1") - G("b1"));
  GradedPoly e2 = G("m2") - G("m1") * G("b1").scaled(Rat(2)) +
                  G("b1", 2).scaled(Rat(2)) - G("b2");
  CHECK(eta_R(P, 2) == e2);
  CHECK(P.logR == oracle_right_log(P.logL, P.b));
}

TEST_CASE("coordinate change round-trips: log^R(b(x)) = log^L and exp^R(log^L) = b") {
  HopfPair P = mk_universal_pair(9);
  CHECK(compose(P.logR, P.b) == P.logL.truncated(P.b.trunc()));
  CHECK(compose(revert(P.logR), P.logL) == P.b);
  CHECK(right_log(P) == P.logR);
}

TEST_CASE("equal laws collapse the pair: b = x, trivial cocycles") {
  FormalGroupLaw KU = mk_multiplicative(10);
  HopfPair P = mk_pair(KU, KU);
  CHECK(P.b == TruncSeries::x(10));
  CHECK(P.logR == KU.log());
  CHECK(cocycle_e_tau(P).value.is_zero());
  CHECK(cocycle_K(P).value.is_zero());
  for (auto& c : cocycle_E_tau(P).components) CHECK(c.is_zero());
  // identity structure map: beta_j pairs only with S^j
  CHECK(comodule_structure(P, 2) == TruncSeries::monomial(1, 10, 2, 0, GradedPoly(1)));
  CHECK(comodule_structure(P, -1) == pole_S(8));
}

TEST_CASE("comodule structure map rows") {
  HopfPair P = mk_universal_pair(10);
  TruncSeries b1 = comodule_structure(P, 1);
  TruncSeries b2 = comodule_structure(P, 2);
  CHECK(b1 == P.b);
  // psi(beta_1) = 1 (x) beta_1
  CHECK(b1.coefficient(1) == GradedPoly(1));
  // psi(beta_2) = b_1 (x) beta_1 + 1 (x) beta_2
  CHECK(b1.coefficient(2) == G("b1"));
  CHECK(b2.coefficient(2) == GradedPoly(1));
  CHECK(b2.coefficient(1).is_zero());
  CHECK(b2.coefficient(3) == G("b1").scaled(Rat(2)));
  // bottom row beta_{-1}: 1/b(S), leading terms
  TruncSeries bot = comodule_structure(P, -1);
  CHECK(bot.coefficient(-1) == GradedPoly(1));
  CHECK(bot.coefficient(0) == -G("b1"));
  CHECK(bot.coefficient(1) == G("b1", 2) - G("b2"));
  CHECK(bot == oracle_reciprocal(P.b));
}

/* ---- cocycles --------------------------------------------------------- */

TEST_CASE("transfer cocycle images against the geometric expansion") {
  HopfPair P = mk_universal_pair(10);
  CocycleSeries e = cocycle_e_tau(P);
  CHECK(e.vars == 1);
  CHECK(e.degree_shift == -2);
  CHECK(e.value.coefficient(0) == G("b1"));
  CHECK(e.value.coefficient(1) == G("b2") - G("b1", 2));
  GradedPoly s2 = G("b3") - G("b1") * G("b2").scaled(Rat(2)) + G("b1", 3);
  CHECK(e.value.coefficient(2) == s2);
  CHECK(e.value == pole_S(8) - oracle_reciprocal(P.b));
  // multiply-back: e(S) * S * b(S) = b(S) - S
  TruncSeries lhs = e.value * P.b.shifted(1);
  CHECK(lhs == (P.b - TruncSeries::x(P.b.trunc())).truncated(lhs.trunc()));
}

TEST_CASE("transfer cocycle images are homogeneous of degree 2(i+1)") {
  HopfPair P = mk_universal_pair(8);
  TruncSeries e = cocycle_e_tau(P).value;
  for (int i = 0; i <= e.trunc(); ++i) {
    GradedPoly c = e.coefficient(i);
    REQUIRE_FALSE(c.is_zero());
    CHECK(c.graded_degree() == 2 * (i + 1));
  }
}

TEST_CASE("two-variable transfer cocycle: components are e(S) b(T)^j") {
  HopfPair P = mk_universal_pair(9);
  CocycleSeries E = cocycle_E_tau(P);
  TruncSeries e = cocycle_e_tau(P).value;
  REQUIRE(E.components.size() == static_cast<size_t>(e.trunc()) + 1);
  // bottom component restricts to e_tau itself
  CHECK(E.components[0] == lift_S(e, E.components[0].trunc()));
  // [T^1] of the beta_1 component at S^0 is b_1 * 1
  CHECK(E.components[1].coefficient(0, 1) == G("b1"));
  CHECK(E.components[1].coefficient(0, 0).is_zero());
  TruncSeries b2 = comodule_structure(P, 2);
  CHECK(E.components[2] == outer_product(e, b2, E.components[2].trunc()));
}

TEST_CASE("double-transfer value and its composite second path") {
  HopfPair P = mk_universal_pair(10);
  CocycleSeries K = cocycle_K(P);
  CHECK(K.vars == 2);
  CHECK(K.degree_shift == -4);
  CHECK(K.value.coefficient(0, 0) == G("b1") * (G("b1") - G("m1")));
  // second tensor factor by the geometric oracle: 1/log^L(T) - 1/b(T)
  TruncSeries k2 = oracle_reciprocal(P.logL) - oracle_reciprocal(P.b);
  CHECK(k2.coefficient(0) == G("b1") - G("m1"));
  TruncSeries e = pole_S(8) - oracle_reciprocal(P.b);
  CHECK(K.value == outer_product(e, k2, K.value.trunc()));
  // independent route: Thom-collapse coefficients against the comodule powers,
  // K = sum_j E_tau.components[j] * [X^j](1/log^R X - 1/X)
  CocycleSeries E = cocycle_E_tau(P);
  TruncSeries u = thom_U_section(P.logR);
  TruncSeries acc(2, K.value.trunc());
  for (int j = 0; j <= u.trunc(); ++j) {
    GradedPoly uj = u.coefficient(j);
    if (!uj.is_zero())
      acc = acc + E.components[static_cast<size_t>(j)].scaled(uj).truncated(acc.trunc());
  }
  CHECK(acc == K.value);
}

TEST_CASE("Thom-class composite against the Bernoulli generating function") {
  FormalGroupLaw KU = mk_multiplicative(10);
  TruncSeries th = thom_U_section(KU.log());
  CHECK(th.coefficient(0) == G("u").scaled(Rat(1, 2)));
  CHECK(th.coefficient(1) == G("u", 2).scaled(Rat(-1, 12)));
  // oracle: 1/log(S) - 1/S = -(sum B_{i+1} x^i/(i+1)!) at x = log(S)
  TruncSeries h(1, th.trunc());
  for (int i = 0; i <= th.trunc(); ++i)
    h.set(i, 0, bernoulli(KU, i + 1).scaled(Rat(1, factorial(i + 1))));
  CHECK(th == compose(h, KU.log()).scaled(Rat(-1)));
  CHECK(thom_U_bottom(KU.log()) == th + pole_S(th.trunc()));
  // additive law: 1/x - 1/x
  CHECK(thom_U_section(TruncSeries::x(10)).is_zero());
}

/* ---- cobar differentials ---------------------------------------------- */

TEST_CASE("d0 kills scalar constants and the transfer cocycle is d1-closed") {
  HopfPair P = mk_universal_pair(10);
  CHECK(cobar_d0(P, TruncSeries::constant(1, 8, GradedPoly(3))).is_zero());
  // a coefficient constant is not a comodule map: d0 measures its right unit
  TruncSeries m1c = TruncSeries::constant(1, 8, G("m1"));
  CHECK(cobar_d0(P, m1c) == TruncSeries::constant(1, 8, -G("b1")));
  CHECK(cobar_d1(P, cocycle_e_tau(P).value).is_zero());
}

TEST_CASE("cobar is a cochain complex on sampled maps") {
  HopfPair P = mk_universal_pair(8);
  std::mt19937 rng(7);
  auto draw = [&] {
    GradedPoly c(static_cast<long>(rng() % 5));
    c += G("m1", 1 + static_cast<int>(rng() % 2))
             .scaled(Rat(1 + static_cast<long>(rng() % 3)));
    c += G("m2").scaled(Rat(static_cast<long>(rng() % 3)));
    c += G("m3").scaled(Rat(static_cast<long>(rng() % 2)));
    return c;
  };
  for (int rep = 0; rep < 3; ++rep) {
    TruncSeries gm(1, 6);
    for (int k = 0; k <= 6; ++k) gm.set(k, 0, draw());
    CHECK(cobar_d1(P, cobar_d0(P, gm)).is_zero());
  }
  TruncSeries gm2(2, 5);
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; i + j <= 5; ++j) gm2.set(i, j, draw());
  CHECK(cobar_d1(P, cobar_d0(P, gm2)).is_zero());
}

TEST_CASE("d1 annihilates the two-variable transfer cocycle componentwise") {
  HopfPair P = mk_universal_pair(9);
  for (auto& c : cobar_d1(P, cocycle_E_tau(P).components)) CHECK(c.is_zero());
}

TEST_CASE("comultiplication order: only b_R after b_L closes the cocycle") {
  HopfPair P = mk_universal_pair(8);
  TruncSeries d = comultiplication_b(P);
  TruncSeries flipped = compose(b_left(P), b_right(P));
  CHECK(d.coefficient(2) == flipped.coefficient(2));
  CHECK(d.coefficient(3) == flipped.coefficient(3));
  GradedPoly want = G("bL1", 2) * G("bR1") - G("bL1") * G("bR1", 2) -
                    G("bL2") * G("bR1") + G("bL1") * G("bR2");
  CHECK(d.coefficient(4) - flipped.coefficient(4) == want);
  // swap the comultiplication inside d1 by hand: closure fails
  TruncSeries f = cocycle_e_tau(P).value;
  auto delta_map = [&](const TruncSeries& comp) {
    std::map<std::string, GradedPoly> a;
    for (int i = 1; i + 1 <= comp.trunc(); ++i)
      a.emplace("b" + std::to_string(i), comp.coefficient(i + 1));
    return a;
  };
  TruncSeries closed = cobar_d1(P, f);
  CHECK(closed.is_zero());
  TruncSeries t2_good = subst_gens(f, delta_map(d));
  TruncSeries t2_flip = subst_gens(f, delta_map(flipped));
  CHECK_FALSE((closed + t2_good - t2_flip).is_zero());
}

TEST_CASE("the module splitting's differential reproduces the transfer class") {
  // sigma: beta_k |-> beta_k has rows sigma_j = S^j; its d0 vanishes in the
  // quotient rows and lands entirely in the beta_{-1} row, where
  // -(bottom row of psi o sigma) = 1/S - 1/b(S).
  HopfPair P = mk_universal_pair(9);
  TruncSeries bot = comodule_structure(P, -1);
  int M = bot.trunc();
  // row j >= 0 of psi o sigma is b(S)^j = row j of sigma o (structure map of X)
  for (int j = 0; j <= 3; ++j) {
    TruncSeries row = comodule_structure(P, j).truncated(M);
    CHECK(cobar_d0(P, TruncSeries::monomial(1, M, j, 0, GradedPoly(1))) ==
          row - TruncSeries::monomial(1, M, j, 0, GradedPoly(1)));
  }
  // bottom row, with the pole entry (sigma's own image) removed and negated
  CHECK(pole_S(M) - bot == cocycle_e_tau(P).value);
}

/* ---- base change ------------------------------------------------------ */

TEST_CASE("base change specializes the universal cocycles") {
  HopfPair P = mk_universal_pair(10);
  CocycleSeries e = cocycle_e_tau(P);
  CocycleSeries K = cocycle_K(P);
  FormalGroupLaw MU = mk_universal(10);
  FormalGroupLaw KU = mk_multiplicative(10);
  FormalGroupLaw ELL = mk_elliptic(10);
  CHECK(base_change(e, KU, KU).value.is_zero());
  CHECK(base_change(K, ELL, ELL).value.is_zero());
  CHECK(base_change(e, MU, KU).value == cocycle_e_tau(mk_pair(MU, KU)).value);
  CHECK(base_change(e, KU, ELL).value == cocycle_e_tau(mk_pair(KU, ELL)).value);
  CHECK(base_change(K, KU, ELL).value == cocycle_K(mk_pair(KU, ELL)).value);
  CocycleSeries E = cocycle_E_tau(P);
  CocycleSeries Es = base_change(E, KU, ELL);
  CocycleSeries En = cocycle_E_tau(mk_pair(KU, ELL));
  REQUIRE(Es.components.size() == En.components.size());
  for (size_t j = 0; j < Es.components.size(); ++j)
    CHECK(Es.components[j] == En.components[j]);
}

/* ---- primitives ------------------------------------------------------- */

TEST_CASE("primitive elements in low degree") {
  FormalGroupLaw U = mk_universal(8);
  TruncSeries ex = U.exp();
  CHECK(primitive_coefficient(ex, 0, 0) == GradedPoly(1));
  CHECK(primitive_coefficient(ex, 0, 1).is_zero());
  CHECK(primitive_coefficient(ex, 1, 1) == GradedPoly(1));
  CHECK(primitive_coefficient(ex, 1, 0).is_zero());
  // p_2 = 2 beta_2 - 2 m_1 beta_1
  CHECK(primitive_coefficient(ex, 2, 2) == GradedPoly(2));
  CHECK(primitive_coefficient(ex, 2, 1) == G("m1").scaled(Rat(-2)));
  // additive law: p_n = n! beta_n
  TruncSeries ax = TruncSeries::x(8);
  CHECK(primitive_coefficient(ax, 3, 3) == GradedPoly(6));
  CHECK(primitive_coefficient(ax, 3, 2).is_zero());
  CHECK(primitive_coefficient(ax, 4, 3).is_zero());
}

TEST_CASE("double transfer on primitives: restriction equals the Bernoulli form") {
  HopfPair P = mk_universal_pair(10);
  auto lhs = restrict_primitives(cocycle_K(P), revert(P.logL), 3);
  auto rhs = primitive_K_closed_form(P, 3);
  CHECK(lhs.at({0, 0}) == G("b1", 2) - G("m1") * G("b1"));
  REQUIRE(lhs.size() == rhs.size());
  for (auto& [mn, val] : lhs) CHECK(val == rhs.at(mn));
}

TEST_CASE("restriction of the trivial pair vanishes on primitives") {
  FormalGroupLaw KU = mk_multiplicative(8);
  HopfPair P = mk_pair(KU, KU);
  auto table = restrict_primitives(cocycle_K(P), KU.exp(), 2);
  for (auto& [mn, val] : table) CHECK(val.is_zero());
}

/* ---- guards ----------------------------------------------------------- */

TEST_CASE("alphabet and domain guards") {
  HopfPair P = mk_universal_pair(6);
  FormalGroupLaw KU = mk_multiplicative(6);
  HopfPair S = mk_pair(KU, mk_elliptic(6));
  auto kind_of = [](auto&& fn) -> int {
    try {
      fn();
    } catch (const FgcError& e) {
      return e.kind;
    }
    return -1;
  };
  CHECK(kind_of([&] { cobar_d1(S, cocycle_e_tau(S).value); }) == FgcError::Usage);
  CHECK(kind_of([&] { cobar_d0(P, TruncSeries::constant(1, 4, G("b1"))); }) ==
        FgcError::Usage);
  CHECK(kind_of([&] { eta_R(P, 0); }) == FgcError::Usage);
  CHECK(kind_of([&] { comodule_structure(P, -2); }) == FgcError::Usage);
  CHECK(kind_of([&] { restrict_primitives(cocycle_e_tau(P), P.b, 2); }) ==
        FgcError::Usage);
  CHECK(kind_of([&] {
          base_change(cocycle_e_tau(S), KU, KU);
        }) == FgcError::Usage);
}

TEST_SUITE_END();

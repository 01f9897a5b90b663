#include "fgc/invariants.hpp"

#include <doctest.h>

#include <vector>

TEST_SUITE_BEGIN("invariants");

using namespace fgc;

namespace {

int kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const FgcError& e) {
    return static_cast<int>(e.kind);
  }
  return -1;
}

Rat rat(long n, long d = 1) { return make_rat(Int(n), Int(d)); }

GradedPoly upow(int e, const Rat& c) {
  return GradedPoly::gen("u", e).scaled(c);
}

/* Pascal-row Bernoulli recurrence, coded apart from classical_bernoulli. */
std::vector<Rat> pascal_bernoulli(int nmax) {
  std::vector<Rat> B(nmax + 1);
  B[0] = 1;
  for (int n = 1; n <= nmax; ++n) {
    Rat acc = 0;
    Int binom = 1;  // C(n+1, k) built incrementally
    for (int k = 0; k < n; ++k) {
      acc += Rat(binom) * B[k];
      binom = binom * (n + 1 - k) / (k + 1);
    }
    B[n] = -acc / Rat(n + 1);
  }
  return B;
}

/* log(1+ux)/u from its closed-form coefficients (-1)^{k+1} u^{k-1}/k. */
TruncSeries closed_form_mult_log(int N) {
  TruncSeries f(1, N);
  for (int k = 1; k <= N; ++k)
    f.set(k, 0, GradedPoly::gen("u", k - 1).scaled(rat(k % 2 ? 1 : -1, k)));
  return f;
}

long ipow_long(long g, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= g;
  return r;
}

}  // namespace

TEST_CASE("unit generator checks and defaults") {
  CHECK(unit_generator_ok(5, 2));
  CHECK(unit_generator_ok(7, 3));
  CHECK(unit_generator_ok(11, 2));
  CHECK(unit_generator_ok(13, 2));
  CHECK(unit_generator_ok(5, 3));   // 3 generates mod 5 and 25
  CHECK(!unit_generator_ok(7, 2));  // 2^3 = 1 mod 7
  CHECK(!unit_generator_ok(5, 4));  // 4^2 = 1 mod 5
  CHECK(!unit_generator_ok(5, 10)); // not a unit
  CHECK(default_gamma(5) == 2);
  CHECK(default_gamma(7) == 3);
  CHECK(default_gamma(11) == 2);
  CHECK(default_gamma(13) == 2);
  CHECK(is_primitive_root(2, 5));
  CHECK(!is_primitive_root(4, 5));
  CHECK(kind_of([] { unit_generator_ok(4, 3); }) ==
        static_cast<int>(FgcError::Usage));
  CHECK(kind_of([] { default_gamma(3); }) ==
        static_cast<int>(FgcError::Usage));
}

TEST_CASE("double Bernoulli series against an independently coded table") {
  const int N = 8;
  const long g = 2;
  FormalGroupLaw ku = mk_multiplicative(N + 2);
  TruncSeries lib = theta_prime_series(ku.log(), g, N);

  /* Oracle: closed-form logarithm coefficients, Pascal-recurrence Bernoulli
     numbers, and long-integer unit-power fractions; only the series
     arithmetic (covered by its own suite) is shared with the library. */
  std::vector<Rat> B = pascal_bernoulli(N + 2);
  TruncSeries log = closed_form_mult_log(N);
  std::vector<TruncSeries> pw = power_table(log, N);
  TruncSeries want(2, N);
  Int fact = 1;
  std::vector<Rat> invfact(N + 3);
  for (int k = 0; k <= N + 2; ++k) {
    if (k) fact *= k;
    invfact[k] = make_rat(Int(1), fact);
  }
  for (int i = 1; i <= N + 1; ++i) {
    if (B[i] == 0) continue;
    for (int j = 1; (i - 1) + (j - 1) <= N; ++j) {
      if (B[j] == 0) continue;
      Rat c = B[i] * invfact[i] * B[j] * invfact[j];
      c *= rat(ipow_long(g, i) - 1, ipow_long(g, i + j) - 1);
      want = want + outer_product(pw[i - 1], pw[j - 1], N)
                        .scaled(GradedPoly::gen("u", i + j).scaled(c));
    }
  }
  CHECK(lib == want);

  /* Operator homogeneity: the coefficient of S^a T^b has degree 4+2a+2b. */
  for (auto& [k, c] : lib.terms())
    CHECK(c.graded_degree() == 4 + 2 * k.first + 2 * k.second);
}

TEST_CASE("transfer series frozen rows") {
  ThetaSeries th = theta_series(5, 2, 8);
  CHECK(th.p == 5);
  CHECK(th.gamma == 2);
  CHECK(th.value.pole(0) == 1);
  CHECK(th.value.pole(1) == 0);
  // bottom row: 1/log(T) - 1/T, i.e. -Bbar_{j+1}/j! values
  CHECK(th.value.coefficient(-1, 0) == upow(1, rat(1, 2)));
  CHECK(th.value.coefficient(-1, 1) == upow(2, rat(-1, 12)));
  // first interaction rows at gamma = 2
  CHECK(th.value.coefficient(0, 0) == upow(2, rat(1, 12)));
  CHECK(th.value.coefficient(0, 1) == upow(3, rat(-1, 168)));
  // the bottom row is exactly the section series of the multiplicative law
  FormalGroupLaw ku = mk_multiplicative(12);
  TruncSeries w = thom_U_section(ku.log());
  for (int j = 0; j <= 7; ++j)
    CHECK(th.value.coefficient(-1, j) == w.coefficient(j));

  CHECK(kind_of([] { theta_series(6, 5, 4); }) ==
        static_cast<int>(FgcError::Usage));
  CHECK(kind_of([] { theta_series(5, 4, 4); }) ==
        static_cast<int>(FgcError::Usage));
}

TEST_CASE("pushed transfer degenerates to the double series over itself") {
  const int N = 8;
  FormalGroupLaw ku = mk_multiplicative(N + 4);
  ThetaSeries mu = mu_theta_sigma(ku, 5, 2, N);
  // b' = exp(log) = x kills the product term
  CHECK(mu.value == theta_prime_series(ku.log(), 2, N));
  // and relates to the bottom-rowed series by the section subtraction
  ThetaSeries th = theta_series(5, 2, N);
  TruncSeries sinv = TruncSeries::monomial(1, N + 1, -1, 0, GradedPoly(1));
  TruncSeries w = thom_U_section(ku.log());  // truncation N + 2
  CHECK(th.value - mu.value == outer_product(sinv, w, N));
}

TEST_CASE("pushed transfer equals minus the K cocycle plus the double series") {
  const int N = 8;
  FormalGroupLaw ell = mk_elliptic(N + 3);
  FormalGroupLaw ku = mk_multiplicative(N + 3);
  ThetaSeries mu = mu_theta_sigma(ell, 5, 2, N);
  HopfPair P = mk_pair(ell, ku);
  CocycleSeries K = cocycle_K(P);
  TruncSeries tp = theta_prime_series(P.logL, 2, N);
  CHECK(mu.value == (tp - K.value).truncated(N));

  // bottom-cell subtraction: adding back (1/S)(1/log^L - 1/b') recovers the
  // un-sectioned series (1/b'(S))(1/log^L(T) - 1/b'(T)) + double series
  TruncSeries g1 = inverse(P.logL) - inverse(P.b);
  TruncSeries sinv = TruncSeries::monomial(1, N + 1, -1, 0, GradedPoly(1));
  TruncSeries unsectioned =
      outer_product(thom_U_bottom(P.b), g1, N) + tp;
  CHECK(mu.value + outer_product(sinv, g1, N) == unsectioned);

  // coefficient homogeneity survives the elliptic alphabet
  for (auto& [k, c] : mu.value.terms())
    CHECK(c.graded_degree() == 4 + 2 * k.first + 2 * k.second);

  CHECK(kind_of([&] { mu_theta_sigma(ell, 5, 2, N + 4); }) ==
        static_cast<int>(FgcError::Precision));
}

TEST_CASE("second-derivative invariant frozen values") {
  CHECK(fprime_invariant(1, 1, 5, 2) == upow(4, rat(-1, 180)));
  CHECK(fprime_invariant(0, 0, 5, 2) == upow(2, rat(-1, 6)));
  // (u^2/4) * (-gamma/(gamma+1)) at gamma = 3
  CHECK(fprime_invariant(0, 0, 7, 3) == upow(2, rat(-3, 16)));

  // (3,1): Bbar_4^{ell} u^2/12 + Bbar_4^{mult} (u^2/12) g^4(1-g^2)/(g^6-1)
  FormalGroupLaw ell = mk_elliptic(8);
  FormalGroupLaw ku = mk_multiplicative(8);
  GradedPoly want =
      reduced_bernoulli(ell, 4) * upow(2, rat(1, 12)) +
      reduced_bernoulli(ku, 4) * upow(2, rat(1, 12)).scaled(rat(16 * -3, 63));
  CHECK(fprime_invariant(3, 1, 5, 2) == want);
  GradedPoly lit = upow(6, rat(1, 1890)) +
                   GradedPoly::gen("c4").scaled(rat(-1, 240)) * upow(2, 1);
  CHECK(fprime_invariant(3, 1, 5, 2) == lit);

  CHECK(kind_of([] { fprime_invariant(-1, 0, 5, 2); }) ==
        static_cast<int>(FgcError::Usage));
}

TEST_CASE("second-derivative invariant two independent routes agree") {
  for (int s = 0; s <= 4; ++s)
    for (int t = 0; t <= 4; ++t)
      CHECK(fprime_invariant(s, t, 5, 2) ==
            fprime_via_substitution(s, t, 5, 2));
  // a different unit and prime
  CHECK(fprime_invariant(2, 3, 7, 3) == fprime_via_substitution(2, 3, 7, 3));
  CHECK(kind_of([] { fprime_via_substitution(3, 3, 5, 2, 2); }) ==
        static_cast<int>(FgcError::Usage));
}

TEST_CASE("weight decomposition of mixed unit polynomials") {
  GradedPoly c4 = GradedPoly::gen("c4");
  GradedPoly v = upow(2, rat(1)) * c4 + upow(4, rat(1)) * c4 +
                 upow(6, rat(1, 1512));
  DividedCongruence dc = dc_from_mixed(v, 10);
  CHECK(dc.qprec == 10);
  CHECK(dc.components.size() == 2);
  CHECK(dc.components[0].first == 0);
  CHECK(dc.components[0].second == GradedPoly(rat(1, 1512)));
  CHECK(dc.components[1].first == 4);
  CHECK(dc.components[1].second == c4.scaled(rat(2)));

  // negative weight through the discriminant inverse
  GradedPoly dinv = GradedPoly::gen("Dinv");
  DividedCongruence neg = dc_from_mixed(dinv * c4, 10);
  CHECK(neg.components.size() == 1);
  CHECK(neg.components[0].first == -8);

  CHECK(kind_of([] {
          dc_from_mixed(GradedPoly::gen("m1"), 10);
        }) == static_cast<int>(FgcError::Domain));
}

TEST_CASE("substitution table matches the Bernoulli difference closed form") {
  const int maxDeg = 3;
  auto tab = f_substitution_table(maxDeg);
  FormalGroupLaw ell = mk_elliptic(maxDeg + 3);
  FormalGroupLaw ku = mk_multiplicative(maxDeg + 3);
  for (int s = 0; s <= maxDeg; ++s)
    for (int t = 0; t <= maxDeg; ++t) {
      GradedPoly want =
          (reduced_bernoulli(ell, s + 1) - reduced_bernoulli(ku, s + 1)) *
          reduced_bernoulli(ell, t + 1);
      CHECK(tab.at({s, t}) == want);
    }
}

TEST_CASE("first-derivative invariant report") {
  auto tab = f_substitution_table(4);

  FClassReport r13 = f_invariant(1, 3, 40, {5, 7}, &tab);
  CHECK(r13.representative ==
        GradedPoly::gen("c4").scaled(rat(1, 240)) * upow(2, 1));
  CHECK(r13.paths_equal);
  CHECK(r13.substitution_value == r13.representative);
  CHECK(r13.discarded.is_zero());
  CHECK(r13.representative_dc.components.size() == 1);
  CHECK(r13.representative_dc.components[0].first == 4);
  CHECK(r13.reduced_trivial.at(5));
  CHECK(r13.reduced_trivial.at(7));
  CHECK(r13.provenance == "closed-form");

  FClassReport r33 = f_invariant(3, 3, 40, {5}, &tab);
  FormalGroupLaw ell = mk_elliptic(8);
  CHECK(r33.paths_equal);
  // the discarded unit-free part is the pure right-law Bernoulli product,
  // a single class of weight s+t+2
  CHECK(r33.discarded == reduced_bernoulli(ell, 4) * reduced_bernoulli(ell, 4));
  CHECK(r33.discarded.graded_degree() == 2 * (3 + 3 + 2));
  CHECK(r33.representative == -(r33.symmetric_representative));

  // symmetric representative of (s,t) is minus the representative of (t,s)
  FClassReport r31 = f_invariant(3, 1, 40, {5}, &tab);
  CHECK(r31.symmetric_representative == -(r13.representative));

  // both vanish in even-even bidegrees above zero
  FClassReport r22 = f_invariant(2, 2, 40, {5}, &tab);
  CHECK(r22.representative.is_zero());
  CHECK(r22.substitution_value.is_zero());
  CHECK(r22.paths_equal);

  CHECK(kind_of([&] { f_invariant(5, 5, 40, {5}, &tab); }) ==
        static_cast<int>(FgcError::Usage));
}

TEST_CASE("parity vanishing of the first-derivative representatives") {
  FormalGroupLaw ell = mk_elliptic(12);
  FormalGroupLaw ku = mk_multiplicative(12);
  for (int s = 2; s <= 8; s += 2)
    for (int t = 2; t <= 8; t += 2) {
      GradedPoly rep =
          -(reduced_bernoulli(ell, t + 1) * reduced_bernoulli(ku, s + 1));
      GradedPoly sym =
          reduced_bernoulli(ell, s + 1) * reduced_bernoulli(ku, t + 1);
      CHECK(rep.is_zero());
      CHECK(sym.is_zero());
    }
}

TEST_CASE("difference of the two invariants is a constant class") {
  RelateReport r = relate_check(1, 3, 5, 2, 40);
  CHECK(r.difference == upow(6, rat(1, 1512)));
  CHECK(r.constant_in_q);
  CHECK(r.quotient_trivial);
  CHECK(!r.swapped_constant);

  // remark-level closed form of the difference on a grid
  FormalGroupLaw ku = mk_multiplicative(12);
  for (int s = 0; s <= 4; ++s)
    for (int t = 0; t <= 4; ++t) {
      RelateReport g = relate_check(s, t, 5, 2, 40);
      Rat c = Rat(Int(ipow_long(2, s + 1))) *
              Rat(1 - Int(ipow_long(2, t + 1))) /
              Rat(Int(ipow_long(2, s + t + 2)) - 1);
      GradedPoly want =
          (reduced_bernoulli(ku, s + 1) * reduced_bernoulli(ku, t + 1))
              .scaled(c);
      CHECK(g.difference == want);
      CHECK(g.constant_in_q);
      CHECK(g.quotient_trivial);
    }

  // degenerate all-zero bidegree
  RelateReport z = relate_check(2, 2, 5, 2, 40);
  CHECK(z.difference.is_zero());
  CHECK(z.constant_in_q);
  CHECK(z.quotient_trivial);
}

TEST_CASE("Kummer integrality of twisted reduced Bernoulli numbers") {
  for (auto [p, g] : std::vector<std::pair<long, long>>{
           {5, 2}, {7, 3}, {11, 2}, {13, 2}}) {
    KummerReport r = kummer_integrality(p, g, 40);
    CHECK(r.pass);
    CHECK(r.first_failure == -1);
  }
  KummerReport r = kummer_integrality(5, 2, 40);
  // hand-checked spots, including the balanced n = 20 cell:
  // v5(2^20-1) = 2, v5(B_20) = -1, v5(1/20) = -1
  CHECK(r.valuation.at(4) == 0);
  CHECK(r.valuation.at(20) == 0);
  CHECK(r.valuation.count(7) == 0);  // odd Bernoulli numbers are skipped
  CHECK(kind_of([] { kummer_integrality(5, 4, 10); }) ==
        static_cast<int>(FgcError::Usage));
}

TEST_CASE("two-unit integrality table of the unit action") {
  BidegreeReport r = theta_integrality(5, 2, 8);
  CHECK(r.all_pass);
  CHECK(r.max_bidegree == 8);
  // hand value: bottom cell (-1,0) carries (gamma-1) uR/2 -> valuation 0
  CHECK(r.valuation.at({-1, 0}) == 0);
  // the window covers rows from the bottom cell up
  CHECK(r.valuation.count({-1, 8}) == 1);
  CHECK(r.valuation.count({8, 0}) == 1);
  CHECK(r.valuation.count({0, 9}) == 0);

  BidegreeReport r7 = theta_integrality(7, 3, 8);
  CHECK(r7.all_pass);

  CHECK(kind_of([] { theta_integrality(5, 2, -1); }) ==
        static_cast<int>(FgcError::Usage));
}
TEST_SUITE_END();

#include "fgc/invariants.hpp"

#include <algorithm>
#include <numeric>

namespace fgc {

namespace {

Int ipow(long g, int e) {
  Int b = g, r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

/* Multiplicative order of g in (Z/m)^*; 0 when g is not a unit. */
long unit_order(long g, long m) {
  long x = ((g % m) + m) % m;
  if (std::gcd(x, m) != 1) return 0;
  long acc = x, ord = 1;
  while (acc != 1) {
    acc = (acc * x) % m;
    ++ord;
  }
  return ord;
}

long euler_phi(long m) {
  long r = m;
  for (long d = 2; d * d <= m; ++d) {
    if (m % d) continue;
    r -= r / d;
    while (m % d == 0) m /= d;
  }
  if (m > 1) r -= r / m;
  return r;
}

bool unit_pure(const GradedPoly& v) {
  for (auto& [m, c] : v.terms())
    for (auto& [g, e] : m)
      if (gen_name(g) != "u") return false;
  return true;
}

}  // namespace

bool is_primitive_root(long gamma, long m) {
  if (m < 2) usage_error("is_primitive_root: modulus must be >= 2");
  return unit_order(gamma, m) == euler_phi(m);
}

bool unit_generator_ok(long p, long gamma) {
  if (!is_prime(p) || p < 5)
    usage_error("unit_generator_ok: p must be a prime >= 5");
  if (gamma < 2) return false;
  return is_primitive_root(gamma, p) && is_primitive_root(gamma, p * p);
}

long default_gamma(long p) {
  if (!is_prime(p) || p < 5)
    usage_error("default_gamma: p must be a prime >= 5");
  for (long g = 2; g < p * p; ++g)
    if (is_primitive_root(g, p) && is_primitive_root(g, p * p)) return g;
  usage_error("default_gamma: no generator found");  // unreachable for prime p
}

TruncSeries theta_prime_series(const TruncSeries& log, long gamma, int N,
                               const std::string& unit) {
  if (gamma < 2) usage_error("theta_prime_series: gamma must be >= 2");
  if (N < 0) usage_error("theta_prime_series: negative truncation");
  if (log.nvars() != 1 || log.pole(0) != 0)
    usage_error("theta_prime_series: logarithm must be univariate, pole-free");
  TruncSeries f = log.truncated(std::min(log.trunc(), N));
  std::vector<TruncSeries> pw = power_table(f, N);
  TruncSeries sum(2, N);
  for (int i = 1; i <= N + 1; ++i) {
    Rat Bi = classical_bernoulli(i);
    if (Bi == 0) continue;
    for (int j = 1; (i - 1) + (j - 1) <= N; ++j) {
      Rat Bj = classical_bernoulli(j);
      if (Bj == 0) continue;
      Rat c = (Bi / Rat(factorial(i))) * (Bj / Rat(factorial(j)));
      c *= Rat(ipow(gamma, i) - 1) / Rat(ipow(gamma, i + j) - 1);
      GradedPoly up = GradedPoly::gen(unit, i + j).scaled(c);
      sum = sum + outer_product(pw[i - 1], pw[j - 1], N).scaled(up);
    }
  }
  return sum;
}

ThetaSeries theta_series(long p, long gamma, int N) {
  if (N < 1) usage_error("theta_series: truncation must be >= 1");
  if (!unit_generator_ok(p, gamma))
    usage_error("theta_series: gamma must generate the units mod p and p^2");
  FormalGroupLaw ku = mk_multiplicative(N + 3);
  TruncSeries w = thom_U_section(ku.log());  // 1/log(T) - 1/T
  TruncSeries sinv =
      TruncSeries::monomial(1, N + 1, -1, 0, GradedPoly(1));
  ThetaSeries out;
  out.p = p;
  out.gamma = gamma;
  out.value =
      outer_product(sinv, w, N) + theta_prime_series(ku.log(), gamma, N);
  return out;
}

ThetaSeries mu_theta_sigma(const FormalGroupLaw& left, long p, long gamma,
                           int N) {
  if (N < 1) usage_error("mu_theta_sigma: truncation must be >= 1");
  if (!unit_generator_ok(p, gamma))
    usage_error("mu_theta_sigma: gamma must generate the units mod p and p^2");
  if (left.trunc() < N + 2)
    precision_error("mu_theta_sigma: left law truncated below N + 2");
  FormalGroupLaw ku = mk_multiplicative(left.trunc());
  HopfPair P = mk_pair(left, ku);
  TruncSeries binv = inverse(P.b);
  TruncSeries f1 =
      binv - TruncSeries::monomial(1, binv.trunc(), -1, 0, GradedPoly(1));
  TruncSeries g1 = inverse(P.logL) - binv;
  ThetaSeries out;
  out.p = p;
  out.gamma = gamma;
  out.value =
      outer_product(f1, g1, N) + theta_prime_series(P.logL, gamma, N);
  return out;
}

GradedPoly fprime_invariant(int s, int t, long p, long gamma) {
  if (s < 0 || t < 0) usage_error("fprime_invariant: degrees must be >= 0");
  if (!unit_generator_ok(p, gamma))
    usage_error("fprime_invariant: gamma must generate the units mod p, p^2");
  int M = std::max(s, t) + 3;
  FormalGroupLaw ell = mk_elliptic(M);
  FormalGroupLaw ku = mk_multiplicative(M);
  GradedPoly a = reduced_bernoulli(ell, s + 1) * reduced_bernoulli(ku, t + 1);
  GradedPoly b = reduced_bernoulli(ku, s + 1) * reduced_bernoulli(ku, t + 1);
  Rat c = Rat(ipow(gamma, s + 1)) * Rat(1 - ipow(gamma, t + 1)) /
          Rat(ipow(gamma, s + t + 2) - 1);
  return a + b.scaled(c);
}

GradedPoly fprime_via_substitution(int s, int t, long p, long gamma, int N) {
  if (s < 0 || t < 0)
    usage_error("fprime_via_substitution: degrees must be >= 0");
  if (N == 0) N = s + t + 2;
  if (N < s + t)
    usage_error("fprime_via_substitution: truncation below the read");
  FormalGroupLaw ell = mk_elliptic(N + 2);
  ThetaSeries mu = mu_theta_sigma(ell, p, gamma, N);
  TruncSeries e = ell.exp().truncated(N);
  TruncSeries v = subst_var(subst_var(mu.value, 0, e), 1, e);
  Rat scale = Rat(factorial(s)) * Rat(factorial(t));
  return v.coefficient(s, t).scaled(scale);
}

std::pair<GradedPoly, GradedPoly> split_by_generator(const GradedPoly& p,
                                                     const std::string& name) {
  GradedPoly with, without;
  for (auto& [m, c] : p.terms()) {
    bool has = false;
    for (auto& [g, e] : m)
      if (e > 0 && gen_name(g) == name) has = true;
    (has ? with : without).add_term(m, c);
  }
  return {with, without};
}

DividedCongruence dc_from_mixed(const GradedPoly& value, int qprec) {
  std::map<int, GradedPoly> byweight;
  for (auto& [m, c] : value.terms()) {
    Mono stripped;
    int w = 0;
    for (auto& [g, e] : m) {
      const std::string& nm = gen_name(g);
      if (nm == "u") continue;
      if (nm == "c4")
        w += 4 * e;
      else if (nm == "c6")
        w += 6 * e;
      else if (nm == "Dinv")
        w -= 12 * e;
      else
        domain_error("dc_from_mixed: generator " + nm +
                     " has no weight decomposition");
      stripped.push_back({g, e});
    }
    byweight[w].add_term(stripped, c);
  }
  DividedCongruence dc;
  dc.qprec = qprec;
  for (auto& [w, f] : byweight)
    if (!f.is_zero()) dc_add_component(dc, w, f);
  return dc;
}

std::map<std::pair<int, int>, GradedPoly> f_substitution_table(int maxDeg,
                                                               int N) {
  if (maxDeg < 0) usage_error("f_substitution_table: negative degree");
  if (N == 0) N = 2 * maxDeg + 4;
  HopfPair U = mk_universal_pair(N);
  CocycleSeries K = cocycle_K(U);
  FormalGroupLaw ku = mk_multiplicative(N);
  FormalGroupLaw ell = mk_elliptic(N);
  CocycleSeries bc = base_change(K, ku, ell);
  return restrict_primitives(bc, ku.exp(), maxDeg);
}

FClassReport f_invariant(int s, int t, int qprec,
                         const std::vector<long>& primes,
                         const std::map<std::pair<int, int>, GradedPoly>* table,
                         int N) {
  if (s < 0 || t < 0) usage_error("f_invariant: degrees must be >= 0");
  if (qprec < 1) usage_error("f_invariant: q-precision must be >= 1");
  FClassReport r;
  r.s = s;
  r.t = t;
  int M = std::max(s, t) + 3;
  FormalGroupLaw ell = mk_elliptic(M);
  FormalGroupLaw ku = mk_multiplicative(M);
  r.representative =
      -(reduced_bernoulli(ell, t + 1) * reduced_bernoulli(ku, s + 1));
  r.symmetric_representative =
      reduced_bernoulli(ell, s + 1) * reduced_bernoulli(ku, t + 1);
  GradedPoly entry;
  if (table) {
    auto it = table->find({s, t});
    if (it == table->end())
      usage_error("f_invariant: table lacks the requested entry");
    entry = it->second;
  } else {
    entry = f_substitution_table(std::max(s, t), N).at({s, t});
  }
  auto split = split_by_generator(entry, "u");
  r.substitution_value = split.first;
  r.discarded = split.second;
  r.paths_equal = (r.substitution_value == r.representative);
  r.provenance = "closed-form";
  r.representative_dc = dc_from_mixed(r.representative, qprec);
  for (long p : primes)
    r.reduced_trivial[p] =
        quotient_reduce(r.representative_dc, s + t + 2, p).trivial;
  return r;
}

RelateReport relate_check(int s, int t, long p, long gamma, int qprec) {
  if (s < 0 || t < 0) usage_error("relate_check: degrees must be >= 0");
  RelateReport r;
  r.s = s;
  r.t = t;
  r.p = p;
  r.gamma = gamma;
  GradedPoly fp = fprime_invariant(s, t, p, gamma);
  int M = std::max(s, t) + 3;
  FormalGroupLaw ell = mk_elliptic(M);
  FormalGroupLaw ku = mk_multiplicative(M);
  GradedPoly sym =
      reduced_bernoulli(ell, s + 1) * reduced_bernoulli(ku, t + 1);
  GradedPoly rep =
      -(reduced_bernoulli(ell, t + 1) * reduced_bernoulli(ku, s + 1));
  r.difference = fp - sym;
  r.swapped_difference = fp - rep;
  r.constant_in_q = unit_pure(r.difference);
  r.swapped_constant = unit_pure(r.swapped_difference);
  r.quotient_trivial =
      quotient_reduce(dc_from_mixed(r.difference, qprec), s + t + 2, p)
          .trivial;
  return r;
}

KummerReport kummer_integrality(long p, long gamma, int nmax) {
  if (nmax < 1) usage_error("kummer_integrality: nmax must be >= 1");
  if (!unit_generator_ok(p, gamma))
    usage_error("kummer_integrality: gamma must generate units mod p, p^2");
  KummerReport r;
  r.p = p;
  r.gamma = gamma;
  r.nmax = nmax;
  r.pass = true;
  for (int n = 1; n <= nmax; ++n) {
    Rat B = classical_bernoulli(n);
    if (B == 0) continue;
    Rat v = Rat(ipow(gamma, n) - 1) * B / Rat(n);
    long val = p_valuation(v, p);
    r.valuation[n] = val;
    if (val < 0 && r.pass) {
      r.pass = false;
      r.first_failure = n;
    }
  }
  return r;
}

BidegreeReport theta_integrality(long p, long gamma, int maxBidegree) {
  if (maxBidegree < 0) usage_error("theta_integrality: negative bidegree");
  if (!unit_generator_ok(p, gamma))
    usage_error("theta_integrality: gamma must generate units mod p, p^2");
  int M = maxBidegree + 6;
  FormalGroupLaw L = mk_multiplicative(M, "uL");
  FormalGroupLaw R = mk_multiplicative(M, "uR");
  HopfPair P = mk_pair(L, R);
  int N = maxBidegree + 1;
  TruncSeries ub = thom_U_bottom(P.b);
  TruncSeries g1 = inverse(P.logL) - inverse(P.b);
  TruncSeries V =
      outer_product(ub, g1, N) + theta_prime_series(P.logL, gamma, N, "uR");
  TruncSeries twisted = V.mapped([&](const GradedPoly& c) {
    GradedPoly out;
    for (auto& [m, r] : c.terms()) {
      int e = 0;
      for (auto& [g, k] : m)
        if (gen_name(g) == "uR") e = k;
      if (e == 0) continue;  // identity part: gamma^0 - 1 = 0
      out.add_term(m, r * Rat(ipow(gamma, e) - 1));
    }
    return out;
  });
  std::map<std::string, GradedPoly> collapse{{"uL", GradedPoly::gen("u")},
                                             {"uR", GradedPoly::gen("u")}};
  TruncSeries collapsed = twisted.mapped(
      [&](const GradedPoly& c) { return substitute_generators(c, collapse); });
  BidegreeReport r;
  r.p = p;
  r.gamma = gamma;
  r.max_bidegree = maxBidegree;
  r.all_pass = true;
  for (int i = -1; i <= maxBidegree + 1; ++i)
    for (int j = 0; i + j <= maxBidegree; ++j) {
      long val = collapsed.coefficient(i, j).vp_min(p);
      r.valuation[{i, j}] = val;
      if (val < 0 && r.all_pass) {
        r.all_pass = false;
        r.first_failure = {i, j};
      }
    }
  return r;
}

}  // namespace fgc

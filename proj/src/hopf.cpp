#include "fgc/hopf.hpp"

#include <algorithm>
#include <utility>

namespace fgc {

namespace {

/* Substitution that leaves unlisted generators fixed. */
GradedPoly rename(const GradedPoly& p, const std::map<int, GradedPoly>& byid) {
  std::map<int, GradedPoly> fixed;
  return p.substituted([&](int g) -> const GradedPoly* {
    auto it = byid.find(g);
    if (it != byid.end()) return &it->second;
    auto [fit, ignored] = fixed.try_emplace(g, GradedPoly::gen(gen_name(g)));
    return &fit->second;
  });
}

std::map<int, GradedPoly> id_map(const std::string& from, const std::string& to,
                                 int K) {
  std::map<int, GradedPoly> a;
  for (int i = 1; i <= K; ++i)
    a.emplace(gen_id(from + std::to_string(i)),
              GradedPoly::gen(to + std::to_string(i)));
  return a;
}

std::map<std::string, GradedPoly> name_map(const std::string& from,
                                           const std::string& to, int K) {
  std::map<std::string, GradedPoly> a;
  for (int i = 1; i <= K; ++i)
    a.emplace(from + std::to_string(i),
              GradedPoly::gen(to + std::to_string(i)));
  return a;
}

void require_universal(const HopfPair& P, const std::string& op) {
  if (P.ring != "universal")
    usage_error(op + ": the two-alphabet cobar calculus needs the universal pair");
}

/* psi substitutes the argument in every domain slot. */
TruncSeries apply_args(const TruncSeries& f, const TruncSeries& g) {
  if (f.nvars() == 1) return compose(f, g);
  return subst_var(subst_var(f, 0, g), 1, g);
}

TruncSeries unit_series(int nvars, int N) {
  return TruncSeries::constant(nvars, N, GradedPoly(1));
}

}  // namespace

HopfPair mk_universal_pair(int N) {
  if (N < 1) usage_error("mk_universal_pair: N >= 1 required");
  if (N - 1 > 64)
    usage_error("mk_universal_pair: generator families stop at index 64, N <= 65");
  TruncSeries logL = TruncSeries::x(N);
  TruncSeries b = TruncSeries::x(N);
  for (int i = 1; i + 1 <= N; ++i) {
    logL.set(i + 1, 0, GradedPoly::gen("m" + std::to_string(i)));
    b.set(i + 1, 0, GradedPoly::gen("b" + std::to_string(i)));
  }
  TruncSeries logR = compose(logL, revert(b));
  return {std::move(logL), std::move(b), std::move(logR), "universal"};
}

HopfPair mk_pair(const FormalGroupLaw& left, const FormalGroupLaw& right) {
  int N = std::min(left.trunc(), right.trunc());
  int q = 0;
  if (left.qprec() > 0) q = left.qprec();
  if (right.qprec() > 0) q = q > 0 ? std::min(q, right.qprec()) : right.qprec();
  auto cap = [q](TruncSeries s) {
    return q > 0 ? q_truncate(s, q) : std::move(s);
  };
  TruncSeries logL = cap(left.log().truncated(N));
  TruncSeries b = cap(compose(right.exp().truncated(N), logL));
  TruncSeries logR = cap(right.log().truncated(N));
  return {std::move(logL), std::move(b), std::move(logR),
          law_kind_str(left.kind()) + "/" + law_kind_str(right.kind())};
}

TruncSeries right_log(const HopfPair& P) {
  return compose(P.logL, revert(P.b));
}

GradedPoly eta_R(const HopfPair& P, int i) {
  if (i < 1) usage_error("eta_R: index must be >= 1");
  return P.logR.coefficient(i + 1, 0);
}

TruncSeries b_left(const HopfPair& P) {
  require_universal(P, "b_left");
  return subst_gens(P.b, name_map("b", "bL", P.b.trunc() - 1));
}

TruncSeries b_right(const HopfPair& P) {
  require_universal(P, "b_right");
  return subst_gens(P.b, name_map("b", "bR", P.b.trunc() - 1));
}

TruncSeries comultiplication_b(const HopfPair& P) {
  return compose(b_right(P), b_left(P));
}

TruncSeries comodule_structure(const HopfPair& P, int j) {
  if (j < -1) usage_error("comodule_structure: index must be >= -1");
  if (j == -1) return inverse(P.b);
  TruncSeries r = unit_series(1, P.b.trunc());
  for (int k = 0; k < j; ++k) r = r * P.b;
  return r;
}

CocycleSeries cocycle_e_tau(const HopfPair& P) {
  TruncSeries inv_b = inverse(P.b);  // 1/b(S), truncation N-2
  TruncSeries pole =
      TruncSeries::monomial(1, inv_b.trunc(), -1, 0, GradedPoly(1));
  return {1, -2, P.ring, pole - inv_b, {}};
}

CocycleSeries cocycle_E_tau(const HopfPair& P) {
  TruncSeries e = cocycle_e_tau(P).value;
  const int M = e.trunc();
  CocycleSeries out{2, -2, P.ring, TruncSeries(2, M), {}};
  TruncSeries bp = unit_series(1, P.b.trunc());
  for (int j = 0; j <= M; ++j) {
    if (j > 0) bp = bp * P.b;
    out.components.push_back(outer_product(e, bp, M));
  }
  return out;
}

CocycleSeries cocycle_K(const HopfPair& P) {
  TruncSeries e = cocycle_e_tau(P).value;
  TruncSeries k = inverse(P.logL) - inverse(P.b);  // poles cancel
  return {2, -4, P.ring, outer_product(e, k, std::min(e.trunc(), k.trunc())), {}};
}

TruncSeries thom_U_bottom(const TruncSeries& log) { return inverse(log); }

TruncSeries thom_U_section(const TruncSeries& log) {
  TruncSeries inv = inverse(log);
  TruncSeries pole =
      TruncSeries::monomial(1, inv.trunc(), -1, 0, GradedPoly(1));
  return inv - pole;
}

TruncSeries cobar_d0(const HopfPair& P, const TruncSeries& g) {
  require_universal(P, "cobar_d0");
  for (auto& [ij, c] : g.terms())
    for (auto& term : c.terms())
      for (auto& ge : term.first)
        if (gen_name(ge.first).rfind("m", 0) != 0)
          usage_error("cobar_d0: base-ring-valued map expected, found generator '" +
                      gen_name(ge.first) + "'");
  std::map<std::string, GradedPoly> a;
  for (int i = 1; i + 1 <= P.logR.trunc(); ++i)
    a.emplace("m" + std::to_string(i), P.logR.coefficient(i + 1, 0));
  return apply_args(subst_gens(g, a), P.b) - g;
}

namespace {

struct CobarMaps {
  TruncSeries bL;
  std::map<std::string, GradedPoly> to_right;  // b -> bR, m -> eta_R(m)|_{b->bL}
  std::map<std::string, GradedPoly> to_delta;  // b -> Delta b
  std::map<std::string, GradedPoly> to_left;   // b -> bL
};

CobarMaps cobar_maps(const HopfPair& P) {
  const int K = P.b.trunc() - 1;
  CobarMaps M{b_left(P), name_map("b", "bR", K), {}, name_map("b", "bL", K)};
  std::map<int, GradedPoly> bl_ids = id_map("b", "bL", K);
  for (int i = 1; i + 1 <= P.logR.trunc(); ++i)
    M.to_right.emplace("m" + std::to_string(i),
                       rename(P.logR.coefficient(i + 1, 0), bl_ids));
  TruncSeries delta = comultiplication_b(P);
  for (int i = 1; i + 1 <= delta.trunc(); ++i)
    M.to_delta.emplace("b" + std::to_string(i), delta.coefficient(i + 1, 0));
  return M;
}

}  // namespace

TruncSeries cobar_d1(const HopfPair& P, const TruncSeries& f) {
  require_universal(P, "cobar_d1");
  CobarMaps M = cobar_maps(P);
  TruncSeries t1 = apply_args(subst_gens(f, M.to_right), M.bL);
  TruncSeries t2 = subst_gens(f, M.to_delta);
  TruncSeries t3 = subst_gens(f, M.to_left);
  return t1 - t2 + t3;
}

std::vector<TruncSeries> cobar_d1(const HopfPair& P,
                                  const std::vector<TruncSeries>& components) {
  require_universal(P, "cobar_d1");
  if (components.empty()) return {};
  CobarMaps M = cobar_maps(P);
  const int J = static_cast<int>(components.size()) - 1;
  TruncSeries bR = b_right(P);
  std::vector<TruncSeries> pw{unit_series(1, bR.trunc())};
  for (int i = 1; i <= J; ++i) pw.push_back(pw.back() * bR);
  std::vector<TruncSeries> left_comps;
  left_comps.reserve(components.size());
  for (auto& c : components) left_comps.push_back(subst_gens(c, M.to_left));

  std::vector<TruncSeries> out;
  out.reserve(components.size());
  for (int i = 0; i <= J; ++i) {
    TruncSeries t1 = apply_args(subst_gens(components[i], M.to_right), M.bL);
    TruncSeries t2 = subst_gens(components[i], M.to_delta);
    // codomain structure map: beta_j contributes [x^j] b_R(x)^i to slot i
    TruncSeries t3(components[i].nvars(), components[i].trunc());
    for (int j = i; j <= J; ++j) {
      GradedPoly c = pw[static_cast<size_t>(i)].coefficient(j, 0);
      if (!c.is_zero()) t3 = t3 + left_comps[static_cast<size_t>(j)].scaled(c);
    }
    out.push_back(t1 - t2 + t3);
  }
  return out;
}

CocycleSeries base_change(const CocycleSeries& c, const FormalGroupLaw& left,
                          const FormalGroupLaw& right) {
  if (c.ring != "universal")
    usage_error("base_change: cocycle over the universal pair expected");
  HopfPair Q = mk_pair(left, right);
  const int K = Q.b.trunc() - 1;
  std::map<std::string, GradedPoly> a;
  for (int i = 1; i <= K; ++i) {
    a.emplace("m" + std::to_string(i), Q.logL.coefficient(i + 1, 0));
    a.emplace("b" + std::to_string(i), Q.b.coefficient(i + 1, 0));
  }
  int q = 0;
  if (left.qprec() > 0) q = left.qprec();
  if (right.qprec() > 0) q = q > 0 ? std::min(q, right.qprec()) : right.qprec();
  auto push = [&](const TruncSeries& v) {
    TruncSeries s = subst_gens(v.truncated(K - 1), a);
    return q > 0 ? q_truncate(s, q) : s;
  };
  CocycleSeries out{c.vars, c.degree_shift, Q.ring, push(c.value), {}};
  out.components.reserve(c.components.size());
  for (auto& comp : c.components) out.components.push_back(push(comp));
  return out;
}

GradedPoly primitive_coefficient(const TruncSeries& exp, int n, int i) {
  if (n < 0 || i < 0) usage_error("primitive_coefficient: indices must be >= 0");
  TruncSeries p = unit_series(1, exp.trunc());
  for (int k = 0; k < i; ++k) p = p * exp;
  return p.coefficient(n, 0).scaled(Rat(factorial(n)));
}

std::map<std::pair<int, int>, GradedPoly> restrict_primitives(
    const CocycleSeries& c, const TruncSeries& exp, int maxDeg) {
  if (c.vars != 2 || !c.components.empty())
    usage_error("restrict_primitives: two-variable ring-valued cocycle required");
  // Reads stop at total degree 2*maxDeg and substitution by a valuation-1
  // series never lowers total degree, so truncating first is exact.
  int cut = std::min(c.value.trunc(), 2 * maxDeg);
  TruncSeries e = exp.truncated(std::min(exp.trunc(), cut));
  TruncSeries v = subst_var(subst_var(c.value.truncated(cut), 0, e), 1, e);
  std::map<std::pair<int, int>, GradedPoly> out;
  for (int m = 0; m <= maxDeg; ++m)
    for (int n = 0; n <= maxDeg; ++n)
      out.emplace(std::make_pair(m, n),
                  v.coefficient(m, n).scaled(Rat(factorial(m) * factorial(n))));
  return out;
}

std::map<std::pair<int, int>, GradedPoly> primitive_K_closed_form(
    const HopfPair& P, int maxDeg) {
  // Bernoulli values do not depend on the truncation order, so build the
  // laws only as far as reduced_bernoulli(maxDeg + 1) needs.
  int cut = std::min(P.logL.trunc(), maxDeg + 2);
  FormalGroupLaw L(LawKind::Custom, P.logL.truncated(cut));
  FormalGroupLaw R(LawKind::Custom, P.logR.truncated(cut));
  std::vector<GradedPoly> diff, right;
  for (int k = 0; k <= maxDeg; ++k) {
    GradedPoly br = R.reduced_bernoulli(k + 1);
    diff.push_back(br - L.reduced_bernoulli(k + 1));
    right.push_back(std::move(br));
  }
  std::map<std::pair<int, int>, GradedPoly> out;
  for (int m = 0; m <= maxDeg; ++m)
    for (int n = 0; n <= maxDeg; ++n)
      out.emplace(std::make_pair(m, n),
                  diff[static_cast<size_t>(m)] * right[static_cast<size_t>(n)]);
  return out;
}

}  // namespace fgc

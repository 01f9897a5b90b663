#include "fgc/fgl.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>
#include <utility>

namespace fgc {

std::string law_kind_str(LawKind k) {
  switch (k) {
    case LawKind::Universal: return "universal";
    case LawKind::Multiplicative: return "multiplicative";
    case LawKind::Elliptic: return "elliptic";
    case LawKind::Tate: return "tate";
    case LawKind::Custom: return "custom";
  }
  return "custom";
}

FormalGroupLaw::FormalGroupLaw(LawKind kind, TruncSeries log, int qprec,
                               std::optional<TruncSeries> exp)
    : kind_(kind),
      log_(std::move(log)),
      exp_(exp ? std::move(*exp) : revert(log_)),
      qprec_(qprec),
      memo_(std::make_shared<Memo>()) {
  if (log_.nvars() != 1) usage_error("group law logarithm must be univariate");
  if (log_.valuation() < 1 || !(log_.coefficient(1) == GradedPoly(1)))
    usage_error("group law logarithm must be x + higher");
  if (exp_.valuation() < 1 || !(exp_.coefficient(1) == GradedPoly(1)))
    usage_error("group law exponential must be x + higher");
}

GradedPoly FormalGroupLaw::bernoulli(int n) const {
  if (n < 1) usage_error("bernoulli: n must be >= 1");
  {
    std::lock_guard<std::mutex> lk(memo_->mu);
    if (!memo_->recip_exp) memo_->recip_exp = inverse(exp_);
  }
  GradedPoly b = memo_->recip_exp->coefficient(n - 1).scaled(Rat(factorial(n)));
  return qprec_ > 0 ? q_truncate(b, qprec_) : b;
}

GradedPoly FormalGroupLaw::reduced_bernoulli(int n) const {
  return bernoulli(n).scaled(Rat(1, n));
}

GradedPoly bernoulli(const FormalGroupLaw& F, int n) { return F.bernoulli(n); }
GradedPoly reduced_bernoulli(const FormalGroupLaw& F, int n) {
  return F.reduced_bernoulli(n);
}

FormalGroupLaw mk_universal(int N) {
  if (N < 1) usage_error("mk_universal: N >= 1 required");
  if (N - 1 > 64) usage_error("mk_universal: registry provides m1..m64, so N <= 65");
  TruncSeries log = TruncSeries::x(N);
  for (int i = 1; i + 1 <= N; ++i)
    log.set(i + 1, 0, GradedPoly::gen("m" + std::to_string(i)));
  return FormalGroupLaw(LawKind::Universal, std::move(log));
}

FormalGroupLaw mk_multiplicative(int N, const std::string& unit) {
  if (N < 1) usage_error("mk_multiplicative: N >= 1 required");
  TruncSeries log = TruncSeries::x(N);  // log(1+ux)/u = sum (-u)^{k-1} x^k / k
  for (int k = 2; k <= N; ++k)
    log.set(k, 0, GradedPoly::gen(unit, k - 1).scaled(Rat(k % 2 ? 1 : -1, k)));
  return FormalGroupLaw(LawKind::Multiplicative, std::move(log));
}

FormalGroupLaw mk_elliptic(int N, const std::string& c4, const std::string& c6) {
  if (N < 1) usage_error("mk_elliptic: N >= 1 required");
  const int M = N - 1;  // omega is needed one order below log
  GradedPoly A = GradedPoly::gen(c4).scaled(Rat(-1, 48));
  GradedPoly B = GradedPoly::gen(c6).scaled(Rat(-1, 864));
  TruncSeries one = TruncSeries::constant(1, M, GradedPoly(1));
  // w = z^3 W(z); the branch through w = 0 solves W = 1 + A z^4 W^2 + B z^6 W^3.
  TruncSeries W = one;
  for (int it = 0; it <= M / 4; ++it) {
    TruncSeries W2 = W * W;
    W = one +
        (W2.scaled(A).shifted(4) + (W2 * W).scaled(B).shifted(6)).truncated(M);
  }
  // omega = -(w - z w')/(2w) = 1 + z W'/(2W), normalized to 1 + O(z)
  TruncSeries omega =
      one + (derivative(W).shifted(1) * inverse(W)).scaled(Rat(1, 2));
  return FormalGroupLaw(LawKind::Elliptic, integrate(omega));
}

static std::set<int> series_gens(const TruncSeries& f) {
  std::set<int> out;
  for (auto& [ij, c] : f.terms())
    for (auto& term : c.terms())
      for (auto& ge : term.first) out.insert(ge.first);
  return out;
}

FormalGroupLaw tate_specialize(const FormalGroupLaw& ell, int Qprec,
                               const std::string& c4, const std::string& c6) {
  if (ell.kind() != LawKind::Elliptic)
    usage_error("tate_specialize: elliptic law required");
  if (Qprec < 0) usage_error("tate_specialize: Qprec >= 0 required");
  for (int g : series_gens(ell.log()))
    if (gen_name(g) != c4 && gen_name(g) != c6)
      usage_error("tate_specialize: law mentions generator '" + gen_name(g) +
                  "' outside the modular alphabet {" + c4 + "," + c6 + "}");
  const int uid = gen_id("u"), qid = gen_id("q");
  GradedPoly e4, e6neg;
  for (long n = 0; n <= Qprec; ++n) {
    Mono m4{{uid, 4}}, m6{{uid, 6}};
    if (n > 0) {
      m4.push_back({qid, static_cast<int>(n)});
      m6.push_back({qid, static_cast<int>(n)});
    }
    e4.add_term(m4, n == 0 ? Rat(1) : Rat(240 * divisor_power_sum(n, 3)));
    e6neg.add_term(m6, n == 0 ? Rat(-1) : Rat(504 * divisor_power_sum(n, 5)));
  }
  std::map<std::string, GradedPoly> a{{c4, e4}, {c6, e6neg}};
  return FormalGroupLaw(LawKind::Tate, q_truncate(subst_gens(ell.log(), a), Qprec),
                        Qprec, q_truncate(subst_gens(ell.exp(), a), Qprec));
}

FormalGroupLaw q0_specialize(const FormalGroupLaw& tate) {
  if (tate.kind() != LawKind::Tate) usage_error("q0_specialize: Tate law required");
  std::map<std::string, GradedPoly> a{{"q", GradedPoly(0L)}};
  return FormalGroupLaw(LawKind::Custom, subst_gens(tate.log(), a), 0,
                        subst_gens(tate.exp(), a));
}

FormalGroupLaw q_capped(const FormalGroupLaw& F, int qcap) {
  if (qcap < 0) usage_error("q_capped: qcap >= 0 required");
  if (F.qprec() <= 0 || qcap >= F.qprec()) return F;
  return FormalGroupLaw(F.kind(), q_truncate(F.log(), qcap), qcap,
                        q_truncate(F.exp(), qcap));
}

TruncSeries group_law(const FormalGroupLaw& F) {
  const int N = F.trunc();
  TruncSeries s = compose(F.exp(), lift_S(F.log(), N) + lift_T(F.log(), N));
  return F.qprec() > 0 ? q_truncate(s, F.qprec()) : s;
}

Rat classical_bernoulli(int n) {
  if (n < 0) usage_error("classical_bernoulli: n >= 0 required");
  static std::mutex mu;
  static std::vector<Rat> tab{Rat(1)};
  std::lock_guard<std::mutex> lk(mu);
  for (int m = static_cast<int>(tab.size()); m <= n; ++m) {
    Rat s(0);  // sum_{k<m} C(m+1,k) B_k + (m+1) B_m = 0
    for (int k = 0; k < m; ++k) s += Rat(binomial(m + 1, k)) * tab[k];
    tab.push_back(-s / Rat(m + 1));
  }
  return tab[n];
}

Int bernoulli_order(int n) {
  if (n < 1) usage_error("bernoulli_order: n >= 1 required");
  Rat rb = classical_bernoulli(n) / Rat(n);
  return rb.get_den();
}

MillerReport miller_divisibility_check(const FormalGroupLaw& F, int n) {
  switch (F.kind()) {
    case LawKind::Multiplicative:
    case LawKind::Elliptic:
    case LawKind::Tate:
      break;
    default:
      usage_error("miller_divisibility_check: no declared integral form for a " +
                  law_kind_str(F.kind()) + " law");
  }
  GradedPoly v = F.reduced_bernoulli(n).scaled(Rat(bernoulli_order(n)));
  MillerReport rep{true, v.str(), ""};
  for (auto& [m, c] : v.terms()) {
    if (is_z16_integral(c)) continue;
    rep.pass = false;
    rep.witness = mono_str(m) + " -> " + rat_str(c);
    break;
  }
  return rep;
}

TruncSeries strict_iso(const FormalGroupLaw& from, const FormalGroupLaw& to) {
  TruncSeries s = compose(to.exp(), from.log());
  int q = 0;
  if (from.qprec() > 0) q = from.qprec();
  if (to.qprec() > 0) q = q > 0 ? std::min(q, to.qprec()) : to.qprec();
  return q > 0 ? q_truncate(s, q) : s;
}

GradedPoly q_truncate(const GradedPoly& p, int Qprec) {
  const int qid = gen_id("q");
  GradedPoly out;
  for (auto& [m, c] : p.terms()) {
    bool keep = true;
    for (auto& [g, e] : m)
      if (g == qid && e > Qprec) {
        keep = false;
        break;
      }
    if (keep) out.add_term(m, c);
  }
  return out;
}

TruncSeries q_truncate(const TruncSeries& f, int Qprec) {
  return f.mapped([Qprec](const GradedPoly& c) { return q_truncate(c, Qprec); });
}

namespace {

/* Associativity is checked after specializing every generator except q to a
   random rational, so coefficients become dense q-vectors mod q^{len}. */
using QVec = std::vector<Rat>;

bool qvec_is_zero(const QVec& a) {
  for (auto& r : a)
    if (r != 0) return false;
  return true;
}

void qvec_add(QVec& a, const QVec& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

QVec qvec_mul(const QVec& a, const QVec& b) {
  QVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size() && i + j < out.size(); ++j)
      if (b[j] != 0) out[i + j] += a[i] * b[j];
  }
  return out;
}

GradedPoly eval_gens(const GradedPoly& p, const std::map<int, Rat>& val) {
  GradedPoly out;
  for (auto& [m, c] : p.terms()) {
    Rat acc = c;
    Mono rest;
    for (auto& [g, e] : m) {
      auto it = val.find(g);
      if (it == val.end())
        rest.push_back({g, e});
      else
        acc *= rat_pow(it->second, e);
    }
    out.add_term(rest, acc);
  }
  return out;
}

TruncSeries eval_gens(const TruncSeries& f, const std::map<int, Rat>& val) {
  return f.mapped([&](const GradedPoly& c) { return eval_gens(c, val); });
}

/* Horner composition that reduces coefficients mod q^{qc+1} after every step,
   so Tate coefficients never grow past the trusted q window. */
TruncSeries compose_qcapped(const TruncSeries& outer, const TruncSeries& inner,
                            int qc) {
  TruncSeries acc(inner.nvars(), std::min(outer.trunc(), inner.trunc()));
  for (int k = outer.trunc(); k >= 0; --k) {
    acc = acc * inner;
    if (qc > 0) acc = q_truncate(acc, qc);
    GradedPoly ak = outer.coefficient(k);
    if (!ak.is_zero())
      acc = acc + TruncSeries::constant(inner.nvars(), acc.trunc(), ak);
  }
  return acc;
}

QVec qvec_of(const GradedPoly& p, int qid, int len) {
  QVec out(static_cast<size_t>(len));
  for (auto& [m, c] : p.terms()) {
    int e = 0;
    for (auto& [g, ex] : m) {
      if (g != qid) domain_error("qvec_of: unspecialized generator " + gen_name(g));
      e = ex;
    }
    if (e < len) out[static_cast<size_t>(e)] += c;
  }
  return out;
}

using TriKey = std::array<int, 3>;
using TriPoly = std::map<TriKey, QVec>;

void tri_add(TriPoly& a, const TriKey& k, const QVec& v) {
  auto [it, fresh] = a.try_emplace(k, v);
  if (!fresh) qvec_add(it->second, v);
}

TriPoly tri_mul(const TriPoly& a, const TriPoly& b, int N) {
  TriPoly out;
  for (auto& [ka, va] : a)
    for (auto& [kb, vb] : b) {
      TriKey k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
      if (k[0] + k[1] + k[2] > N) continue;
      tri_add(out, k, qvec_mul(va, vb));
    }
  return out;
}

void tri_prune(TriPoly& a) {
  for (auto it = a.begin(); it != a.end();)
    it = qvec_is_zero(it->second) ? a.erase(it) : std::next(it);
}

}  // namespace

FglCheckReport fgl_check(const FormalGroupLaw& F, unsigned seed, int assoc_trunc,
                         int qcap) {
  FglCheckReport rep{true, {}};
  auto fail = [&rep](const std::string& m) {
    rep.pass = false;
    rep.failures.push_back(m);
  };

  const FormalGroupLaw W =
      (F.qprec() > 0 && qcap >= 0 && qcap < F.qprec()) ? q_capped(F, qcap) : F;
  const int N = W.trunc();
  const int qc = W.qprec();
  auto qfix = [qc](TruncSeries s) {
    return qc > 0 ? q_truncate(s, qc) : std::move(s);
  };

  if (!(qfix(compose(W.exp(), W.log())) == TruncSeries::x(N)))
    fail("exp(log x) != x");
  if (!(qfix(compose(W.log(), W.exp())) == TruncSeries::x(N)))
    fail("log(exp x) != x");

  /* F(x,y) = exp(log x + log y) is built at a seeded rational point of the
     generator space (q stays symbolic mod q^{qc+1} for Tate laws); building
     it with symbolic generators costs exponentially more without adding
     confidence at a fixed truncation. */
  const int qid = gen_id("q");
  std::mt19937 rng(seed);
  std::map<int, Rat> val;
  auto draw = [&](const TruncSeries& s) {
    for (auto& [ij, c] : s.terms())
      for (auto& term : c.terms())
        for (auto& [g, e] : term.first) {
          (void)e;
          if (g == qid || val.count(g)) continue;
          long num = 1 + static_cast<long>(rng() % 9);
          long den = 1 + static_cast<long>(rng() % 4);
          if (rng() % 2) num = -num;
          val.emplace(g, Rat(num, den));
        }
  };
  draw(W.log());
  draw(W.exp());
  const std::string at = " at the seed " + std::to_string(seed) + " point";

  TruncSeries logv = eval_gens(W.log(), val);
  TruncSeries expv = eval_gens(W.exp(), val);
  TruncSeries F2 = compose_qcapped(expv, lift_S(logv, N) + lift_T(logv, N), qc);
  if (!(F2.coefficient(1, 0) == GradedPoly(1))) fail("F(x,0) != x at x^1" + at);
  if (!(F2.coefficient(0, 1) == GradedPoly(1))) fail("F(0,y) != y at y^1" + at);
  for (auto& [ij, c] : F2.terms()) {
    if (c.is_zero()) continue;
    auto [i, j] = ij;
    if (j == 0 && i != 1) fail("F(x,0) != x at x^" + std::to_string(i) + at);
    if (i == 0 && j != 1) fail("F(0,y) != y at y^" + std::to_string(j) + at);
    if (!(F2.coefficient(j, i) == c))
      fail("F(x,y) != F(y,x) at x^" + std::to_string(i) + " y^" +
           std::to_string(j) + at);
  }

  // F(F(x,y),z) = F(x,F(y,z)) on the same specialized coefficients
  const int Na = assoc_trunc > 0 ? std::min(assoc_trunc, N)
                                 : (qc > 0 ? std::min(N, 12) : N);
  const int len = qc + 1;
  std::map<std::pair<int, int>, QVec> C;
  for (auto& [ij, c] : F2.terms()) {
    if (ij.first + ij.second > Na) continue;
    QVec v = qvec_of(c, qid, len);
    if (!qvec_is_zero(v)) C.emplace(ij, std::move(v));
  }

  TriPoly G, H;  // F(x,y) in slots (0,1); F(y,z) in slots (1,2)
  for (auto& [ij, v] : C) {
    tri_add(G, TriKey{ij.first, ij.second, 0}, v);
    tri_add(H, TriKey{0, ij.first, ij.second}, v);
  }
  QVec one(static_cast<size_t>(len));
  one[0] = Rat(1);
  std::vector<TriPoly> GP(static_cast<size_t>(Na) + 1),
      HP(static_cast<size_t>(Na) + 1);
  GP[0] = TriPoly{{TriKey{0, 0, 0}, one}};
  HP[0] = GP[0];
  for (int k = 1; k <= Na; ++k) {
    GP[k] = tri_mul(GP[k - 1], G, Na);
    HP[k] = tri_mul(HP[k - 1], H, Na);
  }

  TriPoly P, Q;
  for (auto& [ij, v] : C) {
    const int k = ij.first, l = ij.second;
    for (auto& [key, gv] : GP[static_cast<size_t>(k)]) {
      if (key[0] + key[1] + key[2] + l > Na) continue;
      tri_add(P, TriKey{key[0], key[1], key[2] + l}, qvec_mul(gv, v));
    }
    for (auto& [key, hv] : HP[static_cast<size_t>(l)]) {
      if (key[0] + key[1] + key[2] + k > Na) continue;
      tri_add(Q, TriKey{key[0] + k, key[1], key[2]}, qvec_mul(hv, v));
    }
  }
  tri_prune(P);
  tri_prune(Q);
  if (!(P == Q))
    fail("associativity fails" + at + " (window " + std::to_string(Na) + ")");
  return rep;
}

}  // namespace fgc

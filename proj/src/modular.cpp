#include "fgc/modular.hpp"

#include <algorithm>
#include <mutex>
#include <string>

namespace fgc {
namespace {

void set_nonzero(QExpansion& e, int n, const Rat& c) {
  if (c != 0) e.coeffs[n] = c;
}

/* Euler product prod (1 - q^n) through q^Q by the pentagonal number
   theorem: sum over k of (-1)^k q^{k(3k-1)/2}. */
QExpansion euler_product(int Q) {
  QExpansion out;
  out.qprec = Q;
  for (long k = 0;; ++k) {
    long e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
    if (e1 > Q && e2 > Q) break;
    Rat sign = (k % 2 == 0) ? 1 : -1;
    if (e1 <= Q) set_nonzero(out, static_cast<int>(e1), sign);
    if (k > 0 && e2 <= Q) set_nonzero(out, static_cast<int>(e2), sign);
  }
  return out;
}

}  // namespace

Rat QExpansion::at(int n) const {
  if (n > qprec)
    precision_error("q-expansion read at q^" + std::to_string(n) +
                    " beyond precision " + std::to_string(qprec));
  auto it = coeffs.find(n);
  return it == coeffs.end() ? Rat(0) : it->second;
}

bool QExpansion::is_zero() const { return coeffs.empty(); }

QExpansion QExpansion::truncated(int Q) const {
  QExpansion out{weight, qlow, std::min(qprec, Q), {}};
  for (auto& [n, c] : coeffs)
    if (n <= out.qprec) out.coeffs.emplace(n, c);
  return out;
}

QExpansion QExpansion::scaled(const Rat& c) const {
  QExpansion out{weight, qlow, qprec, {}};
  if (c != 0)
    for (auto& [n, v] : coeffs) out.coeffs.emplace(n, v * c);
  return out;
}

bool QExpansion::operator==(const QExpansion& o) const {
  return weight == o.weight && qprec == o.qprec && coeffs == o.coeffs;
}

QExpansion qx_add(const QExpansion& a, const QExpansion& b) {
  QExpansion out;
  out.weight = a.weight == b.weight ? a.weight : 0;
  out.qlow = std::min(a.qlow, b.qlow);
  out.qprec = std::min(a.qprec, b.qprec);
  for (auto& [n, c] : a.coeffs)
    if (n <= out.qprec) out.coeffs[n] = c;
  for (auto& [n, c] : b.coeffs)
    if (n <= out.qprec) {
      Rat s = (out.coeffs.count(n) ? out.coeffs[n] : Rat(0)) + c;
      if (s == 0)
        out.coeffs.erase(n);
      else
        out.coeffs[n] = s;
    }
  return out;
}

QExpansion qx_mul(const QExpansion& a, const QExpansion& b) {
  QExpansion out;
  out.weight = a.weight + b.weight;
  out.qlow = a.qlow + b.qlow;
  out.qprec = std::min(a.qprec + b.qlow, b.qprec + a.qlow);
  for (auto& [n, c] : a.coeffs)
    for (auto& [m, d] : b.coeffs) {
      if (n + m > out.qprec) continue;
      Rat s = (out.coeffs.count(n + m) ? out.coeffs[n + m] : Rat(0)) + c * d;
      if (s == 0)
        out.coeffs.erase(n + m);
      else
        out.coeffs[n + m] = s;
    }
  return out;
}

QExpansion qx_pow(const QExpansion& a, int e) {
  if (e < 0) usage_error("qx_pow: negative exponent");
  if (e == 0) {
    QExpansion one;
    one.qprec = a.qprec;
    one.coeffs.emplace(0, 1);
    return one;
  }
  // Binary powering; window math is handled by qx_mul.
  QExpansion base = a, acc;
  bool started = false;
  for (int bit = e; bit > 0; bit >>= 1) {
    if (bit & 1) {
      acc = started ? qx_mul(acc, base) : base;
      started = true;
    }
    if (bit > 1) base = qx_mul(base, base);
  }
  return acc;
}

QExpansion qx_recip(const QExpansion& a) {
  if (a.coeffs.empty()) domain_error("qx_recip: zero series");
  int v = a.coeffs.begin()->first;
  const Rat lead = a.coeffs.begin()->second;
  int K = a.qprec - v;  // trusted length of the unit part
  std::vector<Rat> u(static_cast<size_t>(K) + 1, Rat(0));
  for (auto& [n, c] : a.coeffs)
    if (n - v <= K) u[static_cast<size_t>(n - v)] = c;
  std::vector<Rat> r(static_cast<size_t>(K) + 1, Rat(0));
  r[0] = Rat(1) / lead;
  for (int n = 1; n <= K; ++n) {
    Rat s = 0;
    for (int i = 1; i <= n; ++i) s += u[static_cast<size_t>(i)] * r[static_cast<size_t>(n - i)];
    r[static_cast<size_t>(n)] = -s / lead;
  }
  QExpansion out;
  out.weight = -a.weight;
  out.qlow = -v;
  out.qprec = a.qprec - 2 * v;
  for (int n = 0; n <= K; ++n)
    if (n - v <= out.qprec) set_nonzero(out, n - v, r[static_cast<size_t>(n)]);
  return out;
}

QExpansion eisenstein(int k, int Q) {
  if (k != 4 && k != 6) usage_error("eisenstein: weight must be 4 or 6");
  if (Q < 0) usage_error("eisenstein: negative precision");
  static std::mutex mu;
  static std::map<int, QExpansion> cache;
  std::lock_guard<std::mutex> lock(mu);
  QExpansion& e = cache[k];
  if (e.coeffs.empty()) {
    e.weight = k;
    e.qprec = -1;
    e.coeffs.emplace(0, 1);
    e.qprec = 0;
  }
  const Rat scale = k == 4 ? Rat(240) : Rat(-504);
  for (int n = e.qprec + 1; n <= Q; ++n)
    e.coeffs.emplace(n, scale * Rat(divisor_power_sum(n, k - 1)));
  e.qprec = std::max(e.qprec, Q);
  return e.truncated(Q);
}

QExpansion delta_expansion(int Q) {
  if (Q < 1) usage_error("delta_expansion: precision must cover q^1");
  QExpansion unit = qx_pow(euler_product(Q - 1), 24);
  QExpansion out;
  out.weight = 12;
  out.qlow = 1;
  out.qprec = Q;
  for (auto& [n, c] : unit.coeffs) out.coeffs.emplace(n + 1, c);
  return out;
}

QExpansion qexpand(const GradedPoly& form, int Q) {
  if (Q < 1) usage_error("qexpand: positive q-precision required");
  bool started = false;
  QExpansion acc;
  for (auto& [mono, coef] : form.terms()) {
    int a = 0, b = 0, m = 0;
    for (auto& [gid, exp] : mono) {
      const std::string& gn = gen_name(gid);
      if (gn == "c4")
        a = exp;
      else if (gn == "c6")
        b = exp;
      else if (gn == "Dinv")
        m = exp;
      else
        domain_error("qexpand: generator " + gn + " has no q-expansion");
    }
    int base = Q + 2 * m + 2;
    QExpansion s;
    s.qprec = base;
    s.coeffs.emplace(0, coef);
    if (a > 0) s = qx_mul(s, qx_pow(eisenstein(4, base), a));
    if (b > 0) s = qx_mul(s, qx_pow(eisenstein(6, base).scaled(-1), b));
    if (m > 0) s = qx_mul(s, qx_pow(qx_recip(delta_expansion(base)), m));
    s.weight = 4 * a + 6 * b - 12 * m;
    s = s.truncated(Q);
    acc = started ? qx_add(acc, s) : s;
    started = true;
  }
  if (!started) {
    acc.qprec = Q;
    return acc;
  }
  return acc;
}

GradedPoly q0(const QExpansion& e) {
  Rat c = e.at(0);
  if (c == 0) return GradedPoly();
  if (e.weight < 0)
    domain_error("q0: negative weight with nonzero constant term");
  return e.weight == 0 ? GradedPoly(c) : GradedPoly::gen("u", e.weight).scaled(c);
}

void dc_add_component(DividedCongruence& dc, int weight, const GradedPoly& form) {
  if (!form.is_zero()) {
    auto deg = form.graded_degree();
    if (!deg || *deg != 2 * weight)
      usage_error("divided congruence component of weight " +
                  std::to_string(weight) + " must be homogeneous of degree " +
                  std::to_string(2 * weight) + ", got " +
                  graded_degree_str(form));
  }
  for (auto& [w, f] : dc.components)
    if (w == weight) {
      f = f + form;
      return;
    }
  dc.components.emplace_back(weight, form);
}

QExpansion realize(const DividedCongruence& dc) {
  if (dc.qprec < 1) usage_error("realize: divided congruence needs qprec >= 1");
  QExpansion acc;
  acc.qprec = dc.qprec;
  for (auto& [w, f] : dc.components) acc = qx_add(acc, qexpand(f, dc.qprec));
  acc.weight = 0;
  return acc;
}

IntegralityReport dc_integral(const DividedCongruence& dc, long p) {
  if (!is_prime(p)) usage_error("dc_integral: p must be prime");
  QExpansion r = realize(dc);
  for (auto& [n, c] : r.coeffs)
    if (p_valuation(c, p) < 0) return IntegralityReport{false, n, c};
  return IntegralityReport{};
}

namespace {

/* Meromorphic basis forms of the given weight with pole order exactly m:
   monomials c4^a c6^b Dinv^m with 4a + 6b = weight + 12m. */
void append_basis(std::vector<GradedPoly>& out, int weight, int m) {
  int w = weight + 12 * m;
  if (w < 0) return;
  for (int b = 0; 6 * b <= w; ++b) {
    if ((w - 6 * b) % 4 != 0) continue;
    int a = (w - 6 * b) / 4;
    GradedPoly g(1);
    if (a > 0) g = g * GradedPoly::gen("c4", a);
    if (b > 0) g = g * GradedPoly::gen("c6", b);
    if (m > 0) g = g * GradedPoly::gen("Dinv", m);
    out.push_back(g);
  }
}

}  // namespace

QuotientReport quotient_reduce(const DividedCongruence& dc, int k, long p,
                               int M, int Q) {
  if (!is_prime(p)) usage_error("quotient_reduce: p must be prime");
  if (k < 0) usage_error("quotient_reduce: negative top weight");
  if (M <= 0) M = (k + 11) / 12 + 1;
  if (Q <= 0) Q = dc.qprec;
  int qmin = M + (k + 11) / 12 + 2;
  if (Q < qmin)
    precision_error("quotient_reduce: qprec " + std::to_string(Q) +
                    " below required " + std::to_string(qmin) +
                    " for top weight " + std::to_string(k) + ", pole bound " +
                    std::to_string(M));

  DividedCongruence work = dc;
  work.qprec = Q;
  QExpansion r = realize(work);
  int wlow = std::min(-M, r.qlow);
  int R = Q - wlow + 1;
  auto row = [&](int n) { return n - wlow; };
  auto vec_of = [&](const QExpansion& e) {
    std::vector<Rat> v(static_cast<size_t>(R), Rat(0));
    for (auto& [n, c] : e.coeffs)
      if (n >= wlow && n <= Q) v[static_cast<size_t>(row(n))] = c;
    return v;
  };

  std::vector<GradedPoly> basis;
  for (int m = 0; m <= M; ++m) {
    append_basis(basis, 0, m);
    append_basis(basis, k, m);
  }

  // Rational elimination of the basis span, Gauss-Jordan by first nonzero
  // row; pivots end up with a clean unit leading entry.
  std::vector<std::vector<Rat>> piv;
  std::vector<int> pivrow;
  auto reduce = [&](std::vector<Rat>& v) {
    for (size_t i = 0; i < piv.size(); ++i) {
      Rat c = v[static_cast<size_t>(pivrow[i])];
      if (c == 0) continue;
      for (int j = 0; j < R; ++j)
        v[static_cast<size_t>(j)] -= c * piv[i][static_cast<size_t>(j)];
    }
  };
  for (auto& g : basis) {
    std::vector<Rat> v = vec_of(qexpand(g, Q));
    reduce(v);
    int lead = -1;
    for (int j = 0; j < R; ++j)
      if (v[static_cast<size_t>(j)] != 0) {
        lead = j;
        break;
      }
    if (lead < 0) continue;
    Rat inv = Rat(1) / v[static_cast<size_t>(lead)];
    for (auto& c : v) c *= inv;
    piv.push_back(std::move(v));
    pivrow.push_back(lead);
  }

  std::vector<Rat> target = vec_of(r);
  reduce(target);

  QuotientReport rep;
  rep.prime = p;
  rep.top_weight = k;
  rep.pole_bound = M;
  rep.qprec = Q;
  for (int j = 0; j < R; ++j)
    if (target[static_cast<size_t>(j)] != 0)
      rep.residue.emplace(j + wlow, target[static_cast<size_t>(j)]);

  // Lattice membership over the p-local integers: the quotient images of the
  // coordinate vectors generate everything an integral series can reach;
  // triangularize with minimal-valuation pivots so every division stays
  // p-integral.
  std::vector<std::vector<Rat>> cols;
  for (int n = wlow; n <= Q; ++n) {
    std::vector<Rat> v(static_cast<size_t>(R), Rat(0));
    v[static_cast<size_t>(row(n))] = 1;
    reduce(v);
    bool nz = false;
    for (auto& c : v) nz = nz || c != 0;
    if (nz) cols.push_back(std::move(v));
  }
  std::vector<bool> used(cols.size(), false);
  for (int fr = 0; fr < R; ++fr) {
    size_t best = cols.size();
    long bestv = 0;
    for (size_t c = 0; c < cols.size(); ++c) {
      if (used[c] || cols[c][static_cast<size_t>(fr)] == 0) continue;
      long v = p_valuation(cols[c][static_cast<size_t>(fr)], p);
      if (best == cols.size() || v < bestv) {
        best = c;
        bestv = v;
      }
    }
    Rat& t = target[static_cast<size_t>(fr)];
    if (best == cols.size()) {
      if (t != 0) {
        rep.trivial = false;
        rep.violation_row = fr + wlow;
        rep.violation = t;
        return rep;
      }
      continue;
    }
    const Rat pe = cols[best][static_cast<size_t>(fr)];
    if (t != 0) {
      if (p_valuation(t, p) < bestv) {
        rep.trivial = false;
        rep.violation_row = fr + wlow;
        rep.violation = t;
        return rep;
      }
      Rat c = t / pe;
      for (int j = 0; j < R; ++j)
        target[static_cast<size_t>(j)] -= c * cols[best][static_cast<size_t>(j)];
    }
    for (size_t cidx = 0; cidx < cols.size(); ++cidx) {
      if (cidx == best || used[cidx]) continue;
      Rat c = cols[cidx][static_cast<size_t>(fr)];
      if (c == 0) continue;
      c = c / pe;
      for (int j = 0; j < R; ++j)
        cols[cidx][static_cast<size_t>(j)] -= c * cols[best][static_cast<size_t>(j)];
    }
    used[best] = true;
  }
  rep.trivial = true;
  return rep;
}

std::vector<std::pair<GradedPoly, GradedPoly>> rho1_rational(
    const std::vector<std::pair<GradedPoly, GradedPoly>>& elem, int Q) {
  std::vector<std::pair<GradedPoly, GradedPoly>> out;
  for (auto& [left, right] : elem) {
    GradedPoly g0 = q0(qexpand(left, Q));
    if (!g0.is_zero() && !right.is_zero()) out.emplace_back(g0, right);
  }
  return out;
}

}  // namespace fgc

#include "fgc/series.hpp"

#include <algorithm>
#include <sstream>

namespace fgc {

namespace {

/* Raise the truncation order, treating absent higher terms as zero. Only for
   algorithms (Newton iterations) that overwrite the extended range. */
TruncSeries extend(const TruncSeries& s, int N) {
  if (N <= s.trunc()) return s.truncated(N);
  TruncSeries out(s.nvars(), N);
  for (auto& [ij, c] : s.terms()) out.set(ij.first, ij.second, c);
  return out;
}

/* Reciprocal of a unit series u = c0(1 + h), h of positive valuation, by
   Newton doubling: r <- r(2 - u r). */
TruncSeries reciprocal_unit(const TruncSeries& u) {
  GradedPoly c0 = u.coefficient(0, 0);
  if (!c0.is_rat() || c0.as_rat() == 0)
    domain_error("inverse: leading coefficient must be a nonzero scalar");
  Rat c0r = c0.as_rat();
  int N = u.trunc();
  TruncSeries r = TruncSeries::constant(u.nvars(), 0, GradedPoly(Rat(1) / c0r));
  TruncSeries two = TruncSeries::constant(u.nvars(), N, GradedPoly(2));
  while (r.trunc() < N) {
    int cur = std::min(2 * r.trunc() + 1, N);
    r = extend(r, cur);
    r = r * (two.truncated(cur) - u.truncated(cur) * r);
  }
  return r;
}

}  // namespace

TruncSeries::TruncSeries(int nvars, int N) : nvars_(nvars), N_(N) {
  if (nvars != 1 && nvars != 2) domain_error("TruncSeries: nvars must be 1 or 2");
}

TruncSeries TruncSeries::x(int N) {
  TruncSeries s(1, N);
  s.set(1, 0, GradedPoly(1));
  return s;
}

TruncSeries TruncSeries::constant(int nvars, int N, const GradedPoly& c) {
  TruncSeries s(nvars, N);
  s.set(0, 0, c);
  return s;
}

TruncSeries TruncSeries::monomial(int nvars, int N, int i, int j,
                                  const GradedPoly& c) {
  TruncSeries s(nvars, N);
  s.set(i, j, c);
  return s;
}

int TruncSeries::valuation() const {
  int v = N_ + 1;
  for (auto& [ij, c] : c_) v = std::min(v, ij.first + ij.second);
  return v;
}

int TruncSeries::pole(int var) const {
  for (auto& [ij, c] : c_) {
    int e = var == 0 ? ij.first : ij.second;
    if (e < 0) return 1;
  }
  return 0;
}

void TruncSeries::set(int i, int j, const GradedPoly& c) {
  if (nvars_ == 1 && j != 0) domain_error("univariate series: T exponent must be 0");
  if (i < -1 || j < -1) domain_error("pole bound exceeded (at most simple poles)");
  if (i + j > N_) return;  // beyond truncation: dropped by contract
  if (c.is_zero())
    c_.erase({i, j});
  else
    c_[{i, j}] = c;
}

void TruncSeries::add(int i, int j, const GradedPoly& c) {
  if (c.is_zero() || i + j > N_) return;
  auto it = c_.find({i, j});
  if (it == c_.end()) {
    set(i, j, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
  }
}

GradedPoly TruncSeries::coefficient(int i, int j) const {
  if (nvars_ == 1 && j != 0) domain_error("univariate series: T exponent must be 0");
  if (i + j > N_)
    precision_error("coefficient at total degree " + std::to_string(i + j) +
                    " requested beyond truncation " + std::to_string(N_));
  auto it = c_.find({i, j});
  return it == c_.end() ? GradedPoly() : it->second;
}

TruncSeries TruncSeries::truncated(int N2) const {
  TruncSeries out(nvars_, std::min(N_, N2));
  for (auto& [ij, c] : c_)
    if (ij.first + ij.second <= out.N_) out.c_[ij] = c;
  return out;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
  if (nvars_ != o.nvars_) domain_error("series variable mismatch");
  TruncSeries out = truncated(std::min(N_, o.N_));
  for (auto& [ij, c] : o.c_) out.add(ij.first, ij.second, c);
  return out;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
  return *this + (-o);
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries out(nvars_, N_);
  for (auto& [ij, c] : c_) out.c_[ij] = -c;
  return out;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
  if (nvars_ != o.nvars_) domain_error("series variable mismatch");
  int Nout = std::min(N_ - o.pole_total(), o.N_ - pole_total());
  std::map<std::pair<int, int>, GradedPoly> acc;
  for (auto& [ij, c] : c_)
    for (auto& [kl, d] : o.c_) {
      int i = ij.first + kl.first, j = ij.second + kl.second;
      if (i + j > Nout) continue;
      GradedPoly prod = c * d;
      if (prod.is_zero()) continue;
      auto [it, inserted] =
          acc.try_emplace(std::make_pair(i, j), std::move(prod));
      if (!inserted) {
        it->second += prod;
        if (it->second.is_zero()) acc.erase(it);
      }
    }
  TruncSeries out(nvars_, Nout);
  for (auto& [ij, c] : acc) {
    if (ij.first < -1 || ij.second < -1)
      domain_error("pole bound exceeded in series product");
    out.c_[ij] = c;
  }
  return out;
}

TruncSeries TruncSeries::scaled(const Rat& c) const {
  TruncSeries out(nvars_, N_);
  if (c == 0) return out;
  for (auto& [ij, v] : c_) out.c_[ij] = v.scaled(c);
  return out;
}

TruncSeries TruncSeries::scaled(const GradedPoly& c) const {
  TruncSeries out(nvars_, N_);
  if (c.is_zero()) return out;
  for (auto& [ij, v] : c_) {
    GradedPoly p = v * c;
    if (!p.is_zero()) out.c_[ij] = p;
  }
  return out;
}

TruncSeries TruncSeries::shifted(int di, int dj) const {
  TruncSeries out(nvars_, N_ + di + dj);
  for (auto& [ij, c] : c_) out.set(ij.first + di, ij.second + dj, c);
  return out;
}

TruncSeries TruncSeries::mapped(
    const std::function<GradedPoly(const GradedPoly&)>& f) const {
  TruncSeries out(nvars_, N_);
  for (auto& [ij, c] : c_) {
    GradedPoly p = f(c);
    if (!p.is_zero()) out.c_[ij] = p;
  }
  return out;
}

bool TruncSeries::operator==(const TruncSeries& o) const {
  return nvars_ == o.nvars_ && c_ == o.c_;
}

std::string TruncSeries::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [ij, c] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (ij.first != 0) os << "*S^" << ij.first;
    if (ij.second != 0) os << "*T^" << ij.second;
  }
  os << " [N=" << N_ << "]";
  return os.str();
}

TruncSeries compose(const TruncSeries& outer, const TruncSeries& inner) {
  if (outer.nvars() != 1) domain_error("compose: outer must be univariate");
  if (inner.valuation() < 1) usage_error("compose: inner constant term nonzero");

  int Nout = std::min(outer.trunc(), inner.trunc());
  bool has_pole = outer.pole(0) != 0;
  TruncSeries result(inner.nvars(), Nout);

  if (has_pole) {
    if (inner.nvars() != 1)
      domain_error("compose: pole in outer requires univariate inner");
    TruncSeries inv = inverse(inner);
    Nout = std::min(Nout, inv.trunc());
    result = inv.scaled(outer.coefficient(-1)).truncated(Nout);
  }

  // Horner on the regular part.
  int top = outer.trunc();
  TruncSeries acc(inner.nvars(), Nout);
  for (int k = top; k >= 0; --k) {
    acc = acc * inner;
    GradedPoly ak = k <= outer.trunc() ? outer.coefficient(k) : GradedPoly();
    if (!ak.is_zero()) acc = acc + TruncSeries::constant(inner.nvars(), acc.trunc(), ak);
  }
  return result + acc;
}

TruncSeries revert(const TruncSeries& f) {
  if (f.nvars() != 1) domain_error("revert: univariate only");
  if (f.valuation() < 1 || !(f.coefficient(1) == GradedPoly(1)))
    domain_error("revert: series must be x + higher terms (leading coefficient 1)");
  // Lagrange inversion: g_n = (1/n) [x^{n-1}] (x/f)^n.
  int N = f.trunc();
  TruncSeries R = reciprocal_unit(f.shifted(-1));  // x/f, truncation N-1
  TruncSeries g = TruncSeries::x(N);
  TruncSeries Rn = R;
  for (int n = 2; n <= N; ++n) {
    Rn = Rn * R;
    g.set(n, 0, Rn.coefficient(n - 1).scaled(Rat(1, n)));
  }
  return g;
}

TruncSeries inverse(const TruncSeries& f) {
  if (f.nvars() != 1) domain_error("inverse: univariate only");
  if (f.is_zero()) domain_error("inverse of zero series");
  int v = f.valuation();
  if (v < 0) domain_error("inverse: input already has a pole");
  if (v > 1) domain_error("inverse: valuation exceeds the simple-pole bound");
  TruncSeries unit = f.shifted(-v);  // valuation 0, truncation N - v
  TruncSeries r = reciprocal_unit(unit);
  return r.shifted(-v).truncated(f.trunc() - 2 * v);
}

TruncSeries integrate(const TruncSeries& f) {
  if (f.nvars() != 1) domain_error("integrate: univariate only");
  TruncSeries out(1, f.trunc() + 1);
  for (auto& [ij, c] : f.terms()) {
    int k = ij.first;
    if (k == -1) domain_error("integrate: simple-pole input (1/x term)");
    out.set(k + 1, 0, c.scaled(Rat(1, k + 1)));
  }
  return out;
}

TruncSeries derivative(const TruncSeries& f) {
  if (f.nvars() != 1) domain_error("derivative: univariate only");
  if (f.pole(0)) domain_error("derivative: pole would exceed the pole bound");
  TruncSeries out(1, f.trunc() - 1);
  for (auto& [ij, c] : f.terms()) {
    int k = ij.first;
    if (k == 0) continue;
    out.set(k - 1, 0, c.scaled(Rat(k)));
  }
  return out;
}

TruncSeries lift_S(const TruncSeries& f, int N) {
  if (f.nvars() != 1) domain_error("lift_S: univariate input expected");
  TruncSeries out(2, std::min(N, f.trunc()));
  for (auto& [ij, c] : f.terms()) out.set(ij.first, 0, c);
  return out;
}

TruncSeries lift_T(const TruncSeries& f, int N) {
  if (f.nvars() != 1) domain_error("lift_T: univariate input expected");
  TruncSeries out(2, std::min(N, f.trunc()));
  for (auto& [ij, c] : f.terms()) out.set(0, ij.first, c);
  return out;
}

TruncSeries outer_product(const TruncSeries& f, const TruncSeries& g, int N) {
  if (f.nvars() != 1 || g.nvars() != 1)
    domain_error("outer_product: univariate factors expected");
  int Nout = std::min({N, f.trunc() - g.pole(0), g.trunc() - f.pole(0)});
  TruncSeries out(2, Nout);
  for (auto& [ij, c] : f.terms())
    for (auto& [kl, d] : g.terms()) {
      if (ij.first + kl.first > Nout) continue;
      GradedPoly p = c * d;
      out.add(ij.first, kl.first, p);
    }
  return out;
}

TruncSeries subst_var(const TruncSeries& f, int var, const TruncSeries& g) {
  if (f.nvars() != 2) domain_error("subst_var: bivariate input expected");
  if (g.nvars() != 1) domain_error("subst_var: univariate replacement expected");
  if (g.valuation() < 1) usage_error("subst_var: replacement constant term nonzero");

  int Nout = std::min(f.trunc(), g.trunc()) - 2 * (f.pole(var) ? 1 : 0);
  TruncSeries out(2, Nout);

  // Group terms of f by the exponent of the substituted variable.
  std::map<int, std::vector<std::pair<int, GradedPoly>>> groups;
  int maxexp = -1;
  for (auto& [ij, c] : f.terms()) {
    int e = var == 0 ? ij.first : ij.second;
    int other = var == 0 ? ij.second : ij.first;
    groups[e].emplace_back(other, c);
    maxexp = std::max(maxexp, e);
  }

  // Degrees above Nout + 1 in powers of g can never land inside the window
  // (the other exponent is >= -1), so cap the power ladder there.
  TruncSeries gcap = g.truncated(std::min(g.trunc(), Nout + 1));
  TruncSeries gpow = TruncSeries::constant(1, gcap.trunc(), GradedPoly(1));
  for (int e = 0; e <= maxexp; ++e) {
    if (e > 0) gpow = gpow * gcap;
    auto it = groups.find(e);
    if (it == groups.end()) continue;
    for (auto& [other, c] : it->second)
      for (auto& [kk, gc] : gpow.terms()) {
        if (kk.first + other > Nout) continue;
        int i = var == 0 ? kk.first : other;
        int j = var == 0 ? other : kk.first;
        out.add(i, j, gc * c);
      }
  }
  auto pit = groups.find(-1);
  if (pit != groups.end()) {
    TruncSeries ginv = inverse(g.truncated(std::min(g.trunc(), Nout + 3)));
    for (auto& [other, c] : pit->second)
      for (auto& [kk, gc] : ginv.terms()) {
        if (kk.first + other > Nout) continue;
        int i = var == 0 ? kk.first : other;
        int j = var == 0 ? other : kk.first;
        out.add(i, j, gc * c);
      }
  }
  return out;
}

std::vector<TruncSeries> power_table(const TruncSeries& f, int kmax) {
  std::vector<TruncSeries> p;
  p.reserve(kmax + 1);
  p.push_back(TruncSeries::constant(f.nvars(), f.trunc(), GradedPoly(1)));
  for (int k = 1; k <= kmax; ++k) p.push_back(p.back() * f);
  return p;
}

TruncSeries subst_gens(const TruncSeries& f,
                       const std::map<std::string, GradedPoly>& assignment) {
  std::map<int, GradedPoly> byid;
  for (auto& [name, img] : assignment) byid.emplace(gen_id(name), img);
  std::map<int, GradedPoly> fixed;  // unlisted generators map to themselves
  return f.mapped([&](const GradedPoly& c) {
    return c.substituted([&](int g) -> const GradedPoly* {
      auto it = byid.find(g);
      if (it != byid.end()) return &it->second;
      auto [fit, ignored] = fixed.try_emplace(g, GradedPoly::gen(gen_name(g)));
      return &fit->second;
    });
  });
}

TruncSeries poly_to_series(const GradedPoly& p, int nvars, int N,
                           const std::function<const TruncSeries*(int)>& image) {
  TruncSeries out(nvars, N);
  for (auto& [m, c] : p.terms()) {
    TruncSeries term = TruncSeries::constant(nvars, N, GradedPoly(c));
    for (auto& [g, e] : m) {
      const TruncSeries* img = image(g);
      if (!img) usage_error("no series image for generator '" + gen_name(g) + "'");
      for (int k = 0; k < e; ++k) term = term * *img;
    }
    out = out + term;
  }
  return out;
}

}  // namespace fgc

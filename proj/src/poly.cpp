#include "fgc/poly.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <sstream>

namespace fgc {

namespace {

struct Registry {
  std::deque<std::pair<std::string, int>> info;  // id -> (name, degree); deque: stable refs
  std::map<std::string, int> byname;

  int add(const std::string& name, int degree) {
    auto it = byname.find(name);
    if (it != byname.end()) {
      if (info[it->second].second != degree)
        usage_error("generator '" + name + "' already registered with degree " +
                    std::to_string(info[it->second].second));
      return it->second;
    }
    info.emplace_back(name, degree);
    byname[name] = static_cast<int>(info.size()) - 1;
    return static_cast<int>(info.size()) - 1;
  }

  Registry() {
    // Fixed registration order keeps ids, hence term order, deterministic.
    for (int i = 1; i <= 64; ++i) add("m" + std::to_string(i), 2 * i);
    for (int i = 1; i <= 64; ++i) add("b" + std::to_string(i), 2 * i);
    for (int i = 1; i <= 64; ++i) add("bL" + std::to_string(i), 2 * i);
    for (int i = 1; i <= 64; ++i) add("bR" + std::to_string(i), 2 * i);
    add("u", 2);
    add("uL", 2);
    add("uR", 2);
    add("c4", 8);
    add("c6", 12);
    add("c4L", 8);
    add("c6L", 12);
    add("c4R", 8);
    add("c6R", 12);
    add("q", 0);
    add("Dinv", -24);
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

std::mutex reg_mutex;

}  // namespace

int gen_id(const std::string& name) {
  std::lock_guard<std::mutex> lock(reg_mutex);
  auto& r = registry();
  auto it = r.byname.find(name);
  if (it == r.byname.end()) usage_error("unknown generator '" + name + "'");
  return it->second;
}

int gen_register(const std::string& name, int degree) {
  if (name.empty()) usage_error("empty generator name");
  std::lock_guard<std::mutex> lock(reg_mutex);
  return registry().add(name, degree);
}

const std::string& gen_name(int id) {
  std::lock_guard<std::mutex> lock(reg_mutex);
  auto& r = registry();
  if (id < 0 || id >= static_cast<int>(r.info.size()))
    domain_error("bad generator id");
  return r.info[id].first;
}

int gen_degree(int id) {
  std::lock_guard<std::mutex> lock(reg_mutex);
  auto& r = registry();
  if (id < 0 || id >= static_cast<int>(r.info.size()))
    domain_error("bad generator id");
  return r.info[id].second;
}

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    } else if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else {
      out.push_back(b[j++]);
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

int mono_degree(const Mono& m) {
  int d = 0;
  for (auto& [g, e] : m) d += gen_degree(g) * e;
  return d;
}

std::string mono_str(const Mono& m) {
  std::ostringstream os;
  bool first = true;
  for (auto& [g, e] : m) {
    if (!first) os << "*";
    first = false;
    os << gen_name(g);
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

Mono mono_parse(const std::string& s) {
  Mono m;
  if (s.empty() || s == "1") return m;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t star = s.find('*', pos);
    std::string factor =
        s.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
    pos = star == std::string::npos ? s.size() : star + 1;
    size_t caret = factor.find('^');
    std::string name = factor.substr(0, caret);
    int exp = 1;
    if (caret != std::string::npos) {
      try {
        exp = std::stoi(factor.substr(caret + 1));
      } catch (const std::exception&) {
        usage_error("bad exponent in monomial '" + s + "'");
      }
    }
    if (name.empty() || exp <= 0) usage_error("bad monomial '" + s + "'");
    m.emplace_back(gen_id(name), exp);
  }
  std::sort(m.begin(), m.end());
  for (size_t i = 1; i < m.size(); ++i)
    if (m[i].first == m[i - 1].first)
      usage_error("repeated generator in monomial '" + s + "'");
  return m;
}

bool MonoLess::operator()(const Mono& a, const Mono& b) const {
  int da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da < db;
  return a < b;
}

GradedPoly::GradedPoly(const Rat& c) {
  if (c != 0) t_[Mono{}] = c;
}

GradedPoly::GradedPoly(long c) {
  if (c != 0) t_[Mono{}] = Rat(c);
}

GradedPoly GradedPoly::gen(const std::string& name, int exp) {
  GradedPoly p;
  if (exp < 0) domain_error("negative generator exponent");
  if (exp == 0) return GradedPoly(1);
  p.t_[Mono{{gen_id(name), exp}}] = Rat(1);
  return p;
}

GradedPoly GradedPoly::term(const Mono& m, const Rat& c) {
  GradedPoly p;
  if (c != 0) p.t_[m] = c;
  return p;
}

bool GradedPoly::is_rat() const {
  if (t_.empty()) return true;
  return t_.size() == 1 && t_.begin()->first.empty();
}

Rat GradedPoly::as_rat() const {
  if (t_.empty()) return Rat(0);
  if (!is_rat()) domain_error("polynomial is not a scalar: " + str());
  return t_.begin()->second;
}

Rat GradedPoly::coeff(const Mono& m) const {
  auto it = t_.find(m);
  return it == t_.end() ? Rat(0) : it->second;
}

GradedPoly GradedPoly::operator-() const {
  GradedPoly out;
  for (auto& [m, c] : t_) out.t_[m] = -c;
  return out;
}

GradedPoly GradedPoly::operator+(const GradedPoly& o) const {
  GradedPoly out = *this;
  for (auto& [m, c] : o.t_) out.add_term(m, c);
  return out;
}

GradedPoly& GradedPoly::operator+=(const GradedPoly& o) {
  for (auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

GradedPoly GradedPoly::operator-(const GradedPoly& o) const {
  GradedPoly out = *this;
  for (auto& [m, c] : o.t_) out.add_term(m, -c);
  return out;
}

GradedPoly GradedPoly::operator*(const GradedPoly& o) const {
  GradedPoly out;
  for (auto& [ma, ca] : t_)
    for (auto& [mb, cb] : o.t_) out.add_term(mono_mul(ma, mb), ca * cb);
  return out;
}

GradedPoly GradedPoly::scaled(const Rat& c) const {
  GradedPoly out;
  if (c == 0) return out;
  for (auto& [m, v] : t_) out.t_[m] = v * c;
  return out;
}

GradedPoly GradedPoly::pow(int e) const {
  if (e < 0) domain_error("negative polynomial power");
  GradedPoly acc(1);
  GradedPoly base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = e > 1 ? base * base : base;
    e >>= 1;
  }
  return acc;
}

void GradedPoly::add_term(const Mono& m, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = t_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

std::optional<int> GradedPoly::graded_degree() const {
  if (t_.empty()) return 0;
  int d = mono_degree(t_.begin()->first);
  for (auto& [m, c] : t_)
    if (mono_degree(m) != d) return std::nullopt;
  return d;
}

GradedPoly GradedPoly::substituted(
    const std::function<const GradedPoly*(int)>& image) const {
  GradedPoly out;
  for (auto& [m, c] : t_) {
    GradedPoly term(c);
    for (auto& [g, e] : m) {
      const GradedPoly* img = image(g);
      if (!img) usage_error("no substitution image for generator '" + gen_name(g) + "'");
      auto d = img->graded_degree();
      if (!img->is_zero() && d && *d != gen_degree(g))
        usage_error("substitution image for '" + gen_name(g) + "' has degree " +
                    std::to_string(*d) + ", expected " +
                    std::to_string(gen_degree(g)));
      term = term * img->pow(e);
    }
    out = out + term;
  }
  return out;
}

long GradedPoly::vp_min(long p) const {
  long v = VP_INFINITY;
  for (auto& [m, c] : t_) v = std::min(v, p_valuation(c, p));
  return v;
}

bool GradedPoly::z16_integral() const {
  for (auto& [m, c] : t_)
    if (!is_z16_integral(c)) return false;
  return true;
}

std::string GradedPoly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    if (m.empty()) {
      os << rat_str(c);
    } else if (c == 1) {
      os << mono_str(m);
    } else {
      os << rat_str(c) << "*" << mono_str(m);
    }
  }
  return os.str();
}

GradedPoly substitute_generators(const GradedPoly& p,
                                 const std::map<std::string, GradedPoly>& a) {
  std::map<int, GradedPoly> byid;
  for (auto& [name, img] : a) byid.emplace(gen_id(name), img);
  return p.substituted([&](int g) -> const GradedPoly* {
    auto it = byid.find(g);
    return it == byid.end() ? nullptr : &it->second;
  });
}

std::string graded_degree_str(const GradedPoly& p) {
  auto d = p.graded_degree();
  return d ? std::to_string(*d) : std::string("inhomogeneous");
}

}  // namespace fgc

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgc/rat.hpp"

namespace fgc {

/* Generator registry: a global, append-only table mapping generator names to
   even degrees. The standard families (m<i>, b<i>, bL<i>, bR<i>, the unit
   classes u/uL/uR, the modular generators c4/c6 and their two-alphabet copies,
   q, and the inverted discriminant Dinv) are pre-registered in a fixed order,
   so generator ids and therefore the canonical term order are stable across
   runs. Unknown names must be registered explicitly with gen_register. */
int gen_id(const std::string& name);
int gen_register(const std::string& name, int degree);
const std::string& gen_name(int id);
int gen_degree(int id);

/* Monomial: sorted (generator id, exponent>0) pairs; empty vector = 1. */
using Mono = std::vector<std::pair<int, int>>;

Mono mono_mul(const Mono& a, const Mono& b);
int mono_degree(const Mono& m);
std::string mono_str(const Mono& m);
Mono mono_parse(const std::string& s);

/* Graded-lexicographic term order: total degree first, then the exponent
   sequence; deterministic because generator ids are. */
struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const;
};

/* Sparse polynomial over Rat with graded generators. No zero coefficients are
   ever stored; all operations are exact. Values are immutable in practice:
   every operation returns a fresh polynomial. */
class GradedPoly {
 public:
  GradedPoly() = default;
  explicit GradedPoly(const Rat& c);
  explicit GradedPoly(long c);
  static GradedPoly gen(const std::string& name, int exp = 1);
  static GradedPoly term(const Mono& m, const Rat& c);

  bool is_zero() const { return t_.empty(); }
  bool is_rat() const;
  Rat as_rat() const;  // scalar value; Domain error when not a scalar
  const std::map<Mono, Rat, MonoLess>& terms() const { return t_; }
  Rat coeff(const Mono& m) const;

  GradedPoly operator-() const;
  GradedPoly operator+(const GradedPoly& o) const;
  GradedPoly operator-(const GradedPoly& o) const;
  GradedPoly& operator+=(const GradedPoly& o);
  GradedPoly operator*(const GradedPoly& o) const;
  GradedPoly scaled(const Rat& c) const;
  GradedPoly pow(int e) const;

  void add_term(const Mono& m, const Rat& c);  // in-place accumulate

  /* Common degree of all terms; nullopt marks an inhomogeneous polynomial.
     The zero polynomial reports degree 0. */
  std::optional<int> graded_degree() const;

  /* Ring-homomorphic substitution. Every generator occurring in the
     polynomial must have an image (Usage error otherwise); a homogeneous
     image whose degree differs from the generator's is a Usage error. */
  GradedPoly substituted(
      const std::function<const GradedPoly*(int)>& image) const;

  /* Minimum p-valuation over all coefficients (VP_INFINITY for zero). */
  long vp_min(long p) const;
  bool z16_integral() const;

  std::string str() const;

  bool operator==(const GradedPoly& o) const { return t_ == o.t_; }
  bool operator!=(const GradedPoly& o) const { return !(*this == o); }

 private:
  std::map<Mono, Rat, MonoLess> t_;
};

/* Spec-facing wrappers. */
GradedPoly substitute_generators(const GradedPoly& p,
                                 const std::map<std::string, GradedPoly>& a);
/* Degree or the inhomogeneous marker, serialized form. */
std::string graded_degree_str(const GradedPoly& p);

}  // namespace fgc

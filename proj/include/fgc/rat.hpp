#pragma once

#include <gmpxx.h>

#include <limits>
#include <stdexcept>
#include <string>

namespace fgc {

/* Exact arithmetic everywhere: Rat is a canonical fraction (gcd(num,den)=1,
   den>0), Int an arbitrary-precision integer. GMP keeps results canonical. */
using Rat = mpq_class;
using Int = mpz_class;

/* All library errors carry a kind so the CLI can map them to exit codes:
   Usage/Precision -> 2, CheckFailed -> 1. */
class FgcError : public std::runtime_error {
 public:
  enum Kind { Usage, Precision, Domain };
  Kind kind;
  FgcError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void usage_error(const std::string& msg) {
  throw FgcError(FgcError::Usage, msg);
}
[[noreturn]] inline void precision_error(const std::string& msg) {
  throw FgcError(FgcError::Precision, msg);
}
[[noreturn]] inline void domain_error(const std::string& msg) {
  throw FgcError(FgcError::Domain, msg);
}

/* Sentinel for v_p(0). */
inline constexpr long VP_INFINITY = std::numeric_limits<long>::max();

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/* v_p of a nonzero integer. */
inline long vp_int(Int n, long p) {
  if (n == 0) domain_error("vp_int: zero argument");
  long v = 0;
  Int q, r;
  Int pz(p);
  for (;;) {
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t());
    if (r != 0) break;
    n = q;
    ++v;
  }
  return v;
}

/* v_p(r), with VP_INFINITY for r = 0. Non-prime p is a usage error. */
inline long p_valuation(const Rat& r, long p) {
  if (!is_prime(p)) usage_error("p_valuation: p = " + std::to_string(p) + " is not prime");
  if (r == 0) return VP_INFINITY;
  return vp_int(r.get_num(), p) - vp_int(r.get_den(), p);
}

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) domain_error("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/* Parse "num/den" or "num"; used by JSON input and tests. */
inline Rat rat_parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    usage_error("rat_parse: malformed rational '" + s + "'");
  }
}

/* Canonical "num/den", plain "num" when the denominator is 1. */
inline std::string rat_str(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Int factorial(unsigned long n) {
  Int f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline Int binomial(unsigned long n, unsigned long k) {
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

inline Rat rat_pow(const Rat& r, long e) {
  if (e == 0) return Rat(1);
  if (r == 0) {
    if (e < 0) domain_error("rat_pow: zero base, negative exponent");
    return Rat(0);
  }
  Rat base = e < 0 ? Rat(1) / r : r;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), k);
  return out; // powers of a canonical fraction stay canonical
}

inline bool is_integral(const Rat& r) { return r.get_den() == 1; }

/* Integral over Z[1/6]: denominator is a product of 2s and 3s only. */
inline bool is_z16_integral(const Rat& r) {
  Int d = r.get_den();
  while (d % 2 == 0) d /= 2;
  while (d % 3 == 0) d /= 3;
  return d == 1;
}

inline bool is_p_integral(const Rat& r, long p) {
  return r == 0 || p_valuation(r, p) >= 0;
}

/* sigma_k(n) = sum of d^k over positive divisors d of n; n >= 1. */
inline Int divisor_power_sum(long n, int k) {
  if (n < 1) domain_error("divisor_power_sum: n must be positive");
  Int s = 0, dk;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d),
                  static_cast<unsigned long>(k));
    s += dk;
    long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(e),
                    static_cast<unsigned long>(k));
      s += dk;
    }
  }
  return s;
}

}  // namespace fgc

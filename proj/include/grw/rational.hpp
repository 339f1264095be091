#ifndef GRW_RATIONAL_HPP
#define GRW_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace grw {

/// Exact rational scalar. Always canonicalized (reduced, positive denominator).
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

inline Rat inv(const Rat& q) {
  if (is_zero(q)) throw std::domain_error("division by zero rational");
  return Rat(1) / q;
}

/// Exact n-th root, if the rational has one in Q.
inline std::optional<Rat> nth_root(const Rat& q, unsigned long n) {
  if (n == 0) throw std::domain_error("0-th root");
  if (is_zero(q)) return Rat(0);
  if (sgn(q) < 0 && n % 2 == 0) return std::nullopt;
  mpz_class num = abs(q.get_num());
  mpz_class den = q.get_den();
  mpz_class rn, rd;
  bool exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n) != 0;
  bool exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n) != 0;
  if (!exact_n || !exact_d) return std::nullopt;
  Rat r(rn, rd);
  if (sgn(q) < 0) r = -r;
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Rat parse_rat(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace grw

#endif

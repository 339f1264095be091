#ifndef GRW_SERIES_HPP
#define GRW_SERIES_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "grw/rational.hpp"
#include "grw/ring.hpp"

namespace grw {

/// Knowledge bound for series that are exact (no O() tail).
inline constexpr long kHiInf = 1L << 40;

/// Extra depth granted when inverting or extracting roots of exact series
/// whose result is infinite; the result carries an honest finite bound.
inline constexpr long kExactSlack = 64;

inline long clamp_hi(long h) { return h >= kHiInf ? kHiInf : h; }

inline long ceil_div(long a, long b) {  // b > 0
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

/// Truncated Laurent series in z^{1/e} over a coefficient ring K.
///
/// Represents sum_{m >= lo} c_m z^{m/e} where coefficients are stored for
/// m in [lo, lo+len), are implicitly zero for m in [lo+len, hi), and are
/// unknown for m >= hi.  The series is exactly zero below lo.
template <class K>
class Series {
 public:
  Series() : e_(1), lo_(0), hi_(0) {}

  static Series zero(int e, long hi = kHiInf) {
    Series s;
    s.e_ = e;
    s.lo_ = clamp_hi(hi);
    s.hi_ = clamp_hi(hi);
    return s;
  }

  static Series monomial(int e, long m, K coeff, long hi = kHiInf) {
    Series s;
    s.e_ = e;
    s.hi_ = clamp_hi(hi);
    if (m >= s.hi_ || is_zero(coeff)) return zero(e, hi);
    s.lo_ = m;
    s.c_.push_back(std::move(coeff));
    return s;
  }

  static Series constant(int e, K coeff, long hi = kHiInf) {
    return monomial(e, 0, std::move(coeff), hi);
  }

  /// Build from a dense coefficient run starting at exponent numerator lo.
  static Series from_coeffs(int e, long lo, std::vector<K> coeffs, long hi = kHiInf) {
    Series s;
    s.e_ = e;
    s.lo_ = lo;
    s.hi_ = clamp_hi(hi);
    s.c_ = std::move(coeffs);
    if (lo + static_cast<long>(s.c_.size()) > s.hi_)
      s.c_.resize(static_cast<size_t>(s.hi_ - lo));
    s.trim();
    return s;
  }

  int e() const { return e_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }

  /// Coefficient at exponent m/e; zero outside the stored support.
  /// Does not check certification; see certified().
  const K& coeff(long m) const {
    static const K kZero{};
    if (m < lo_ || m >= lo_ + static_cast<long>(c_.size())) return kZero;
    return c_[static_cast<size_t>(m - lo_)];
  }

  bool certified(long m) const { return m < hi_; }

  bool is_exact() const { return hi_ >= kHiInf; }

  /// True when every tracked coefficient vanishes ("zero at this depth").
  bool is_zero_at_depth() const {
    for (const auto& c : c_)
      if (!is_zero(c)) return false;
    return true;
  }

  /// Smallest exponent numerator with nonzero coefficient, if any is tracked.
  bool has_valuation() const { return !is_zero_at_depth(); }
  long valuation() const {
    for (size_t i = 0; i < c_.size(); ++i)
      if (!is_zero(c_[i])) return lo_ + static_cast<long>(i);
    throw std::domain_error("valuation of a zero-at-depth series");
  }

  Series truncated(long new_hi) const {
    Series s = *this;
    s.hi_ = std::min(s.hi_, clamp_hi(new_hi));
    if (s.lo_ > s.hi_) s.lo_ = s.hi_;
    long len = std::max(0L, s.hi_ - s.lo_);
    if (static_cast<long>(s.c_.size()) > len) s.c_.resize(static_cast<size_t>(len));
    s.trim();
    return s;
  }

  /// Multiply by the monomial z^{m/e}.
  Series shifted(long m) const {
    Series s = *this;
    s.lo_ += m;
    s.hi_ = clamp_hi(s.hi_ >= kHiInf ? kHiInf : s.hi_ + m);
    return s;
  }

  /// Reindex z^{1/e} as the k-th power of a finer variable: exponent
  /// numerators scale by k and the ramification index becomes e*k.
  Series inflated(int k) const {
    Series s;
    s.e_ = e_ * k;
    s.lo_ = lo_ * k;
    s.hi_ = clamp_hi(hi_ >= kHiInf ? kHiInf : hi_ * k);
    s.c_.assign(c_.size() ? static_cast<size_t>((c_.size() - 1) * k + 1) : 0, K{});
    for (size_t i = 0; i < c_.size(); ++i) s.c_[i * k] = c_[i];
    s.trim();
    return s;
  }

  friend Series operator+(const Series& a, const Series& b) {
    a.check_same_e(b);
    Series s;
    s.e_ = a.e_;
    s.hi_ = std::min(a.hi_, b.hi_);
    if (a.c_.empty() && b.c_.empty()) return zero(a.e_, s.hi_);
    long lo, top;
    if (a.c_.empty()) {
      lo = b.support_lo();
      top = b.support_end();
    } else if (b.c_.empty()) {
      lo = a.support_lo();
      top = a.support_end();
    } else {
      lo = std::min(a.support_lo(), b.support_lo());
      top = std::max(a.support_end(), b.support_end());
    }
    top = std::min(top, s.hi_);
    if (lo >= top) return zero(a.e_, s.hi_);
    s.lo_ = lo;
    s.c_.assign(static_cast<size_t>(top - lo), K{});
    for (long m = lo; m < top; ++m) s.c_[static_cast<size_t>(m - lo)] = a.coeff(m) + b.coeff(m);
    s.trim();
    return s;
  }

  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  Series operator-() const {
    Series s = *this;
    for (auto& c : s.c_) c = -c;
    return s;
  }

  friend Series operator*(const Series& a, const Series& b) {
    a.check_same_e(b);
    Series s;
    s.e_ = a.e_;
    s.hi_ = clamp_hi(std::min(add_clamped(a.support_lo(), b.hi_), add_clamped(b.support_lo(), a.hi_)));
    if (a.c_.empty() || b.c_.empty()) return zero(a.e_, s.hi_);
    long lo = a.support_lo() + b.support_lo();
    long top = std::min(add_clamped(a.support_end() - 1, b.support_end() - 1) + 1, s.hi_);
    if (lo >= top) return zero(a.e_, s.hi_);
    s.lo_ = lo;
    s.c_.assign(static_cast<size_t>(top - lo), K{});
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero(a.c_[i])) continue;
      long ma = a.lo_ + static_cast<long>(i);
      for (size_t j = 0; j < b.c_.size(); ++j) {
        long m = ma + b.lo_ + static_cast<long>(j);
        if (m >= top) break;
        if (is_zero(b.c_[j])) continue;
        s.c_[static_cast<size_t>(m - lo)] = s.c_[static_cast<size_t>(m - lo)] + a.c_[i] * b.c_[j];
      }
    }
    s.trim();
    return s;
  }

  Series scaled(const K& k) const {
    if (is_zero(k)) return zero(e_, hi_);
    Series s = *this;
    for (auto& c : s.c_) c = c * k;
    s.trim();
    return s;
  }

  Series scaled_rat(const Rat& q) const { return scaled(K(q)); }

  /// Multiplicative inverse to the maximal deducible depth.  Exact inputs
  /// with more than one term generally have infinite inverses; those get a
  /// finite window (support width plus slack) with an honest knowledge bound.
  Series inverse() const {
    if (is_zero_at_depth())
      throw std::domain_error("series not invertible at this depth");
    long v = valuation();
    K lead_inv = inv(coeff(v));
    if (is_exact() && support_end() - v == 1)
      return monomial(e_, -v, lead_inv);
    long h = is_exact() ? support_end() + kExactSlack : hi_;
    long out_hi = clamp_hi(h - 2 * v);
    long out_len = out_hi + v;  // exponents -v .. out_hi-1
    if (out_len <= 0) return zero(e_, out_hi);
    Series s;
    s.e_ = e_;
    s.lo_ = -v;
    s.hi_ = out_hi;
    s.c_.assign(static_cast<size_t>(out_len), K{});
    s.c_[0] = lead_inv;
    for (long i = 1; i < out_len; ++i) {
      K acc{};
      for (long k = 1; k <= i; ++k) {
        const K& ak = coeff(v + k);
        if (is_zero(ak)) continue;
        acc = acc + ak * s.c_[static_cast<size_t>(i - k)];
      }
      s.c_[static_cast<size_t>(i)] = -(lead_inv * acc);
    }
    s.trim();
    return s;
  }

  /// Integer power; negative exponents go through inverse().
  Series power(long k) const {
    if (k == 0) return constant(e_, K(Rat(1)));
    Series base = k > 0 ? *this : inverse();
    long n = k > 0 ? k : -k;
    Series acc = base;
    for (long i = 1; i < n; ++i) acc = acc * base;
    return acc;
  }

  /// d/du where u = z^{1/e} is the local sheet variable.
  Series derivative_u() const {
    Series s;
    s.e_ = e_;
    s.hi_ = clamp_hi(hi_ >= kHiInf ? kHiInf : hi_ - 1);
    if (c_.empty()) return zero(e_, s.hi_);
    s.lo_ = lo_ - 1;
    s.c_.assign(c_.size(), K{});
    for (size_t i = 0; i < c_.size(); ++i) {
      long m = lo_ + static_cast<long>(i);
      if (m == 0) continue;
      s.c_[i] = c_[i] * K(Rat(m));
    }
    s.trim();
    return s;
  }

  /// Substitute u -> subst(u); subst must have valuation exactly 1.
  Series composed(const Series& subst) const {
    check_same_e(subst);
    if (!subst.has_valuation() || subst.valuation() != 1)
      throw std::domain_error("substitution series must have valuation 1");
    long out_hi = std::min(hi_, subst.hi_);
    Series acc = zero(e_, out_hi);
    if (c_.empty()) return acc;
    // Powers of subst, from support_lo upward; negative powers via inverse.
    long m0 = support_lo();
    Series p = subst.power(m0);
    for (long m = m0; m < support_end(); ++m) {
      const K& cm = coeff(m);
      if (!is_zero(cm)) acc = acc + p.scaled(cm).truncated(out_hi);
      if (m + 1 < support_end()) p = p * subst;
    }
    return acc.truncated(out_hi);
  }

  /// Exact root-of-unity averaging: sum_{i=1..e} f(xi^i u) realized as an
  /// exponent filter.  Keeps exponents with e | m, multiplied by e, and
  /// reindexes to a genuine z-series (e' = 1).
  Series symmetrized() const {
    Series s;
    s.e_ = 1;
    s.hi_ = clamp_hi(hi_ >= kHiInf ? kHiInf : ceil_div(hi_, e_));
    long qlo = ceil_div(support_lo(), e_);
    long qtop = std::min<long>(ceil_div(support_end(), e_), s.hi_);
    if (qlo >= qtop) return zero(1, s.hi_);
    s.lo_ = qlo;
    s.c_.assign(static_cast<size_t>(qtop - qlo), K{});
    K mult = K(Rat(e_));
    for (long q = qlo; q < qtop; ++q)
      s.c_[static_cast<size_t>(q - qlo)] = coeff(q * e_) * mult;
    s.trim();
    return s;
  }

  /// Decompose under u -> xi^k u into exponent classes: part c holds the
  /// coefficients whose exponent numerator m satisfies m*k = c (mod e).
  std::vector<Series> root_class_parts(int k) const {
    if (k < 0 || k >= e_) throw std::domain_error("root class out of range");
    std::vector<Series> parts(static_cast<size_t>(e_), zero(e_, hi_));
    for (size_t i = 0; i < c_.size(); ++i) {
      if (is_zero(c_[i])) continue;
      long m = lo_ + static_cast<long>(i);
      long cls = ((m * k) % e_ + e_) % e_;
      parts[static_cast<size_t>(cls)] =
          parts[static_cast<size_t>(cls)] + monomial(e_, m, c_[i], hi_);
    }
    return parts;
  }

  /// Coefficient of z^{-1}, i.e. exponent numerator -e.  Rejects when the
  /// window cannot certify it.
  K residue_z() const {
    if (!certified(-e_))
      throw std::domain_error("window does not reach z^{-1}; residue uncertified");
    return coeff(-e_);
  }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.e_ != b.e_ || a.hi_ != b.hi_) return false;
    long lo = std::min(a.support_lo(), b.support_lo());
    for (long m = lo; m < a.hi_ && m < std::max(a.support_end(), b.support_end()); ++m)
      if (!(a.coeff(m) == b.coeff(m))) return false;
    return true;
  }

  long support_lo() const { return c_.empty() ? hi_ : lo_; }
  long support_end() const { return c_.empty() ? hi_ : lo_ + static_cast<long>(c_.size()); }

  std::string str(const std::string& var = "z") const {
    std::string out;
    for (long m = support_lo(); m < support_end(); ++m) {
      if (is_zero(coeff(m))) continue;
      if (!out.empty()) out += " + ";
      out += "(" + grw::to_string(coeff(m)) + ")*" + var + "^(" + std::to_string(m) + "/" +
             std::to_string(e_) + ")";
    }
    if (out.empty()) out = "0";
    if (hi_ < kHiInf)
      out += " + O(" + var + "^(" + std::to_string(hi_) + "/" + std::to_string(e_) + "))";
    return out;
  }

 private:
  static long add_clamped(long a, long b) {
    if (a >= kHiInf || b >= kHiInf) return kHiInf;
    return a + b;
  }

  void check_same_e(const Series& o) const {
    if (e_ != o.e_)
      throw std::invalid_argument("mismatched ramification index (" + std::to_string(e_) +
                                  " vs " + std::to_string(o.e_) + ")");
  }

  void trim() {
    size_t head = 0;
    while (head < c_.size() && is_zero(c_[head])) ++head;
    if (head) {
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(head));
      lo_ += static_cast<long>(head);
    }
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
    if (c_.empty()) lo_ = hi_;
  }

  int e_;
  long lo_;
  long hi_;
  std::vector<K> c_;
};

/// Square root of a series with rational square-root leading coefficient and
/// leading exponent divisible by two if nonzero.  n-th root analogously.
inline Series<Rat> nth_root_series(const Series<Rat>& a, long n) {
  if (a.is_zero_at_depth()) throw std::domain_error("root of zero-at-depth series");
  long v = a.valuation();
  if (v % n != 0)
    throw std::domain_error("leading exponent not divisible by root order");
  auto lead = nth_root(a.coeff(v), static_cast<unsigned long>(n));
  if (!lead)
    throw std::domain_error("leading coefficient " + to_string(a.coeff(v)) +
                            " has no rational " + std::to_string(n) + "-th root");
  // b' = b * a' / (n a); integrate with b(0) fixed by the chosen leading root.
  Series<Rat> unit = a.shifted(-v).scaled(inv(a.coeff(v)));  // 1 + ...
  long h = unit.is_exact() ? unit.support_end() + kExactSlack : unit.hi();
  long len = h;
  if (len < 1) len = 1;
  unit = unit.truncated(h);
  Series<Rat> c = unit.derivative_u() * unit.inverse();  // a'/a for the unit part
  std::vector<Rat> b(static_cast<size_t>(len));
  b[0] = Rat(1);
  for (long m = 1; m < len; ++m) {
    // m*b_m = (1/n) * coeff_{m-1}(b * c)
    Rat acc(0);
    for (long k = 0; k < m; ++k) {
      const Rat& ck = c.coeff(m - 1 - k);
      if (is_zero(ck) || is_zero(b[static_cast<size_t>(k)])) continue;
      acc += b[static_cast<size_t>(k)] * ck;
    }
    b[static_cast<size_t>(m)] = acc / (Rat(n) * Rat(m));
  }
  auto root = Series<Rat>::from_coeffs(a.e(), 0, std::move(b), h);
  return root.scaled(*lead).shifted(v / n);
}

inline Series<Rat> sqrt_unit(const Series<Rat>& a) { return nth_root_series(a, 2); }

}  // namespace grw

#endif

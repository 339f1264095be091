#ifndef GRW_TIMEPOLY_HPP
#define GRW_TIMEPOLY_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grw/rational.hpp"

namespace grw {

/// Knowledge bound for polynomials tracked to unbounded weighted degree.
inline constexpr long kDegInf = 1L << 30;

/// A time variable t^{(comp)}_idx with weight idx.  The group tag separates
/// independent alphabets (t vs t') in the bilinear-identity ring.
struct TimeVar {
  uint16_t group = 0;
  uint16_t comp = 0;
  uint32_t idx = 1;  // weight

  uint64_t key() const {
    return (static_cast<uint64_t>(group) << 48) | (static_cast<uint64_t>(comp) << 32) | idx;
  }
  static TimeVar from_key(uint64_t k) {
    TimeVar v;
    v.group = static_cast<uint16_t>(k >> 48);
    v.comp = static_cast<uint16_t>((k >> 32) & 0xffff);
    v.idx = static_cast<uint32_t>(k & 0xffffffff);
    return v;
  }
  friend bool operator==(const TimeVar&, const TimeVar&) = default;
};

/// Polynomial in time variables over Q, truncated by weighted total degree:
/// monomials of weight < deg() are tracked exactly, weight >= deg() unknown.
class TimePoly {
 public:
  // Monomial: sorted (variable key, exponent) pairs.
  using Mono = std::vector<std::pair<uint64_t, uint32_t>>;

  TimePoly() : deg_(kDegInf) {}
  TimePoly(const Rat& q) : deg_(kDegInf) {
    if (!grw::is_zero(q)) c_[Mono{}] = q;
  }
  TimePoly(long n) : TimePoly(Rat(n)) {}

  static TimePoly zero(long deg = kDegInf) {
    TimePoly p;
    p.deg_ = clamp(deg);
    return p;
  }

  static TimePoly variable(TimeVar v, long deg = kDegInf) {
    TimePoly p;
    p.deg_ = clamp(deg);
    if (v.idx < static_cast<uint64_t>(p.deg_)) p.c_[Mono{{v.key(), 1}}] = Rat(1);
    return p;
  }

  long deg() const { return deg_; }
  bool is_exact() const { return deg_ >= kDegInf; }

  static long weight(const Mono& m) {
    long w = 0;
    for (const auto& [k, e] : m) w += static_cast<long>(TimeVar::from_key(k).idx) * e;
    return w;
  }

  /// Minimal weight of a tracked monomial; deg() when none is tracked.
  long val() const {
    long v = deg_;
    for (const auto& [m, q] : c_) v = std::min(v, weight(m));
    return v;
  }

  const std::map<Mono, Rat>& monomials() const { return c_; }

  Rat coeff(const Mono& m) const {
    auto it = c_.find(m);
    return it == c_.end() ? Rat(0) : it->second;
  }

  Rat constant_term() const { return coeff(Mono{}); }

  bool tracked_zero() const { return c_.empty(); }

  TimePoly truncated(long d) const {
    TimePoly p;
    p.deg_ = std::min(deg_, clamp(d));
    for (const auto& [m, q] : c_)
      if (weight(m) < p.deg_) p.c_[m] = q;
    return p;
  }

  /// Sum of tracked monomials of exact weight w (must be certified: w < deg).
  TimePoly graded_part(long w) const {
    if (w >= deg_) throw std::domain_error("graded part beyond knowledge bound");
    TimePoly p;
    p.deg_ = deg_;
    for (const auto& [m, q] : c_)
      if (weight(m) == w) p.c_[m] = q;
    return p;
  }

  friend TimePoly operator+(const TimePoly& a, const TimePoly& b) {
    TimePoly p;
    p.deg_ = std::min(a.deg_, b.deg_);
    p.c_ = a.c_;
    for (const auto& [m, q] : b.c_) {
      auto [it, fresh] = p.c_.try_emplace(m, q);
      if (!fresh) {
        it->second += q;
        if (grw::is_zero(it->second)) p.c_.erase(it);
      }
    }
    p.drop_uncertified();
    return p;
  }

  friend TimePoly operator-(const TimePoly& a, const TimePoly& b) { return a + (-b); }

  TimePoly operator-() const {
    TimePoly p = *this;
    for (auto& [m, q] : p.c_) q = -q;
    return p;
  }

  friend TimePoly operator*(const TimePoly& a, const TimePoly& b) {
    TimePoly p;
    p.deg_ = clamp(std::min(add_clamped(a.deg_, b.val()), add_clamped(b.deg_, a.val())));
    for (const auto& [ma, qa] : a.c_) {
      long wa = weight(ma);
      for (const auto& [mb, qb] : b.c_) {
        if (wa + weight(mb) >= p.deg_) continue;
        Mono m = merge(ma, mb);
        auto [it, fresh] = p.c_.try_emplace(m, qa * qb);
        if (!fresh) {
          it->second += qa * qb;
          if (grw::is_zero(it->second)) p.c_.erase(it);
        }
      }
    }
    return p;
  }

  friend bool operator==(const TimePoly& a, const TimePoly& b) {
    return a.deg_ == b.deg_ && a.c_ == b.c_;
  }

  /// Same tracked coefficients on the common certified window.
  friend bool agree(const TimePoly& a, const TimePoly& b) {
    long d = std::min(a.deg_, b.deg_);
    return a.truncated(d).c_ == b.truncated(d).c_;
  }

  /// Multiplicative inverse: constant term must be a nonzero rational.  A
  /// non-constant exact polynomial has an infinite inverse and is rejected;
  /// truncate first.
  TimePoly inverse() const {
    Rat c0 = constant_term();
    if (grw::is_zero(c0)) throw std::domain_error("time polynomial is not a unit");
    if (c_.size() == 1 && c_.count(Mono{})) {
      TimePoly p;
      p.deg_ = deg_;
      p.c_[Mono{}] = inv(c0);
      return p;
    }
    if (is_exact())
      throw std::domain_error("inverse of exact non-constant time polynomial; truncate first");
    // 1/(c0(1+g)) with g of positive valuation: geometric series up to deg.
    TimePoly g = *this;
    g.c_.erase(Mono{});
    g = g * TimePoly(inv(c0));
    TimePoly acc(Rat(1));
    acc.deg_ = deg_;
    TimePoly pw(Rat(1));
    pw.deg_ = deg_;
    long gval = g.tracked_zero() ? deg_ : g.val();
    if (gval <= 0) throw std::logic_error("nonpositive valuation in inverse remainder");
    for (long k = gval; k < deg_; k += gval) {
      pw = pw * (-g);
      if (pw.tracked_zero()) break;
      acc = acc + pw;
    }
    return (acc * TimePoly(inv(c0))).truncated(deg_);
  }

  /// Substitute every variable by its image under f (e.g. t -> -t or a
  /// shift); images must be certified at least to this->deg().
  template <class F>
  TimePoly substituted(F&& f) const {
    TimePoly acc = zero(deg_);
    for (const auto& [m, q] : c_) {
      TimePoly term(q);
      term.deg_ = deg_;
      for (const auto& [k, e] : m) {
        TimePoly img = f(TimeVar::from_key(k));
        for (uint32_t i = 0; i < e; ++i) term = term * img;
      }
      acc = acc + term;
    }
    return acc;
  }

  /// t_i -> -t_i on every variable: each monomial scales by (-1)^(total exp).
  TimePoly negated_times() const {
    TimePoly p = *this;
    for (auto& [m, q] : p.c_) {
      long tot = 0;
      for (const auto& [k, e] : m) tot += e;
      if (tot % 2) q = -q;
    }
    return p;
  }

  std::string str() const {
    std::string out;
    for (const auto& [m, q] : c_) {
      if (!out.empty()) out += " + ";
      out += "(" + q.get_str() + ")";
      for (const auto& [k, e] : m) {
        TimeVar v = TimeVar::from_key(k);
        out += "*t";
        if (v.group) out += "'";
        out += "^{(" + std::to_string(v.comp) + ")}_" + std::to_string(v.idx);
        if (e > 1) out += "^" + std::to_string(e);
      }
    }
    if (out.empty()) out = "0";
    if (deg_ < kDegInf) out += " + O(weight " + std::to_string(deg_) + ")";
    return out;
  }

 private:
  static long clamp(long d) { return d >= kDegInf ? kDegInf : d; }
  static long add_clamped(long a, long b) {
    return (a >= kDegInf || b >= kDegInf) ? kDegInf : a + b;
  }

  static Mono merge(const Mono& a, const Mono& b) {
    Mono m;
    m.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].first < b[j].first)
        m.push_back(a[i++]);
      else if (b[j].first < a[i].first)
        m.push_back(b[j++]);
      else {
        m.emplace_back(a[i].first, a[i].second + b[j].second);
        ++i, ++j;
      }
    }
    while (i < a.size()) m.push_back(a[i++]);
    while (j < b.size()) m.push_back(b[j++]);
    return m;
  }

  void drop_uncertified() {
    if (deg_ >= kDegInf) return;
    for (auto it = c_.begin(); it != c_.end();)
      it = weight(it->first) >= deg_ ? c_.erase(it) : std::next(it);
  }

  std::map<Mono, Rat> c_;
  long deg_;
};

inline bool is_zero(const TimePoly& p) { return p.tracked_zero(); }
inline TimePoly inv(const TimePoly& p) { return p.inverse(); }
inline std::string to_string(const TimePoly& p) { return p.str(); }

}  // namespace grw

#endif

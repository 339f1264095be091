#ifndef GRW_RING_HPP
#define GRW_RING_HPP

#include <stdexcept>
#include <string>
#include <type_traits>

#include "grw/rational.hpp"

namespace grw {

// Coefficient rings used throughout: Rat, TimePoly, Dual<K>. Every ring K
// supports +, -, *, unary -, construction from Rat, is_zero, and inv for
// units. inv throws on non-units.

/// Dual numbers K[eps]/(eps^2); used for first-order deformation checks.
template <class K>
struct Dual {
  K a{};  // standard part
  K b{};  // eps part

  Dual() = default;
  Dual(const K& std_part) : a(std_part) {}
  template <class Q = Rat>
    requires(!std::is_same_v<K, Rat> && std::is_same_v<Q, Rat>)
  Dual(const Q& q) : a(K(q)) {}
  Dual(const K& std_part, const K& eps_part) : a(std_part), b(eps_part) {}

  static Dual eps() { return Dual(K(Rat(0)), K(Rat(1))); }

  friend Dual operator+(const Dual& x, const Dual& y) { return {x.a + y.a, x.b + y.b}; }
  friend Dual operator-(const Dual& x, const Dual& y) { return {x.a - y.a, x.b - y.b}; }
  friend Dual operator*(const Dual& x, const Dual& y) {
    return {x.a * y.a, x.a * y.b + x.b * y.a};
  }
  Dual operator-() const { return {-a, -b}; }
  friend bool operator==(const Dual& x, const Dual& y) { return x.a == y.a && x.b == y.b; }
};

template <class K>
inline bool is_zero(const Dual<K>& d) {
  return is_zero(d.a) && is_zero(d.b);
}

template <class K>
inline Dual<K> inv(const Dual<K>& d) {
  K ia = inv(d.a);  // throws on non-unit standard part
  return Dual<K>(ia, -(ia * d.b * ia));
}

template <class K>
inline std::string to_string(const Dual<K>& d) {
  return "(" + to_string(d.a) + ") + (" + to_string(d.b) + ")*eps";
}

using DualRat = Dual<Rat>;

}  // namespace grw

#endif

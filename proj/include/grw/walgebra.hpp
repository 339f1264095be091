#ifndef GRW_WALGEBRA_HPP
#define GRW_WALGEBRA_HPP

#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grw/series.hpp"

namespace grw {

/// Ramification data of a degree-n cover: one partition of n per branch.
/// Component keys (i,j) are ordered lexicographically; every matrix built in
/// later modules inherits this order.
struct RamificationData {
  int n = 1;
  std::vector<std::vector<int>> E;  // E[i] = {e_1^{(i)}, ..., e_{k_i}^{(i)}}

  RamificationData() : E{{1}} {}
  RamificationData(int degree, std::vector<std::vector<int>> parts)
      : n(degree), E(std::move(parts)) {
    if (E.empty()) throw std::invalid_argument("ramification data needs at least one branch");
    for (const auto& part : E) {
      int sum = 0;
      for (int e : part) {
        if (e < 1) throw std::invalid_argument("sheet index must be >= 1");
        sum += e;
      }
      if (sum != n)
        throw std::invalid_argument("branch partition sums to " + std::to_string(sum) +
                                    ", expected " + std::to_string(n));
    }
  }

  int r() const { return static_cast<int>(E.size()); }
  int k(int i) const { return static_cast<int>(E[static_cast<size_t>(i)].size()); }
  int rbar() const {
    int total = 0;
    for (const auto& part : E) total += static_cast<int>(part.size());
    return total;
  }
  int e_of(int i, int j) const { return E[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

  /// Flat index of component (i,j) in canonical order.
  int comp_index(int i, int j) const {
    int idx = 0;
    for (int b = 0; b < i; ++b) idx += k(b);
    return idx + j;
  }

  std::pair<int, int> comp_key(int flat) const {
    for (int i = 0; i < r(); ++i) {
      if (flat < k(i)) return {i, flat};
      flat -= k(i);
    }
    throw std::out_of_range("component index out of range");
  }

  int e_flat(int c) const {
    auto [i, j] = comp_key(c);
    return e_of(i, j);
  }

  friend bool operator==(const RamificationData&, const RamificationData&) = default;
};

/// Element of W = prod_{i,j} K((z_i^{1/e_j^{(i)}})): one fractional series per
/// component, in canonical component order.
template <class K>
struct WElement {
  RamificationData rd;
  std::vector<Series<K>> parts;  // parts[comp_index(i,j)]

  WElement() = default;
  explicit WElement(RamificationData data, long hi = kHiInf) : rd(std::move(data)) {
    parts.reserve(static_cast<size_t>(rd.rbar()));
    for (int c = 0; c < rd.rbar(); ++c)
      parts.push_back(Series<K>::zero(rd.e_flat(c), hi));
  }
  WElement(RamificationData data, std::vector<Series<K>> p)
      : rd(std::move(data)), parts(std::move(p)) {
    if (static_cast<int>(parts.size()) != rd.rbar())
      throw std::invalid_argument("component count mismatch");
    for (int c = 0; c < rd.rbar(); ++c)
      if (parts[static_cast<size_t>(c)].e() != rd.e_flat(c))
        throw std::invalid_argument("component ramification index mismatch");
  }

  static WElement one(const RamificationData& rd, long hi = kHiInf) {
    WElement w(rd);
    for (int c = 0; c < rd.rbar(); ++c)
      w.parts[static_cast<size_t>(c)] = Series<K>::constant(rd.e_flat(c), K(Rat(1)), hi);
    return w;
  }

  /// Monomial u^m supported on a single component, zero elsewhere (the other
  /// components are exact zeros).
  static WElement monomial(const RamificationData& rd, int comp, long m, K coeff = K(Rat(1)),
                           long hi = kHiInf) {
    WElement w(rd);
    w.parts[static_cast<size_t>(comp)] = Series<K>::monomial(rd.e_flat(comp), m, std::move(coeff), hi);
    return w;
  }

  const Series<K>& part(int i, int j) const {
    return parts[static_cast<size_t>(rd.comp_index(i, j))];
  }

  friend WElement operator+(const WElement& a, const WElement& b) {
    a.check_same(b);
    WElement w;
    w.rd = a.rd;
    for (size_t c = 0; c < a.parts.size(); ++c) w.parts.push_back(a.parts[c] + b.parts[c]);
    return w;
  }
  friend WElement operator-(const WElement& a, const WElement& b) { return a + (-b); }
  WElement operator-() const {
    WElement w;
    w.rd = rd;
    for (const auto& p : parts) w.parts.push_back(-p);
    return w;
  }
  friend WElement operator*(const WElement& a, const WElement& b) {
    a.check_same(b);
    WElement w;
    w.rd = a.rd;
    for (size_t c = 0; c < a.parts.size(); ++c) w.parts.push_back(a.parts[c] * b.parts[c]);
    return w;
  }

  WElement scaled(const K& k) const {
    WElement w;
    w.rd = rd;
    for (const auto& p : parts) w.parts.push_back(p.scaled(k));
    return w;
  }

  WElement inverse() const {
    WElement w;
    w.rd = rd;
    for (const auto& p : parts) w.parts.push_back(p.inverse());
    return w;
  }

  WElement truncated(long hi) const {
    WElement w;
    w.rd = rd;
    for (const auto& p : parts) w.parts.push_back(p.truncated(hi));
    return w;
  }

  bool is_zero_at_depth() const {
    for (const auto& p : parts)
      if (!p.is_zero_at_depth()) return false;
    return true;
  }

  friend bool operator==(const WElement& a, const WElement& b) {
    return a.rd == b.rd && a.parts == b.parts;
  }

  std::string str() const {
    std::string out;
    for (int c = 0; c < rd.rbar(); ++c) {
      auto [i, j] = rd.comp_key(c);
      out += "(" + std::to_string(i) + "," + std::to_string(j) + "): " +
             parts[static_cast<size_t>(c)].str() + "\n";
    }
    return out;
  }

 private:
  void check_same(const WElement& o) const {
    if (!(rd == o.rd)) throw std::invalid_argument("mismatched ramification data");
  }
};

/// Element of V = prod_i K((z_i)): one integral Laurent series per branch.
template <class K>
struct VElement {
  RamificationData rd;
  std::vector<Series<K>> branches;  // e = 1 each

  VElement() = default;
  explicit VElement(RamificationData data, long hi = kHiInf) : rd(std::move(data)) {
    for (int i = 0; i < rd.r(); ++i) branches.push_back(Series<K>::zero(1, hi));
  }
  VElement(RamificationData data, std::vector<Series<K>> b)
      : rd(std::move(data)), branches(std::move(b)) {
    if (static_cast<int>(branches.size()) != rd.r())
      throw std::invalid_argument("branch count mismatch");
    for (const auto& s : branches)
      if (s.e() != 1) throw std::invalid_argument("V branches must have e = 1");
  }

  static VElement one(const RamificationData& rd, long hi = kHiInf) {
    VElement v(rd);
    for (auto& s : v.branches) s = Series<K>::constant(1, K(Rat(1)), hi);
    return v;
  }

  friend VElement operator+(const VElement& a, const VElement& b) {
    VElement v;
    v.rd = a.rd;
    for (size_t i = 0; i < a.branches.size(); ++i) v.branches.push_back(a.branches[i] + b.branches[i]);
    return v;
  }
  friend VElement operator*(const VElement& a, const VElement& b) {
    VElement v;
    v.rd = a.rd;
    for (size_t i = 0; i < a.branches.size(); ++i) v.branches.push_back(a.branches[i] * b.branches[i]);
    return v;
  }
  VElement operator-() const {
    VElement v;
    v.rd = rd;
    for (const auto& s : branches) v.branches.push_back(-s);
    return v;
  }
  friend VElement operator-(const VElement& a, const VElement& b) { return a + (-b); }
  friend bool operator==(const VElement& a, const VElement& b) {
    return a.rd == b.rd && a.branches == b.branches;
  }
};

/// V -> W: on the (i,j) component, z_i becomes the e_j^{(i)}-th power of the
/// local fractional variable.
template <class K>
WElement<K> embed_v_in_w(const VElement<K>& v) {
  WElement<K> w;
  w.rd = v.rd;
  for (int c = 0; c < v.rd.rbar(); ++c) {
    auto [i, j] = v.rd.comp_key(c);
    w.parts.push_back(v.branches[static_cast<size_t>(i)].inflated(v.rd.e_of(i, j)));
  }
  return w;
}

/// Trace W -> V: on each sheet, tr(u^l) = e z^{l/e} when e | l, else 0.
/// Branch i sums its sheet traces.
template <class K>
VElement<K> trace(const WElement<K>& w) {
  VElement<K> v;
  v.rd = w.rd;
  for (int i = 0; i < w.rd.r(); ++i) {
    Series<K> acc = Series<K>::zero(1);
    for (int j = 0; j < w.rd.k(i); ++j) acc = acc + w.part(i, j).symmetrized();
    v.branches.push_back(acc);
  }
  return v;
}

/// Residue pairing T2(w1, w2) = sum_i res_{z_i=0} tr(w1 w2)_i.  Refuses to
/// answer when truncation cannot certify a z^{-1} coefficient.
template <class K>
K pair_T2(const WElement<K>& w1, const WElement<K>& w2) {
  VElement<K> t = trace(w1 * w2);
  K acc{};
  for (const auto& branch : t.branches) acc = acc + branch.residue_z();
  return acc;
}

}  // namespace grw

#endif

#ifndef GRW_GROUPS_HPP
#define GRW_GROUPS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grw/grassmannian.hpp"
#include "grw/walgebra.hpp"

namespace grw {

/// Do two series agree on every coefficient both windows certify?
template <class K>
bool series_agree(const Series<K>& a, const Series<K>& b) {
  if (a.e() != b.e()) return false;
  long top = std::min(a.hi(), b.hi());
  long lo = std::min(a.support_lo(), b.support_lo());
  for (long m = lo; m < top; ++m)
    if (!(a.coeff(m) == b.coeff(m))) return false;
  return true;
}

/// Unit test for a homothety coefficient: over a pure field, nonzero; over a
/// local ring (time polynomials, dual numbers) the constant/standard part must
/// be nonzero.
template <class K>
bool is_unit_coeff(const K& c) {
  if constexpr (requires { c.constant_term(); })
    return !is_zero(c.constant_term());
  else if constexpr (requires { c.a; c.b; })
    return is_unit_coeff(c.a);
  else
    return !is_zero(c);
}

/// Nilpotency test for negative-exponent homothety coefficients: over a pure
/// field only zero qualifies; over a local ring, vanishing constant part.
template <class K>
bool is_nilpotent_coeff(const K& c) {
  if constexpr (requires { c.constant_term(); })
    return is_zero(c.constant_term());
  else if constexpr (requires { c.a; c.b; })
    return is_nilpotent_coeff(c.a);
  else
    return is_zero(c);
}

/// Element of Gamma_W: an invertible homothety of W.  Every component must
/// have a unit constant term and nilpotent coefficients in negative exponents,
/// so that multiplication preserves the Grassmannian structure.
template <class K>
struct GammaW {
  WElement<K> value;

  explicit GammaW(WElement<K> w) : value(std::move(w)) {
    for (int c = 0; c < value.rd.rbar(); ++c) {
      const auto& p = value.parts[static_cast<size_t>(c)];
      if (!p.certified(0))
        throw std::domain_error("homothety component " + std::to_string(c) +
                                " does not certify its constant term");
      if (!is_unit_coeff(p.coeff(0)))
        throw std::domain_error("homothety component " + std::to_string(c) +
                                " has a non-unit constant term");
      for (long m = p.support_lo(); m < 0; ++m)
        if (!is_nilpotent_coeff(p.coeff(m)))
          throw std::domain_error("homothety component " + std::to_string(c) +
                                  " has a non-nilpotent coefficient at exponent " +
                                  std::to_string(m));
    }
  }
};

template <class K>
WElement<K> act_gamma(const GammaW<K>& g, const WElement<K>& w) {
  return g.value * w;
}

/// Element of G_V: a permutation of the branches together with one formal
/// reparametrization g_i(z) = z s_i(z) per branch, s_i a unit.
struct GVElement {
  RamificationData rd;
  std::vector<int> sigma;          // branch relabeling; sigma[i] = target branch
  std::vector<Series<Rat>> g;      // per branch, e = 1, valuation exactly 1

  GVElement(RamificationData data, std::vector<Series<Rat>> maps,
            std::vector<int> perm = {})
      : rd(std::move(data)), sigma(std::move(perm)), g(std::move(maps)) {
    if (static_cast<int>(g.size()) != rd.r())
      throw std::invalid_argument("one reparametrization per branch required");
    for (const auto& s : g) {
      if (s.e() != 1) throw std::invalid_argument("branch maps must be z-series");
      if (!s.has_valuation() || s.valuation() != 1)
        throw std::invalid_argument("branch maps must have valuation exactly 1");
    }
    if (sigma.empty()) {
      sigma.resize(static_cast<size_t>(rd.r()));
      for (int i = 0; i < rd.r(); ++i) sigma[static_cast<size_t>(i)] = i;
    }
    if (static_cast<int>(sigma.size()) != rd.r())
      throw std::invalid_argument("permutation size mismatch");
    std::vector<char> seen(static_cast<size_t>(rd.r()), 0);
    for (int i = 0; i < rd.r(); ++i) {
      int t = sigma[static_cast<size_t>(i)];
      if (t < 0 || t >= rd.r() || seen[static_cast<size_t>(t)])
        throw std::invalid_argument("sigma is not a permutation of the branches");
      seen[static_cast<size_t>(t)] = 1;
      if (t != i && rd.E[static_cast<size_t>(i)] != rd.E[static_cast<size_t>(t)])
        throw std::invalid_argument("sigma may only exchange branches with equal partitions");
    }
  }

  bool is_identity_permutation() const {
    for (int i = 0; i < rd.r(); ++i)
      if (sigma[static_cast<size_t>(i)] != i) return false;
    return true;
  }

  static GVElement identity(const RamificationData& rd, long hi = kHiInf) {
    std::vector<Series<Rat>> maps(static_cast<size_t>(rd.r()),
                                  Series<Rat>::monomial(1, 1, Rat(1), hi));
    return GVElement(rd, std::move(maps));
  }
};

/// Substitution action of G_V on V: branch i of the result reads off branch
/// sigma^{-1}(i) of the input reparametrized by its map.
inline VElement<Rat> apply_substitution_v(const GVElement& g, const VElement<Rat>& v) {
  if (!(g.rd == v.rd)) throw std::invalid_argument("mismatched ramification data");
  VElement<Rat> out(v.rd);
  for (int i = 0; i < v.rd.r(); ++i) {
    int t = g.sigma[static_cast<size_t>(i)];
    out.branches[static_cast<size_t>(t)] =
        v.branches[static_cast<size_t>(i)].composed(g.g[static_cast<size_t>(i)]);
  }
  return out;
}

/// Root-of-unity selector for lifting: one exponent class per component,
/// chosen in [0, e_c).  Empty means the principal class everywhere.
struct RootSelector {
  std::vector<int> cls;
};

/// Element of G_V^W: an identity-permutation G_V element together with its
/// sheet substitutions u -> ubar_c(u), each satisfying ubar^e = g_i(u^e)
/// exactly at depth.  The chosen root class per sheet is recorded.
struct GVWElement {
  RamificationData rd;
  std::vector<Series<Rat>> g;       // the underlying branch maps (e = 1)
  std::vector<Series<Rat>> ubar;    // per component, valuation 1
  std::vector<int> root_class;      // per component, exponent class chosen

  static GVWElement identity(const RamificationData& rd, long hi = kHiInf) {
    GVWElement out;
    out.rd = rd;
    out.g.assign(static_cast<size_t>(rd.r()), Series<Rat>::monomial(1, 1, Rat(1), hi));
    for (int c = 0; c < rd.rbar(); ++c) {
      out.ubar.push_back(Series<Rat>::monomial(rd.e_flat(c), 1, Rat(1), hi));
      out.root_class.push_back(0);
    }
    return out;
  }
};

/// Lift a (pure-reparametrization) G_V element to sheet substitutions.  The
/// e-th root of the unit part is extracted per sheet; a requested root class
/// is realized by the matching rational root of unity (only the classes 0 and
/// e/2 exist over the rationals; anything else is a mu_E obstruction).
inline GVWElement lift_automorphism(const GVElement& g, const RootSelector& sel = {}) {
  if (!g.is_identity_permutation())
    throw std::domain_error("only pure reparametrizations lift to sheet substitutions");
  GVWElement out;
  out.rd = g.rd;
  out.g = g.g;
  for (int c = 0; c < g.rd.rbar(); ++c) {
    auto [i, j] = g.rd.comp_key(c);
    int e = g.rd.e_of(i, j);
    int cls = 0;
    if (!sel.cls.empty()) {
      if (static_cast<int>(sel.cls.size()) != g.rd.rbar())
        throw std::invalid_argument("root selector must name every component");
      cls = sel.cls[static_cast<size_t>(c)];
      if (cls < 0 || cls >= e) throw std::domain_error("root class out of range");
    }
    Rat unit_root(1);
    if (cls != 0) {
      if (e % 2 != 0 || cls != e / 2)
        throw std::domain_error("mu_E obstruction: root class " + std::to_string(cls) +
                                " of order " + std::to_string(e) +
                                " is not rational on component " + std::to_string(c));
      unit_root = Rat(-1);
    }
    // s_i(u^e) as a sheet series, then its e-th root.
    Series<Rat> su = g.g[static_cast<size_t>(i)].shifted(-1).inflated(e);
    if (!nth_root(su.coeff(0), static_cast<unsigned long>(e)))
      throw std::domain_error("mu_E obstruction: leading coefficient " +
                              to_string(su.coeff(0)) + " has no rational " +
                              std::to_string(e) + "-th root on component " +
                              std::to_string(c));
    Series<Rat> rho = nth_root_series(su, e);
    Series<Rat> ub = rho.shifted(1).scaled(unit_root);
    // Defining identity, checked exactly at depth.
    Series<Rat> lhs = ub.power(e);
    Series<Rat> rhs = g.g[static_cast<size_t>(i)].inflated(e);
    if (!series_agree(lhs, rhs))
      throw std::logic_error("sheet substitution fails its defining identity");
    out.ubar.push_back(std::move(ub));
    out.root_class.push_back(cls);
  }
  return out;
}

/// Substitution action of G_V^W on W: u -> ubar_c(u) componentwise.
inline WElement<Rat> apply_substitution(const GVWElement& gbar, const WElement<Rat>& w) {
  if (!(gbar.rd == w.rd)) throw std::invalid_argument("mismatched ramification data");
  WElement<Rat> out;
  out.rd = w.rd;
  for (int c = 0; c < w.rd.rbar(); ++c)
    out.parts.push_back(w.parts[static_cast<size_t>(c)].composed(
        gbar.ubar[static_cast<size_t>(c)]));
  return out;
}

struct EquivarianceReport {
  bool pass = true;
  std::string detail;
};

/// Does the sheet substitution commute with the trace?  Checked on every
/// monomial u^l, |l| <= span, per component, comparing tr(gbar(u^l)) with the
/// base reparametrization applied to tr(u^l).
inline EquivarianceReport check_trace_equivariance(const GVWElement& gbar, long span = 8,
                                                   long hi = 48) {
  EquivarianceReport rep;
  GVElement base(gbar.rd, gbar.g);
  for (int c = 0; c < gbar.rd.rbar(); ++c) {
    for (long l = -span; l <= span; ++l) {
      auto mono = WElement<Rat>::monomial(gbar.rd, c, l, Rat(1), hi);
      VElement<Rat> lhs = trace(apply_substitution(gbar, mono));
      VElement<Rat> rhs = apply_substitution_v(base, trace(mono));
      for (int b = 0; b < gbar.rd.r(); ++b) {
        if (!series_agree(lhs.branches[static_cast<size_t>(b)],
                          rhs.branches[static_cast<size_t>(b)])) {
          rep.pass = false;
          rep.detail = "trace equivariance fails on component " + std::to_string(c) +
                       " at exponent " + std::to_string(l) + ", branch " +
                       std::to_string(b);
          return rep;
        }
      }
    }
  }
  return rep;
}

/// Element of Lie G_V^W: one vector field f_i(z) d/dz per branch, with the
/// induced sheet action D(u) = (1/e) u^{1-e} f_i(u^e).
struct DerivationW {
  RamificationData rd;
  std::vector<Series<Rat>> f;    // per branch, e = 1
  std::vector<Series<Rat>> du;   // per component
};

inline DerivationW lift_vector_field(const RamificationData& rd,
                                     std::vector<Series<Rat>> f) {
  if (static_cast<int>(f.size()) != rd.r())
    throw std::invalid_argument("one vector field per branch required");
  for (const auto& s : f)
    if (s.e() != 1) throw std::invalid_argument("vector fields are z-series");
  DerivationW d;
  d.rd = rd;
  d.f = std::move(f);
  for (int c = 0; c < rd.rbar(); ++c) {
    auto [i, j] = rd.comp_key(c);
    int e = rd.e_of(i, j);
    d.du.push_back(d.f[static_cast<size_t>(i)].inflated(e).shifted(1 - e).scaled_rat(
        rat(1, e)));
  }
  return d;
}

/// Apply a derivation to a W element via the chain rule D(a(u)) = a'(u) D(u).
inline WElement<Rat> apply_derivation(const DerivationW& d, const WElement<Rat>& w) {
  if (!(d.rd == w.rd)) throw std::invalid_argument("mismatched ramification data");
  WElement<Rat> out;
  out.rd = w.rd;
  for (int c = 0; c < w.rd.rbar(); ++c)
    out.parts.push_back(w.parts[static_cast<size_t>(c)].derivative_u() *
                        d.du[static_cast<size_t>(c)]);
  return out;
}

/// The same derivation acting downstairs on V, branch by branch.
inline VElement<Rat> apply_derivation_v(const DerivationW& d, const VElement<Rat>& v) {
  if (!(d.rd == v.rd)) throw std::invalid_argument("mismatched ramification data");
  VElement<Rat> out;
  out.rd = v.rd;
  for (int i = 0; i < v.rd.r(); ++i)
    out.branches.push_back(v.branches[static_cast<size_t>(i)].derivative_u() *
                           d.f[static_cast<size_t>(i)]);
  return out;
}

/// Lie bracket of vector fields, branch by branch: [f1 d, f2 d] = (f1 f2' - f2 f1') d.
inline DerivationW bracket(const DerivationW& a, const DerivationW& b) {
  if (!(a.rd == b.rd)) throw std::invalid_argument("mismatched ramification data");
  std::vector<Series<Rat>> f;
  for (int i = 0; i < a.rd.r(); ++i) {
    const auto& f1 = a.f[static_cast<size_t>(i)];
    const auto& f2 = b.f[static_cast<size_t>(i)];
    f.push_back(f1 * f2.derivative_u() - f2 * f1.derivative_u());
  }
  return lift_vector_field(a.rd, std::move(f));
}

/// Substitution action on a Grassmannian point: reparametrize every stored
/// row and re-echelonize.  Valuations are preserved (the substitutions have
/// valuation 1), so the window does not move.
inline GrassPoint<Rat> act_aut_point(const GVWElement& gbar, const GrassPoint<Rat>& pt) {
  std::vector<WElement<Rat>> rows;
  rows.reserve(pt.rows.size());
  for (const auto& row : pt.rows) rows.push_back(apply_substitution(gbar, row));
  return echelonize(pt.ord, pt.S, pt.tail, std::move(rows));
}

}  // namespace grw

#endif

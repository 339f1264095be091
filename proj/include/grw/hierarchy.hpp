#ifndef GRW_HIERARCHY_HPP
#define GRW_HIERARCHY_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "grw/tau_ba.hpp"

namespace grw {

/// Verdict of one residue identity, certified up to a joint weighted degree.
/// The identities are infinite families; the report records the finite prefix
/// that was actually decided (joint_weight) together with the flow truncation
/// D and the point depth S it was decided at.
struct ResidueReport {
  bool zero = true;
  int ab = 0, cd = 0;        // BA component indices of the two factors
  long D = 0;                // flow truncation degree
  long S = 0;                // point certification depth
  long joint_weight = 0;     // largest certified joint weighted degree
  TimePoly residue;          // the certified part of the residue form
  std::string witness;       // first nonzero monomial, when any
  Rat witness_coeff = Rat(0);
};

namespace detail {

inline TimePoly mono_poly(const TimePoly::Mono& mo, long deg) {
  TimePoly p = TimePoly(Rat(1)).truncated(deg);
  for (const auto& [key, ex] : mo) {
    TimePoly v = TimePoly::variable(TimeVar::from_key(key), deg);
    for (uint32_t r = 0; r < ex; ++r) p = p * v;
  }
  return p;
}

struct MonoPair {
  long w;
  TimePoly::Mono a;
  TimePoly::Mono b;
};

inline std::vector<MonoPair> weight_sorted_pairs(const std::set<TimePoly::Mono>& A,
                                                 const std::set<TimePoly::Mono>& B) {
  std::vector<MonoPair> ps;
  for (const auto& a : A)
    for (const auto& b : B)
      ps.push_back({TimePoly::weight(a) + TimePoly::weight(b), a, b});
  std::stable_sort(ps.begin(), ps.end(),
                   [](const MonoPair& x, const MonoPair& y) { return x.w < y.w; });
  return ps;
}

/// Accumulate certified residue terms pair-by-pair in increasing joint
/// weight; an uncertified pair caps the decided degree just below it.
template <class Term>
ResidueReport assemble(const std::set<TimePoly::Mono>& A,
                       const std::set<TimePoly::Mono>& B, long D, Term term) {
  ResidueReport rep;
  rep.D = D;
  long cap = 2 * D;
  long deg = 2 * D + 2;
  TimePoly acc = TimePoly::zero(deg);
  for (const auto& p : weight_sorted_pairs(A, B)) {
    if (p.w > cap) break;
    Rat r;
    if (!term(p.a, p.b, r)) {
      cap = p.w - 1;
      continue;
    }
    if (!is_zero(r))
      acc = acc + mono_poly(p.a, deg) * mono_poly(p.b, deg) * TimePoly(r);
  }
  if (cap < 0)
    throw std::domain_error("deepen window: residue uncertified at weight 0");
  rep.joint_weight = cap;
  rep.residue = acc.truncated(cap + 1);
  for (const auto& [mo, q] : rep.residue.monomials()) {
    if (is_zero(q)) continue;
    rep.zero = false;
    rep.witness = (mono_poly(mo, TimePoly::weight(mo) + 1) * TimePoly(q)).str();
    rep.witness_coeff = q;
    break;
  }
  return rep;
}

}  // namespace detail

/// One entry of the bilinear identity: the T2 pairing of z^{-1} psi_{ab,U}(t)
/// against z^{-1} psi*_{cd,U'}(t'), decided coefficientwise over the two
/// independent time rings (t = group 0, t' = group 1).
inline ResidueReport bilinear_residue_pair(const GrassPoint<Rat>& U,
                                           const GrassPoint<Rat>& Up, int ab, int cd,
                                           long D, long N = 0) {
  if (index_of(U) != index_of(Up))
    throw std::domain_error("bilinear identity needs points of equal index");
  auto psi = ba(U, ab, D, N, 0);
  auto psis = adjoint_ba(Up, cd, D, N, 1);
  auto rep = detail::assemble(
      ba_monomials(psi), ba_monomials(psis), D,
      [&](const TimePoly::Mono& a, const TimePoly::Mono& b, Rat& r) {
        auto ca = ba_coefficient(psi, a);
        auto cb = ba_coefficient(psis, b);
        try {
          r = pair_T2(ca, cb);
        } catch (const std::domain_error&) {
          return false;
        }
        return true;
      });
  rep.ab = ab;
  rep.cd = cd;
  rep.S = std::min(U.S, Up.S);
  return rep;
}

struct BilinearReport {
  bool zero = true;
  long D = 0, S = 0;
  std::vector<ResidueReport> table;  // canonical (ab, cd) order
};

/// The bilinear identity over all BA index pairs.
inline BilinearReport bilinear_residue(const GrassPoint<Rat>& U,
                                       const GrassPoint<Rat>& Up, long D, long N = 0) {
  BilinearReport rep;
  rep.D = D;
  rep.S = std::min(U.S, Up.S);
  for (int ab = 0; ab < U.rd().rbar(); ++ab)
    for (int cd = 0; cd < Up.rd().rbar(); ++cd) {
      rep.table.push_back(bilinear_residue_pair(U, Up, ab, cd, D, N));
      rep.zero = rep.zero && rep.table.back().zero;
    }
  return rep;
}

/// The ramification-condition residue form for one (a,b), (c,d) pair: both
/// factors are assembled by dividing component (l,j) by a power of its sheet
/// variable, averaging over the e-th roots of unity (the exact exponent
/// filter), summing the sheets of each branch, and taking the residue of
/// (factor1 * factor2) dz/z per branch.
///
/// Two readings are exposed.  The default follows the printed shape of the
/// identity: both factors use psi of B at the same times, with sheet-variable
/// powers delta_{al}delta_{bj} - u_{l,j} and u_{l,j} - 1 + delta_{cl}delta_{dj}
/// built from the exponents u_{l,j} of the charge-normalizing homothety.
/// adjoint_variant substitutes the adjoint BA function in the second factor
/// and uses the powers 0 and -e_j^{(l)}: then each factor is the trace of a
/// certified element of U resp. U-perp and the residue computes the induced
/// pairing on V, so vanishing for all (a,b), (c,d) decides the
/// trace-stability characterization of Hurwitz points.
inline ResidueReport ekp_residue(const GrassPoint<Rat>& B, int ab, int cd, long D,
                                 bool adjoint_variant = false, long N = 0) {
  const RamificationData& rd = B.rd();
  auto dress_vec = [](const GrassPoint<Rat>& P) {
    auto v = charge_normalizer(P);
    std::vector<long> k;
    for (const auto& part : v.parts) k.push_back(part.valuation());
    return k;
  };
  auto u = dress_vec(B);
  std::vector<long> p1(u.size()), p2(u.size());
  std::vector<long> u2 = adjoint_variant ? dress_vec(perp(B)) : u;
  long head = 0;
  for (int c = 0; c < rd.rbar(); ++c) {
    size_t f = static_cast<size_t>(c);
    if (adjoint_variant) {
      p1[f] = 0;
      p2[f] = -rd.e_flat(c);
    } else {
      p1[f] = (c == ab ? 1 : 0) - u[f];
      p2[f] = u[f] - 1 + (c == cd ? 1 : 0);
    }
    // degree headroom so the residue slot stays inside the certified
    // coefficient windows after the sheet-variable shifts and the dressing
    head = std::max({head, p1[f] - u[f] + 1, p2[f] - u2[f] + 1});
  }
  auto psi1 = ba(B, ab, D + head, N, 0);
  auto psi2 = adjoint_variant ? adjoint_ba(B, cd, D + head, N, 0)
                              : ba(B, cd, D + head, N, 0);
  auto rep = detail::assemble(
      ba_monomials(psi1), ba_monomials(psi2), D,
      [&](const TimePoly::Mono& a, const TimePoly::Mono& b, Rat& r) {
        auto ca = ba_coefficient(psi1, a);
        auto cb = ba_coefficient(psi2, b);
        r = Rat(0);
        for (int l = 0; l < rd.r(); ++l) {
          auto F1 = Series<Rat>::zero(1);
          auto F2 = Series<Rat>::zero(1);
          for (int j = 0; j < rd.k(l); ++j) {
            size_t f = static_cast<size_t>(rd.comp_index(l, j));
            F1 = F1 + ca.parts[f].shifted(-p1[f]).symmetrized();
            F2 = F2 + cb.parts[f].shifted(-p2[f]).symmetrized();
          }
          auto prod = F1 * F2;
          if (!prod.certified(0)) return false;
          r += prod.coeff(0);
        }
        return true;
      });
  rep.ab = ab;
  rep.cd = cd;
  rep.S = B.S;
  return rep;
}

struct EkpReport {
  bool zero = true;
  long D = 0, S = 0;
  std::vector<ResidueReport> table;
};

/// The full ramification-condition family over all index pairs.
inline EkpReport ekp_residue_all(const GrassPoint<Rat>& B, long D,
                                 bool adjoint_variant = false, long N = 0) {
  EkpReport rep;
  rep.D = D;
  rep.S = B.S;
  for (int ab = 0; ab < B.rd().rbar(); ++ab)
    for (int cd = 0; cd < B.rd().rbar(); ++cd) {
      rep.table.push_back(ekp_residue(B, ab, cd, D, adjoint_variant, N));
      rep.zero = rep.zero && rep.table.back().zero;
    }
  return rep;
}

}  // namespace grw

#endif

#ifndef GRW_TAU_BA_HPP
#define GRW_TAU_BA_HPP

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grw/grassmannian.hpp"
#include "grw/timepoly.hpp"
#include "grw/walgebra.hpp"

namespace grw {

inline TimeVar time_var(int group, int comp, long idx) {
  return TimeVar{static_cast<uint16_t>(group), static_cast<uint16_t>(comp),
                 static_cast<uint32_t>(idx)};
}

/// Lift exact rational series/elements into the time-polynomial ring.
inline Series<TimePoly> to_time(const Series<Rat>& s) {
  std::vector<TimePoly> c;
  for (long m = s.support_lo(); m < s.support_end(); ++m) c.emplace_back(s.coeff(m));
  return Series<TimePoly>::from_coeffs(s.e(), s.support_lo(), std::move(c), s.hi());
}

inline WElement<TimePoly> to_time(const WElement<Rat>& w) {
  WElement<TimePoly> out;
  out.rd = w.rd;
  for (const auto& p : w.parts) out.parts.push_back(to_time(p));
  return out;
}

template <class K>
long cert_slot_of(const SlotOrdering& ord, const WElement<K>& w) {
  long c = kHiInf;
  for (int comp = 0; comp < ord.rd.rbar(); ++comp) {
    long hi = w.parts[static_cast<size_t>(comp)].hi();
    if (hi >= kHiInf) continue;
    c = std::min(c, ord.slot_of(comp, hi));
  }
  return c;
}

/// exp(sign * sum_{i=1..D} t^{(group,comp)}_i u^{-i}) at weighted degree <= D.
/// Finite by the weight bound; pole depth <= D.
inline Series<TimePoly> exp_times_series(const RamificationData& rd, int comp, long D,
                                         int sign, int group = 0) {
  int e = rd.e_flat(comp);
  auto acc = Series<TimePoly>::constant(e, TimePoly(Rat(1)));
  for (long i = 1; i <= D; ++i) {
    TimePoly t = TimePoly::variable(time_var(group, comp, i), D + 1) *
                 TimePoly(Rat(sign));
    auto term = Series<TimePoly>::constant(e, TimePoly(Rat(1)));
    TimePoly pw(Rat(1));
    Rat fact(1);
    for (long k = 1; k * i <= D; ++k) {
      pw = pw * t;
      fact *= Rat(k);
      term = term + Series<TimePoly>::monomial(e, -i * k, pw * TimePoly(inv(fact)));
    }
    acc = acc * term;
  }
  // Reduce coefficients into the working quotient ring; the series is exact
  // there (weight > D coefficients vanish, positive exponents are zero).
  std::vector<TimePoly> c;
  for (long m = acc.support_lo(); m < acc.support_end(); ++m)
    c.push_back(acc.coeff(m).truncated(D + 1));
  return Series<TimePoly>::from_coeffs(e, acc.support_lo(), std::move(c), kHiInf);
}

/// Product of two flow series.  A flow series has its u-exponent coupled to
/// time-weight: the coefficient of u^k is certified below weight D+1-max(k,0)
/// and exponents above D are unknown.  Any contribution omitted by either
/// factor's bound lands at weight >= D+1-max(k,0) in the product, so the
/// convolution of tracked coefficients is exact in that same shape — a
/// sharper bound than generic series multiplication can certify.
inline Series<TimePoly> flow_mul(const Series<TimePoly>& a, const Series<TimePoly>& b,
                                 long D) {
  long deg0 = D + 1;
  int e = a.e();
  if (a.support_lo() >= a.support_end() || b.support_lo() >= b.support_end())
    return Series<TimePoly>::zero(e, deg0);
  long lo = a.support_lo() + b.support_lo();
  if (lo > D) return Series<TimePoly>::zero(e, deg0);
  std::vector<TimePoly> c(static_cast<size_t>(D + 1 - lo), TimePoly::zero(deg0));
  for (long i = a.support_lo(); i < a.support_end(); ++i) {
    if (is_zero(a.coeff(i))) continue;
    for (long j = b.support_lo(); j < b.support_end(); ++j) {
      long m = i + j;
      if (m > D) break;
      if (is_zero(b.coeff(j))) continue;
      c[static_cast<size_t>(m - lo)] =
          c[static_cast<size_t>(m - lo)] + a.coeff(i) * b.coeff(j);
    }
  }
  for (long m = lo; m <= D; ++m)
    c[static_cast<size_t>(m - lo)] =
        c[static_cast<size_t>(m - lo)].truncated(deg0 - std::max(0L, m));
  return Series<TimePoly>::from_coeffs(e, lo, std::move(c), deg0);
}

/// The universal Gamma_W element of the flows: componentwise exponential of
/// the time series.  Negative-exponent coefficients all have zero constant
/// term, so this is a valid homothety over the truncated time ring.
inline WElement<TimePoly> times_gamma(const RamificationData& rd, long D, int group = 0) {
  WElement<TimePoly> g;
  g.rd = rd;
  for (int c = 0; c < rd.rbar(); ++c)
    g.parts.push_back(exp_times_series(rd, c, D, +1, group));
  return g;
}

/// Division-free determinant (Berkowitz): used when Gaussian elimination
/// cannot find a unit pivot (matrices off the big cell).
inline TimePoly det_berkowitz(const std::vector<std::vector<TimePoly>>& A) {
  size_t n = A.size();
  if (n == 0) return TimePoly(Rat(1));
  std::vector<TimePoly> p{TimePoly(Rat(1)), -A[0][0]};
  for (size_t r = 2; r <= n; ++r) {
    // Toeplitz column entries: 1, -a, -(R M^k C) for the r-th leading block.
    std::vector<TimePoly> col(r + 1);
    col[0] = TimePoly(Rat(1));
    col[1] = -A[r - 1][r - 1];
    std::vector<TimePoly> v(r - 1);
    for (size_t j = 0; j < r - 1; ++j) v[j] = A[j][r - 1];  // C
    for (size_t k = 2; k <= r; ++k) {
      TimePoly dot = TimePoly::zero();
      for (size_t j = 0; j < r - 1; ++j) dot = dot + A[r - 1][j] * v[j];
      col[k] = -dot;
      if (k < r) {
        std::vector<TimePoly> nv(r - 1, TimePoly::zero());
        for (size_t i = 0; i < r - 1; ++i)
          for (size_t j = 0; j < r - 1; ++j) nv[i] = nv[i] + A[i][j] * v[j];
        v = std::move(nv);
      }
    }
    std::vector<TimePoly> np(r + 1, TimePoly::zero());
    for (size_t i = 0; i <= r; ++i)
      for (size_t j = 0; j < p.size() && j <= i; ++j)
        np[i] = np[i] + col[i - j] * p[j];
    p = std::move(np);
  }
  TimePoly det = p[n];
  if (n % 2) det = -det;
  return det;
}

/// Determinant over the truncated time ring: Gaussian elimination on unit
/// pivots, falling back to the division-free algorithm when none remains.
inline TimePoly det_time(std::vector<std::vector<TimePoly>> M) {
  size_t n = M.size();
  TimePoly det(Rat(1));
  for (size_t col = 0; col < n; ++col) {
    size_t piv = n;
    for (size_t r = col; r < n; ++r)
      if (!is_zero(M[r][col].constant_term())) {
        piv = r;
        break;
      }
    if (piv == n) {
      std::vector<std::vector<TimePoly>> rest;
      for (size_t r = col; r < n; ++r)
        rest.emplace_back(M[r].begin() + static_cast<long>(col), M[r].end());
      return det * det_berkowitz(rest);
    }
    if (piv != col) {
      std::swap(M[piv], M[col]);
      det = -det;
    }
    det = det * M[col][col];
    TimePoly pi = inv(M[col][col]);
    for (size_t r = col + 1; r < n; ++r) {
      if (M[r][col].tracked_zero()) continue;
      TimePoly f = M[r][col] * pi;
      for (size_t c = col; c < n; ++c) M[r][c] = M[r][c] - f * M[col][c];
    }
  }
  return det;
}

/// Window size making the windowed determinant exact at weighted degree D:
/// the largest downward slot displacement the degree-D flows can cause, plus
/// a safety margin (verified independently by the N vs N+5 stability tests).
inline long tau_window(const SlotOrdering& ord, long D, long margin = 8) {
  long disp = 0;
  for (int c = 0; c < ord.rd.rbar(); ++c)
    for (int mf = 0; mf < ord.rd.e_flat(c); ++mf)
      disp = std::max(disp, ord.slot_of(c, mf) - ord.slot_of(c, mf - D));
  return disp + margin;
}

struct TauResult {
  TimePoly raw;       // windowed determinant in the canonical echelon basis
  TimePoly value;     // raw normalized by its constant term when possible
  Rat tau0 = Rat(0);  // constant term of raw
  bool normalized = false;
  long N = 0;
};

/// The componentwise homothety whose inverse maps pt to a point of charge
/// zero.  The per-component windowed index moves by +budget on pole-complete
/// points (a new lead enters the window from the tail) and by -budget
/// otherwise, so the exponents are the charge vector up to the tail sign.
inline WElement<Rat> charge_normalizer(const GrassPoint<Rat>& pt) {
  auto k = charge_of(pt);
  if (pt.tail != Tail::LeadingBelow)
    for (auto& x : k) x = -x;
  return charge_shift_element<Rat>(pt.rd(), k);
}

/// tau of a point: reduce nonzero index to charge zero by a componentwise
/// monomial homothety, then take the finite windowed determinant of the time
/// flow against the point's vacuum column window ([-N, 0) for pole-complete
/// points, [0, N) otherwise), rows being the echelon rows with leading slot
/// in [-N, N).  Index-zero points (including mixed-charge ones, which encode
/// the off-diagonal tau functions) are used as they stand.
inline TauResult tau(const GrassPoint<Rat>& pt, long D, long N = 0, int group = 0);

/// Windowed flow determinant of a charge-reduced (index zero) point against
/// a charge-shifted vacuum column window: component c keeps its vacuum
/// columns with exponent < q_c (pole-complete points) or >= q_c (otherwise).
/// The offsets must sum to zero.  All charge sectors share the same rows in
/// the same order, so their determinants carry a coherent relative
/// normalization — in particular relative signs between sectors are
/// meaningful, which per-sector echelon bases would not preserve.
inline TauResult tau_charged(const GrassPoint<Rat>& base, long D, long N, int group,
                             const std::vector<long>& q) {
  if (N == 0) N = tau_window(base.ord, D);
  if (index_of(base) != 0)
    throw std::domain_error("charged tau needs an index-zero reduction");
  if (base.S < N)
    throw std::domain_error("deepen window: tau needs certified depth " +
                            std::to_string(N) + ", have " + std::to_string(base.S));
  bool below = base.tail == Tail::LeadingBelow;
  int rn = base.ord.rn();
  std::vector<long> cols;
  for (long s = -N - rn; s < N + rn; ++s) {
    auto [c, mm] = base.ord.slot_key(s);
    long qc = q[static_cast<size_t>(c)];
    long m = mm;
    bool in = below ? (s >= -N && m < qc) : (s < N && m >= qc);
    if (in) cols.push_back(s);
  }
  long col_hi = cols.empty() ? 0 : cols.back() + 1;
  auto g = times_gamma(base.rd(), D, group);
  std::vector<std::vector<TimePoly>> M;
  for (size_t i = 0; i < base.rows.size(); ++i) {
    long lead = base.leads[i];
    if (lead < -N || lead >= N) continue;
    auto gb = g * to_time(base.rows[i]);
    if (cert_slot_of(base.ord, gb) < col_hi)
      throw std::domain_error("deepen window: row certification too shallow for tau");
    std::vector<TimePoly> row;
    row.reserve(cols.size());
    for (long s : cols) row.push_back(GrassPoint<TimePoly>::coeff_at(base.ord, gb, s));
    M.push_back(std::move(row));
  }
  if (M.size() != cols.size())
    throw std::domain_error("deepen window: squareness failure (gap bound), have " +
                            std::to_string(M.size()) + " rows for " +
                            std::to_string(cols.size()) + " columns");
  TauResult res;
  res.N = N;
  res.raw = det_time(std::move(M)).truncated(D + 1);
  res.tau0 = res.raw.constant_term();
  if (!is_zero(res.tau0)) {
    res.normalized = true;
    res.value = res.raw * TimePoly(inv(res.tau0));
  } else {
    res.value = res.raw;
  }
  return res;
}

inline TauResult tau(const GrassPoint<Rat>& pt, long D, long N, int group) {
  long m = index_of(pt);
  GrassPoint<Rat> base =
      (m == 0) ? pt : act_gamma_point(charge_normalizer(pt).inverse(), pt);
  if (index_of(base) != 0)
    throw std::logic_error("index normalization failed");
  return tau_charged(base, D, N, group,
                     std::vector<long>(static_cast<size_t>(pt.rd().rbar()), 0));
}

inline Rat rat_pow(const Rat& q, long k) {
  Rat acc(1);
  for (long i = 0; i < k; ++i) acc *= q;
  return acc;
}

/// Substitute t^{(group,comp)}_i -> t_i + sign * u^i / i into a (finitely
/// truncated) time polynomial; the result is a u-polynomial of degree <= D
/// whose u^k coefficient is certified to weight deg - k.
inline Series<TimePoly> shift_times(const TimePoly& p, int group, int comp, int e,
                                    int sign) {
  long deg = p.deg();
  if (deg >= kDegInf)
    throw std::domain_error("shift of an untruncated time polynomial");
  long D = deg - 1;
  std::vector<TimePoly> out(static_cast<size_t>(D + 1), TimePoly::zero(deg));
  for (const auto& [mono, q] : p.monomials()) {
    std::vector<TimePoly> cur{TimePoly(q)};
    for (const auto& [key, ex] : mono) {
      TimeVar v = TimeVar::from_key(key);
      TimePoly tv = TimePoly::variable(v, deg);
      if (v.group == group && v.comp == comp) {
        long i = v.idx;
        std::vector<TimePoly> next(
            std::min<size_t>(cur.size() + static_cast<size_t>(i * ex),
                             static_cast<size_t>(D + 1)),
            TimePoly::zero(deg));
        for (size_t a = 0; a < cur.size(); ++a) {
          if (cur[a].tracked_zero()) continue;
          Rat binom(1);
          for (long j = 0; j <= static_cast<long>(ex); ++j) {
            long ue = static_cast<long>(a) + i * j;
            if (ue <= D) {
              TimePoly fac =
                  cur[a] * TimePoly(binom * rat_pow(Rat(sign) / Rat(i), j));
              for (long rep = 0; rep < static_cast<long>(ex) - j; ++rep)
                fac = fac * tv;
              next[static_cast<size_t>(ue)] = next[static_cast<size_t>(ue)] + fac;
            }
            binom = binom * Rat(static_cast<long>(ex) - j) / Rat(j + 1);
          }
        }
        cur = std::move(next);
      } else {
        for (auto& c : cur)
          for (uint32_t rep = 0; rep < ex; ++rep) c = c * tv;
      }
    }
    for (size_t a = 0; a < cur.size(); ++a)
      out[a] = out[a] + cur[a];
  }
  std::vector<TimePoly> coeffs;
  coeffs.reserve(out.size());
  for (size_t k = 0; k < out.size(); ++k)
    coeffs.push_back(out[k].truncated(deg - static_cast<long>(k)));
  return Series<TimePoly>::from_coeffs(e, 0, std::move(coeffs), D + 1);
}

/// Map a time-ring series coefficientwise through t -> -t.
inline Series<TimePoly> negate_times(const Series<TimePoly>& s) {
  std::vector<TimePoly> c;
  for (long m = s.support_lo(); m < s.support_end(); ++m)
    c.push_back(s.coeff(m).negated_times());
  return Series<TimePoly>::from_coeffs(s.e(), s.support_lo(), std::move(c), s.hi());
}

/// The monomial homothety relating U to U^{c,d}_{a,b}: component ab gains a
/// factor u, component cd a factor u^{-1} (identity when they coincide).
inline WElement<Rat> ba_shift_gamma(const RamificationData& rd, int ab, int cd) {
  auto w = WElement<Rat>::one(rd);
  if (ab == cd) return w;
  w.parts[static_cast<size_t>(ab)] = Series<Rat>::monomial(rd.e_flat(ab), 1, Rat(1));
  w.parts[static_cast<size_t>(cd)] = Series<Rat>::monomial(rd.e_flat(cd), -1, Rat(1));
  return w;
}

/// Baker-Akhiezer function of a point for the indices ab (flat component):
/// on the charge-zero reduction of the point, per component cd,
/// exp(-sum t^{(cd)}_i u^{-i}) tau_{U^{cd}_{ab}}(t+[u]) / tau_U(t), with an
/// extra factor u^{-1} on the diagonal component (cd == ab); the off-diagonal
/// taus are the mixed-charge sector determinants of the same reduction, taken
/// in one coherent frame so their relative signs are meaningful.  The stored
/// comps live on the reduction; dress[c] records the monomial exponent that
/// carries them back to the point (applied by ba_coefficient).
struct BAFunction {
  RamificationData rd;
  int ab = 0;
  long D = 0;
  int group = 0;
  std::vector<Series<TimePoly>> comps;
  std::vector<long> dress;  // per-component charge normalizer exponents
  Rat tau0 = Rat(0);        // denominator constant, for big-cell bookkeeping
};

inline BAFunction ba(const GrassPoint<Rat>& pt, int ab, long D, long N = 0,
                     int group = 0) {
  BAFunction out;
  out.rd = pt.rd();
  out.ab = ab;
  out.D = D;
  out.group = group;
  auto v = charge_normalizer(pt);
  bool trivial = true;
  for (int c = 0; c < pt.rd().rbar(); ++c) {
    long kc = v.parts[static_cast<size_t>(c)].valuation();
    out.dress.push_back(kc);
    trivial = trivial && kc == 0;
  }
  GrassPoint<Rat> base = trivial ? pt : act_gamma_point(v.inverse(), pt);
  std::vector<long> q0(static_cast<size_t>(pt.rd().rbar()), 0);
  auto den = tau_charged(base, D, N, group, q0);
  if (is_zero(den.tau0)) throw std::domain_error("off big cell: tau_U(0) = 0");
  out.tau0 = den.tau0;
  TimePoly den_inv = inv(den.raw);
  for (int cd = 0; cd < pt.rd().rbar(); ++cd) {
    auto q = q0;
    if (cd != ab) {
      q[static_cast<size_t>(cd)] += 1;
      q[static_cast<size_t>(ab)] -= 1;
    }
    auto num = tau_charged(base, D, N, group, q);
    auto numz = shift_times(num.raw, group, cd, pt.rd().e_flat(cd), +1);
    auto pre = exp_times_series(pt.rd(), cd, D, -1, group);
    auto comp = flow_mul(pre, numz, D).scaled(den_inv);
    if (cd == ab) {
      comp = comp.shifted(-1);
    } else {
      // Orientation of the charge-shifted column frame: the sector swaps the
      // vacuum column at slot (ab, -1) for the one at slot (cd, 0), and the
      // determinant picks up one transposition per charge-zero column
      // strictly between them.
      long rm = base.ord.slot_of(ab, -1);
      long in = base.ord.slot_of(cd, 0);
      long between = 0;
      for (long s = std::min(rm, in) + 1; s < std::max(rm, in); ++s) {
        long m = base.ord.slot_key(s).second;
        if (base.tail == Tail::LeadingBelow ? m < 0 : m >= 0) ++between;
      }
      if (between % 2 != 0) comp = comp.scaled(TimePoly(Rat(-1)));
    }
    out.comps.push_back(std::move(comp));
  }
  return out;
}

/// Adjoint Baker-Akhiezer function: the BA function of the orthogonal
/// complement with all times negated.
inline BAFunction adjoint_ba(const GrassPoint<Rat>& pt, int ab, long D, long N = 0,
                             int group = 0) {
  auto out = ba(perp(pt), ab, D, N, group);
  for (auto& s : out.comps) s = negate_times(s);
  return out;
}

/// Extract the exact coefficient of a time monomial from a BA function, as a
/// W-element with an honest certification window, dressed back onto the
/// point.  The coefficient of u^k of a flow quantity is certified below
/// weight D+1-max(k,0), and the u^{-m} coefficient carries weight at least m
/// (each u^{-i} enters with a weight-i time), so a weight-w monomial's
/// coefficient is supported in [-w, D+1-w) on the reduction; off-diagonal
/// components shift both bounds by their u^{-1} prefactor.
inline WElement<Rat> ba_coefficient(const BAFunction& psi, const TimePoly::Mono& mo) {
  long wt = TimePoly::weight(mo);
  WElement<Rat> out;
  out.rd = psi.rd;
  for (int cd = 0; cd < psi.rd.rbar(); ++cd) {
    const auto& s = psi.comps[static_cast<size_t>(cd)];
    long off = (cd == psi.ab) ? -1 : 0;
    long lo = std::max(s.support_lo(), -wt + off);
    long hi = std::min(s.hi(), psi.D + 1 - wt + off);
    std::vector<Rat> c;
    for (long k = lo; k < s.support_end(); ++k) c.push_back(s.coeff(k).coeff(mo));
    out.parts.push_back(
        Series<Rat>::from_coeffs(psi.rd.e_flat(cd), lo, std::move(c), s.hi())
            .truncated(hi)
            .shifted(psi.dress[static_cast<size_t>(cd)]));
  }
  return out;
}

/// All time monomials appearing in any component of a BA function.
inline std::set<TimePoly::Mono> ba_monomials(const BAFunction& psi) {
  std::set<TimePoly::Mono> monos;
  for (const auto& s : psi.comps)
    for (long k = s.support_lo(); k < s.support_end(); ++k)
      for (const auto& [mo, q] : s.coeff(k).monomials()) monos.insert(mo);
  return monos;
}

struct BAExpansionReport {
  bool pass = true;
  long coefficients_checked = 0;
  long yes = 0, inconclusive = 0;
  std::vector<long> covered_leads;
  std::string detail;
};

/// The basis theorem, checked at depth: every time-monomial coefficient of
/// psi_{ab,U} lies in U, and the extracted leading slots cover the point's
/// leads on a shallow window.  Coverage is per component index ab; a
/// decomposable point is only covered by the union over all ab.
inline BAExpansionReport ba_expansion_check(const GrassPoint<Rat>& pt, int ab, long D,
                                            long cover, long N = 0) {
  BAExpansionReport rep;
  auto psi = ba(pt, ab, D, N);
  std::set<long> leads;
  for (const auto& mo : ba_monomials(psi)) {
    auto cand = ba_coefficient(psi, mo);
    if (cand.is_zero_at_depth()) continue;
    ++rep.coefficients_checked;
    auto verdict = pt.contains(cand);
    if (verdict.verdict == Verdict::No) {
      rep.pass = false;
      rep.detail = "coefficient escapes the point at slot " +
                   std::to_string(verdict.culprit);
      return rep;
    }
    if (verdict.verdict == Verdict::Yes) ++rep.yes;
    else ++rep.inconclusive;
    if (auto l = pt.leading_slot(cand)) leads.insert(*l);
  }
  for (long s = -cover; s < cover; ++s)
    if (pt.is_lead(s) && !leads.count(s)) {
      rep.pass = false;
      rep.detail = "leading slot " + std::to_string(s) + " not covered";
      return rep;
    }
  rep.covered_leads.assign(leads.begin(), leads.end());
  return rep;
}

}  // namespace grw

#endif

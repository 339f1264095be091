#ifndef GRW_GRASSMANNIAN_HPP
#define GRW_GRASSMANNIAN_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grw/linalg.hpp"
#include "grw/walgebra.hpp"

namespace grw {

inline long floor_div(long a, long b) {  // b > 0
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

/// Global bijection between integers ("slots") and the monomial basis of W:
/// slots are ordered by exponent value m/e, ties broken by component key.
/// Slot 0 is the first monomial of W_+ (value 0, first component); slots are
/// >= 0 exactly for monomials of W_+.  There are rn = sum of all sheet
/// indices slots per unit of exponent value.
struct SlotOrdering {
  RamificationData rd;
  // One period of the ordering: components with fractional exponents in
  // [0, 1), as (component, exponent numerator) sorted by (value, component).
  std::vector<std::pair<int, int>> period;
  std::vector<std::vector<int>> pos;  // pos[c][mf] = position in period

  SlotOrdering() : SlotOrdering(RamificationData{}) {}
  explicit SlotOrdering(RamificationData data) : rd(std::move(data)) {
    for (int c = 0; c < rd.rbar(); ++c)
      for (int mf = 0; mf < rd.e_flat(c); ++mf) period.emplace_back(c, mf);
    std::sort(period.begin(), period.end(), [&](const auto& a, const auto& b) {
      long va = static_cast<long>(a.second) * rd.e_flat(b.first);
      long vb = static_cast<long>(b.second) * rd.e_flat(a.first);
      if (va != vb) return va < vb;
      return a.first < b.first;
    });
    pos.resize(static_cast<size_t>(rd.rbar()));
    for (int c = 0; c < rd.rbar(); ++c)
      pos[static_cast<size_t>(c)].assign(static_cast<size_t>(rd.e_flat(c)), -1);
    for (int p = 0; p < rn(); ++p)
      pos[static_cast<size_t>(period[static_cast<size_t>(p)].first)]
         [static_cast<size_t>(period[static_cast<size_t>(p)].second)] = p;
  }

  int rn() const { return static_cast<int>(period.size()); }

  std::pair<int, long> slot_key(long s) const {
    long q = floor_div(s, rn());
    int p = static_cast<int>(s - q * rn());
    auto [c, mf] = period[static_cast<size_t>(p)];
    return {c, mf + q * rd.e_flat(c)};
  }

  long slot_of(int c, long m) const {
    int e = rd.e_flat(c);
    long q = floor_div(m, e);
    int mf = static_cast<int>(m - q * e);
    return q * rn() + pos[static_cast<size_t>(c)][static_cast<size_t>(mf)];
  }

  /// Slot of the T2-dual monomial: (c, m) pairs with (c, -m-e_c).
  long dual_slot(long s) const {
    auto [c, m] = slot_key(s);
    return slot_of(c, -m - rd.e_flat(c));
  }

  friend bool operator==(const SlotOrdering& a, const SlotOrdering& b) { return a.rd == b.rd; }
};

enum class Tail {
  LeadingBelow,  // every slot < -S is a leading slot (pole-complete points);
                 // representatives are carried explicitly by the stored rows,
                 // nothing is ever absorbed silently
  NothingBelow   // the point has no support below its stored rows (W_+)
};

enum class Verdict { Yes, No, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "inconclusive-at-depth";
  }
}

/// Windowed point of gr(W): echelon rows with pairwise distinct leading
/// slots, leading coefficient 1, fully reduced, sorted by leading slot.
template <class K>
struct GrassPoint {
  SlotOrdering ord;
  long S = 0;  // slot window half-width: structure certified on [-S, S)
  Tail tail = Tail::NothingBelow;
  std::vector<WElement<K>> rows;
  std::vector<long> leads;  // leads[i] = leading slot of rows[i]

  const RamificationData& rd() const { return ord.rd; }

  bool is_lead(long s) const { return std::binary_search(leads.begin(), leads.end(), s); }

  /// Shallowest certification bound over all rows.
  long cert_slot_all() const {
    long h = kHiInf;
    for (const auto& row : rows) h = std::min(h, cert_slot(row));
    return h;
  }

  /// First slot at which w's coefficient is no longer certified.
  long cert_slot(const WElement<K>& w) const {
    long c = kHiInf;
    for (int comp = 0; comp < rd().rbar(); ++comp) {
      long hi = w.parts[static_cast<size_t>(comp)].hi();
      if (hi >= kHiInf) continue;
      c = std::min(c, ord.slot_of(comp, hi));
    }
    return c;
  }

  /// Minimal slot with nonzero tracked coefficient, if any.
  std::optional<long> leading_slot(const WElement<K>& w) const {
    std::optional<long> best;
    for (int comp = 0; comp < rd().rbar(); ++comp) {
      const auto& s = w.parts[static_cast<size_t>(comp)];
      for (long m = s.support_lo(); m < s.support_end(); ++m) {
        if (is_zero(s.coeff(m))) continue;
        long slot = ord.slot_of(comp, m);
        if (!best || slot < *best) best = slot;
        break;  // slot_of is increasing in m per component
      }
    }
    return best;
  }

  static K coeff_at(const SlotOrdering& ord, const WElement<K>& w, long slot) {
    auto [c, m] = ord.slot_key(slot);
    return w.parts[static_cast<size_t>(c)].coeff(m);
  }
  K coeff_at(const WElement<K>& w, long slot) const { return coeff_at(ord, w, slot); }

  static WElement<K> slot_monomial(const SlotOrdering& ord, long slot, K coeff = K(Rat(1))) {
    auto [c, m] = ord.slot_key(slot);
    return WElement<K>::monomial(ord.rd, c, m, std::move(coeff));
  }

  /// Drop all coefficients at slots < smin.  This changes the element; use
  /// only where structure below smin is explicitly out of scope.
  WElement<K> clipped_below(const WElement<K>& w, long smin) const {
    WElement<K> out;
    out.rd = w.rd;
    for (int comp = 0; comp < rd().rbar(); ++comp) {
      const auto& s = w.parts[static_cast<size_t>(comp)];
      long mlo = s.support_lo();
      while (mlo < s.support_end() && ord.slot_of(comp, mlo) < smin) ++mlo;
      std::vector<K> c;
      for (long m = mlo; m < s.support_end(); ++m) c.push_back(s.coeff(m));
      out.parts.push_back(Series<K>::from_coeffs(s.e(), mlo, std::move(c), s.hi()));
    }
    return out;
  }

  /// Reduce w against the rows; the result has no support at any leading
  /// slot of the point within certification.
  WElement<K> reduced(WElement<K> w) const {
    while (true) {
      auto lead = leading_slot(w);
      if (!lead) return w;
      auto it = std::lower_bound(leads.begin(), leads.end(), *lead);
      if (it == leads.end() || *it != *lead) return w;
      size_t idx = static_cast<size_t>(it - leads.begin());
      w = w - rows[idx].scaled(coeff_at(w, *lead));
    }
  }

  struct Membership {
    Verdict verdict;
    long checked_to;   // slots < checked_to are certified clean
    long culprit = 0;  // slot of a nonzero remainder coefficient when No
  };

  /// Drop coefficients at slots >= smax (membership is asserted only within
  /// the window; anything above is beyond the point's certified structure).
  WElement<K> clipped_above(const WElement<K>& w, long smax) const {
    WElement<K> out;
    out.rd = w.rd;
    for (int comp = 0; comp < rd().rbar(); ++comp) {
      const auto& s = w.parts[static_cast<size_t>(comp)];
      std::vector<K> c;
      for (long m = s.support_lo(); m < s.support_end(); ++m)
        c.push_back(ord.slot_of(comp, m) >= smax ? K{} : s.coeff(m));
      out.parts.push_back(Series<K>::from_coeffs(s.e(), s.support_lo(), std::move(c), s.hi()));
    }
    return out;
  }

  /// Three-valued membership at depth: Yes needs the remainder to vanish on
  /// all certified window slots with certification reaching at least `need`.
  /// Remainder support above the window (slots >= S) is not counted against
  /// membership — the point's structure is only asserted on [-S, S).
  Membership contains(const WElement<K>& w, long need) const {
    WElement<K> rem = clipped_above(reduced(w), S);
    long cert = cert_slot(rem);
    auto lead = leading_slot(rem);
    if (lead) {
      if (tail == Tail::NothingBelow || *lead >= -S) return {Verdict::No, cert, *lead};
      return {Verdict::Inconclusive, cert, *lead};  // residue below the window
    }
    if (cert >= need) return {Verdict::Yes, cert, 0};
    return {Verdict::Inconclusive, cert, 0};
  }
  Membership contains(const WElement<K>& w) const { return contains(w, 0); }
};

/// Insert one element into an echelon basis, keeping it fully reduced.
/// Returns true if a new row (new leading slot) was created, false if the
/// element reduced to zero at depth.
template <class K>
bool echelon_insert(GrassPoint<K>& pt, WElement<K> w) {
  while (true) {
    auto lead = pt.leading_slot(w);
    if (!lead) return false;  // zero at depth: discard
    auto it = std::lower_bound(pt.leads.begin(), pt.leads.end(), *lead);
    if (it != pt.leads.end() && *it == *lead) {
      size_t idx = static_cast<size_t>(it - pt.leads.begin());
      w = w - pt.rows[idx].scaled(pt.coeff_at(w, *lead));
      continue;
    }
    // New leading slot: normalize, clear the tail at every existing lead,
    // reduce existing rows against the new lead, insert.  Both directions
    // are needed to keep the basis fully reduced.
    w = w.scaled(inv(pt.coeff_at(w, *lead)));
    for (size_t i = 0; i < pt.rows.size(); ++i) {
      K c = pt.coeff_at(w, pt.leads[i]);
      if (!is_zero(c)) w = w - pt.rows[i].scaled(c);
    }
    size_t at = static_cast<size_t>(it - pt.leads.begin());
    for (size_t i = 0; i < pt.rows.size(); ++i) {
      K c = pt.coeff_at(pt.rows[i], *lead);
      if (!is_zero(c)) pt.rows[i] = pt.rows[i] - w.scaled(c);
    }
    pt.leads.insert(it, *lead);
    pt.rows.insert(pt.rows.begin() + static_cast<long>(at), std::move(w));
    return true;
  }
}

/// Gaussian elimination by leading slot.  Zero rows are discarded; rows are
/// normalized to leading coefficient 1 and fully reduced against each other.
template <class K>
GrassPoint<K> echelonize(const SlotOrdering& ord, long S, Tail tail,
                         std::vector<WElement<K>> input) {
  GrassPoint<K> pt;
  pt.ord = ord;
  pt.S = S;
  pt.tail = tail;
  for (auto& w : input) echelon_insert(pt, std::move(w));
  return pt;
}

/// Windowed Euler characteristic of U -> W/W_+: number of leading slots in
/// [-S, S) minus S.  Under the tail conventions this equals
/// #(leads >= 0) - #(non-leading slots in [-S, 0)).
template <class K>
long index_of(const GrassPoint<K>& pt) {
  long count = 0;
  for (long s : pt.leads)
    if (s >= -pt.S && s < pt.S) ++count;
  return count - pt.S;
}

/// Per-component refinement of the windowed index: for each flat component,
/// the number of its leading slots in [-S, S) minus the number of its slots
/// in [-S, 0).  The entries sum to index_of and stabilize with the window
/// under the same tail conventions.
template <class K>
std::vector<long> charge_of(const GrassPoint<K>& pt) {
  std::vector<long> n(static_cast<size_t>(pt.rd().rbar()), 0);
  for (long s : pt.leads)
    if (s >= -pt.S && s < pt.S)
      ++n[static_cast<size_t>(pt.ord.slot_key(s).first)];
  for (long s = -pt.S; s < 0; ++s)
    --n[static_cast<size_t>(pt.ord.slot_key(s).first)];
  return n;
}

/// Componentwise monomial homothety u_c^{k_c}.
template <class K>
WElement<K> charge_shift_element(const RamificationData& rd, const std::vector<long>& k) {
  WElement<K> w;
  w.rd = rd;
  for (int c = 0; c < rd.rbar(); ++c)
    w.parts.push_back(
        Series<K>::monomial(rd.e_flat(c), k[static_cast<size_t>(c)], K(Rat(1))));
  return w;
}

struct ClosureReport {
  bool pass = true;
  long pairs_checked = 0;
  long pairs_skipped = 0;  // product window too shallow to test
  std::string detail;      // first failure, if any
};

/// U is a point of M^infty: contains 1 and is closed under multiplication.
/// Row pairs whose product window cannot certify slots >= -S are skipped and
/// counted; a tracked nonzero remainder is a hard failure.
template <class K>
ClosureReport is_algebra_point(const GrassPoint<K>& pt, long need = 0) {
  ClosureReport rep;
  auto one = WElement<K>::one(pt.rd());
  if (pt.contains(one, need).verdict != Verdict::Yes) {
    rep.pass = false;
    rep.detail = "1 is not in the subspace at depth";
    return rep;
  }
  for (size_t i = 0; i < pt.rows.size(); ++i) {
    for (size_t j = i; j < pt.rows.size(); ++j) {
      WElement<K> prod = pt.rows[i] * pt.rows[j];
      if (pt.cert_slot(prod) < -pt.S + 1) {
        ++rep.pairs_skipped;
        continue;
      }
      auto m = pt.contains(prod, std::min(need, pt.cert_slot(prod)));
      if (m.verdict == Verdict::No) {
        rep.pass = false;
        rep.detail = "product of rows " + std::to_string(i) + "," + std::to_string(j) +
                     " escapes at slot " + std::to_string(m.culprit);
        return rep;
      }
      if (m.verdict == Verdict::Yes)
        ++rep.pairs_checked;
      else
        ++rep.pairs_skipped;
    }
  }
  return rep;
}

/// Hurwitz condition (*): tr(U) (embedded back into W) stays inside U.
template <class K>
ClosureReport is_hurwitz_point(const GrassPoint<K>& pt, long need = 0) {
  ClosureReport rep;
  for (size_t i = 0; i < pt.rows.size(); ++i) {
    WElement<K> tw = embed_v_in_w(trace(pt.rows[i]));
    if (pt.cert_slot(tw) < -pt.S + 1) {
      ++rep.pairs_skipped;
      continue;
    }
    auto m = pt.contains(tw, std::min(need, pt.cert_slot(tw)));
    if (m.verdict == Verdict::No) {
      rep.pass = false;
      rep.detail = "trace of row " + std::to_string(i) + " escapes at slot " +
                   std::to_string(m.culprit);
      return rep;
    }
    if (m.verdict == Verdict::Yes)
      ++rep.pairs_checked;
    else
      ++rep.pairs_skipped;
  }
  return rep;
}

/// Trivial ramification data describing V itself (r branches, all e = 1).
inline RamificationData v_as_ramification(const RamificationData& rd) {
  return RamificationData(1, std::vector<std::vector<int>>(static_cast<size_t>(rd.r()), {1}));
}

template <class K>
WElement<K> v_to_w1(const RamificationData& rdv, const VElement<K>& v) {
  return WElement<K>(rdv, v.branches);
}

/// Image of U under the trace map, as a point of gr(V).
template <class K>
GrassPoint<K> trace_point(const GrassPoint<K>& pt, long SV) {
  RamificationData rdv = v_as_ramification(pt.rd());
  SlotOrdering ordv(rdv);
  std::vector<WElement<K>> rows;
  for (const auto& row : pt.rows) rows.push_back(v_to_w1(rdv, trace(row)));
  return echelonize(ordv, SV, pt.tail, std::move(rows));
}

/// U intersected with the image of V in W, as a point of gr(V): solve, inside
/// the row span, the window conditions "x looks like embed(v)".
template <class K>
GrassPoint<K> intersect_V(const GrassPoint<K>& pt, long SV);

/// Orthogonal complement with respect to T2, computed from the gap structure:
/// for each non-leading slot g in the window, U-perp gains the row
/// e_{g*} - sum_rows b_{row,g} (e_{c(g)} / e_{c(lead)}) e_{lead*}.
template <class K>
GrassPoint<K> perp(const GrassPoint<K>& pt) {
  long H = std::min(pt.S, pt.cert_slot_all());
  GrassPoint<K> out;
  out.ord = pt.ord;
  out.S = std::max(0L, std::min(pt.S, H) - pt.ord.rn());
  out.tail = (pt.tail == Tail::NothingBelow) ? Tail::NothingBelow : Tail::LeadingBelow;
  std::vector<WElement<K>> built;
  for (long g = -pt.S; g < H; ++g) {
    if (pt.is_lead(g)) continue;
    auto [cg, mg] = pt.ord.slot_key(g);
    int eg = pt.rd().e_flat(cg);
    WElement<K> y = GrassPoint<K>::slot_monomial(pt.ord, pt.ord.dual_slot(g));
    for (size_t i = 0; i < pt.rows.size(); ++i) {
      K b = pt.coeff_at(pt.rows[i], g);
      if (is_zero(b)) continue;
      auto [cl, ml] = pt.ord.slot_key(pt.leads[i]);
      int el = pt.rd().e_flat(cl);
      K coeff = -(b * K(rat(eg, el)));
      y = y + GrassPoint<K>::slot_monomial(pt.ord, pt.ord.dual_slot(pt.leads[i]), coeff);
    }
    built.push_back(std::move(y));
  }
  // The dual slot of g need not be the true leading slot of its row (the
  // correction terms can reach below it), so restore the echelon invariants
  // honestly instead of recording the dual slots as leads.
  return echelonize(out.ord, out.S, out.tail, std::move(built));
}

/// Multiply every row by an invertible element and re-echelonize.  The rows
/// carry the point completely (including its deep leads), so the image rows
/// carry gamma U completely; the window shrinks by the largest upward slot
/// displacement gamma can cause.
template <class K>
GrassPoint<K> act_gamma_point(const WElement<K>& gamma, const GrassPoint<K>& pt) {
  // Per-component slot displacement: multiplying component c by a series of
  // valuation v moves the slot of (c, m) to the slot of (c, m + v), a shift
  // bounded over m by scanning one exponent period.
  long max_disp = 0;
  for (int c = 0; c < pt.rd().rbar(); ++c) {
    const auto& g = gamma.parts[static_cast<size_t>(c)];
    if (!g.has_valuation()) throw std::domain_error("gamma has a zero component");
    long v = g.valuation();
    for (int mf = 0; mf < pt.rd().e_flat(c); ++mf)
      max_disp = std::max(max_disp, pt.ord.slot_of(c, mf + v) - pt.ord.slot_of(c, mf));
  }
  long S_new = pt.S - std::max(0L, max_disp);
  if (S_new < 0) throw std::domain_error("window exhausted by gamma action");
  std::vector<WElement<K>> rows;
  for (const auto& row : pt.rows) rows.push_back(gamma * row);
  return echelonize(pt.ord, S_new, pt.tail, std::move(rows));
}

/// Monomial homothety with total exponent budget k, distributed round-robin
/// over components in canonical order: multiplies the index by exactly k
/// slots.  This is the plain index normalizer; v_m below additionally
/// satisfies the duality pairing v_m * v_{rbar-rn-m} = 1 at the cost of
/// shifting by m only on the upper half of the pairing.
template <class K>
WElement<K> index_shift_element(const RamificationData& rd, long k) {
  long ak = std::abs(k);
  long q = ak / rd.rbar();
  long rem = ak % rd.rbar();
  WElement<K> w;
  w.rd = rd;
  for (int c = 0; c < rd.rbar(); ++c) {
    long u = q + (c < rem ? 1 : 0);
    if (k < 0) u = -u;
    w.parts.push_back(Series<K>::monomial(rd.e_flat(c), u, K(Rat(1))));
  }
  return w;
}

/// v_m family: componentwise monomials indexed so that multiplication shifts
/// the index by m on the primary side and v_m v_{rbar - rn - m} = 1 exactly.
template <class K>
WElement<K> vm_element(const RamificationData& rd, long m) {
  long d = rd.rbar() - rd.r() * rd.n;
  if (2 * m == d) {
    if (m == 0) return WElement<K>::one(rd);
    throw std::domain_error("self-paired index m = (rbar - rn)/2 is not supported");
  }
  long k = (2 * m > d) ? m : m - d;
  return index_shift_element<K>(rd, k);
}

/// U intersected with the image of V in W: inside the row span, impose the
/// window conditions "component (i,j) is the e_j-th inflation of a common
/// branch series".  The solution combos are mapped to gr(V).
template <class K>
GrassPoint<K> intersect_V(const GrassPoint<K>& pt, long SV) {
  RamificationData rdv = v_as_ramification(pt.rd());
  SlotOrdering ordv(rdv);
  long H = std::min(pt.S, pt.cert_slot_all());
  // Unknowns: one coefficient per stored row.  Conditions, per slot s in
  // [-S, H): if (c,m) is not a V-pattern slot the combo must vanish there;
  // V-pattern slots (e_c | m) must agree across sheets of the same branch.
  size_t nrows = pt.rows.size();
  Mat<K> sys;
  for (long s = -pt.S; s < H; ++s) {
    auto [c, m] = pt.ord.slot_key(s);
    auto [i, j] = pt.rd().comp_key(c);
    int e = pt.rd().e_of(i, j);
    std::vector<K> cond(nrows, K{});
    if (m % e != 0) {
      for (size_t rr = 0; rr < nrows; ++rr) cond[rr] = pt.coeff_at(pt.rows[rr], s);
      sys.push_back(std::move(cond));
      continue;
    }
    if (j == 0) continue;  // sheet 0 carries the free branch value
    long q = m / e;
    int e0 = pt.rd().e_of(i, 0);
    long s0 = pt.ord.slot_of(pt.rd().comp_index(i, 0), q * e0);
    for (size_t rr = 0; rr < nrows; ++rr)
      cond[rr] = pt.coeff_at(pt.rows[rr], s) - pt.coeff_at(pt.rows[rr], s0);
    sys.push_back(std::move(cond));
  }
  Mat<K> combos = sys.empty() ? Mat<K>{} : nullspace(sys);
  if (sys.empty())
    for (size_t rr = 0; rr < nrows; ++rr) {
      std::vector<K> e_r(nrows, K{});
      e_r[rr] = K(Rat(1));
      combos.push_back(std::move(e_r));
    }
  std::vector<WElement<K>> vrows;
  for (const auto& combo : combos) {
    WElement<K> x(pt.rd());
    for (size_t rr = 0; rr < nrows; ++rr)
      if (!is_zero(combo[rr])) x = x + pt.rows[rr].scaled(combo[rr]);
    // Read the branch series off sheet 0 of each branch: z^q has coefficient
    // equal to x's (i,0) coefficient at m = q e_0.
    VElement<K> v;
    v.rd = pt.rd();
    for (int i = 0; i < pt.rd().r(); ++i) {
      const auto& s0 = x.parts[static_cast<size_t>(pt.rd().comp_index(i, 0))];
      int e0 = pt.rd().e_of(i, 0);
      std::vector<K> coeffs;
      long qlo = ceil_div(s0.support_lo(), e0);
      long qhi = ceil_div(s0.hi() >= kHiInf ? s0.support_end() : s0.hi(), e0);
      for (long q = qlo; q < qhi; ++q) coeffs.push_back(s0.coeff(q * e0));
      v.branches.push_back(Series<K>::from_coeffs(
          1, qlo, std::move(coeffs), s0.hi() >= kHiInf ? kHiInf : qhi));
    }
    vrows.push_back(v_to_w1(rdv, v));
  }
  return echelonize(ordv, SV, pt.tail, std::move(vrows));
}

/// Compare two points at the common window: same leading slots and mutually
/// reducing rows within certification.
template <class K>
bool same_point_at_depth(const GrassPoint<K>& a, const GrassPoint<K>& b, long T) {
  for (long s = -T; s < T; ++s)
    if (a.is_lead(s) != b.is_lead(s)) return false;
  for (size_t i = 0; i < a.rows.size(); ++i) {
    if (a.leads[i] < -T || a.leads[i] >= T) continue;
    auto m = b.contains(a.rows[i], std::min(T, b.cert_slot(a.rows[i])));
    if (m.verdict == Verdict::No) return false;
  }
  for (size_t i = 0; i < b.rows.size(); ++i) {
    if (b.leads[i] < -T || b.leads[i] >= T) continue;
    auto m = a.contains(b.rows[i], std::min(T, a.cert_slot(b.rows[i])));
    if (m.verdict == Verdict::No) return false;
  }
  return true;
}

}  // namespace grw

#endif

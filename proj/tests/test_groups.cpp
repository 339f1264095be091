#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grw/groups.hpp"
#include "grw/krichever.hpp"
#include "grw/timepoly.hpp"

using grw::RamificationData;
using grw::Rat;
using grw::rat;
using grw::TimePoly;
using grw::TimeVar;
using SR = grw::Series<Rat>;
using WR = grw::WElement<Rat>;
using VR = grw::VElement<Rat>;

namespace {

SR zpoly(long lo, std::vector<Rat> coeffs, long hi = grw::kHiInf) {
  return SR::from_coeffs(1, lo, std::move(coeffs), hi);
}

WR sample_w(const RamificationData& rd, long hi) {
  WR w(rd, hi);
  for (int c = 0; c < rd.rbar(); ++c) {
    auto s = grw::Series<Rat>::zero(rd.e_flat(c), hi);
    for (long m = -2; m <= 3; ++m)
      s = s + grw::Series<Rat>::monomial(rd.e_flat(c), m, rat(m + 3, c + 2), hi);
    w.parts[size_t(c)] = s;
  }
  return w;
}

}  // namespace

TEST_CASE("homothety validation and action") {
  RamificationData rd(2, {{2}, {2}});
  auto one = WR::one(rd, 20);
  grw::GammaW<Rat> id(one);
  auto w = sample_w(rd, 20);
  auto acted = grw::act_gamma(id, w);
  for (int c = 0; c < rd.rbar(); ++c)
    CHECK(grw::series_agree(acted.parts[size_t(c)], w.parts[size_t(c)]));

  // constant unit scaling
  auto half = one.scaled(rat(1, 2));
  grw::GammaW<Rat> g(half);
  CHECK(grw::act_gamma(g, w).parts[0].coeff(1) == w.parts[0].coeff(1) * rat(1, 2));

  // non-unit constant term rejected
  CHECK_THROWS_AS(grw::GammaW<Rat>(WR::monomial(rd, 0, 2, Rat(1), 20) +
                                   WR::monomial(rd, 1, 0, Rat(1), 20)),
                  std::domain_error);
  // negative exponents must be nilpotent: impossible over the rationals
  CHECK_THROWS_AS(grw::GammaW<Rat>(one + WR::monomial(rd, 0, -1, Rat(1), 20)),
                  std::domain_error);
}

TEST_CASE("homothety over the time ring: nilpotent tails act") {
  RamificationData rd(1, {{1}});
  TimePoly t = TimePoly::variable(TimeVar{0, 0, 1}, 4);
  using WT = grw::WElement<TimePoly>;
  WT gamma(rd, 20);
  gamma.parts[0] = grw::Series<TimePoly>::from_coeffs(1, -1, {t, TimePoly(1)}, 20);
  grw::GammaW<TimePoly> g(gamma);  // t has zero constant term: admissible
  auto u = WT::monomial(rd, 0, 1, TimePoly(1), 20);
  auto out = grw::act_gamma(g, u);
  CHECK(out.parts[0].coeff(1).constant_term() == Rat(1));
  CHECK(out.parts[0].coeff(0) == t);
  // a non-nilpotent negative coefficient still rejected
  WT bad(rd, 20);
  bad.parts[0] = grw::Series<TimePoly>::from_coeffs(1, -1, {TimePoly(1), TimePoly(1)}, 20);
  CHECK_THROWS_AS(grw::GammaW<TimePoly>{bad}, std::domain_error);
}

TEST_CASE("automorphism lifts: root series and mu_E classes") {
  RamificationData rd(2, {{2}});
  // identity map lifts to the identity substitution
  auto idlift = grw::lift_automorphism(grw::GVElement::identity(rd, 30));
  CHECK(grw::series_agree(idlift.ubar[0], SR::monomial(2, 1, Rat(1), 30)));

  // g(z) = z(1+z): ubar = u (1 + u^2/2 - u^4/8 + u^6/16 - ...)
  grw::GVElement g(rd, {zpoly(1, {Rat(1), Rat(1)})});
  auto lift = grw::lift_automorphism(g);
  CHECK(lift.ubar[0].coeff(1) == Rat(1));
  CHECK(lift.ubar[0].coeff(3) == rat(1, 2));
  CHECK(lift.ubar[0].coeff(5) == rat(-1, 8));
  CHECK(lift.ubar[0].coeff(7) == rat(1, 16));
  CHECK(lift.ubar[0].coeff(2) == Rat(0));
  CHECK(grw::series_agree(lift.ubar[0].power(2), g.g[0].inflated(2)));

  // g(z) = 4z: the two square roots are the two mu_2 classes
  grw::GVElement scale(rd, {zpoly(1, {Rat(4)})});
  auto plus = grw::lift_automorphism(scale, {{0}});
  auto minus = grw::lift_automorphism(scale, {{1}});
  CHECK(grw::series_agree(plus.ubar[0], SR::monomial(2, 1, Rat(2))));
  CHECK(grw::series_agree(minus.ubar[0], SR::monomial(2, 1, Rat(-2))));
  CHECK(grw::series_agree(plus.ubar[0].power(2), minus.ubar[0].power(2)));

  // obstructions: no rational root of the scaling, or an irrational class
  grw::GVElement bad(rd, {zpoly(1, {Rat(2)})});
  CHECK_THROWS_AS(grw::lift_automorphism(bad), std::domain_error);
  RamificationData rd3(3, {{3}});
  grw::GVElement cube(rd3, {zpoly(1, {Rat(8)})});
  auto lift3 = grw::lift_automorphism(cube);
  CHECK(grw::series_agree(lift3.ubar[0], SR::monomial(3, 1, Rat(2))));
  CHECK_THROWS_AS(grw::lift_automorphism(cube, {{1}}), std::domain_error);
}

TEST_CASE("substitution is an algebra map consistent with the embedding") {
  RamificationData rd(2, {{2}});
  grw::GVElement g(rd, {zpoly(1, {Rat(1), Rat(1)}, 16)});
  auto gbar = grw::lift_automorphism(g);
  // on the image of V, substitution is the base reparametrization
  auto u2 = WR::monomial(rd, 0, 2, Rat(1), 28);
  CHECK(grw::series_agree(grw::apply_substitution(gbar, u2).parts[0],
                          g.g[0].inflated(2)));
  // multiplicativity on elements with poles
  auto w1 = sample_w(rd, 28);
  auto w2 = sample_w(rd, 28) + WR::monomial(rd, 0, -3, rat(5, 7), 28);
  auto lhs = grw::apply_substitution(gbar, w1 * w2);
  auto rhs = grw::apply_substitution(gbar, w1) * grw::apply_substitution(gbar, w2);
  CHECK(grw::series_agree(lhs.parts[0], rhs.parts[0]));
}

TEST_CASE("trace equivariance of lifts, and a failing hand-built substitution") {
  RamificationData rd(4, {{2, 2}});
  grw::GVElement g(rd, {zpoly(1, {Rat(1), Rat(1), rat(-1, 3)}, 12)});
  auto gbar = grw::lift_automorphism(g);
  CHECK(grw::check_trace_equivariance(gbar).pass);
  CHECK(grw::check_trace_equivariance(grw::GVWElement::identity(rd, 40)).pass);

  // opposite root classes on the two sheets of 4z also commute with the trace
  grw::GVElement scale(rd, {zpoly(1, {Rat(4)})});
  auto mixed = grw::lift_automorphism(scale, {{0, 1}});
  CHECK(grw::check_trace_equivariance(mixed).pass);

  // ubar = u + u^2 is not of the form u * (series in u^2): trace breaks
  RamificationData rd1(2, {{2}});
  grw::GVWElement handmade;
  handmade.rd = rd1;
  handmade.g = {zpoly(1, {Rat(1)}, 40)};
  handmade.ubar = {SR::from_coeffs(2, 1, {Rat(1), Rat(1)}, 40)};
  handmade.root_class = {0};
  auto rep = grw::check_trace_equivariance(handmade);
  CHECK(!rep.pass);
  CHECK(!rep.detail.empty());
}

TEST_CASE("vector field lifts: chain rule and trace compatibility") {
  RamificationData rd(3, {{3}});
  auto euler = grw::lift_vector_field(rd, {zpoly(1, {Rat(1)}, 40)});
  CHECK(grw::series_agree(euler.du[0], SR::monomial(3, 1, rat(1, 3), 40)));
  for (long l = -5; l <= 5; ++l) {
    auto d = grw::apply_derivation(euler, WR::monomial(rd, 0, l, Rat(1), 30));
    CHECK(grw::series_agree(d.parts[0], SR::monomial(3, l, rat(l, 3), 30)));
  }

  RamificationData rd2(2, {{2}});
  auto sq = grw::lift_vector_field(rd2, {zpoly(2, {Rat(1)}, 40)});
  CHECK(grw::series_agree(sq.du[0], SR::monomial(2, 3, rat(1, 2), 40)));

  auto zero = grw::lift_vector_field(rd2, {SR::zero(1, 40)});
  CHECK(grw::apply_derivation(zero, sample_w(rd2, 30)).is_zero_at_depth());

  // Leibniz on products with poles
  auto D = grw::lift_vector_field(rd2, {zpoly(-1, {rat(1, 2), Rat(0), Rat(3)}, 40)});
  auto w1 = sample_w(rd2, 30);
  auto w2 = sample_w(rd2, 30) + WR::monomial(rd2, 0, -4, rat(2, 5), 30);
  auto lhs = grw::apply_derivation(D, w1 * w2);
  auto rhs = grw::apply_derivation(D, w1) * w2 + w1 * grw::apply_derivation(D, w2);
  CHECK(grw::series_agree(lhs.parts[0], rhs.parts[0]));

  // infinitesimal trace equivariance on a mixed shape
  RamificationData rdm(4, {{2, 2}, {4}});
  auto Dm = grw::lift_vector_field(
      rdm, {zpoly(-1, {Rat(1), Rat(0), Rat(2)}, 40), zpoly(1, {Rat(2), rat(1, 3)}, 40)});
  for (int c = 0; c < rdm.rbar(); ++c)
    for (long l = -6; l <= 6; ++l) {
      auto mono = WR::monomial(rdm, c, l, Rat(1), 30);
      auto lhsv = grw::trace(grw::apply_derivation(Dm, mono));
      auto rhsv = grw::apply_derivation_v(Dm, grw::trace(mono));
      for (int b = 0; b < rdm.r(); ++b)
        CHECK(grw::series_agree(lhsv.branches[size_t(b)], rhsv.branches[size_t(b)]));
    }
}

TEST_CASE("brackets: Witt relation and commutator of sheet actions") {
  RamificationData rd(3, {{2, 1}});
  auto a = grw::lift_vector_field(rd, {zpoly(1, {Rat(1)}, 40)});
  auto b = grw::lift_vector_field(rd, {zpoly(2, {Rat(1)}, 40)});
  auto c = grw::bracket(a, b);
  CHECK(grw::series_agree(c.f[0], zpoly(2, {Rat(1)}, 40)));  // [z d, z^2 d] = z^2 d
  CHECK(grw::apply_derivation(grw::bracket(a, a), sample_w(rd, 30)).is_zero_at_depth());
  CHECK(grw::series_agree(grw::bracket(b, a).f[0], -c.f[0]));

  // the lift is a Lie-algebra map: sheet action of the bracket = commutator
  auto p = grw::lift_vector_field(rd, {zpoly(-2, {Rat(1), Rat(0), Rat(0), rat(3, 2)}, 60)});
  auto q = grw::lift_vector_field(rd, {zpoly(0, {Rat(2), Rat(-1)}, 60)});
  auto pq = grw::bracket(p, q);
  for (int comp = 0; comp < rd.rbar(); ++comp)
    for (long l = -4; l <= 4; ++l) {
      auto mono = WR::monomial(rd, comp, l, Rat(1), 30);
      auto lhs = grw::apply_derivation(pq, mono);
      auto rhs = grw::apply_derivation(p, grw::apply_derivation(q, mono)) -
                 grw::apply_derivation(q, grw::apply_derivation(p, mono));
      CHECK(grw::series_agree(lhs.parts[size_t(comp)], rhs.parts[size_t(comp)]));
    }
}

TEST_CASE("substitution action on a Grassmannian point") {
  grw::CoverSpec spec = grw::LaurentMonomialCover{2};
  auto pt = grw::build_point(spec, 10);
  auto rd = pt.rd();
  grw::GVElement g(rd, {zpoly(1, {Rat(1), Rat(1)}, 40), zpoly(1, {Rat(1)}, 40)});
  auto gbar = grw::lift_automorphism(g);
  auto moved = grw::act_aut_point(gbar, pt);
  // valuation-1 substitutions preserve the echelon profile and the index
  CHECK(grw::index_of(moved) == 1);
  CHECK(moved.leads == pt.leads);
  // the image of a generator lies in the image point
  grw::LaurentMonomialCover cov{2};
  auto w = cov.expand({{1, Rat(1)}}, 40);
  CHECK(moved.contains(grw::apply_substitution(gbar, w)).verdict == grw::Verdict::Yes);
  // but the point itself moved: the image of w is not in the original point
  CHECK(pt.contains(grw::apply_substitution(gbar, w)).verdict == grw::Verdict::No);
}

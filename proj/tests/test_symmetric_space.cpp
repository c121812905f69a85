// The stabilizer of the pole pair and its characters, the transverse-pair
// invariant evaluated two independent ways, the pole-covariant eigenfields,
// the P map with its covariance and intertwining laws, and the invariant
// pair measure.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "triform/triform.hpp"

using namespace triform;

namespace {

Mat rot2(double angle) {
  Mat m(2);
  m(0, 0) = std::cos(angle);
  m(0, 1) = -std::sin(angle);
  m(1, 0) = std::sin(angle);
  m(1, 1) = std::cos(angle);
  return m;
}

}  // namespace

TEST_CASE("stabilizer elements: validation, pole fixing, product law") {
  HElement h(0.3, rot2(0.7));
  REQUIRE(h.dim() == 3);
  REQUIRE(h.boost_param() == 0.3);

  GroupElement g = h.as_group_element();
  SpherePoint plus = SpherePoint::plus_pole(3);
  SpherePoint minus = SpherePoint::minus_pole(3);
  REQUIRE(distance(act(g, plus), plus) <= 1e-12);
  REQUIRE(distance(act(g, minus), minus) <= 1e-12);

  Mat reflect = Mat::identity(2);
  reflect(1, 1) = -1.0;
  REQUIRE_THROWS_AS(HElement(0.1, reflect), InvalidRotation);
  Mat skew(2);
  skew(0, 0) = 2.0;
  skew(1, 1) = 1.0;
  REQUIRE_THROWS_AS(HElement(0.1, skew), InvalidRotation);
  REQUIRE_THROWS_AS(HElement(0.1, Mat::identity(1)), UnsupportedDimension);

  // the boost and the transverse rotation commute, so products add parameters
  HElement h2(-0.9, rot2(0.25));
  GroupElement lhs = (h * h2).as_group_element();
  GroupElement rhs = h.as_group_element() * h2.as_group_element();
  REQUIRE(lhs.matrix().max_abs_diff(rhs.matrix()) <= 1e-12);

  HElement r1 = random_h_element(12, 1.0);
  HElement r2 = random_h_element(12, 1.0);
  REQUIRE(r1.boost_param() == r2.boost_param());
  REQUIRE(r1.spin().max_abs_diff(r2.spin()) == 0.0);
}

TEST_CASE("stabilizer characters") {
  REQUIRE(nu(cplx(0.7, -0.3), HElement(0.0, rot2(1.1))) == cplx(1.0));
  HElement unit(1.0, rot2(0.0));
  cplx z(2.0, 1.0);
  REQUIRE(std::abs(nu(z, unit) - std::exp(z)) <= 1e-14 * std::abs(std::exp(z)));

  for (int s = 0; s < 100; ++s) {
    HElement a = random_h_element(80000 + s, 1.0);
    HElement b = random_h_element(81000 + s, 1.0);
    SeededRng rng(82000 + s);
    cplx zeta(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    cplx lhs = nu(zeta, a * b);
    cplx rhs = nu(zeta, a) * nu(zeta, b);
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
  }
}

TEST_CASE("transverse-pair invariant: exact values and the two evaluation paths") {
  SpherePoint plus = SpherePoint::plus_pole(3);
  SpherePoint minus = SpherePoint::minus_pole(3);
  SpherePoint e2 = SpherePoint::axis_point(3, 1);

  PsiPair p = psi_proj(plus, minus, e2);
  REQUIRE(std::abs(p.closed_form - 2.0) <= 1e-12);
  REQUIRE(std::abs(p.projection - 2.0) <= 1e-12);

  SeededRng rng(301);
  SpherePoint a = random_sphere_point(3, rng);
  SpherePoint b = random_sphere_point(3, rng);
  PsiPair degenerate = psi_proj(a, b, a);
  REQUIRE(degenerate.closed_form == 0.0);
  REQUIRE(degenerate.projection <= 1e-12);
  REQUIRE_THROWS_AS(psi_proj(a, a, b), CoincidentPoints);

  for (int i = 0; i < 1000; ++i) {
    SpherePoint s1 = random_sphere_point(3, rng);
    SpherePoint s2 = random_sphere_point(3, rng);
    SpherePoint s3 = random_sphere_point(3, rng);
    PsiPair pp = psi_proj(s1, s2, s3);
    REQUIRE(std::abs(pp.projection - pp.closed_form) <=
            1e-10 * (std::abs(pp.closed_form) + 1e-300));
  }
}

TEST_CASE("transverse-pair invariant: conformal covariance in the third slot") {
  SeededRng rng(302);
  for (int s = 0; s < 200; ++s) {
    GroupElement g = random_group_element(83000 + s, 1.0);
    SpherePoint s1 = random_sphere_point(3, rng);
    SpherePoint s2 = random_sphere_point(3, rng);
    SpherePoint s3 = random_sphere_point(3, rng);
    double lhs = psi_proj(act(g, s1), act(g, s2), act(g, s3)).projection;
    double rhs = conformal_factor(g, s3) * psi_proj(s1, s2, s3).projection;
    REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("pole-pair invariant psi0") {
  SpherePoint e2 = SpherePoint::axis_point(3, 1);
  REQUIRE(std::abs(psi0(e2) - 2.0) <= 1e-15);
  REQUIRE(psi0(SpherePoint::plus_pole(3)) == 0.0);

  SpherePoint plus = SpherePoint::plus_pole(3);
  SpherePoint minus = SpherePoint::minus_pole(3);
  SeededRng rng(303);
  for (int i = 0; i < 500; ++i) {
    SpherePoint s = random_sphere_point(3, rng);
    REQUIRE(std::abs(psi0(s) - distance(plus, s) * distance(minus, s)) <= 1e-15);
    REQUIRE(std::abs(psi0(s) - psi_proj(plus, minus, s).projection) <= 1e-12 * psi0(s));
  }
}

TEST_CASE("pole-covariant field theta: values, singularities, eigenproperty") {
  SpherePoint e2 = SpherePoint::axis_point(3, 1);
  REQUIRE(theta(cplx(-1.0), cplx(0.0), e2) == cplx(1.0));

  cplx z(0.3, 0.8);
  cplx v = theta(cplx(0.0), z, e2);
  REQUIRE(std::abs(v - cplx(0.5)) <= 1e-14);

  REQUIRE_THROWS_AS(theta(cplx(0.0), cplx(0.0), SpherePoint::plus_pole(3)), SingularPoint);
  REQUIRE_THROWS_AS(theta(cplx(0.0), cplx(0.0), SpherePoint::minus_pole(3)), SingularPoint);

  // pi_lambda(h) theta_{lambda,zeta} = nu_zeta(h) theta_{lambda,zeta} on the
  // stabilizer of the pole pair
  SeededRng rng(304);
  for (int s = 0; s < 100; ++s) {
    HElement h = random_h_element(84000 + s, 1.0);
    SpherePoint x = random_sphere_point(3, rng);
    cplx lam(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    cplx zeta(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    ScalarField th = theta_field(lam, zeta);
    cplx moved = rep_apply(lam, h.as_group_element(), th)(x);
    cplx expect = nu(zeta, h) * th(x);
    REQUIRE(std::abs(moved - expect) <= 1e-10 * std::abs(expect));
  }
}

TEST_CASE("P map: base values, stabilizer covariance, intertwining") {
  PairField unit = [](const SpherePoint&, const SpherePoint&) { return cplx(1.0); };
  REQUIRE(p_map(cplx(0.2, 0.1), cplx(-0.3), unit, GroupElement::identity(3)) == cplx(1.0));

  cplx sigma(0.2, 0.1), tau(-0.3, 0.0);
  double t = 0.6;
  cplx expect = std::exp(-t * (1.0 + sigma)) * std::exp(t * (1.0 + tau));
  cplx got = p_map(sigma, tau, unit, make_boost(3, t));
  REQUIRE(std::abs(got - expect) <= 1e-13 * std::abs(expect));

  PairField f = [](const SpherePoint& a, const SpherePoint& b) {
    return cplx(1.0 + a[0] * (2.0 + b[1]), 0.5 * a[1] * b[2]);
  };
  SeededRng rng(305);
  for (int s = 0; s < 200; ++s) {
    GroupElement g1 = random_group_element(85000 + s, 1.0);
    GroupElement g2 = random_group_element(86000 + s, 1.0);
    HElement h = random_h_element(87000 + s, 1.0);
    cplx sg(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5));
    cplx ta(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5));

    // right translation by the stabilizer scales by the character of sg - ta
    cplx lhs = p_map(sg, ta, f, g1 * h.as_group_element());
    cplx rhs = p_map(sg, ta, f, g1) / nu(sg - ta, h);
    REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));

    // P intertwines the two-slot action with left translation
    cplx il = p_map(sg, ta, tensor_rep_apply(sg, ta, g2, f), g1);
    cplx ir = p_map(sg, ta, f, inverse(g2) * g1);
    REQUIRE(std::abs(il - ir) <= 1e-10 * std::abs(ir));
  }
}

TEST_CASE("invariant pair measure weight") {
  SpherePoint plus = SpherePoint::plus_pole(3);
  SpherePoint minus = SpherePoint::minus_pole(3);
  REQUIRE(gh_measure_weight(plus, minus) == 1.0 / 16.0);
  REQUIRE_THROWS_AS(gh_measure_weight(plus, plus), CoincidentPoints);

  SeededRng rng(306);
  for (int i = 0; i < 200; ++i) {
    SpherePoint s = random_sphere_point(3, rng);
    SpherePoint t = random_sphere_point(3, rng);
    REQUIRE(gh_measure_weight(s, t) == gh_measure_weight(t, s));
    double d = distance(s, t);
    REQUIRE(std::abs(gh_measure_weight(s, t) * std::pow(d, 4.0) - 1.0) <= 1e-12);
  }
}

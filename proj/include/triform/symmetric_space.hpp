#pragma once

// Objects attached to the space of ordered distinct pole pairs: the stabilizer
// subgroup of the two first-axis poles, its characters, the transverse-pair
// invariant Psi and its closed form, the pole-covariant field Theta, the P map
// from two-variable fields to functions on the group, and the invariant
// pair measure weight.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "triform/common.hpp"
#include "triform/lorentz.hpp"
#include "triform/matrix.hpp"
#include "triform/representation.hpp"

namespace triform {

// -- the stabilizer of the pole pair ----------------------------------------------

// Product of the first-axis boost with a rotation of the transverse axes: the
// stabilizer of the ordered pair (plus pole, minus pole).
class HElement {
 public:
  HElement(double t, Mat spin) : t_(t), spin_(std::move(spin)) {
    int m = spin_.size();
    if (m < 2) throw UnsupportedDimension("transverse rotation needs n - 1 >= 2");
    if ((spin_.transposed() * spin_).max_abs_diff(Mat::identity(m)) > 1e-10)
      throw InvalidRotation("transverse block is not orthogonal");
    if (std::abs(spin_.determinant() - 1.0) > 1e-10)
      throw InvalidRotation("transverse block must have determinant +1");
  }

  int dim() const { return spin_.size() + 1; }  // ambient n
  double boost_param() const { return t_; }
  const Mat& spin() const { return spin_; }

  GroupElement as_group_element() const {
    int n = dim();
    Mat u = Mat::identity(n);
    for (int i = 0; i < n - 1; ++i)
      for (int j = 0; j < n - 1; ++j) u(i + 1, j + 1) = spin_(i, j);
    return make_boost(n, t_) * make_rotation(u);
  }

  friend HElement operator*(const HElement& a, const HElement& b) {
    return HElement(a.t_ + b.t_, a.spin_ * b.spin_);
  }

 private:
  double t_;
  Mat spin_;
};

inline HElement random_h_element(std::uint64_t seed, double scale, int n = 3) {
  if (n < 3) throw UnsupportedDimension("ambient dimension must be >= 3");
  SeededRng rng(seed);
  double t = rng.uniform(-scale, scale);
  return HElement(t, random_special_orthogonal(n - 1, rng));
}

// nu_zeta(h) = e^{t zeta}: the characters of the stabilizer, trivial on the
// rotation part.
inline cplx nu(cplx zeta, const HElement& h) {
  return std::exp(h.boost_param() * zeta);
}

// -- the transverse-pair invariant Psi ----------------------------------------------

// Psi evaluated two ways: by Minkowski-orthogonal projection away from the
// plane spanned by the lifts of s1, s2, and by the closed form
// 2 |s1-s3| |s2-s3| / |s1-s2|. The two agree within 1e-10.
struct PsiPair {
  double projection = 0.0;
  double closed_form = 0.0;
};

inline PsiPair psi_proj(const SpherePoint& s1, const SpherePoint& s2,
                        const SpherePoint& s3) {
  double d12 = distance(s1, s2);
  if (d12 <= 1e-300) throw CoincidentPoints("the marked pair must be distinct");
  PsiPair out;
  out.closed_form = 2.0 * distance(s1, s3) * distance(s2, s3) / d12;

  // sigma = lift(s3) - a1 lift(s1) - a2 lift(s2) with [sigma, lift(s1)] =
  // [sigma, lift(s2)] = 0; the lifts are null, so each condition fixes one
  // coefficient. Psi = 2 sqrt(-q(sigma)).
  std::vector<double> u1 = lift_raw(s1), u2 = lift_raw(s2), u3 = lift_raw(s3);
  double p12 = lorentz_pairing(u1, u2);
  double a1 = lorentz_pairing(u3, u2) / p12;
  double a2 = lorentz_pairing(u3, u1) / p12;
  std::vector<double> sigma = axpy(-a1, u1, u3);
  sigma = axpy(-a2, u2, std::move(sigma));
  out.projection = 2.0 * std::sqrt(std::max(0.0, -minkowski_q(sigma)));
  return out;
}

// Psi for the standard pole pair: |plus - s| |minus - s|, which is twice the
// transverse norm.
inline double psi0(const SpherePoint& s) {
  int n = s.dim();
  return distance(SpherePoint::plus_pole(n), s) * distance(SpherePoint::minus_pole(n), s);
}

// -- pole-covariant fields -------------------------------------------------------------

// Theta_{lambda, zeta}(s) = |plus - s|^{-rho-lambda+zeta} |minus - s|^{-rho-lambda-zeta}:
// a joint eigenfunction of the stabilizer inside the principal series.
inline cplx theta(cplx lambda, cplx zeta, const SpherePoint& s) {
  int n = s.dim();
  double rho = half_sphere_dim(n);
  double dp = distance(SpherePoint::plus_pole(n), s);
  double dm = distance(SpherePoint::minus_pole(n), s);
  if (dp <= 1e-12 || dm <= 1e-12)
    throw SingularPoint("theta is singular at the two poles");
  return cpow(dp, -rho - lambda + zeta) * cpow(dm, -rho - lambda - zeta);
}

// theta as a ScalarField, for feeding the principal series action.
inline ScalarField theta_field(cplx lambda, cplx zeta) {
  return [lambda, zeta](const SpherePoint& s) { return theta(lambda, zeta, s); };
}

// -- the P map and the tensor-product action ----------------------------------------------

// (P_{sigma,tau} f)(g) = kappa(g, plus)^{rho+sigma} kappa(g, minus)^{rho+tau}
//                        * f(g(plus), g(minus)).
inline cplx p_map(cplx sigma, cplx tau, const PairField& f, const GroupElement& g) {
  int n = g.dim();
  double rho = half_sphere_dim(n);
  SpherePoint plus = SpherePoint::plus_pole(n), minus = SpherePoint::minus_pole(n);
  double kp = conformal_factor(g, plus);
  double km = conformal_factor(g, minus);
  return cpow(kp, rho + sigma) * cpow(km, rho + tau) * f(act(g, plus), act(g, minus));
}

// The two-slot principal series: kappa(g^{-1},x1)^{rho+sigma}
// kappa(g^{-1},x2)^{rho+tau} f(g^{-1}(x1), g^{-1}(x2)).
inline PairField tensor_rep_apply(cplx sigma, cplx tau, const GroupElement& g,
                                  PairField f) {
  GroupElement ginv = inverse(g);
  double rho = half_sphere_dim(g.dim());
  return [ginv, sigma, tau, rho, f = std::move(f)](const SpherePoint& x1,
                                                   const SpherePoint& x2) {
    double k1 = conformal_factor(ginv, x1);
    double k2 = conformal_factor(ginv, x2);
    return cpow(k1, rho + sigma) * cpow(k2, rho + tau) * f(act(ginv, x1), act(ginv, x2));
  };
}

// Weight of the invariant measure on ordered distinct pairs: |s-t|^{-2(n-1)}.
inline double gh_measure_weight(const SpherePoint& s, const SpherePoint& t) {
  double d = distance(s, t);
  if (d <= 1e-300) throw CoincidentPoints("pair measure needs distinct points");
  return std::pow(d, -2.0 * (s.dim() - 1));
}

}  // namespace triform

#pragma once

// Spectral parameters, scalar fields on the sphere, the conformal principal
// series action, and the two-point / three-point kernels in both the compact
// picture (on the sphere) and the flat chart picture.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "triform/common.hpp"
#include "triform/lorentz.hpp"

namespace triform {

// -- parameter triples ---------------------------------------------------------

// Three spectral parameters together with the ambient dimension n (the sphere
// is S^{n-1}); rho = (n-1)/2 is derived, not stored.
struct LambdaTriple {
  cplx l1{0.0}, l2{0.0}, l3{0.0};
  int n = 3;
  double rho() const { return half_sphere_dim(n); }
};

struct AlphaTriple {
  cplx a1{0.0}, a2{0.0}, a3{0.0};
  int n = 3;
  double rho() const { return half_sphere_dim(n); }
};

// a_i = -l_i + l_j + l_k for {i,j,k} = {1,2,3}; the inverse halves pair sums.
inline AlphaTriple lambda_to_alpha(const LambdaTriple& l) {
  return AlphaTriple{-l.l1 + l.l2 + l.l3, l.l1 - l.l2 + l.l3, l.l1 + l.l2 - l.l3,
                     l.n};
}

inline LambdaTriple alpha_to_lambda(const AlphaTriple& a) {
  return LambdaTriple{0.5 * (a.a2 + a.a3), 0.5 * (a.a1 + a.a3), 0.5 * (a.a1 + a.a2),
                      a.n};
}

inline cplx alpha_sum(const AlphaTriple& a) { return a.a1 + a.a2 + a.a3; }

// Strict open integrability region of the three-point kernel: every Re a_i
// above -rho and the real part of the sum above -rho as well.
inline bool integrable(const AlphaTriple& a) {
  double rho = a.rho();
  return a.a1.real() > -rho && a.a2.real() > -rho && a.a3.real() > -rho &&
         alpha_sum(a).real() > -rho;
}

// -- fields -----------------------------------------------------------------------

using ScalarField = std::function<cplx(const SpherePoint&)>;
using FieldTriple = std::array<ScalarField, 3>;
using PairField = std::function<cplx(const SpherePoint&, const SpherePoint&)>;
using TripleField =
    std::function<cplx(const SpherePoint&, const SpherePoint&, const SpherePoint&)>;

inline ScalarField constant_field(cplx value) {
  return [value](const SpherePoint&) { return value; };
}

// f(x) = x_{index+1}, the zero-based ambient coordinate restricted to the sphere.
inline ScalarField coordinate_field(int index) {
  return [index](const SpherePoint& x) { return cplx(x[index], 0.0); };
}

// f(x) = prod_k x_{indices[k]+1}: low-degree coordinate products.
inline ScalarField monomial_field(std::vector<int> indices) {
  return [indices = std::move(indices)](const SpherePoint& x) {
    double v = 1.0;
    for (int i : indices) v *= x[i];
    return cplx(v, 0.0);
  };
}

// f(x) = c + sum_i linear[i] * x_{i+1}; handy smooth test fields.
inline ScalarField affine_field(double constant, std::vector<double> linear) {
  return [constant, linear = std::move(linear)](const SpherePoint& x) {
    double v = constant;
    for (size_t i = 0; i < linear.size() && static_cast<int>(i) < x.dim(); ++i)
      v += linear[i] * x[static_cast<int>(i)];
    return cplx(v, 0.0);
  };
}

// F(x1,x2,x3) = f1(x1) f2(x2) f3(x3).
inline TripleField product_field(ScalarField f1, ScalarField f2, ScalarField f3) {
  return [f1 = std::move(f1), f2 = std::move(f2), f3 = std::move(f3)](
             const SpherePoint& x1, const SpherePoint& x2, const SpherePoint& x3) {
    return f1(x1) * f2(x2) * f3(x3);
  };
}

// -- kernels on the sphere ----------------------------------------------------------

// k_a(x, y) = |x - y|^{-rho + a}. On the diagonal the kernel extends by 0 when
// the real exponent is positive (and by 1 when it is exactly zero); otherwise
// the diagonal is a genuine singularity.
inline cplx kernel_k(cplx a, const SpherePoint& x, const SpherePoint& y) {
  double rho = half_sphere_dim(x.dim());
  cplx expo = a - rho;
  double d = distance(x, y);
  if (d > 1e-300) return cpow(d, expo);
  if (expo == cplx(0.0)) return cplx(1.0);
  if (expo.real() > 0.0) return cplx(0.0);
  throw CoincidentPoints("pair kernel evaluated on the diagonal");
}

// K_a(x1, x2, x3) = k_{a1}(x2,x3) k_{a2}(x3,x1) k_{a3}(x1,x2): each parameter
// is attached to the pair that omits the matching point.
inline cplx kernel_K(const AlphaTriple& a, const SpherePoint& x1,
                     const SpherePoint& x2, const SpherePoint& x3) {
  if (a.n != x1.dim())
    throw InvalidConfig("kernel_K: parameter dimension does not match the points");
  return kernel_k(a.a1, x2, x3) * kernel_k(a.a2, x3, x1) * kernel_k(a.a3, x1, x2);
}

// -- principal series action ----------------------------------------------------------

// (pi_lambda(g) f)(x) = kappa(g^{-1}, x)^{rho + lambda} f(g^{-1}(x)).
inline ScalarField rep_apply(cplx lambda, const GroupElement& g, ScalarField f) {
  GroupElement ginv = inverse(g);
  double rho = half_sphere_dim(g.dim());
  return [ginv, lambda, rho, f = std::move(f)](const SpherePoint& x) {
    double kappa = conformal_factor(ginv, x);
    return cpow(kappa, lambda + rho) * f(act(ginv, x));
  };
}

// -- flat chart picture -----------------------------------------------------------------

// J_a(y1, y2, y3) on R^{n-1}: same pair structure as K_a but with Euclidean
// distances in the chart.
inline cplx kernel_J(const AlphaTriple& a, const std::vector<double>& y1,
                     const std::vector<double>& y2, const std::vector<double>& y3) {
  double rho = a.rho();
  auto dist = [](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
      double d = u[i] - v[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
  double d12 = dist(y1, y2), d23 = dist(y2, y3), d31 = dist(y3, y1);
  if (d12 <= 1e-300 || d23 <= 1e-300 || d31 <= 1e-300)
    throw CoincidentPoints("plane kernel evaluated on a diagonal");
  return cpow(d23, a.a1 - rho) * cpow(d31, a.a2 - rho) * cpow(d12, a.a3 - rho);
}

// Psi_a(y1, y2, y3) = prod_i (1 + |y_i|^2)^{-(rho + l_i)}: the weight that
// transports the spherical kernel into the chart. The pointwise bridge is
//   K_a(c(y1), c(y2), c(y3)) * prod_i (1 + |y_i|^2)^{-(n-1)}
//     = 2^{a1+a2+a3-3rho} * J_a(y) * Psi_a(y).
inline cplx psi_weight(const AlphaTriple& a, const std::vector<double>& y1,
                       const std::vector<double>& y2, const std::vector<double>& y3) {
  double rho = a.rho();
  LambdaTriple l = alpha_to_lambda(a);
  auto one_plus_sq = [](const std::vector<double>& y) { return 1.0 + dot(y, y); };
  return cpow(one_plus_sq(y1), -(rho + l.l1)) * cpow(one_plus_sq(y2), -(rho + l.l2)) *
         cpow(one_plus_sq(y3), -(rho + l.l3));
}

}  // namespace triform

#pragma once

// The user-facing trilinear functional: the kernel-weighted triple integral
// over the sphere as a function of the spectral parameters, its conformal
// invariance and duality residuals, and the gamma-normalized variant.

#include <cmath>
#include <utility>

#include "triform/common.hpp"
#include "triform/quadrature.hpp"
#include "triform/representation.hpp"
#include "triform/special.hpp"

namespace triform {

struct TrilinearResult {
  cplx value{0.0, 0.0};
  double error_indicator = 0.0;
  TripleScheme scheme;
};

// T_l(f1, f2, f3) = int K_{a(l)}(x1,x2,x3) f1(x1) f2(x2) f3(x3) dsigma^3.
inline TrilinearResult trilinear(const LambdaTriple& l, const ScalarField& f1,
                                 const ScalarField& f2, const ScalarField& f3,
                                 const TripleScheme& scheme) {
  AlphaTriple a = lambda_to_alpha(l);
  if (!integrable(a)) throw NotIntegrable("parameters outside the open domain");
  IntegralEstimate est = integrate_triple(a, f1, f2, f3, scheme);
  TrilinearResult r;
  r.value = est.value;
  r.error_indicator = est.error_indicator;
  r.scheme = scheme;
  return r;
}

// | T_l(pi(g) f's) - T_l(f's) | / (|T_l(f's)| + 1e-300), both sides evaluated
// with the same scheme and seed so that discretization artifacts cancel.
inline double invariance_residual(const LambdaTriple& l, const ScalarField& f1,
                                  const ScalarField& f2, const ScalarField& f3,
                                  const GroupElement& g, const TripleScheme& scheme) {
  TrilinearResult base = trilinear(l, f1, f2, f3, scheme);
  TrilinearResult moved = trilinear(l, rep_apply(l.l1, g, f1), rep_apply(l.l2, g, f2),
                                    rep_apply(l.l3, g, f3), scheme);
  return std::abs(moved.value - base.value) / (std::abs(base.value) + 1e-300);
}

// | sum_grid pi_{-l}(g)phi * pi_l(g)psi - sum_grid phi * psi | normalized the
// same way: the quadrature-level check of the pairing invariance.
inline double duality_residual(cplx lambda, const ScalarField& phi, const ScalarField& psi,
                               const GroupElement& g, const SphereGrid& grid) {
  ScalarField phi_moved = rep_apply(-lambda, g, phi);
  ScalarField psi_moved = rep_apply(lambda, g, psi);
  ScalarField base_prod = [&phi, &psi](const SpherePoint& x) { return phi(x) * psi(x); };
  ScalarField moved_prod = [&phi_moved, &psi_moved](const SpherePoint& x) {
    return phi_moved(x) * psi_moved(x);
  };
  cplx base = integrate(base_prod, grid);
  cplx moved = integrate(moved_prod, grid);
  return std::abs(moved - base) / (std::abs(base) + 1e-300);
}

// trilinear / normalizer: finite across the pole hyperplanes; for constant
// fields it converges to the normalized closed-form value.
inline TrilinearResult normalized_trilinear(const LambdaTriple& l, const ScalarField& f1,
                                            const ScalarField& f2, const ScalarField& f3,
                                            const TripleScheme& scheme) {
  TrilinearResult r = trilinear(l, f1, f2, f3, scheme);
  cplx norm = normalizer(l, l.n);
  r.value /= norm;
  r.error_indicator /= std::abs(norm);
  return r;
}

}  // namespace triform

#pragma once

// Complex log-gamma and the closed-form evaluation of the sphere-triple
// integral of the three-point kernel, together with its pole bookkeeping.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "triform/common.hpp"
#include "triform/representation.hpp"

namespace triform {

// -- complex log-gamma ---------------------------------------------------------

// Lanczos approximation (g = 7, 9 terms), reflected across Re z = 1/2.
// Throws PoleOfGamma within 1e-12 of a nonpositive integer. The imaginary
// part is not reduced modulo 2*pi*i; exp(log_gamma(z)) is always Gamma(z).
inline cplx log_gamma(cplx z) {
  if (near_nonpositive_integer(z)) throw PoleOfGamma("log_gamma at a nonpositive integer");
  static const double coef[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  cplx zz = z - 1.0;
  cplx a(coef[0], 0.0);
  for (int i = 1; i < 9; ++i) a += coef[i] / (zz + static_cast<double>(i));
  cplx t = zz + 7.5;
  return 0.5 * std::log(2.0 * pi) + (zz + 0.5) * std::log(t) - t + std::log(a);
}

inline cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

// -- closed form of the triple integral ------------------------------------------

// The value of  I(l) = int_{(S^{n-1})^3} K_{a(l)}(x1,x2,x3) dsigma^3 :
//
//   I(l) = (2 pi)^{3 rho} / Gamma(2 rho)
//          * 2^{l1+l2+l3}
//          * Gamma((l1+l2+l3+rho)/2) Gamma((a1+rho)/2) Gamma((a2+rho)/2) Gamma((a3+rho)/2)
//          / ( Gamma(rho+l1) Gamma(rho+l2) Gamma(rho+l3) ),
//
// with rho = (n-1)/2 and a_i = -l_i + l_j + l_k. The four numerator gamma
// factors carry all poles (arguments hitting nonpositive integers exactly on
// the hyperplanes a_j = -rho - 2k and a1+a2+a3 = -rho - 2k); the denominator
// factors contribute zeros.

namespace detail {

// The four numerator gamma arguments, in the order (sum, a1, a2, a3).
inline std::array<cplx, 4> gamma_numerator_args(const LambdaTriple& l) {
  double rho = l.rho();
  AlphaTriple a = lambda_to_alpha(l);
  return {0.5 * (l.l1 + l.l2 + l.l3 + rho), 0.5 * (a.a1 + rho), 0.5 * (a.a2 + rho),
          0.5 * (a.a3 + rho)};
}

inline void require_matching_dimension(int triple_n, int n, const char* where) {
  if (triple_n != n) throw InvalidConfig(std::string(where) + ": dimension mismatch");
}

}  // namespace detail

// Product of the four pole-carrying gamma factors. Throws PoleOfGamma on a
// pole hyperplane.
inline cplx normalizer(const LambdaTriple& l, int n) {
  detail::require_matching_dimension(l.n, n, "normalizer");
  cplx s(0.0, 0.0);
  for (const cplx& arg : detail::gamma_numerator_args(l)) s += log_gamma(arg);
  return std::exp(s);
}

// closed_form_I / normalizer: entire in l (zeros where Gamma(rho + l_j) blows
// up), finite on every pole hyperplane; the four numerator gamma factors
// cancel analytically, so none of them is ever evaluated here.
inline cplx normalized_I(const LambdaTriple& l, int n) {
  detail::require_matching_dimension(l.n, n, "normalized_I");
  double rho = l.rho();
  cplx lg = (3.0 * rho) * std::log(2.0 * pi) - log_gamma(cplx(2.0 * rho, 0.0)) +
            (l.l1 + l.l2 + l.l3) * std::log(2.0);
  cplx value = std::exp(lg);
  for (const cplx& lam : {l.l1, l.l2, l.l3}) {
    cplx arg = rho + lam;
    if (near_nonpositive_integer(arg)) return cplx(0.0, 0.0);  // 1/Gamma vanishes
    value *= std::exp(-log_gamma(arg));
  }
  return value;
}

// The full closed-form value. Throws OnPoleHyperplane when a numerator gamma
// argument sits (within 1e-12) on a nonpositive integer; returns exactly zero
// when only a denominator factor degenerates.
inline cplx closed_form_I(const LambdaTriple& l, int n) {
  detail::require_matching_dimension(l.n, n, "closed_form_I");
  for (const cplx& arg : detail::gamma_numerator_args(l))
    if (near_nonpositive_integer(arg))
      throw OnPoleHyperplane("parameters sit on a pole hyperplane of the closed form");
  double rho = l.rho();
  cplx lg = (3.0 * rho) * std::log(2.0 * pi) - log_gamma(cplx(2.0 * rho, 0.0)) +
            (l.l1 + l.l2 + l.l3) * std::log(2.0);
  for (const cplx& arg : detail::gamma_numerator_args(l)) lg += log_gamma(arg);
  cplx value = std::exp(lg);
  for (const cplx& lam : {l.l1, l.l2, l.l3}) {
    cplx arg = rho + lam;
    if (near_nonpositive_integer(arg)) return cplx(0.0, 0.0);
    value *= std::exp(-log_gamma(arg));
  }
  return value;
}

// Distance (complex modulus) from alpha to the nearest pole hyperplane
// a_j = -rho - 2k or a1+a2+a3 = -rho - 2k, k = 0..kmax.
inline double pole_distance(const AlphaTriple& a, int kmax = 8) {
  double rho = a.rho();
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kmax; ++k) {
    double level = rho + 2.0 * k;
    for (const cplx& aj : {a.a1, a.a2, a.a3, alpha_sum(a)})
      best = std::min(best, std::abs(aj + level));
  }
  return best;
}

}  // namespace triform

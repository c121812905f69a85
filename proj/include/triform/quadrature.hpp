#pragma once

// Quadrature on the sphere and the four estimation schemes for the trilinear
// kernel integral: a tensor-product grid contraction with diagonal excision,
// a singularity-aware Monte Carlo sampler on the sphere, a reduced exact-
// symmetry scheme for the bare kernel, and a flat-chart Monte Carlo scheme.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "triform/common.hpp"
#include "triform/lorentz.hpp"
#include "triform/matrix.hpp"
#include "triform/representation.hpp"

namespace triform {

// -- Gauss-Legendre rules -------------------------------------------------------

struct GaussRule {
  std::vector<double> nodes;    // in (-1, 1), ascending
  std::vector<double> weights;  // sum to 2
};

// Newton iteration on the Legendre recurrence; rules are cached per order.
inline const GaussRule& gauss_legendre(int m) {
  if (m < 1) throw InvalidConfig("quadrature order must be positive");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  GaussRule r;
  r.nodes.resize(m);
  r.weights.resize(m);
  int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -std::abs(x);  // fill ascending from the left
    r.weights[i] = w;
    r.nodes[m - 1 - i] = std::abs(x);
    r.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) r.nodes[m / 2] = 0.0;
  auto [pos, inserted] = cache.emplace(m, std::move(r));
  (void)inserted;
  return pos->second;
}

// -- sphere grids ------------------------------------------------------------------

struct SphereGrid {
  std::vector<SpherePoint> points;
  std::vector<double> weights;  // sum to the measure of S^{n-1}
  int n = 0;                    // ambient dimension
};

// Product grid: Gauss-Legendre in the polar coordinate along the first axis,
// uniform (n = 3) or recursive (n > 3) in the remaining directions. For n = 3
// the rule has 2 * resolution^2 nodes and integrates the measure exactly.
inline SphereGrid sphere_grid(int n, int resolution) {
  if (n < 3) throw UnsupportedDimension("sphere grid needs n >= 3");
  if (resolution < 2) throw InvalidConfig("grid resolution must be at least 2");
  SphereGrid g;
  g.n = n;
  if (n == 3) {
    const GaussRule& rule = gauss_legendre(resolution);
    int m = 2 * resolution;
    double wphi = 2.0 * pi / m;
    g.points.reserve(static_cast<size_t>(resolution) * m);
    g.weights.reserve(static_cast<size_t>(resolution) * m);
    for (int i = 0; i < resolution; ++i) {
      double u = rule.nodes[i];  // cos(theta), measured from the first axis
      double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int j = 0; j < m; ++j) {
        double phi = wphi * j;
        g.points.push_back(SpherePoint({u, s * std::cos(phi), s * std::sin(phi)}));
        g.weights.push_back(rule.weights[i] * wphi);
      }
    }
    return g;
  }
  // polar slice about the first axis over a grid of the equatorial sphere
  int mres = std::max(resolution, 24);
  const GaussRule& rule = gauss_legendre(mres);
  SphereGrid sub = sphere_grid(n - 1, resolution);
  g.points.reserve(rule.nodes.size() * sub.points.size());
  g.weights.reserve(rule.nodes.size() * sub.points.size());
  for (int i = 0; i < mres; ++i) {
    double theta = 0.5 * pi * (rule.nodes[i] + 1.0);
    double wt = 0.5 * pi * rule.weights[i] * std::pow(std::sin(theta), n - 2);
    double c = std::cos(theta), s = std::sin(theta);
    for (size_t k = 0; k < sub.points.size(); ++k) {
      std::vector<double> coords(n);
      coords[0] = c;
      for (int d = 0; d < n - 1; ++d) coords[d + 1] = s * sub.points[k][d];
      g.points.push_back(SpherePoint(std::move(coords)));
      g.weights.push_back(wt * sub.weights[k]);
    }
  }
  return g;
}

inline cplx integrate(const ScalarField& f, const SphereGrid& g) {
  cplx s(0.0, 0.0);
  for (size_t i = 0; i < g.points.size(); ++i) s += g.weights[i] * f(g.points[i]);
  return s;
}

// -- scheme configuration ------------------------------------------------------------

enum class SchemeKind {
  tensor_product,   // grid contraction with diagonal excision
  monte_carlo,      // importance-sampled points on the sphere
  reduced_constant, // exact-symmetry reduction; bare kernel only
  noncompact,       // importance-sampled points in the flat chart
};

struct TripleScheme {
  SchemeKind kind = SchemeKind::tensor_product;
  int resolution = 16;
  std::uint64_t seed = 12345;
  double truncation_radius = 50.0;  // noncompact scheme only
  int threads = 1;
};

struct IntegralEstimate {
  cplx value{0.0, 0.0};
  // Deterministic schemes: difference against a halved-resolution rerun.
  // Monte Carlo schemes: twice the blocked standard error of the mean.
  double error_indicator = 0.0;
};

// -- tensor-product contraction --------------------------------------------------------

namespace detail {

inline double kernel_pow(double base, double e) { return std::pow(base, e); }
inline cplx kernel_pow(double base, cplx e) { return cpow(base, e); }

// T = sum_{i,j,k} u_i v_j t_k A1[j,k] A2[k,i] A3[i,j] in O(N^3) flops,
// deterministic for any thread count (each row j is owned by one worker and
// rows are reduced in index order).
template <typename S, typename E>
S contract_triple(const SphereGrid& g, const std::array<E, 3>& expo,
                  const std::vector<S>& u, const std::vector<S>& v,
                  const std::vector<S>& t, double cutoff, int threads) {
  const int N = static_cast<int>(g.points.size());
  std::vector<S> A1(static_cast<size_t>(N) * N, S(0));
  std::vector<S> A2(static_cast<size_t>(N) * N, S(0));
  std::vector<S> A3(static_cast<size_t>(N) * N, S(0));
  parallel_for(0, N, threads, [&](int a) {
    for (int b = a + 1; b < N; ++b) {
      double d = distance(g.points[a], g.points[b]);
      if (d < cutoff) continue;  // excised band around the diagonal
      A1[static_cast<size_t>(a) * N + b] = kernel_pow(d, expo[0]);
      A2[static_cast<size_t>(a) * N + b] = kernel_pow(d, expo[1]);
      A3[static_cast<size_t>(a) * N + b] = kernel_pow(d, expo[2]);
    }
  });
  for (int a = 0; a < N; ++a)  // symmetrize
    for (int b = 0; b < a; ++b) {
      A1[static_cast<size_t>(a) * N + b] = A1[static_cast<size_t>(b) * N + a];
      A2[static_cast<size_t>(a) * N + b] = A2[static_cast<size_t>(b) * N + a];
      A3[static_cast<size_t>(a) * N + b] = A3[static_cast<size_t>(b) * N + a];
    }

  std::vector<S> row_total(N, S(0));
  parallel_for(0, N, threads, [&](int j) {
    const S* a1j = &A1[static_cast<size_t>(j) * N];
    const S* a3j = &A3[static_cast<size_t>(j) * N];
    std::vector<S> acc(N, S(0));
    for (int k = 0; k < N; ++k) {
      S c = t[k] * a1j[k];
      if (c == S(0)) continue;
      const S* a2k = &A2[static_cast<size_t>(k) * N];
      for (int i = 0; i < N; ++i) acc[i] += c * a2k[i];
    }
    S s(0);
    for (int i = 0; i < N; ++i) s += u[i] * a3j[i] * acc[i];
    row_total[j] = v[j] * s;
  });
  S total(0);
  for (int j = 0; j < N; ++j) total += row_total[j];
  return total;
}

inline cplx tensor_value(const AlphaTriple& a, const FieldTriple& f, int resolution,
                         int threads) {
  int n = a.n;
  double rho = a.rho();
  SphereGrid g = sphere_grid(n, resolution);
  const int N = static_cast<int>(g.points.size());
  double cutoff = 0.5 * pi / resolution;

  std::vector<cplx> u(N), v(N), t(N);
  for (int i = 0; i < N; ++i) {
    u[i] = g.weights[i] * f[0](g.points[i]);
    v[i] = g.weights[i] * f[1](g.points[i]);
    t[i] = g.weights[i] * f[2](g.points[i]);
  }
  std::array<cplx, 3> expo = {a.a1 - rho, a.a2 - rho, a.a3 - rho};

  bool real_path = a.a1.imag() == 0.0 && a.a2.imag() == 0.0 && a.a3.imag() == 0.0;
  for (int i = 0; i < N && real_path; ++i)
    real_path = u[i].imag() == 0.0 && v[i].imag() == 0.0 && t[i].imag() == 0.0;

  if (real_path) {
    std::vector<double> ur(N), vr(N), tr(N);
    for (int i = 0; i < N; ++i) {
      ur[i] = u[i].real();
      vr[i] = v[i].real();
      tr[i] = t[i].real();
    }
    std::array<double, 3> er = {expo[0].real(), expo[1].real(), expo[2].real()};
    return cplx(contract_triple(g, er, ur, vr, tr, cutoff, threads), 0.0);
  }
  return contract_triple(g, expo, u, v, t, cutoff, threads);
}

}  // namespace detail

// Tensor-scheme values at resolution, resolution/2, ..., halving levels-1
// times. Feeds refinement-convergence checks when the kernel singularity
// makes plain grid convergence slow.
inline std::vector<cplx> tensor_refinement_sequence(const AlphaTriple& a,
                                                    const FieldTriple& f, int resolution,
                                                    int levels, int threads = 1) {
  if (!integrable(a)) throw NotIntegrable("parameters outside the open domain");
  if (levels < 1) throw InvalidConfig("levels must be positive");
  std::vector<cplx> seq;
  int res = resolution;
  for (int l = 0; l < levels; ++l) {
    if (res < 4) throw InvalidConfig("resolution underflow in refinement sequence");
    seq.push_back(detail::tensor_value(a, f, res, threads));
    res /= 2;
  }
  return seq;
}

// -- sphere Monte Carlo ------------------------------------------------------------------

namespace detail {

// Exponent of the power-law proposal in s = 1 - <z, y> for a kernel pair with
// parameter a: beta = rho + min(0, Re a - rho) / 2. Matching half the kernel
// singularity keeps the weight bounded near the pair diagonal.
inline double pair_beta(int n, cplx a) {
  double rho = half_sphere_dim(n);
  return rho + 0.5 * std::min(0.0, a.real() - rho);
}

// value = mean of the contributions, indicator = 2 * standard error computed
// from 16 equal blocks of the sample stream.
inline IntegralEstimate blocked_mean(const std::vector<cplx>& block_sums,
                                     long long per_block) {
  IntegralEstimate est;
  int b = static_cast<int>(block_sums.size());
  cplx total(0.0, 0.0);
  for (const cplx& s : block_sums) total += s;
  est.value = total / static_cast<double>(per_block * b);
  double var = 0.0;
  for (const cplx& s : block_sums) {
    cplx m = s / static_cast<double>(per_block);
    var += std::norm(m - est.value);
  }
  var /= (b - 1);
  est.error_indicator = 2.0 * std::sqrt(var / b);
  return est;
}

// Draw y with 1 - <z,y> = s = 2 u^{1/beta} and a uniform equatorial direction.
inline SpherePoint sample_about(const SpherePoint& z, double beta, SeededRng& rng) {
  int n = z.dim();
  double s = 2.0 * std::pow(1.0 - rng.uniform(), 1.0 / beta);  // in (0, 2]
  std::vector<double> u;
  double len = 0.0;
  do {
    u = rng.gaussian_vector(n);
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += u[i] * z[i];
    for (int i = 0; i < n; ++i) u[i] -= proj * z[i];
    len = norm(u);
  } while (len < 1e-8);
  double radial = 1.0 - s, tangential = std::sqrt(std::max(0.0, s * (2.0 - s)));
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = radial * z[i] + tangential * u[i] / len;
  return SpherePoint(std::move(c));
}

// Density of sample_about w.r.t. the sphere measure.
inline double density_about(const SpherePoint& z, double beta, const SpherePoint& y) {
  int n = z.dim();
  double s = 0.5 * distance(z, y) * distance(z, y);  // 1 - <z,y>
  if (s <= 0.0 || s > 2.0) return 0.0;
  double q = beta * std::pow(s, beta - 1.0) / std::pow(2.0, beta);
  double equatorial = sphere_measure(n - 2) * std::pow(s * (2.0 - s), 0.5 * (n - 3));
  return q / equatorial;
}

inline IntegralEstimate mc_sphere_value(const AlphaTriple& a, const FieldTriple& f,
                                        const TripleScheme& sch) {
  int n = a.n;
  double omega = sphere_measure(n - 1);
  double b12 = pair_beta(n, a.a3);  // pair (x1, x2)
  double b23 = pair_beta(n, a.a1);  // pair (x2, x3)
  double b13 = pair_beta(n, a.a2);  // pair (x1, x3)
  SeededRng rng(sch.seed);
  long long total = static_cast<long long>(sch.resolution) * sch.resolution * sch.resolution;
  const int blocks = 16;
  long long per_block = total / blocks;
  if (per_block < 1) throw InvalidConfig("sample budget too small");

  std::vector<cplx> block_sums(blocks, cplx(0.0, 0.0));
  for (int b = 0; b < blocks; ++b) {
    for (long long it = 0; it < per_block; ++it) {
      SpherePoint x1 = random_sphere_point(n, rng);
      SpherePoint x2 = sample_about(x1, b12, rng);
      // mixture proposal for x3: half around x2, half around x1
      bool from_x2 = rng.uniform() < 0.5;
      SpherePoint x3 = from_x2 ? sample_about(x2, b23, rng) : sample_about(x1, b13, rng);
      double p3 = 0.5 * density_about(x2, b23, x3) + 0.5 * density_about(x1, b13, x3);
      double p = (1.0 / omega) * density_about(x1, b12, x2) * p3;
      double dmin = std::min({distance(x1, x2), distance(x2, x3), distance(x1, x3)});
      if (dmin > 1e-14 && p > 0.0)
        block_sums[b] += kernel_K(a, x1, x2, x3) * f[0](x1) * f[1](x2) * f[2](x3) / p;
    }
  }
  return blocked_mean(block_sums, per_block);
}

}  // namespace detail

// -- reduced scheme for the bare kernel ---------------------------------------------------

// Integral of K_a over (S^{n-1})^3 by symmetry reduction: the third point is
// frozen at the first-axis pole (a measure factor), the second lives on a
// polar arc (another factor), and the first is integrated in polar
// coordinates split along the perpendicular bisector of the two marked
// points, so each half sees exactly one kernel singularity, absorbed by a
// power-law substitution. All three levels use Gauss-Legendre rules.
inline IntegralEstimate reduced_constant_K(const AlphaTriple& a, int n, int resolution) {
  if (a.n != n) throw InvalidConfig("reduced_constant_K: dimension mismatch");
  if (!integrable(a)) throw NotIntegrable("parameters outside the open domain");
  if (resolution < 4) throw InvalidConfig("reduced scheme needs resolution >= 4");
  double rho = a.rho();

  // inner radial substitutions theta = limit * u^{1/m}
  double m_inner_I = a.a2.real() + rho;   // chart about the frozen pole
  double m_inner_II = a.a3.real() + rho;  // chart about the arc point
  double m_outer =
      std::min(a.a1.real() + rho, alpha_sum(a).real() + rho);  // collapse of the arc

  auto eval = [&](int res) -> cplx {
    const GaussRule& rule = gauss_legendre(res);
    // u-values and weights for a stretched [0,1] rule
    auto stretched = [&](double m, std::vector<double>& x, std::vector<double>& w) {
      double mm = std::max(m, 0.05);  // any positive power is exact; tiny ones overflow
      x.resize(res);
      w.resize(res);
      for (int i = 0; i < res; ++i) {
        double u = 0.5 * (rule.nodes[i] + 1.0);
        x[i] = std::pow(u, 1.0 / mm);
        w[i] = 0.5 * rule.weights[i] * std::pow(u, 1.0 / mm - 1.0) / mm;
      }
    };
    std::vector<double> tu, tw;  // outer arc variable
    stretched(m_outer, tu, tw);

    std::vector<double> phi(res), wphi(res);
    for (int i = 0; i < res; ++i) {
      phi[i] = 0.5 * pi * (rule.nodes[i] + 1.0);
      wphi[i] = 0.5 * pi * rule.weights[i];
    }

    std::vector<double> ru_I, rw_I, ru_II, rw_II;  // inner radial variables
    stretched(m_inner_I, ru_I, rw_I);
    stretched(m_inner_II, ru_II, rw_II);

    cplx outer_sum(0.0, 0.0);
    for (int i2 = 0; i2 < res; ++i2) {
      double theta2 = pi * tu[i2];
      double w2 = pi * tw[i2];
      double cot_half = std::cos(0.5 * theta2) / std::sin(0.5 * theta2);
      double c2 = std::cos(theta2), s2 = std::sin(theta2);
      cplx arc_factor = cpow(2.0 * std::sin(0.5 * theta2), a.a1 - rho) *
                        std::pow(std::abs(s2), n - 2);

      // one polar chart: radial power m_r, radial kernel parameter ar on the
      // chart's own pole, cross parameter ax against the opposite point
      auto chart = [&](const std::vector<double>& ru, const std::vector<double>& rw,
                       cplx ar, cplx ax) -> cplx {
        cplx acc(0.0, 0.0);
        for (int ip = 0; ip < res; ++ip) {
          double cphi = std::cos(phi[ip]);
          double wside = wphi[ip] * std::pow(std::sin(phi[ip]), n - 3);
          double limit = std::atan2(1.0, cot_half * cphi);  // bisector cut
          cplx inner(0.0, 0.0);
          for (int ir = 0; ir < res; ++ir) {
            double theta = limit * ru[ir];
            double st = std::sin(theta);
            double cross_sq = 2.0 - 2.0 * (c2 * std::cos(theta) + s2 * st * cphi);
            double cross = std::sqrt(std::max(cross_sq, 0.0));
            inner += (limit * rw[ir]) * std::pow(st, n - 2) *
                     cpow(2.0 * std::sin(0.5 * theta), ar - rho) * cpow(cross, ax - rho);
          }
          acc += wside * inner;
        }
        return acc;
      };
      cplx h = chart(ru_I, rw_I, a.a2, a.a3) + chart(ru_II, rw_II, a.a3, a.a2);
      outer_sum += w2 * arc_factor * h;
    }
    return sphere_measure(n - 1) * sphere_measure(n - 2) * sphere_measure(n - 3) *
           outer_sum;
  };

  IntegralEstimate est;
  est.value = eval(resolution);
  est.error_indicator = std::abs(est.value - eval(resolution / 2));
  return est;
}

// -- flat chart Monte Carlo ------------------------------------------------------------------

namespace detail {

inline double plane_beta(int n, cplx a) {
  double rho = half_sphere_dim(n);
  return (n - 1) + std::min(0.0, a.real() - rho);
}

inline std::vector<double> plane_dir(int d, SeededRng& rng) {
  std::vector<double> u;
  double len = 0.0;
  do {
    u = rng.gaussian_vector(d);
    len = norm(u);
  } while (len < 1e-8);
  for (auto& e : u) e /= len;
  return u;
}

inline std::vector<double> plane_sample_about(const std::vector<double>& z, double beta,
                                              double rmax, SeededRng& rng) {
  int d = static_cast<int>(z.size());
  double r = rmax * std::pow(1.0 - rng.uniform(), 1.0 / beta);
  std::vector<double> u = plane_dir(d, rng);
  std::vector<double> y(z);
  for (int i = 0; i < d; ++i) y[i] += r * u[i];
  return y;
}

inline double plane_density_about(const std::vector<double>& z, double beta, double rmax,
                                  const std::vector<double>& y) {
  int d = static_cast<int>(z.size());
  std::vector<double> diff(y);
  for (int i = 0; i < d; ++i) diff[i] -= z[i];
  double r = norm(diff);
  if (r <= 0.0 || r > rmax) return 0.0;
  double q = beta * std::pow(r, beta - 1.0) / std::pow(rmax, beta);
  return q / (sphere_measure(d - 1) * std::pow(r, d - 1));
}

// Pushforward of the uniform sphere measure through the chart: matches the
// bulk and the |y| -> infinity falloff of the integrand exactly.
inline std::vector<double> chart_sample(int n, SeededRng& rng) {
  for (;;) {
    SpherePoint x = random_sphere_point(n, rng);
    if (distance(x, SpherePoint::minus_pole(n)) > 1e-12) return stereographic_inv(x);
  }
}

inline double chart_density(int n, const std::vector<double>& y) {
  double rho = half_sphere_dim(n);
  return std::pow(2.0, 2.0 * rho) * std::pow(1.0 + dot(y, y), -2.0 * rho) /
         sphere_measure(n - 1);
}

}  // namespace detail

// Plane-picture Monte Carlo estimate of int K_a F dsigma^3 for F evaluable on
// (S^{n-1})^3, restricted to a chart ball of the given radius in each factor.
// Proposals mix pair-singularity power laws with the chart pushforward of the
// uniform sphere measure, so the singular corners and the far field are all
// dominated.
inline IntegralEstimate noncompact_K(const AlphaTriple& a, const TripleField& f,
                                     double truncation_radius, int resolution,
                                     std::uint64_t seed = 12345) {
  int n = a.n;
  double rho = a.rho();
  // Decay check first: it is the truncation-specific refusal, and it would be
  // masked by the integrability guard otherwise (open-domain parameters always
  // satisfy the pair bounds).
  if (a.a1.real() + a.a2.real() <= -2.0 * rho || a.a2.real() + a.a3.real() <= -2.0 * rho ||
      a.a1.real() + a.a3.real() <= -2.0 * rho)
    throw TruncationUnsound("pair exponents too singular for a truncated chart integral");
  if (!integrable(a)) throw NotIntegrable("parameters outside the open domain");
  int d = n - 1;
  double radius = truncation_radius;
  if (radius <= 1.0) throw InvalidConfig("truncation radius must exceed 1");
  double rmax = 2.0 * radius;
  double b12 = detail::plane_beta(n, a.a3);
  double b23 = detail::plane_beta(n, a.a1);
  double b13 = detail::plane_beta(n, a.a2);
  cplx bridge = cpow(2.0, 3.0 * rho + alpha_sum(a));

  SeededRng rng(seed);
  long long total = static_cast<long long>(resolution) * resolution * resolution;
  const int blocks = 16;
  long long per_block = total / blocks;
  if (per_block < 1) throw InvalidConfig("sample budget too small");

  auto dist = [](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
    return std::sqrt(s);
  };
  (void)d;

  std::vector<cplx> block_sums(blocks, cplx(0.0, 0.0));
  for (int b = 0; b < blocks; ++b) {
    for (long long it = 0; it < per_block; ++it) {
      // y1 from the chart bulk; y2 and y3 from mixtures of pair-singularity
      // power laws and the chart bulk, so every singular corner and the far
      // field are all covered by some mixture component.
      std::vector<double> y1 = detail::chart_sample(n, rng);
      std::vector<double> y2 = rng.uniform() < 0.5
                                   ? detail::plane_sample_about(y1, b12, rmax, rng)
                                   : detail::chart_sample(n, rng);
      double p2 = 0.5 * detail::plane_density_about(y1, b12, rmax, y2) +
                  0.5 * detail::chart_density(n, y2);
      double u3 = rng.uniform();
      std::vector<double> y3 = u3 < 1.0 / 3.0
                                   ? detail::plane_sample_about(y2, b23, rmax, rng)
                               : u3 < 2.0 / 3.0
                                   ? detail::plane_sample_about(y1, b13, rmax, rng)
                                   : detail::chart_sample(n, rng);
      double p3 = (detail::plane_density_about(y2, b23, rmax, y3) +
                   detail::plane_density_about(y1, b13, rmax, y3) +
                   detail::chart_density(n, y3)) /
                  3.0;
      double p = detail::chart_density(n, y1) * p2 * p3;

      bool inside = norm(y1) <= radius && norm(y2) <= radius && norm(y3) <= radius;
      double dmin = std::min({dist(y1, y2), dist(y2, y3), dist(y1, y3)});
      if (inside && p > 0.0 && dmin > 1e-14)
        block_sums[b] += bridge * kernel_J(a, y1, y2, y3) * psi_weight(a, y1, y2, y3) *
                         f(stereographic(y1), stereographic(y2), stereographic(y3)) / p;
    }
  }
  return detail::blocked_mean(block_sums, per_block);
}

// -- dispatch ------------------------------------------------------------------------------

// Estimate int K_a(x1,x2,x3) f1(x1) f2(x2) f3(x3) dsigma^3. The reduced scheme
// handles the bare kernel only: it evaluates each field at the first-axis
// pole and treats it as a constant, which is exact iff the fields are
// constant. All schemes refuse parameters outside the open integrability
// region.
inline IntegralEstimate integrate_triple(const AlphaTriple& a, const ScalarField& f1,
                                         const ScalarField& f2, const ScalarField& f3,
                                         const TripleScheme& scheme) {
  if (!integrable(a)) throw NotIntegrable("parameters outside the open domain");
  FieldTriple f = {f1, f2, f3};
  switch (scheme.kind) {
    case SchemeKind::tensor_product: {
      if (scheme.resolution < 4) throw InvalidConfig("tensor scheme needs resolution >= 4");
      IntegralEstimate est;
      est.value = detail::tensor_value(a, f, scheme.resolution, scheme.threads);
      cplx coarse = detail::tensor_value(a, f, scheme.resolution / 2, scheme.threads);
      est.error_indicator = std::abs(est.value - coarse);
      return est;
    }
    case SchemeKind::monte_carlo:
      return detail::mc_sphere_value(a, f, scheme);
    case SchemeKind::reduced_constant: {
      IntegralEstimate est = reduced_constant_K(a, a.n, scheme.resolution);
      SpherePoint pole = SpherePoint::plus_pole(a.n);
      cplx c = f1(pole) * f2(pole) * f3(pole);
      est.value *= c;
      est.error_indicator *= std::abs(c);
      return est;
    }
    case SchemeKind::noncompact:
      return noncompact_K(a, product_field(f1, f2, f3), scheme.truncation_radius,
                          scheme.resolution, scheme.seed);
  }
  throw InvalidConfig("unknown scheme");
}

}  // namespace triform

#pragma once

// Shared scalar helpers: error types, complex powers of positive reals,
// deterministic seeded randomness, sphere measures, and a block-parallel loop.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace triform {

using cplx = std::complex<double>;

// -- error taxonomy ---------------------------------------------------------
// Construction-time validation failures derive from invalid_argument; runtime
// mathematical refusals derive from domain_error so callers can map them to a
// distinct process exit status.

struct UnsupportedDimension final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidGroupElement final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidRotation final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PointNotOnSphere final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidConfig final : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalDegeneracy final : std::domain_error {
  using std::domain_error::domain_error;
};
struct PoleOfChart final : std::domain_error {
  using std::domain_error::domain_error;
};
struct CoincidentPoints final : std::domain_error {
  using std::domain_error::domain_error;
};
struct SingularPoint final : std::domain_error {
  using std::domain_error::domain_error;
};
struct PoleOfGamma final : std::domain_error {
  using std::domain_error::domain_error;
};
struct OnPoleHyperplane final : std::domain_error {
  using std::domain_error::domain_error;
};
struct NotIntegrable final : std::domain_error {
  using std::domain_error::domain_error;
};
struct TruncationUnsound final : std::domain_error {
  using std::domain_error::domain_error;
};

// -- scalar helpers ----------------------------------------------------------

inline constexpr double pi = 3.141592653589793238462643383279502884;

// base^e for strictly positive real base: exp(e * ln base) with the real log.
// All fractional powers in this library go through positive reals, so no
// branch-cut decisions ever arise.
inline cplx cpow(double base, cplx e) {
  if (!(base > 0.0)) throw NumericalDegeneracy("cpow requires a positive base");
  double lp = std::log(base);
  double mag = std::exp(e.real() * lp);
  if (e.imag() == 0.0) return {mag, 0.0};
  double arg = e.imag() * lp;
  return {mag * std::cos(arg), mag * std::sin(arg)};
}

// True when z lies within tol of a nonpositive integer (a pole of Gamma).
inline bool near_nonpositive_integer(cplx z, double tol = 1e-12) {
  if (std::abs(z.imag()) > tol) return false;
  double r = std::round(z.real());
  return r <= 0.5 && std::abs(z.real() - r) <= tol;
}

// Surface measure of the unit sphere S^d embedded in R^{d+1}.
// d = 0 gives 2 (two points), d = 1 gives 2*pi, d = 2 gives 4*pi.
inline double sphere_measure(int d) {
  if (d < 0) throw UnsupportedDimension("sphere_measure needs d >= 0");
  return 2.0 * std::pow(pi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

// rho = (n-1)/2 for the sphere S^{n-1} in R^n.
inline double half_sphere_dim(int n) {
  if (n < 3) throw UnsupportedDimension("ambient dimension must be >= 3");
  return 0.5 * (n - 1);
}

// -- deterministic randomness -------------------------------------------------
// mt19937_64 is bit-exactly specified by the standard; the distributions are
// hand-rolled (uniform from the high 53 bits, Gaussian via Marsaglia polar) so
// that a seed pins the entire stream across standard libraries.

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  std::vector<double> gaussian_vector(int d) {
    std::vector<double> g(d);
    for (auto& e : g) e = gaussian();
    return g;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// -- deterministic block parallelism ------------------------------------------
// Each index is processed by exactly one worker and all cross-index reductions
// happen in index order on the caller's side, so results are bit-identical for
// every thread count.

inline void parallel_for(int begin, int end, int threads,
                         const std::function<void(int)>& body) {
  int count = end - begin;
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  int chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int lo = begin + w * chunk;
    int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace triform

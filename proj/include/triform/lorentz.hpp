#pragma once

// Geometry of the unit sphere S^{n-1} in R^n under the identity component of
// the Lorentz group of R^{1,n}, acting conformally through the forward light
// cone. Points carry spatial coordinates (x_1..x_n); ambient Minkowski
// vectors carry an extra 0-th time coordinate. The metric signature is
// (+,-,...,-): q(v) = v_0^2 - sum v_i^2.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "triform/common.hpp"
#include "triform/matrix.hpp"

namespace triform {

// -- points on the sphere -----------------------------------------------------

class SpherePoint {
 public:
  // Validates |"coords"| = 1 within 1e-12 and renormalizes; coordinates within
  // a few ulp of unit length are kept bitwise so that exact group identities
  // (acting by the identity element) return bit-identical points.
  explicit SpherePoint(std::vector<double> coords) : c_(std::move(coords)) {
    if (c_.size() < 3)
      throw UnsupportedDimension("SpherePoint needs ambient dimension >= 3");
    double s = dot(c_, c_);
    if (!(std::abs(s - 1.0) <= 2.1e-12))
      throw PointNotOnSphere("coordinates are off the unit sphere by more than 1e-12");
    if (std::abs(s - 1.0) > 8e-15) {
      double inv = 1.0 / std::sqrt(s);
      for (auto& e : c_) e *= inv;
    }
  }

  int dim() const { return static_cast<int>(c_.size()); }   // ambient n
  double operator[](int i) const { return c_[i]; }          // x_{i+1}
  const std::vector<double>& coords() const { return c_; }

  // Pole fixed by rotations about the first axis; base point of the chart.
  static SpherePoint plus_pole(int n) { return axis_point(n, 0); }
  static SpherePoint minus_pole(int n) {
    std::vector<double> c(n, 0.0);
    c[0] = -1.0;
    return SpherePoint(std::move(c));
  }
  static SpherePoint axis_point(int n, int i) {
    std::vector<double> c(n, 0.0);
    c[i] = 1.0;
    return SpherePoint(std::move(c));
  }

 private:
  std::vector<double> c_;
};

inline double distance(const SpherePoint& x, const SpherePoint& y) {
  double s = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// -- light cone ----------------------------------------------------------------

inline double lorentz_pairing(const std::vector<double>& u,
                              const std::vector<double>& v) {
  double s = u[0] * v[0];
  for (size_t i = 1; i < u.size(); ++i) s -= u[i] * v[i];
  return s;
}

inline double minkowski_q(const std::vector<double>& v) {
  return lorentz_pairing(v, v);
}

// A forward light cone vector: q(v) = 0 within 1e-10 (relative to v_0^2), v_0 > 0.
struct LightconeVector {
  std::vector<double> v;

  explicit LightconeVector(std::vector<double> entries) : v(std::move(entries)) {
    if (v.size() < 4)
      throw UnsupportedDimension("LightconeVector needs ambient dimension >= 3");
    if (!(v[0] > 0.0))
      throw NumericalDegeneracy("light cone vector must point forward (v_0 > 0)");
    if (std::abs(minkowski_q(v)) > 1e-10 * v[0] * v[0])
      throw NumericalDegeneracy("vector is off the light cone");
  }

  // Radial projection back to the sphere: divide the spatial part by v_0.
  SpherePoint project() const {
    std::vector<double> c(v.begin() + 1, v.end());
    double inv = 1.0 / v[0];
    for (auto& e : c) e *= inv;
    return SpherePoint(std::move(c));
  }
};

inline std::vector<double> lift_raw(const SpherePoint& x) {
  std::vector<double> v(x.dim() + 1);
  v[0] = 1.0;
  for (int i = 0; i < x.dim(); ++i) v[i + 1] = x[i];
  return v;
}

inline LightconeVector lift(const SpherePoint& x) {
  return LightconeVector(lift_raw(x));
}

// [lift(x), lift(y)] = 1 - <x,y> = |x-y|^2 / 2, the basic pairing identity.
inline double lightcone_pairing(const SpherePoint& x, const SpherePoint& y) {
  return lorentz_pairing(lift_raw(x), lift_raw(y));
}

// -- group elements --------------------------------------------------------------

inline Mat minkowski_eta(int n) {
  Mat e(n + 1);
  e(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) e(i, i) = -1.0;
  return e;
}

// Element of the identity component: preserves q, det = +1, g_00 >= 1.
class GroupElement {
 public:
  explicit GroupElement(Mat m) : m_(std::move(m)) {
    int sz = m_.size();
    if (sz < 4) throw UnsupportedDimension("group element needs ambient dimension >= 3");
    Mat eta = minkowski_eta(sz - 1);
    Mat gram = m_.transposed() * eta * m_;
    if (gram.max_abs_diff(eta) > 1e-10)
      throw InvalidGroupElement("matrix does not preserve the Lorentz form");
    if (std::abs(m_.determinant() - 1.0) > 1e-10)
      throw InvalidGroupElement("determinant is not +1");
    if (!(m_(0, 0) >= 1.0 - 1e-10))
      throw InvalidGroupElement("matrix reverses the forward light cone");
  }

  int dim() const { return m_.size() - 1; }  // ambient n
  const Mat& matrix() const { return m_; }

  static GroupElement identity(int n) { return GroupElement(Mat::identity(n + 1)); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement(a.m_ * b.m_);
  }

 private:
  Mat m_;
};

// g^{-1} = eta g^T eta, exact for Lorentz matrices.
inline GroupElement inverse(const GroupElement& g) {
  Mat eta = minkowski_eta(g.dim());
  return GroupElement(eta * g.matrix().transposed() * eta);
}

// -- generators -------------------------------------------------------------------

// Rotation block-diag(1, u) for u in SO(n).
inline GroupElement make_rotation(const Mat& u) {
  int n = u.size();
  if (n < 3) throw UnsupportedDimension("rotation needs n >= 3");
  if ((u.transposed() * u).max_abs_diff(Mat::identity(n)) > 1e-10)
    throw InvalidRotation("matrix is not orthogonal");
  if (std::abs(u.determinant() - 1.0) > 1e-10)
    throw InvalidRotation("rotation must have determinant +1");
  Mat m = Mat::identity(n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i + 1, j + 1) = u(i, j);
  return GroupElement(m);
}

// Boost in the distinguished (x_1) direction by parameter t.
inline GroupElement make_boost(int n, double t) {
  if (n < 3) throw UnsupportedDimension("boost needs n >= 3");
  Mat m = Mat::identity(n + 1);
  m(0, 0) = std::cosh(t);
  m(0, 1) = std::sinh(t);
  m(1, 0) = std::sinh(t);
  m(1, 1) = std::cosh(t);
  return GroupElement(m);
}

// Upper-triangular translation subgroup: fixes the plus pole.
inline GroupElement make_n_translation(const std::vector<double>& xi) {
  int n = static_cast<int>(xi.size()) + 1;
  if (n < 3) throw UnsupportedDimension("translation parameter needs >= 2 entries");
  double s = dot(xi, xi);
  Mat m = Mat::identity(n + 1);
  m(0, 0) = 1.0 + 0.5 * s;
  m(0, 1) = -0.5 * s;
  m(1, 0) = 0.5 * s;
  m(1, 1) = 1.0 - 0.5 * s;
  for (int i = 0; i < n - 1; ++i) {
    m(0, 2 + i) = xi[i];
    m(1, 2 + i) = xi[i];
    m(2 + i, 0) = xi[i];
    m(2 + i, 1) = -xi[i];
  }
  return GroupElement(m);
}

// Opposite translation subgroup: fixes the minus pole, parametrizes the chart.
inline GroupElement make_nbar_translation(const std::vector<double>& xi) {
  int n = static_cast<int>(xi.size()) + 1;
  if (n < 3) throw UnsupportedDimension("translation parameter needs >= 2 entries");
  double s = dot(xi, xi);
  Mat m = Mat::identity(n + 1);
  m(0, 0) = 1.0 + 0.5 * s;
  m(0, 1) = 0.5 * s;
  m(1, 0) = -0.5 * s;
  m(1, 1) = 1.0 - 0.5 * s;
  for (int i = 0; i < n - 1; ++i) {
    m(0, 2 + i) = xi[i];
    m(1, 2 + i) = -xi[i];
    m(2 + i, 0) = xi[i];
    m(2 + i, 1) = xi[i];
  }
  return GroupElement(m);
}

enum class GeneratorKind { rotation, boost, n_translation, nbar_translation };

// One-argument generator factory; the parameter type must match the kind
// (rotation takes an SO(n) matrix, boost a real together with the ambient
// dimension, the two translation kinds a vector in R^{n-1}).
inline GroupElement make_generator(GeneratorKind kind, const Mat& u) {
  if (kind != GeneratorKind::rotation)
    throw InvalidConfig("matrix parameter is only valid for the rotation kind");
  return make_rotation(u);
}

inline GroupElement make_generator(GeneratorKind kind, double t, int n = 3) {
  if (kind != GeneratorKind::boost)
    throw InvalidConfig("scalar parameter is only valid for the boost kind");
  return make_boost(n, t);
}

inline GroupElement make_generator(GeneratorKind kind, const std::vector<double>& xi) {
  if (kind == GeneratorKind::n_translation) return make_n_translation(xi);
  if (kind == GeneratorKind::nbar_translation) return make_nbar_translation(xi);
  throw InvalidConfig("vector parameter is only valid for the translation kinds");
}

// -- conformal action ---------------------------------------------------------------

// g(x): push the lift through g and project back to the sphere.
inline SpherePoint act(const GroupElement& g, const SpherePoint& x) {
  std::vector<double> v = g.matrix().apply(lift_raw(x));
  if (!(v[0] > 1e-300)) throw NumericalDegeneracy("image left the forward cone");
  std::vector<double> c(v.begin() + 1, v.end());
  double inv = 1.0 / v[0];
  if (v[0] != 1.0)
    for (auto& e : c) e *= inv;
  return SpherePoint(std::move(c));
}

// kappa(g, x) = (g lift(x))_0^{-1}: the conformal factor of g at x.
// Cocycle: kappa(g1 g2, x) = kappa(g1, g2(x)) kappa(g2, x).
inline double conformal_factor(const GroupElement& g, const SpherePoint& x) {
  const Mat& m = g.matrix();
  double t = m(0, 0);
  for (int i = 0; i < x.dim(); ++i) t += m(0, i + 1) * x[i];
  if (!(t > 1e-300)) throw NumericalDegeneracy("conformal factor degenerate");
  return 1.0 / t;
}

// Jacobian of x -> g(x) on the sphere: kappa^{n-1}.
inline double jacobian(const GroupElement& g, const SpherePoint& x) {
  return std::pow(conformal_factor(g, x), x.dim() - 1);
}

// -- stereographic chart --------------------------------------------------------------

// xi in R^{n-1} -> sphere minus the minus pole.
inline SpherePoint stereographic(const std::vector<double>& xi) {
  int n = static_cast<int>(xi.size()) + 1;
  if (n < 3) throw UnsupportedDimension("chart parameter needs >= 2 entries");
  double s = dot(xi, xi);
  std::vector<double> c(n);
  double inv = 1.0 / (1.0 + s);
  c[0] = (1.0 - s) * inv;
  for (int i = 0; i < n - 1; ++i) c[i + 1] = 2.0 * xi[i] * inv;
  return SpherePoint(std::move(c));
}

inline std::vector<double> stereographic_inv(const SpherePoint& x) {
  int n = x.dim();
  double d_pole = distance(x, SpherePoint::minus_pole(n));
  if (d_pole <= 1e-12) throw PoleOfChart("point is the chart pole");
  std::vector<double> xi(n - 1);
  double inv = 1.0 / (1.0 + x[0]);
  for (int i = 0; i < n - 1; ++i) xi[i] = x[i + 1] * inv;
  return xi;
}

// -- Iwasawa decomposition ---------------------------------------------------------------

struct IwasawaDecomposition {
  Mat rotation;                     // n x n special orthogonal block
  double boost_param = 0.0;         // t
  std::vector<double> translation;  // xi, n-1 entries
};

namespace detail {

// Any SO(n) matrix mapping e_1 to the unit vector s (rotation in their 2-plane).
inline Mat rotation_taking_first_axis_to(const std::vector<double>& s) {
  int n = static_cast<int>(s.size());
  double c = s[0];
  if (c > 1.0 - 1e-14) return Mat::identity(n);
  Mat r = Mat::identity(n);
  if (c < -1.0 + 1e-14) {  // antipodal: half-turn in the (e_1, e_2) plane
    r(0, 0) = -1.0;
    r(1, 1) = -1.0;
    return r;
  }
  std::vector<double> v(s);
  v[0] -= c;
  double sn = norm(v);  // sin of the angle between e_1 and s
  for (auto& e : v) e /= sn;
  // rotation by angle theta in span{e_1, v}: R = I + (c-1)(e1 e1^T + v v^T) + sn (v e1^T - e1 v^T)
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r(i, j) += (c - 1.0) * (e1[i] * e1[j] + v[i] * v[j]) +
                 sn * (v[i] * e1[j] - e1[i] * v[j]);
  return r;
}

}  // namespace detail

// g = rotation * boost * n-translation. The ray through w+ = (1,1,0,...,0) is
// fixed by the translation subgroup and scaled by e^t under the boost, which
// pins t and the rotation's first column; the residual stabilizer part of the
// rotation is recovered from p = boost(-t) k0^{-1} g, whose row 0 is the row 0
// of a pure n-translation.
inline IwasawaDecomposition iwasawa(const GroupElement& g) {
  int n = g.dim();
  std::vector<double> wplus(n + 1, 0.0);
  wplus[0] = 1.0;
  wplus[1] = 1.0;
  std::vector<double> im = g.matrix().apply(wplus);
  if (!(im[0] > 1e-300)) throw NumericalDegeneracy("Iwasawa image degenerate");
  double t = std::log(im[0]);

  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = im[i + 1] / im[0];
  {
    double inv = 1.0 / norm(s);
    for (auto& e : s) e *= inv;
  }
  Mat k0 = detail::rotation_taking_first_axis_to(s);

  GroupElement k0g = make_rotation(k0);
  Mat p = (make_boost(n, -t) * inverse(k0g) * g).matrix();

  std::vector<double> xi(n - 1);
  for (int i = 0; i < n - 1; ++i) xi[i] = p(0, 2 + i);

  // strip the translation: what remains is block-diag(1, m) with m in SO(n)
  Mat rest = p * make_n_translation(scaled(xi, -1.0)).matrix();
  Mat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rest(i + 1, j + 1);

  IwasawaDecomposition dec;
  dec.rotation = k0 * m;
  dec.boost_param = t;
  dec.translation = std::move(xi);
  return dec;
}

inline GroupElement assemble_iwasawa(int n, const IwasawaDecomposition& d) {
  return make_rotation(d.rotation) * make_boost(n, d.boost_param) *
         make_n_translation(d.translation);
}

// -- orbit classification -------------------------------------------------------------------

// Equality pattern of an ordered triple under the diagonal action; the five
// classes exhaust (S^{n-1})^3. O0 is the open orbit of pairwise-distinct
// triples, O4 the full diagonal; Oi (i = 1, 2, 3) has the lone point in slot i.
enum class OrbitLabel {
  O0,  // pairwise distinct
  O1,  // (a, b, b) with a != b
  O2,  // (a, b, a) with a != b
  O3,  // (a, a, b) with a != b
  O4,  // (a, a, a)
};

inline std::string to_string(OrbitLabel l) {
  switch (l) {
    case OrbitLabel::O0: return "O0";
    case OrbitLabel::O1: return "O1";
    case OrbitLabel::O2: return "O2";
    case OrbitLabel::O3: return "O3";
    case OrbitLabel::O4: return "O4";
  }
  return "O0";
}

// Tolerance is chordal; two or more coincident pairs collapse to O4 so the
// answer is total even when tolerance comparisons are not transitive.
inline OrbitLabel classify_orbit(const SpherePoint& x1, const SpherePoint& x2,
                                 const SpherePoint& x3, double tol = 1e-9) {
  bool e12 = distance(x1, x2) <= tol;
  bool e23 = distance(x2, x3) <= tol;
  bool e13 = distance(x1, x3) <= tol;
  int count = (e12 ? 1 : 0) + (e23 ? 1 : 0) + (e13 ? 1 : 0);
  if (count >= 2) return OrbitLabel::O4;
  if (e23) return OrbitLabel::O1;
  if (e13) return OrbitLabel::O2;
  if (e12) return OrbitLabel::O3;
  return OrbitLabel::O0;
}

// -- seeded random elements --------------------------------------------------------------------

inline SpherePoint random_sphere_point(int n, SeededRng& rng) {
  std::vector<double> v;
  double len = 0.0;
  do {
    v = rng.gaussian_vector(n);
    len = norm(v);
  } while (len < 1e-6);
  for (auto& e : v) e /= len;
  return SpherePoint(std::move(v));
}

// rotation * boost(|t| <= scale) * n-translation(|xi| <= scale), deterministic
// in the seed. scale = 0 gives a pure rotation.
inline GroupElement random_group_element(std::uint64_t seed, double scale, int n = 3) {
  if (n < 3) throw UnsupportedDimension("ambient dimension must be >= 3");
  if (scale < 0.0) throw InvalidConfig("scale must be nonnegative");
  SeededRng rng(seed);
  Mat u = random_special_orthogonal(n, rng);
  double t = rng.uniform(-scale, scale);
  std::vector<double> dir;
  double len = 0.0;
  do {
    dir = rng.gaussian_vector(n - 1);
    len = norm(dir);
  } while (len < 1e-6);
  double r = scale * rng.uniform();
  for (auto& e : dir) e *= r / len;
  return make_rotation(u) * make_boost(n, t) * make_n_translation(dir);
}

}  // namespace triform

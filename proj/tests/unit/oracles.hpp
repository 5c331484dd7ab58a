#pragma once

// Independent reference computations for the tests.  Nothing here calls
// into the library except for plain data types.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using C = std::complex<double>;
using V3 = Eigen::Vector3d;
using V4 = Eigen::Vector4d;
using CV3 = Eigen::Vector3cd;
constexpr double pi = std::numbers::pi;

/// Hopf-type variables straight from their rational formula.
inline void hopf_alpha_beta(double x, double y, double z, double t, C& a, C& b) {
  const C I(0.0, 1.0);
  const double r2 = x * x + y * y + z * z;
  const C D = r2 - (t - I) * (t - I);
  a = (r2 - t * t - 1.0 + 2.0 * I * z) / D;
  b = 2.0 * (x - I * y) / D;
}

/// Fourth-order central difference of a scalar function of one variable.
template <class F>
auto d1(F f, double x, double h = 1e-3) {
  using R = decltype(f(x));
  const R a = f(x - 2 * h), b = f(x - h), c = f(x + h), d = f(x + 2 * h);
  return R((a - 8.0 * b + 8.0 * c - d) / (12.0 * h));
}

/// Cross product without conjugation.
inline CV3 cross(const CV3& a, const CV3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Riemann-Silberstein field of the Hopf variables for holomorphic h,
/// with gradients taken by finite differences.
inline CV3 fd_field(const std::function<C(C, C)>& h, const V3& r, double t) {
  CV3 ga;
  CV3 gb;
  for (int k = 0; k < 3; ++k) {
    auto fa = [&](double s) {
      V3 q = r;
      q[k] = s;
      C a, b;
      hopf_alpha_beta(q[0], q[1], q[2], t, a, b);
      return a;
    };
    auto fb = [&](double s) {
      V3 q = r;
      q[k] = s;
      C a, b;
      hopf_alpha_beta(q[0], q[1], q[2], t, a, b);
      return b;
    };
    ga[k] = d1(fa, r[k], 1e-4);
    gb[k] = d1(fb, r[k], 1e-4);
  }
  C a, b;
  hopf_alpha_beta(r[0], r[1], r[2], t, a, b);
  return h(a, b) * cross(ga, gb);
}

/// Gauss double integral sum over segment midpoints of two closed polygons.
inline double gauss_linking(const std::vector<V3>& a, const std::vector<V3>& b) {
  double s = 0.0;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    const V3 da = a[(i + 1) % n] - a[i];
    const V3 ma = 0.5 * (a[(i + 1) % n] + a[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const V3 db = b[(j + 1) % m] - b[j];
      const V3 mb = 0.5 * (b[(j + 1) % m] + b[j]);
      const V3 r = ma - mb;
      s += r.dot(da.cross(db)) / std::pow(r.norm(), 3);
    }
  }
  return s / (4.0 * pi);
}

/// Accumulated argument change of a closed loop of complex samples, in turns.
inline double winding(const std::vector<C>& w) {
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    total += std::arg(w[(i + 1) % w.size()] / w[i]);
  }
  return total / (2.0 * pi);
}

/// Classical fixed-step RK4 for y' = f(t, y).
template <class Y, class F>
Y rk4(F f, Y y, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int i = 0; i < steps; ++i) {
    const Y k1 = f(t, y);
    const Y k2 = f(t + h / 2, Y(y + h / 2 * k1));
    const Y k3 = f(t + h / 2, Y(y + h / 2 * k2));
    const Y k4 = f(t + h, Y(y + h * k3));
    y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return y;
}

/// min over 1 <= q <= qmax of q^tau |w - p/q| / gamma with p the nearest
/// integer; below 1 means the Diophantine bound is violated at that q.
struct DioScan {
  double worst = 1e300;
  long worst_q = 0;
  long first_fail_q = 0;
};
inline DioScan diophantine_scan(double w, double gamma, double tau, long qmax) {
  DioScan s;
  for (long q = 1; q <= qmax; ++q) {
    const double p = std::round(w * static_cast<double>(q));
    const double r = std::pow(static_cast<double>(q), tau) *
                     std::abs(w - p / static_cast<double>(q)) / gamma;
    if (r < s.worst) {
      s.worst = r;
      s.worst_q = q;
    }
    if (r < 1.0 && s.first_fail_q == 0) {
      s.first_fail_q = q;
    }
  }
  return s;
}

/// Contact frame written out by hand: for z = (z1, z2) the contact plane is
/// spanned by (-conj z2, conj z1) and i times it.
inline V4 frame_v1(const V4& x) { return {-x[2], x[3], x[0], -x[1]}; }
inline V4 frame_v2(const V4& x) { return {-x[3], -x[2], x[1], x[0]}; }
inline V4 frame_v4(const V4& x) { return {-x[1], x[0], -x[3], x[2]}; }

} // namespace oracle

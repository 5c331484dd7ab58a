#pragma once

// Sampled paths in R^3 or on S^3, optionally carrying the dense output of the
// integrator that produced them.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace nullfield {

/// One accepted integrator step [t0, t0 + h] with the five-vector
/// continuous extension of the Dormand-Prince pair.
template <int Dim>
struct DenseSegment {
  using Point = Eigen::Matrix<double, Dim, 1>;
  double t0 = 0.0;
  double h = 0.0;
  Point r1, r2, r3, r4, r5;

  Point value(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }

  Point derivative(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    const Point a = r4 + th1 * r5;
    const Point da = -r5;
    const Point b = r3 + th * a;
    const Point db = a + th * da;
    const Point c = r2 + th1 * b;
    const Point dc = -b + th1 * db;
    return (c + th * dc) / h;
  }
};

template <int Dim>
struct Curve {
  using Point = Eigen::Matrix<double, Dim, 1>;

  std::vector<double> params;
  std::vector<Point> points;
  std::vector<Point> tangents; // empty or one per point
  bool closed = false;
  std::vector<DenseSegment<Dim>> dense; // empty when not traced
  /// Sum of the distances moved by renormalizing onto S^3 after each step.
  double renormalization_displacement = 0.0;

  std::size_t size() const { return points.size(); }
  bool has_tangents() const { return !tangents.empty() && tangents.size() == points.size(); }
  bool has_dense() const { return !dense.empty(); }
  double param_begin() const { return params.front(); }
  double param_end() const { return params.back(); }

  /// Dense-output evaluation; throws std::logic_error without dense output
  /// and std::out_of_range outside the traced span.
  Point at(double t) const { return segment(t).value(t); }
  Point velocity(double t) const { return segment(t).derivative(t); }

private:
  const DenseSegment<Dim>& segment(double t) const {
    if (dense.empty()) {
      throw std::logic_error("Curve: no dense output");
    }
    const double first = dense.front().t0;
    const double last = dense.back().t0 + dense.back().h;
    const double dir = last >= first ? 1.0 : -1.0;
    const double slack = 1e-12 * (1.0 + std::abs(last));
    if (dir * (t - first) < -slack || dir * (t - last) > slack) {
      throw std::out_of_range("Curve: parameter outside the traced span");
    }
    std::size_t a = 0;
    std::size_t b = dense.size();
    while (b - a > 1) {
      const std::size_t m = (a + b) / 2;
      if (dir * (t - dense[m].t0) >= 0.0) {
        a = m;
      } else {
        b = m;
      }
    }
    return dense[a];
  }
};

using SphereCurve = Curve<4>;
using SpaceCurve = Curve<3>;

} // namespace nullfield

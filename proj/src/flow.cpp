#include "nullfield/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nullfield {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  while (a > kPi) {
    a -= 2.0 * kPi;
  }
  while (a <= -kPi) {
    a += 2.0 * kPi;
  }
  return a;
}

} // namespace

// ------------------------------------------------------------ fields

Vec4 eval_sphere_field(const SphereFieldSpec& f, const Vec4& x) {
  switch (f.kind) {
  case SphereFieldSpec::Kind::legendrian:
    return eval_field_ambient(f.legendrian, x);
  case SphereFieldSpec::Kind::torus:
    return torus_field(x);
  case SphereFieldSpec::Kind::seifert:
    return seifert_field(f.seifert, x);
  }
  throw std::logic_error("eval_sphere_field: unknown kind");
}

Mat4 sphere_field_jacobian(const SphereFieldSpec& f, const Vec4& x) {
  switch (f.kind) {
  case SphereFieldSpec::Kind::legendrian:
    return field_jacobian(f.legendrian, x);
  case SphereFieldSpec::Kind::torus:
    return torus_field_jacobian(x);
  case SphereFieldSpec::Kind::seifert:
    return seifert_jacobian(f.seifert);
  }
  throw std::logic_error("sphere_field_jacobian: unknown kind");
}

Vec3 eval_space_field(const SpaceFieldSpec& f, const Vec3& x, double tau) {
  const double t = f.kind == SpaceFieldSpec::Kind::poynting ? f.t + tau : f.t;
  const ComplexTriple F = rs_field(f.h, SpacetimePoint::at(x, t), f.variant, f.mode);
  switch (f.kind) {
  case SpaceFieldSpec::Kind::electric:
    return F.E();
  case SpaceFieldSpec::Kind::magnetic:
    return F.B();
  case SpaceFieldSpec::Kind::poynting: {
    const EMSample s = em_sample(F);
    if (!(s.W > kTransportEnergyFloor)) {
      throw std::domain_error("eval_space_field: energy density too small for the Poynting field");
    }
    return s.P;
  }
  }
  throw std::logic_error("eval_space_field: unknown kind");
}

// ------------------------------------------------------------ tracing

SphereCurve trace_sphere(const SphereFieldSpec& f, const S3Point& start, double tau_max,
                         const TraceOptions& opt) {
  if (!(tau_max >= 0.0)) {
    throw std::invalid_argument("trace_sphere: tau_max must be non-negative");
  }
  OdeProblem<4> prob;
  prob.rhs = [&f](double, const Vec4& x) { return eval_sphere_field(f, x); };
  prob.project = [](Vec4& x) { x.normalize(); };
  return integrate<4>(prob, 0.0, start.coords(), tau_max, opt.integrator);
}

SpaceCurve trace_space(const SpaceFieldSpec& f, const Vec3& start, double tau_max,
                       const TraceOptions& opt) {
  if (!(tau_max >= 0.0)) {
    throw std::invalid_argument("trace_space: tau_max must be non-negative");
  }
  OdeProblem<3> prob;
  prob.rhs = [&f](double tau, const Vec3& x) { return eval_space_field(f, x, tau); };
  const double R = opt.box_radius;
  prob.inside = [R](const Vec3& x) { return x.norm() <= R; };
  return integrate<3>(prob, 0.0, start, tau_max, opt.integrator);
}

// ------------------------------------------------------------ closure

template <int Dim>
std::optional<double> detect_closure(const Curve<Dim>& c, double tol) {
  if (!c.has_dense()) {
    throw std::invalid_argument("detect_closure: curve has no dense output");
  }
  using Point = typename Curve<Dim>::Point;
  const std::size_t n = c.size();
  const Point x0 = c.points.front();
  const Point v0 = c.velocity(c.params.front());
  if (n < 3 || v0.norm() == 0.0) {
    return std::nullopt;
  }
  std::vector<double> d(n);
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = (c.points[i] - x0).norm();
    dmax = std::max(dmax, d[i]);
  }
  const double leave = std::max(10.0 * tol, 1e-3 * dmax);

  auto g = [&](double t) { return (c.at(t) - x0).dot(c.velocity(t)); };
  auto accept = [&](double t) -> bool {
    const Point v = c.velocity(t);
    const double align = v.dot(v0) / (v.norm() * v0.norm());
    return (c.at(t) - x0).norm() < tol && align > 0.99;
  };

  bool left = false;
  for (std::size_t i = 1; i < n; ++i) {
    if (!left) {
      left = d[i] > leave;
      continue;
    }
    if (i + 1 == n) {
      // Trajectory ends while still approaching the start: one Newton step
      // on the distance minimum.
      const double t = c.params[i];
      const Point v = c.velocity(t);
      const double gt = g(t);
      if (gt < 0.0 && d[i] < tol) {
        const double ts = t - gt / v.squaredNorm();
        if (accept(t)) {
          return ts - c.params.front();
        }
      }
      break;
    }
    if (!(d[i] <= d[i - 1] && d[i] <= d[i + 1])) {
      continue;
    }
    double a = c.params[i - 1];
    double b = c.params[i + 1];
    double ga = g(a);
    double gb = g(b);
    if (!(ga < 0.0 && gb > 0.0)) {
      continue;
    }
    for (int it = 0; it < 200 && std::abs(b - a) > 4e-16 * std::abs(b); ++it) {
      const double m = 0.5 * (a + b);
      const double gm = g(m);
      if (gm < 0.0) {
        a = m;
      } else {
        b = m;
      }
    }
    const double ts = 0.5 * (a + b);
    if (accept(ts)) {
      return ts - c.params.front();
    }
  }
  return std::nullopt;
}

template <int Dim>
Curve<Dim> closed_orbit(const Curve<Dim>& c, double period, int samples) {
  if (samples < 3 || !(period > 0.0)) {
    throw std::invalid_argument("closed_orbit: need a positive period and at least 3 samples");
  }
  Curve<Dim> out;
  out.closed = true;
  const double t0 = c.params.front();
  for (int k = 0; k < samples; ++k) {
    const double t = t0 + period * k / samples;
    out.params.push_back(t);
    out.points.push_back(c.at(t));
    out.tangents.push_back(c.velocity(t));
  }
  return out;
}

template std::optional<double> detect_closure<3>(const Curve<3>&, double);
template std::optional<double> detect_closure<4>(const Curve<4>&, double);
template Curve<3> closed_orbit<3>(const Curve<3>&, double, int);
template Curve<4> closed_orbit<4>(const Curve<4>&, double, int);

// ------------------------------------------------------------ invariants

SphereFunction real_part(const MixedPoly& f) {
  return [f](const S3Point& p) { return f(p.z1(), p.z2()).real(); };
}

SphereFunction imag_part(const MixedPoly& f) {
  return [f](const S3Point& p) { return f(p.z1(), p.z2()).imag(); };
}

double integral_drift(const SphereCurve& c, const SphereFunction& f) {
  if (c.points.empty()) {
    return 0.0;
  }
  const double f0 = f(S3Point(c.points.front()));
  double worst = 0.0;
  for (const Vec4& x : c.points) {
    worst = std::max(worst, std::abs(f(S3Point(x)) - f0));
  }
  return worst;
}

double integral_drift(const SpaceCurve& c, const SphereFunction& f) {
  if (c.points.empty()) {
    return 0.0;
  }
  const double f0 = f(stereo_lift(c.points.front()));
  double worst = 0.0;
  for (const Vec3& x : c.points) {
    worst = std::max(worst, std::abs(f(stereo_lift(x)) - f0));
  }
  return worst;
}

std::pair<int, int> phase_windings(const SphereCurve& c) {
  if (!c.closed) {
    throw std::invalid_argument("phase_windings: curve is not closed");
  }
  if (c.size() < 3) {
    throw std::invalid_argument("phase_windings: curve needs at least 3 samples");
  }
  const std::size_t n = c.size();
  double extent = 0.0;
  for (const Vec4& x : c.points) {
    extent = std::max(extent, (x - c.points.front()).norm());
  }
  if (extent < 1e-12) {
    throw std::invalid_argument("phase_windings: curve is a single point");
  }
  std::vector<double> a1(n), a2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z1(c.points[i][0], c.points[i][1]);
    const Complex z2(c.points[i][2], c.points[i][3]);
    if (std::abs(z1) < 1e-6 || std::abs(z2) < 1e-6) {
      throw std::domain_error("phase_windings: curve passes too near a core circle");
    }
    a1[i] = std::arg(z1);
    a2[i] = std::arg(z2);
  }
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double d1 = wrap_angle(a1[j] - a1[i]);
    const double d2 = wrap_angle(a2[j] - a2[i]);
    if (std::abs(d1) >= kPi / 2 || std::abs(d2) >= kPi / 2) {
      throw std::domain_error("phase_windings: samples too sparse");
    }
    s1 += d1;
    s2 += d2;
  }
  return {static_cast<int>(std::lround(s1 / (2 * kPi))),
          static_cast<int>(std::lround(s2 / (2 * kPi)))};
}

// ------------------------------------------------------------ linking

namespace {

using Polygon = std::vector<Vec3>;

double gauss_integral(const Polygon& A, const Polygon& B) {
  const std::size_t n = A.size();
  const std::size_t m = B.size();
  std::vector<Vec3> mb(m), db(m);
  for (std::size_t j = 0; j < m; ++j) {
    mb[j] = 0.5 * (B[j] + B[(j + 1) % m]);
    db[j] = B[(j + 1) % m] - B[j];
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 ma = 0.5 * (A[i] + A[(i + 1) % n]);
    const Vec3 da = A[(i + 1) % n] - A[i];
    for (std::size_t j = 0; j < m; ++j) {
      const Vec3 r = ma - mb[j];
      const double rn = r.norm();
      sum += r.dot(da.cross(db[j])) / (rn * rn * rn);
    }
  }
  return sum / (4.0 * kPi);
}

// Four-point interpolatory subdivision of a closed polygon.
Polygon refine(const Polygon& P) {
  const std::size_t n = P.size();
  Polygon out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p0 = P[(i + n - 1) % n];
    const Vec3& p1 = P[i];
    const Vec3& p2 = P[(i + 1) % n];
    const Vec3& p3 = P[(i + 2) % n];
    out.push_back(p1);
    out.push_back((-p0 + 9.0 * p1 + 9.0 * p2 - p3) / 16.0);
  }
  return out;
}

Polygon every_other(const Polygon& P) {
  Polygon out;
  for (std::size_t i = 0; i < P.size(); i += 2) {
    out.push_back(P[i]);
  }
  return out;
}

// Drops a trailing sample that repeats the first one.
Polygon as_polygon(const SpaceCurve& c) {
  Polygon P = c.points;
  if (P.size() > 1 && (P.back() - P.front()).norm() < 1e-12) {
    P.pop_back();
  }
  return P;
}

} // namespace

LinkingResult linking_number(const SpaceCurve& a, const SpaceCurve& b) {
  if (!a.closed || !b.closed) {
    throw std::invalid_argument("linking_number: both curves must be closed");
  }
  Polygon A = as_polygon(a);
  Polygon B = as_polygon(b);
  if (A.size() < 3 || B.size() < 3) {
    throw std::invalid_argument("linking_number: curves need at least 3 samples");
  }
  for (const Vec3& p : A) {
    for (const Vec3& q : B) {
      if ((p - q).norm() <= 1e-3) {
        throw std::domain_error("linking_number: curves are closer than 1e-3");
      }
    }
  }
  if (A.size() % 2 == 1) {
    A = refine(A);
  }
  if (B.size() % 2 == 1) {
    B = refine(B);
  }
  double raw = 0.0;
  for (int level = 0; level < 6; ++level) {
    const double full = gauss_integral(A, B);
    const double half = gauss_integral(every_other(A), every_other(B));
    raw = (4.0 * full - half) / 3.0;
    const double k = std::round(raw);
    if (std::abs(raw - k) <= 1e-3) {
      return {static_cast<int>(k), raw};
    }
    if (static_cast<double>(A.size()) * static_cast<double>(B.size()) > 1.6e7) {
      break;
    }
    A = refine(A);
    B = refine(B);
  }
  throw std::domain_error("linking_number: quadrature did not settle on an integer (raw " +
                          std::to_string(raw) + ")");
}

SpaceCurve project_curve(const SphereCurve& c) {
  SpaceCurve out;
  out.closed = c.closed;
  out.params = c.params;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const S3Point p(c.points[i]);
    const Vec4& x = p.coords();
    const R3Point q = stereo_project(p);
    if (q.is_infinity()) {
      throw std::domain_error("project_curve: sample maps to infinity");
    }
    out.points.push_back(q.coords());
    if (c.has_tangents()) {
      const Vec4& V = c.tangents[i];
      const double d = 1.0 - x[0];
      const Vec3 N(x[2], -x[3], x[1]);
      out.tangents.push_back(Vec3(V[2], -V[3], V[1]) / d + N * (V[0] / (d * d)));
    }
  }
  return out;
}

} // namespace nullfield

#include "nullfield/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nullfield {

void TransportSpec::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t1)) {
    throw std::invalid_argument("TransportSpec: times must be finite");
  }
  integrator.validate();
}

Vec3 poynting_transport(const TransportSpec& spec, const Vec3& x) {
  spec.validate();
  if (spec.t1 == spec.t0) {
    return x;
  }
  SpaceFieldSpec f;
  f.kind = SpaceFieldSpec::Kind::poynting;
  f.h = spec.h;
  f.variant = spec.variant;
  f.mode = spec.mode;
  f.t = 0.0;
  OdeProblem<3> prob;
  prob.rhs = [&f](double t, const Vec3& y) { return eval_space_field(f, y, t); };
  IntegratorOptions opt = spec.integrator;
  opt.keep_dense = false;
  return integrate<3>(prob, spec.t0, x, spec.t1, opt).points.back();
}

std::vector<Vec3> poynting_transport(const TransportSpec& spec, const std::vector<Vec3>& xs) {
  std::vector<Vec3> out;
  out.reserve(xs.size());
  for (const Vec3& x : xs) {
    out.push_back(poynting_transport(spec, x));
  }
  return out;
}

SpaceCurve resample_closed(const SpaceCurve& c, int n) {
  const int m = static_cast<int>(c.size());
  if (!c.closed || m < 4 || n < 8) {
    throw std::invalid_argument("resample_closed: need a closed curve of >= 4 points and n >= 8");
  }
  auto P = [&](int i) -> const Vec3& { return c.points[static_cast<std::size_t>(((i % m) + m) % m)]; };
  std::vector<double> s(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = 0; i < m; ++i) {
    s[static_cast<std::size_t>(i) + 1] = s[static_cast<std::size_t>(i)] + (P(i + 1) - P(i)).norm();
  }
  const double L = s.back();
  if (!(L > 0.0)) {
    throw std::invalid_argument("resample_closed: degenerate curve");
  }
  SpaceCurve out;
  out.closed = true;
  int seg = 0;
  for (int k = 0; k < n; ++k) {
    const double target = L * k / n;
    while (seg < m - 1 && s[static_cast<std::size_t>(seg) + 1] <= target) {
      ++seg;
    }
    const double len = s[static_cast<std::size_t>(seg) + 1] - s[static_cast<std::size_t>(seg)];
    const double u = len > 0.0 ? (target - s[static_cast<std::size_t>(seg)]) / len : 0.0;
    const Vec3& p0 = P(seg - 1);
    const Vec3& p1 = P(seg);
    const Vec3& p2 = P(seg + 1);
    const Vec3& p3 = P(seg + 2);
    const double u2 = u * u;
    const double u3 = u2 * u;
    const Vec3 q = 0.5 * ((2.0 * p1) + (p2 - p0) * u + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u2 +
                          (3.0 * p1 - p0 - 3.0 * p2 + p3) * u3);
    out.params.push_back(static_cast<double>(k) / n);
    out.points.push_back(q);
  }
  periodic_tangents(out);
  return out;
}

void periodic_tangents(SpaceCurve& c) {
  const int m = static_cast<int>(c.size());
  if (m < 5) {
    throw std::invalid_argument("periodic_tangents: need at least 5 samples");
  }
  auto P = [&](int i) -> const Vec3& { return c.points[static_cast<std::size_t>(((i % m) + m) % m)]; };
  c.tangents.assign(c.points.size(), Vec3::Zero());
  for (int i = 0; i < m; ++i) {
    c.tangents[static_cast<std::size_t>(i)] =
        (P(i - 2) - 8.0 * P(i - 1) + 8.0 * P(i + 1) - P(i + 2)) / 12.0;
  }
}

TransportedCurve transport_curve(const TransportSpec& spec, const SpaceCurve& c, int n) {
  TransportedCurve out;
  SpaceCurve r = resample_closed(c, n);
  r.points = poynting_transport(spec, r.points);
  periodic_tangents(r);
  SpaceFieldSpec f;
  f.kind = SpaceFieldSpec::Kind::poynting;
  f.h = spec.h;
  f.variant = spec.variant;
  f.mode = spec.mode;
  f.t = spec.t1;
  for (const Vec3& x : r.points) {
    out.max_speed_defect = std::max(out.max_speed_defect, std::abs(eval_space_field(f, x, 0.0).norm() - 1.0));
  }
  out.curve = std::move(r);
  return out;
}

double field_line_closure_defect(const SpaceFieldSpec& f, const SpaceCurve& c,
                                 const IntegratorOptions& opt) {
  if (f.kind == SpaceFieldSpec::Kind::poynting) {
    throw std::invalid_argument("field_line_closure_defect: needs the electric or magnetic part");
  }
  if (c.size() < 2 || !c.has_tangents()) {
    throw std::invalid_argument("field_line_closure_defect: curve needs samples and tangents");
  }
  double L = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    L += (c.points[(i + 1) % c.size()] - c.points[i]).norm();
  }
  const Vec3 x0 = c.points.front();
  const double sign = eval_space_field(f, x0, 0.0).dot(c.tangents.front()) >= 0.0 ? 1.0 : -1.0;
  OdeProblem<3> prob;
  prob.rhs = [&f, sign](double, const Vec3& x) {
    const Vec3 v = eval_space_field(f, x, 0.0);
    const double nv = v.norm();
    if (!(nv > 0.0)) {
      throw std::domain_error("field_line_closure_defect: field vanishes on the line");
    }
    return Vec3(sign * v / nv);
  };
  IntegratorOptions o = opt;
  o.keep_dense = true;
  const SpaceCurve line = integrate<3>(prob, 0.0, x0, 1.25 * L, o);
  const auto period = detect_closure(line, 1e-3);
  if (!period) {
    return std::numeric_limits<double>::infinity();
  }
  return (line.at(*period) - x0).norm();
}

double tangency_at_time(const SpaceFieldSpec& f, const SpaceCurve& c, double t) {
  if (f.kind == SpaceFieldSpec::Kind::poynting) {
    throw std::invalid_argument("tangency_at_time: needs the electric or magnetic part");
  }
  if (!c.has_tangents()) {
    throw std::invalid_argument("tangency_at_time: curve has no tangents");
  }
  SpaceFieldSpec g = f;
  g.t = t;
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3 F = eval_space_field(g, c.points[i], 0.0);
    const Vec3& T = c.tangents[i];
    const double nf = F.norm();
    const double nt = T.norm();
    if (!(nf > 1e-300) || !(nt > 0.0)) {
      throw std::domain_error("tangency_at_time: field or tangent vanishes on the curve");
    }
    worst = std::max(worst, F.cross(T).norm() / (nf * nt));
  }
  return worst;
}

SpaceCurve initial_field_line(const Generator& h, Polarity polarity, const S3Point& start,
                              double tau_max, int samples, const TraceOptions& opt) {
  const SphereFieldSpec f = SphereFieldSpec::from_legendrian({h, polarity});
  TraceOptions o = opt;
  o.integrator.keep_dense = true;
  const SphereCurve orbit = trace_sphere(f, start, tau_max, o);
  const auto period = detect_closure(orbit, 1e-8);
  if (!period) {
    throw std::domain_error("initial_field_line: the orbit does not close within tau_max");
  }
  return project_curve(closed_orbit(orbit, *period, samples));
}

} // namespace nullfield

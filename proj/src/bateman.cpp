#include "nullfield/bateman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace nullfield {

namespace {

constexpr Complex kI{0.0, 1.0};

VariableJet hopf_variables(double x, double y, double z, double t) {
  const double r2 = x * x + y * y + z * z;
  const Complex D(r2 - t * t + 1.0, 2.0 * t);
  const Complex Na(r2 - t * t - 1.0, 2.0 * z);
  const Complex Nb(2.0 * x, -2.0 * y);

  const CVec3 gradD(2.0 * x, 2.0 * y, 2.0 * z);
  const Complex dtD(-2.0 * t, 2.0);
  const CVec3 gradNa(2.0 * x, 2.0 * y, Complex(2.0 * z, 2.0));
  const Complex dtNa(-2.0 * t, 0.0);
  const CVec3 gradNb(2.0, Complex(0.0, -2.0), 0.0);

  VariableJet j;
  j.alpha = Na / D;
  j.beta = Nb / D;
  // d(N/D) = (dN - (N/D) dD) / D
  j.grad_alpha = (gradNa - j.alpha * gradD) / D;
  j.grad_beta = (gradNb - j.beta * gradD) / D;
  j.dt_alpha = (dtNa - j.alpha * dtD) / D;
  j.dt_beta = (-j.beta * dtD) / D;
  return j;
}

// Bilinear cross product; Eigen's cross() conjugates complex results.
CVec3 cross(const CVec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Variant conjugate_family(Variant v) { return v == Variant::hopf ? Variant::tilde : Variant::hopf; }

// Angle in [0, pi] between two nonzero vectors, accurate near 0.
double angle_between(const Vec4& a, const Vec4& b) {
  const double d = (a.normalized() - b.normalized()).norm();
  return 2.0 * std::asin(std::min(1.0, d / 2.0));
}

Vec4 as_vec4(Complex a, Complex b) { return {a.real(), a.imag(), b.real(), b.imag()}; }

} // namespace

VariableJet variables(const SpacetimePoint& p, Variant variant) {
  if (variant == Variant::hopf) {
    return hopf_variables(p.x, p.y, p.z, p.t);
  }
  VariableJet j = hopf_variables(p.x, p.y, p.z, -p.t);
  j.alpha = std::conj(j.alpha);
  j.beta = std::conj(j.beta);
  j.grad_alpha = j.grad_alpha.conjugate();
  j.grad_beta = j.grad_beta.conjugate();
  j.dt_alpha = -std::conj(j.dt_alpha);
  j.dt_beta = -std::conj(j.dt_beta);
  return j;
}

CVec3 bateman_pde_residual(const SpacetimePoint& p, Variant variant) {
  const VariableJet j = variables(p, variant);
  return cross(j.grad_alpha, j.grad_beta) -
         kI * (j.dt_alpha * j.grad_beta - j.dt_beta * j.grad_alpha);
}

ComplexTriple rs_field(const Generator& h, const SpacetimePoint& p, Variant variant,
                       FieldMode mode) {
  if (mode == FieldMode::direct) {
    if (!h.is_holomorphic()) {
      throw std::invalid_argument("rs_field: direct mode needs a holomorphic generator");
    }
    const VariableJet j = variables(p, variant);
    return {h(j.alpha, j.beta) * cross(j.grad_alpha, j.grad_beta)};
  }
  if (!h.is_antiholomorphic()) {
    throw std::invalid_argument("rs_field: antiholomorphic mode needs an antiholomorphic generator");
  }
  const VariableJet j = variables(p, conjugate_family(variant));
  return {h.conj()(j.alpha, j.beta) * cross(j.grad_alpha, j.grad_beta)};
}

EMSample em_sample(const ComplexTriple& F) {
  EMSample s;
  s.E = F.E();
  s.B = F.B();
  s.W = 0.5 * (s.E.squaredNorm() + s.B.squaredNorm());
  s.has_poynting = s.W >= kPoyntingEnergyFloor;
  s.P = s.has_poynting ? Vec3(s.E.cross(s.B) / s.W) : Vec3::Zero();
  return s;
}

NullDefect null_defect(const ComplexTriple& F) {
  const Vec3 E = F.E();
  const Vec3 B = F.B();
  return {E.dot(B), E.squaredNorm() - B.squaredNorm()};
}

double MaxwellResidual::max_norm() const {
  return std::max({ampere.norm(), faraday.norm(), std::abs(div_e), std::abs(div_b)});
}

MaxwellResidual maxwell_residual(const Generator& h, const SpacetimePoint& p, Variant variant,
                                 FieldMode mode, double fd_step) {
  if (!(fd_step > 0.0)) {
    throw std::invalid_argument("maxwell_residual: fd_step must be positive");
  }
  // d[k] = dF/d(x, y, z, t)[k]
  std::array<CVec3, 4> d;
  for (int k = 0; k < 4; ++k) {
    auto shifted = [&](double s) {
      SpacetimePoint q = p;
      double* c[4] = {&q.x, &q.y, &q.z, &q.t};
      *c[k] += s;
      return rs_field(h, q, variant, mode).F;
    };
    const double e = fd_step;
    d[k] = (-shifted(2 * e) + 8.0 * shifted(e) - 8.0 * shifted(-e) + shifted(-2 * e)) / (12.0 * e);
  }
  const CVec3 curl(d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]);
  const Complex div = d[0][0] + d[1][1] + d[2][2];
  MaxwellResidual r;
  r.ampere = d[3].real() - curl.imag();
  r.faraday = d[3].imag() + curl.real();
  r.div_e = div.real();
  r.div_b = div.imag();
  return r;
}

Vec3 invert_hopf_map(const S3Point& target, double t) {
  const Complex a = target.z1();
  const Complex b = target.z2();
  if (std::abs(1.0 - a) < 1e-8) {
    throw std::domain_error("invert_hopf_map: target too close to the pole (1, 0)");
  }
  // (1 + alpha)/(1 - alpha) = (r^2 - t^2 + i(t + z)) / (1 + i(t - z)) and
  // beta/(1 - alpha) = (x - iy) / (1 + i(t - z)).
  const Complex c = (1.0 + a) / (1.0 - a);
  const Complex w = b / (1.0 - a);
  const double z = (c.imag() + t * (c.real() - 1.0)) / (1.0 + c.real());
  const Complex xy = w * Complex(1.0, t - z);
  Vec3 x(xy.real(), -xy.imag(), z);

  // Gauss-Newton polish with the exact jets.
  for (int it = 0; it < 4; ++it) {
    const VariableJet j = variables(SpacetimePoint::at(x, t), Variant::hopf);
    const Vec4 res = as_vec4(j.alpha, j.beta) - target.coords();
    if (res.norm() < 1e-15) {
      break;
    }
    Eigen::Matrix<double, 4, 3> J;
    for (int k = 0; k < 3; ++k) {
      J.col(k) = as_vec4(j.grad_alpha[k], j.grad_beta[k]);
    }
    x -= J.colPivHouseholderQr().solve(res);
  }
  const VariableJet j = variables(SpacetimePoint::at(x, t), Variant::hopf);
  if (!x.allFinite() || (as_vec4(j.alpha, j.beta) - target.coords()).norm() > 1e-9) {
    throw std::domain_error("invert_hopf_map: inversion failed");
  }
  return x;
}

double sphere_pushforward_check(const Generator& h, double t, const S3Point& sample,
                                double fd_step) {
  if (!h.is_holomorphic()) {
    throw std::invalid_argument("sphere_pushforward_check: generator must be holomorphic");
  }
  const Vec3 x = invert_hopf_map(sample, t);
  const ComplexTriple F = rs_field(h, SpacetimePoint::at(x, t), Variant::hopf, FieldMode::direct);

  Eigen::Matrix<double, 4, 3> dmap;
  for (int k = 0; k < 3; ++k) {
    Vec3 xp = x;
    Vec3 xm = x;
    xp[k] += fd_step;
    xm[k] -= fd_step;
    const VariableJet jp = variables(SpacetimePoint::at(xp, t), Variant::hopf);
    const VariableJet jm = variables(SpacetimePoint::at(xm, t), Variant::hopf);
    dmap.col(k) = (as_vec4(jp.alpha, jp.beta) - as_vec4(jm.alpha, jm.beta)) / (2.0 * fd_step);
  }
  const Vec4 pushE = dmap * F.E();
  const Vec4 pushB = dmap * F.B();

  const HopfFrame fr = hopf_frame(sample);
  const Complex hv = h(sample.z1(), sample.z2());
  const Vec4 sphE = hv.real() * fr.v1 - hv.imag() * fr.v2;
  const Vec4 sphB = hv.real() * fr.v2 + hv.imag() * fr.v1;
  if (sphE.norm() < 1e-12 || pushE.norm() < 1e-300 || pushB.norm() < 1e-300) {
    throw std::domain_error("sphere_pushforward_check: field vanishes at the sample");
  }
  const double lamE = pushE.norm() / sphE.norm();
  const double lamB = pushB.norm() / sphB.norm();
  const double scale_gap = std::abs(lamE - lamB) / std::max(lamE, lamB);
  return std::max({angle_between(pushE, sphE), angle_between(pushB, sphB), scale_gap});
}

} // namespace nullfield

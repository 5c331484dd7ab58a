#include "nullfield/legendrian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace nullfield {

namespace {

constexpr double kPi = std::numbers::pi;

// v1 = A1 x and v2 = A2 x.
Mat4 contact_matrix_v1() {
  Mat4 A;
  A << 0, 0, -1, 0,
       0, 0, 0, 1,
       1, 0, 0, 0,
       0, -1, 0, 0;
  return A;
}

Mat4 contact_matrix_v2() {
  Mat4 A;
  A << 0, 0, 0, -1,
       0, 0, -1, 0,
       0, 1, 0, 0,
       1, 0, 0, 0;
  return A;
}

Complex z1_of(const Vec4& x) { return {x[0], x[1]}; }
Complex z2_of(const Vec4& x) { return {x[2], x[3]}; }

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

// ------------------------------------------------------------ Legendrian

Vec4 eval_field_ambient(const LegendrianField& L, const Vec4& x) {
  const Complex th = L.theta(z1_of(x), z2_of(x));
  const Vec4 v1 = contact_v1(x);
  const Vec4 v2 = contact_v2(x);
  if (L.polarity == Polarity::e_type) {
    return th.real() * v1 - th.imag() * v2;
  }
  return th.real() * v2 + th.imag() * v1;
}

Vec4 eval_field(const LegendrianField& L, const S3Point& p) {
  return eval_field_ambient(L, p.coords());
}

Mat4 field_jacobian(const LegendrianField& L, const Vec4& x) {
  const WirtingerJet j = L.theta.jet(z1_of(x), z2_of(x));
  const RealGradients g = real_gradients(j);
  const Vec4 v1 = contact_v1(x);
  const Vec4 v2 = contact_v2(x);
  const double re = j.value.real();
  const double im = j.value.imag();
  if (L.polarity == Polarity::e_type) {
    return v1 * g.re.transpose() + re * contact_matrix_v1() - v2 * g.im.transpose() -
           im * contact_matrix_v2();
  }
  return v2 * g.re.transpose() + re * contact_matrix_v2() + v1 * g.im.transpose() +
         im * contact_matrix_v1();
}

DivergenceIdentities divergence_identities(const Generator& theta, const S3Point& p) {
  const Mat4 je = field_jacobian({theta, Polarity::e_type}, p.coords());
  const Mat4 jb = field_jacobian({theta, Polarity::b_type}, p.coords());
  const Complex lbar = cr_defect(theta, p);
  return {je.trace(), jb.trace(), 2.0 * lbar.real(), 2.0 * lbar.imag()};
}

// ------------------------------------------------------------ rotation

int rotation_number(const SphereCurve& c) {
  if (!c.closed) {
    throw std::invalid_argument("rotation_number: curve is not closed");
  }
  if (!c.has_tangents() || c.size() < 3) {
    throw std::invalid_argument("rotation_number: curve needs at least 3 samples with tangents");
  }
  std::vector<double> angle(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const S3Point p(c.points[i]);
    const Vec4& T = c.tangents[i];
    const HopfFrame f = hopf_frame(p);
    const double tn = T.norm();
    if (!(tn > 0.0) || std::abs(T.dot(f.v4)) > kLegendrianTol * tn) {
      throw std::domain_error("rotation_number: tangent leaves the contact plane");
    }
    const double a = T.dot(f.v1);
    const double b = T.dot(f.v2);
    if (std::hypot(a, b) < 1e-9) {
      throw std::domain_error("rotation_number: contact projection of the tangent vanishes");
    }
    angle[i] = std::atan2(b, a);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < angle.size(); ++i) {
    const double d = wrap_angle(angle[(i + 1) % angle.size()] - angle[i]);
    if (std::abs(d) >= kPi / 2) {
      throw std::domain_error("rotation_number: samples too sparse for the tangent winding");
    }
    total += d;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

// ------------------------------------------------------------ Seifert

void SeifertSpec::validate() const {
  if (p < 1 || q < 1) {
    throw std::invalid_argument("SeifertSpec: p and q must be positive");
  }
  if (std::gcd(p, q) != 1) {
    throw std::invalid_argument("SeifertSpec: p and q must be coprime");
  }
}

Vec4 seifert_field(const SeifertSpec& S, const Vec4& x) {
  return {-S.p * x[1], S.p * x[0], -S.q * x[3], S.q * x[2]};
}

Mat4 seifert_jacobian(const SeifertSpec& S) {
  Mat4 A = Mat4::Zero();
  A(0, 1) = -S.p;
  A(1, 0) = S.p;
  A(2, 3) = -S.q;
  A(3, 2) = S.q;
  return A;
}

Vec4 seifert_form_cartesian(const SeifertSpec& S, const Vec4& x) {
  const double x1 = x[0], y1 = x[1], x2 = x[2], y2 = x[3];
  const double n1 = x1 * x1 + y1 * y1;
  const double n2 = x2 * x2 + y2 * y2;
  if (n1 < 1e-24 || n2 < 1e-24) {
    throw std::domain_error("seifert_form_cartesian: point on a core circle");
  }
  const double p = S.p;
  const double q = S.q;
  const double P = p * n1 + q * n2;
  const double re = x1 * x2 - y1 * y2;
  const double im = y1 * x2 + x1 * y2;
  return {-P * re * x1 / n1 - q * im * y1 / n1, -P * re * y1 / n1 + q * im * x1 / n1,
          P * re * x2 / n2 + p * im * y2 / n2, P * re * y2 / n2 - p * im * x2 / n2};
}

Vec4 seifert_form(const SeifertSpec& S, const S3Point& pt) {
  const Vec4& x = pt.coords();
  const double n1 = x[0] * x[0] + x[1] * x[1];
  const double n2 = x[2] * x[2] + x[3] * x[3];
  if (n1 >= 1e-6 && n2 >= 1e-6) {
    return seifert_form_cartesian(S, x);
  }
  const double re = x[0] * x[2] - x[1] * x[3];
  return (S.q - S.p) * re * x + Vec4(-S.q * x[2], S.q * x[3], S.p * x[0], -S.p * x[1]);
}

Eigen::Vector3d seifert_form_hopf(const SeifertSpec& S, const HopfCoords& h) {
  const double c = std::cos(h.s);
  const double s = std::sin(h.s);
  const double phase = h.phi1 + h.phi2;
  const double P = S.p * c * c + S.q * s * s;
  const double k = std::sin(phase) * s * c;
  return {P * std::cos(phase), S.q * k, -S.p * k};
}

Eigen::Vector3d hopf_differentials(const S3Point& p, const Vec4& V) {
  const double r1 = std::abs(p.z1());
  const double r2 = std::abs(p.z2());
  if (r1 <= 0.0 || r2 <= 0.0) {
    throw std::domain_error("hopf_differentials: point on a core circle");
  }
  const double d_r1 = (p.x1() * V[0] + p.y1() * V[1]) / r1;
  const double d_r2 = (p.x2() * V[2] + p.y2() * V[3]) / r2;
  // s = atan2(|z2|, |z1|)
  const double ds = (r1 * d_r2 - r2 * d_r1) / (r1 * r1 + r2 * r2);
  const double dphi1 = (p.x1() * V[1] - p.y1() * V[0]) / (r1 * r1);
  const double dphi2 = (p.x2() * V[3] - p.y2() * V[2]) / (r2 * r2);
  return {ds, dphi1, dphi2};
}

double contact_volume_ratio(const SeifertSpec& S, const S3Point& pt, double fd_step) {
  const HopfCoords hc = hopf_coords(pt);
  if (hc.s < 1e-3 || hc.s > kPi / 2 - 1e-3) {
    throw std::domain_error("contact_volume_ratio: too close to a core circle");
  }
  const Vec4& x = pt.coords();
  // M(j, i) = d alpha_j / d x_i
  Mat4 M;
  for (int i = 0; i < 4; ++i) {
    Vec4 xp = x;
    Vec4 xm = x;
    xp[i] += fd_step;
    xm[i] -= fd_step;
    M.col(i) = (seifert_form_cartesian(S, xp) - seifert_form_cartesian(S, xm)) / (2.0 * fd_step);
  }
  const Vec4 alpha = seifert_form_cartesian(S, x);
  auto d_alpha = [&](const Vec4& u, const Vec4& w) {
    return w.dot(M * u) - u.dot(M * w);
  };
  const HopfFrame f = hopf_frame(pt);
  const Vec4& a = f.v1;
  const Vec4& b = f.v2;
  const Vec4& c = f.v4;
  const double wedge = alpha.dot(a) * d_alpha(b, c) + alpha.dot(b) * d_alpha(c, a) +
                       alpha.dot(c) * d_alpha(a, b);
  Mat4 vol;
  vol << f.v3, a, b, c;
  return wedge / vol.determinant();
}

double contact_volume_ratio_closed_form(const SeifertSpec& S, double s) {
  const double c = std::cos(s);
  const double sn = std::sin(s);
  return (S.p + S.q) * (S.p * c * c + S.q * sn * sn);
}

// ------------------------------------------------------------ first integrals

MixedPoly h_from_real_function(const MixedPoly& f) {
  // (d/dx - i d/dy) f = 2 df/dz
  const MixedPoly zb1 = MixedPoly::variable(WirtingerVar::zb1);
  const MixedPoly zb2 = MixedPoly::variable(WirtingerVar::zb2);
  return f.derivative(WirtingerVar::z2) * 2.0 * zb1 - f.derivative(WirtingerVar::z1) * 2.0 * zb2;
}

MixedPoly h_from_potential(const MixedPoly& G) {
  if (!G.is_holomorphic()) {
    throw std::invalid_argument("h_from_potential: G must be holomorphic");
  }
  return h_from_real_function(G);
}

Complex h_from_potential(const MixedPoly& G, Complex z1, Complex z2) {
  return h_from_potential(G)(z1, z2);
}

TangencyDefect tangency_defect(const Generator& theta, const MixedPoly& G, const S3Point& p) {
  const Complex h = h_from_potential(G)(p.z1(), p.z2());
  const Complex th = theta(p.z1(), p.z2());
  TangencyDefect out;
  if (std::abs(h) < 1e-9 || std::abs(th) < 1e-9) {
    out.vacuous = true;
    return out;
  }
  // sin and cos of arg(theta) - arg(h)
  const Complex r = th * std::conj(h) / (std::abs(th) * std::abs(h));
  out.defect = std::abs(r.imag());
  out.antiparallel = r.real() < 0.0;
  return out;
}

TtLinkDefect tt_link_defect(const MixedPoly& G, const SphereCurve& c) {
  TtLinkDefect d;
  for (const Vec4& x : c.points) {
    const S3Point p(x);
    const WirtingerJet j = G.jet(p.z1(), p.z2());
    const Vec4 g = real_gradients(j).re;
    const HopfFrame f = hopf_frame(p);
    d.max_abs_g = std::max(d.max_abs_g, std::abs(j.value));
    d.max_contact_gradient = std::max(d.max_contact_gradient, std::hypot(g.dot(f.v1), g.dot(f.v2)));
  }
  return d;
}

double torus_knot_rho(int p, int q) {
  if (p < 1 || q < 1) {
    throw std::invalid_argument("torus_knot_rho: p and q must be positive");
  }
  const double a2 = static_cast<double>(p) / (p + q);
  const double b2 = static_cast<double>(q) / (p + q);
  return 1.0 / (std::pow(a2, 0.5 * p) * std::pow(b2, 0.5 * q));
}

MixedPoly torus_knot_potential(int p, int q) {
  return MixedPoly::monomial(torus_knot_rho(p, q), p, q, 0, 0) - MixedPoly::constant(1.0);
}

SphereCurve torus_curve(double a, int w, int v, int samples) {
  if (samples < 3 || !(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("torus_curve: need 0 < a < 1 and at least 3 samples");
  }
  const double b = std::sqrt(1.0 - a * a);
  SphereCurve c;
  c.closed = true;
  for (int k = 0; k < samples; ++k) {
    const double th = 2.0 * kPi * k / samples;
    const Complex e1 = std::polar(1.0, w * th);
    const Complex e2 = std::polar(1.0, v * th);
    const Complex z1 = a * e1;
    const Complex z2 = b * e2;
    const Complex dz1 = Complex(0.0, w) * z1;
    const Complex dz2 = Complex(0.0, v) * z2;
    c.params.push_back(th);
    c.points.emplace_back(z1.real(), z1.imag(), z2.real(), z2.imag());
    c.tangents.emplace_back(dz1.real(), dz1.imag(), dz2.real(), dz2.imag());
  }
  return c;
}

SphereCurve tt_torus_curve(int p, int q, int samples) {
  return torus_curve(std::sqrt(static_cast<double>(p) / (p + q)), q, -p, samples);
}

// ------------------------------------------------------------ torus field

Vec4 torus_field(const Vec4& x) {
  const double n1 = x[0] * x[0] + x[1] * x[1];
  const double n2 = x[2] * x[2] + x[3] * x[3];
  return {x[1] * n2, -x[0] * n2, -x[3] * n1, x[2] * n1};
}

Mat4 torus_field_jacobian(const Vec4& x) {
  const double x1 = x[0], y1 = x[1], x2 = x[2], y2 = x[3];
  const double n1 = x1 * x1 + y1 * y1;
  const double n2 = x2 * x2 + y2 * y2;
  Mat4 J;
  J << 0, n2, 2 * x2 * y1, 2 * y2 * y1,
       -n2, 0, -2 * x1 * x2, -2 * x1 * y2,
       -2 * x1 * y2, -2 * y1 * y2, 0, -n1,
       2 * x1 * x2, 2 * y1 * x2, n1, 0;
  return J;
}

Vec4 torus_flow(const Vec4& x, double tau) {
  const Complex z1 = z1_of(x);
  const Complex z2 = z2_of(x);
  const Complex w1 = z1 * std::polar(1.0, -std::norm(z2) * tau);
  const Complex w2 = z2 * std::polar(1.0, std::norm(z1) * tau);
  return {w1.real(), w1.imag(), w2.real(), w2.imag()};
}

} // namespace nullfield

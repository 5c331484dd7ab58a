#include "nullfield/geom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nullfield {

S3Point::S3Point(const Vec4& coords) {
  if (!coords.allFinite()) {
    throw std::invalid_argument("S3Point: non-finite coordinates");
  }
  const double n = coords.norm();
  if (n < 1e-300) {
    throw std::invalid_argument("S3Point: zero vector cannot be normalized");
  }
  coords_ = coords / n;
}

S3Point::S3Point(Complex z1, Complex z2)
    : S3Point(Vec4(z1.real(), z1.imag(), z2.real(), z2.imag())) {}

R3Point R3Point::infinity() { return R3Point(); }

const Vec3& R3Point::coords() const {
  if (infinite_) {
    throw std::logic_error("R3Point: the point at infinity has no coordinates");
  }
  return coords_;
}

Vec4 contact_v1(const Vec4& x) { return {-x[2], x[3], x[0], -x[1]}; }

Vec4 contact_v2(const Vec4& x) { return {-x[3], -x[2], x[1], x[0]}; }

Vec4 hopf_v4(const Vec4& x) { return {-x[1], x[0], -x[3], x[2]}; }

HopfFrame hopf_frame(const S3Point& p) {
  const Vec4& x = p.coords();
  return {contact_v1(x), contact_v2(x), x, hopf_v4(x)};
}

double contact_pairing(const S3Point& p, const Vec4& X) {
  return -p.y1() * X[0] + p.x1() * X[1] - p.y2() * X[2] + p.x2() * X[3];
}

Vec4 complex_structure(const Vec4& X) { return {-X[1], X[0], -X[3], X[2]}; }

R3Point stereo_project(const S3Point& p) {
  const double denom = 1.0 - p.x1();
  if (denom <= 0.0) {
    return R3Point::infinity();
  }
  return R3Point(p.x2() / denom, -p.y2() / denom, p.y1() / denom);
}

S3Point stereo_lift(const Vec3& q) {
  const double r2 = q.squaredNorm();
  const double d = r2 + 1.0;
  // Algebraically the image has unit norm; the S3Point constructor only
  // removes rounding.
  return S3Point(Vec4((r2 - 1.0) / d, 2.0 * q.z() / d, 2.0 * q.x() / d, -2.0 * q.y() / d));
}

S3Point stereo_lift(const R3Point& q) {
  if (q.is_infinity()) {
    return S3Point(Vec4(1.0, 0.0, 0.0, 0.0));
  }
  return stereo_lift(q.coords());
}

namespace {

double wrap_phase(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a < 0.0) {
    a += two_pi;
  }
  return a >= two_pi ? a - two_pi : a;
}

} // namespace

HopfCoords hopf_coords(const S3Point& p) {
  const double r1 = std::abs(p.z1());
  const double r2 = std::abs(p.z2());
  HopfCoords h{std::atan2(r2, r1), 0.0, 0.0};
  if (r1 > 0.0) {
    h.phi1 = wrap_phase(std::arg(p.z1()));
  }
  if (r2 > 0.0) {
    h.phi2 = wrap_phase(std::arg(p.z2()));
  }
  return h;
}

S3Point from_hopf_coords(const HopfCoords& h) {
  const double c = std::cos(h.s);
  const double s = std::sin(h.s);
  return S3Point(Vec4(c * std::cos(h.phi1), c * std::sin(h.phi1), s * std::cos(h.phi2),
                      s * std::sin(h.phi2)));
}

} // namespace nullfield

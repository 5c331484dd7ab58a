#pragma once

// Geometry of the unit 3-sphere S^3 in C^2 = R^4.
//
// Real coordinates are ordered (x1, y1, x2, y2) with z1 = x1 + i y1 and
// z2 = x2 + i y2.  The standard contact form is
//   -y1 dx1 + x1 dy1 - y2 dx2 + x2 dy2
// and its dual (Hopf) field is v4 below.

#include <complex>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace nullfield {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// A point on S^3.  Construction normalizes the input; zero or non-finite
/// input is rejected with std::invalid_argument.
class S3Point {
public:
  explicit S3Point(const Vec4& coords);
  S3Point(Complex z1, Complex z2);

  const Vec4& coords() const { return coords_; }
  double x1() const { return coords_[0]; }
  double y1() const { return coords_[1]; }
  double x2() const { return coords_[2]; }
  double y2() const { return coords_[3]; }
  Complex z1() const { return {coords_[0], coords_[1]}; }
  Complex z2() const { return {coords_[2], coords_[3]}; }

private:
  Vec4 coords_;
};

/// A point of R^3 or the point at infinity.
class R3Point {
public:
  explicit R3Point(const Vec3& coords) : coords_(coords), infinite_(false) {}
  R3Point(double x, double y, double z) : R3Point(Vec3(x, y, z)) {}
  static R3Point infinity();

  bool is_infinity() const { return infinite_; }
  /// Throws std::logic_error for the point at infinity.
  const Vec3& coords() const;

private:
  R3Point() : coords_(Vec3::Zero()), infinite_(true) {}
  Vec3 coords_;
  bool infinite_;
};

/// Orthonormal frame of R^4 attached to a point of S^3: v1, v2 span the
/// contact plane, v3 is the outward normal and v4 the Hopf field.
struct HopfFrame {
  Vec4 v1;
  Vec4 v2;
  Vec4 v3;
  Vec4 v4;
};

// The frame fields are linear in the base point, so they are defined on all
// of R^4; these evaluate them without normalizing.
Vec4 contact_v1(const Vec4& x);
Vec4 contact_v2(const Vec4& x);
Vec4 hopf_v4(const Vec4& x);

HopfFrame hopf_frame(const S3Point& p);

/// Standard contact form at p applied to X; equals v4(p) . X.
double contact_pairing(const S3Point& p, const Vec4& X);

/// Multiplication by i on C^2: (a1, a2, a3, a4) -> (-a2, a1, -a4, a3).
Vec4 complex_structure(const Vec4& X);

/// Inverse of the t = 0 Bateman map.  The pole (1, 0, 0, 0) goes to infinity.
R3Point stereo_project(const S3Point& p);

/// The Bateman map (alpha, beta) at t = 0; infinity goes to (1, 0, 0, 0).
S3Point stereo_lift(const R3Point& q);
S3Point stereo_lift(const Vec3& q);

/// Hopf coordinates (z1, z2) = (cos s e^{i phi1}, sin s e^{i phi2}) with
/// s in [0, pi/2] and phases in [0, 2 pi).  A phase is reported as 0 when the
/// corresponding |z_i| vanishes.
struct HopfCoords {
  double s;
  double phi1;
  double phi2;
};

HopfCoords hopf_coords(const S3Point& p);
S3Point from_hopf_coords(const HopfCoords& h);

} // namespace nullfield

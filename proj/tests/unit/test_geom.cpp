#include "doctest.h"

#include "nullfield/geom.hpp"
#include "nullfield/sampling.hpp"
#include "oracles.hpp"

using namespace nullfield;

namespace {

void check_vec(const Vec4& a, const Vec4& b, double tol = 1e-15) {
  CHECK((a - b).norm() <= tol);
}

} // namespace

TEST_CASE("contact frame at the coordinate points") {
  const HopfFrame f = hopf_frame(S3Point(Vec4(1, 0, 0, 0)));
  check_vec(f.v1, Vec4(0, 0, 1, 0));
  check_vec(f.v2, Vec4(0, 0, 0, 1));
  check_vec(f.v3, Vec4(1, 0, 0, 0));
  check_vec(f.v4, Vec4(0, 1, 0, 0));

  const HopfFrame g = hopf_frame(S3Point(Vec4(0, 0, 1, 0)));
  check_vec(g.v1, Vec4(-1, 0, 0, 0));
  check_vec(g.v2, Vec4(0, -1, 0, 0));
  check_vec(g.v4, Vec4(0, 0, 0, 1));
}

TEST_CASE("contact frame is orthonormal and matches the hand formulas") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const S3Point p = random_sphere_point(rng);
    const HopfFrame f = hopf_frame(p);
    Mat4 V;
    V << f.v1, f.v2, f.v3, f.v4;
    CHECK((V.transpose() * V - Mat4::Identity()).norm() <= 1e-14);
    check_vec(f.v1, oracle::frame_v1(p.coords()), 1e-15);
    check_vec(f.v2, oracle::frame_v2(p.coords()), 1e-15);
    check_vec(f.v4, oracle::frame_v4(p.coords()), 1e-15);
  }
}

TEST_CASE("contact pairing") {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const S3Point p = random_sphere_point(rng);
    const HopfFrame f = hopf_frame(p);
    CHECK(std::abs(contact_pairing(p, f.v1)) <= 1e-15);
    CHECK(std::abs(contact_pairing(p, f.v2)) <= 1e-15);
    CHECK(contact_pairing(p, f.v4) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(contact_pairing(S3Point(Vec4(1, 0, 0, 0)), Vec4(0, 1, 0, 0)) == 1.0);
}

TEST_CASE("complex structure squares to minus one") {
  const Vec4 X(0.3, -1.2, 2.0, 0.7);
  check_vec(complex_structure(complex_structure(X)), -X);
  // multiplication by i on (z1, z2)
  check_vec(complex_structure(Vec4(1, 0, 0, 0)), Vec4(0, 1, 0, 0));
}

TEST_CASE("S3Point normalizes and rejects degenerate input") {
  const S3Point p(Vec4(2, 0, 0, 0));
  CHECK(p.x1() == 1.0);
  CHECK_THROWS_AS(S3Point(Vec4::Zero()), std::invalid_argument);
  CHECK_THROWS_AS(S3Point(Vec4(NAN, 0, 0, 0)), std::invalid_argument);
}

TEST_CASE("stereographic lift agrees with the t = 0 variables") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const Vec3 q = random_box_point(rng, 5.0);
    oracle::C a, b;
    oracle::hopf_alpha_beta(q[0], q[1], q[2], 0.0, a, b);
    const S3Point p = stereo_lift(q);
    CHECK(std::abs(p.z1() - a) <= 1e-14);
    CHECK(std::abs(p.z2() - b) <= 1e-14);
  }
}

TEST_CASE("stereographic round trip and the point at infinity") {
  Rng rng(14);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 q = random_box_point(rng, 10.0);
    worst = std::max(worst, (stereo_project(stereo_lift(q)).coords() - q).norm());
  }
  CHECK(worst <= 1e-12);
  CHECK(stereo_project(S3Point(Vec4(1, 0, 0, 0))).is_infinity());
  CHECK((stereo_lift(R3Point::infinity()).coords() - Vec4(1, 0, 0, 0)).norm() == 0.0);
  CHECK_THROWS_AS(R3Point::infinity().coords(), std::logic_error);
}

TEST_CASE("Hopf coordinates") {
  const double r = 1.0 / std::sqrt(2.0);
  HopfCoords h = hopf_coords(S3Point(Vec4(r, 0, r, 0)));
  CHECK(h.s == doctest::Approx(oracle::pi / 4));
  CHECK(std::abs(h.phi1) <= 1e-15);
  CHECK(std::abs(h.phi2) <= 1e-15);

  h = hopf_coords(S3Point(Vec4(1, 0, 0, 0)));
  CHECK(h.s == 0.0);
  CHECK(h.phi1 == 0.0);
  CHECK(h.phi2 == 0.0);

  check_vec(from_hopf_coords({oracle::pi / 4, oracle::pi / 2, 0.0}).coords(), Vec4(0, r, r, 0), 1e-15);

  Rng rng(15);
  for (int i = 0; i < 100; ++i) {
    const S3Point p = random_sphere_point(rng);
    const HopfCoords c = hopf_coords(p);
    CHECK(c.s >= 0.0);
    CHECK(c.s <= oracle::pi / 2);
    CHECK(c.phi1 >= 0.0);
    CHECK(c.phi1 < 2 * oracle::pi);
    check_vec(from_hopf_coords(c).coords(), p.coords(), 1e-14);
  }
}

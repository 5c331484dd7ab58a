#include "doctest.h"

#include "nullfield/floquet.hpp"
#include "nullfield/sampling.hpp"
#include "oracles.hpp"

using namespace nullfield;

namespace {

/// Taylor series of exp(A), sufficient for moderate |A|.
Mat2 expm(const Mat2& A) {
  Mat2 S = Mat2::Identity(), term = Mat2::Identity();
  for (int k = 1; k < 60; ++k) {
    term = term * A / double(k);
    S += term;
  }
  return S;
}

Mat2 rk4_monodromy(const NveSpec& s) {
  Eigen::Vector4d y(1, 0, 0, 1); // column-major Phi
  auto f = [&](double t, const Eigen::Vector4d& v) {
    Mat2 P;
    P << v[0], v[2], v[1], v[3];
    const Mat2 D = s.A(t) * P;
    return Eigen::Vector4d(D(0, 0), D(1, 0), D(0, 1), D(1, 1));
  };
  y = oracle::rk4(f, y, 0.0, s.period, 4000);
  Mat2 M;
  M << y[0], y[2], y[1], y[3];
  return M;
}

} // namespace

TEST_CASE("closed-form monodromy") {
  Mat2 ref;
  ref << std::cos(1.0), -0.5 * std::sin(1.0), 2 * std::sin(1.0), std::cos(1.0);
  CHECK((analytic_monodromy(1.0) - ref).norm() <= 1e-15);
  CHECK(analytic_monodromy(1.0)(0, 1) == doctest::Approx(-0.420735).epsilon(1e-6));
  CHECK(analytic_monodromy(1.0)(1, 0) == doctest::Approx(1.682942).epsilon(1e-6));
  CHECK((analytic_monodromy(oracle::pi) + Mat2::Identity()).norm() <= 1e-15);
  CHECK((analytic_monodromy(2 * oracle::pi) - Mat2::Identity()).norm() <= 1e-9);
  CHECK_THROWS_AS(analytic_monodromy(0.0), std::invalid_argument);
}

TEST_CASE("numeric monodromy of constant NVEs") {
  for (double w : {0.5, 1.0, 2.0, 3.0, 2 * oracle::pi, 7.5}) {
    const NveSpec s = NveSpec::from_omega(w);
    const MonodromyReport r = monodromy(s);
    CHECK((r.M - analytic_monodromy(w)).norm() <= 1e-9);
    CHECK((r.M - expm(s.A(0.0))).norm() <= 1e-9);
    CHECK(std::abs(r.M.determinant() - 1.0) <= 1e-9);
  }
  const MonodromyReport g = monodromy(NveSpec::constant(-1.0));
  Mat2 shear;
  shear << 1, 0, 2, 1;
  CHECK((g.M - shear).norm() <= 1e-12);
  CHECK(g.classification == Stability::parabolic);
}

TEST_CASE("periodic NVEs: RK4 oracle and unit determinant") {
  Rng rng(61);
  for (int i = 0; i < 10; ++i) {
    NveSpec s;
    s.g0 = rng.uniform(-2, 3);
    s.cos_coeffs = {rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)};
    s.sin_coeffs = {rng.uniform(-1, 1)};
    s.period = rng.uniform(0.5, 3);
    const MonodromyReport r = monodromy(s);
    CHECK((r.M - rk4_monodromy(s)).norm() <= 1e-9);
    CHECK(std::abs(r.M.determinant() - 1.0) <= 1e-9);
  }
}

TEST_CASE("classification") {
  const MonodromyReport e = classify_monodromy(analytic_monodromy(1.0), 1.0);
  CHECK(e.classification == Stability::elliptic);
  REQUIRE(e.omega);
  CHECK(*e.omega == doctest::Approx(1.0));
  CHECK(std::abs(std::abs(e.multipliers[0]) - 1.0) <= 1e-14);
  Mat2 h;
  h << 2, 0, 0, 0.5;
  const MonodromyReport hy = classify_monodromy(h, 1.0);
  CHECK(hy.classification == Stability::hyperbolic);
  CHECK_FALSE(hy.omega);
  CHECK(std::string(to_string(Stability::parabolic)) == "parabolic");
}

TEST_CASE("Diophantine check against a brute-force scan") {
  struct Case {
    double w;
    bool pass;
  };
  const double golden = (std::sqrt(5.0) - 1) / 2;
  for (const Case& c : {Case{golden, true}, Case{std::sqrt(2.0) - 1, true}, Case{3.0 / 7.0, false},
                        Case{oracle::pi - 3, false}}) {
    const DiophantineVerdict v = diophantine_check(c.w, 0.2, 2.5, 10000);
    const oracle::DioScan s = oracle::diophantine_scan(c.w, 0.2, 2.5, 10000);
    CHECK(v.pass == c.pass);
    CHECK(v.pass == (s.first_fail_q == 0));
    CHECK(v.worst_q == s.worst_q);
    CHECK(v.worst_ratio == doctest::Approx(s.worst).epsilon(1e-9));
    if (!v.pass) {
      CHECK(v.fail_q == s.first_fail_q);
    }
  }
  const DiophantineVerdict r = diophantine_check(3.0 / 7.0, 0.01, 3.0, 100);
  CHECK_FALSE(r.pass);
  CHECK(r.fail_q == 7);
  CHECK(r.fail_p == 3);
  CHECK(r.fail_distance <= 1e-16);
  CHECK_THROWS_AS(diophantine_check(0.5, 0.0, 2.5, 10), std::invalid_argument);
  CHECK_THROWS_AS(diophantine_check(0.5, 0.2, 2.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(diophantine_check(0.5, 0.2, 2.5, 0), std::invalid_argument);
}

TEST_CASE("normal frame") {
  Rng rng(62);
  for (int i = 0; i < 20; ++i) {
    const Vec4 x = random_sphere_point(rng).coords();
    const Vec4 X = torus_field(x);
    if (X.norm() < 1e-3) {
      continue;
    }
    const auto n = normal_frame(x, X);
    CHECK(std::abs(n[0].dot(n[1])) <= 1e-14);
    CHECK(n[0].norm() == doctest::Approx(1.0));
    CHECK(n[1].norm() == doctest::Approx(1.0));
    for (const Vec4& v : n) {
      CHECK(std::abs(v.dot(x)) <= 1e-14);
      CHECK(std::abs(v.dot(X)) <= 1e-14 * X.norm());
    }
  }
}

namespace {

SphereCurve orbit_of(const SphereFieldSpec& f, const S3Point& p, double tau, double& period) {
  TraceOptions o;
  o.integrator.atol = o.integrator.rtol = 1e-12;
  const SphereCurve c = trace_sphere(f, p, tau, o);
  const auto T = detect_closure(c, 1e-8);
  REQUIRE(T);
  period = *T;
  return closed_orbit(c, *T, 400);
}

} // namespace

TEST_CASE("orbit monodromy of the Hopf field") {
  for (double s : {1.0, 2.0}) {
    const SphereFieldSpec f = SphereFieldSpec::from_legendrian({Generator::constant(s), Polarity::b_type});
    double T = 0;
    const SphereCurve orbit = orbit_of(f, S3Point(Vec4(1, 0, 0, 0)), 2 * oracle::pi / s + 1, T);
    CHECK(T == doctest::Approx(2 * oracle::pi / s));
    const MonodromyReport r = orbit_monodromy(f, orbit, T);
    CHECK((r.M - Mat2::Identity()).norm() <= 1e-6);
  }
}

TEST_CASE("orbit monodromy of the torus field against its closed-form flow") {
  const SphereFieldSpec f = SphereFieldSpec::torus();
  const S3Point start(Complex(std::sqrt(0.6), 0), Complex(std::sqrt(0.4), 0));
  double T = 0;
  const SphereCurve orbit = orbit_of(f, start, 10 * oracle::pi + 1, T);
  const MonodromyReport r = orbit_monodromy(f, orbit, T);
  CHECK(std::abs(r.multipliers[0] - 1.0) <= 1e-6);
  CHECK(std::abs(r.multipliers[1] - 1.0) <= 1e-6);
  CHECK(r.classification == Stability::parabolic);
  CHECK(std::abs(r.M(0, 1)) + std::abs(r.M(1, 0)) >= 1e-2); // a shear, not the identity

  // finite-difference Poincare map of the flow written out by hand
  auto flow = [](const Vec4& x, double tau) {
    const Complex z1(x[0], x[1]), z2(x[2], x[3]);
    const Complex I(0, 1);
    const Complex w1 = z1 * std::exp(-I * std::norm(z2) * tau);
    const Complex w2 = z2 * std::exp(I * std::norm(z1) * tau);
    return Vec4(w1.real(), w1.imag(), w2.real(), w2.imag());
  };
  const Vec4 x0 = start.coords();
  const auto n = normal_frame(x0, torus_field(x0));
  Mat2 M;
  for (int j = 0; j < 2; ++j) {
    const Vec4 d = oracle::d1([&](double e) { return Vec4(flow(x0 + e * n[j], 10 * oracle::pi)); },
                              0.0, 1e-4);
    for (int i = 0; i < 2; ++i) {
      M(i, j) = n[i].dot(d);
    }
  }
  CHECK((r.M - M).norm() <= 1e-6);
}

TEST_CASE("orbit monodromy rejects open orbits") {
  const SphereFieldSpec f = SphereFieldSpec::torus();
  SphereCurve c = trace_sphere(f, S3Point(Vec4(0.6, 0, 0.8, 0)), 3.0);
  CHECK_THROWS_AS(orbit_monodromy(f, c, 3.0), std::invalid_argument);
  c.closed = true;
  CHECK_THROWS_AS(orbit_monodromy(f, c, 3.0), std::domain_error);
}

TEST_CASE("report JSON") {
  MonodromyReport r = classify_monodromy(analytic_monodromy(1.0), 1.0);
  r.diophantine = diophantine_check(*r.omega / (2 * oracle::pi), 0.2, 2.5, 100);
  const auto j = to_json(r);
  CHECK(j["classification"] == "elliptic");
  CHECK(j["matrix"].size() == 2);
  CHECK(j.contains("diophantine"));
  CHECK(j["diophantine"]["scope"] == "bounded check up to q_max");
}

#include "doctest.h"

#include "nullfield/legendrian.hpp"
#include "nullfield/sampling.hpp"
#include "oracles.hpp"

using namespace nullfield;

namespace {

const Complex I(0.0, 1.0);

Vec4 theta_field(const Generator& g, Polarity pol, const Vec4& x) {
  const Complex th = g(Complex(x[0], x[1]), Complex(x[2], x[3]));
  const Vec4 v1 = oracle::frame_v1(x), v2 = oracle::frame_v2(x);
  return pol == Polarity::e_type ? Vec4(th.real() * v1 - th.imag() * v2)
                                 : Vec4(th.real() * v2 + th.imag() * v1);
}

double fd_divergence(const Generator& g, Polarity pol, const Vec4& x) {
  double d = 0.0;
  for (int k = 0; k < 4; ++k) {
    d += oracle::d1(
        [&](double s) {
          Vec4 y = x;
          y[k] = s;
          return theta_field(g, pol, y)[k];
        },
        x[k], 1e-3);
  }
  return d;
}

Vec4 fd_gradient(const std::function<double(const Vec4&)>& f, const Vec4& x) {
  Vec4 g;
  for (int k = 0; k < 4; ++k) {
    g[k] = oracle::d1(
        [&](double s) {
          Vec4 y = x;
          y[k] = s;
          return f(y);
        },
        x[k], 1e-4);
  }
  return g;
}

/// Rotation number of a sampled loop from its exact tangents.
double oracle_rotation(const std::vector<Vec4>& xs, const std::vector<Vec4>& ts) {
  std::vector<Complex> w;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    w.emplace_back(ts[i].dot(oracle::frame_v1(xs[i])), ts[i].dot(oracle::frame_v2(xs[i])));
  }
  return oracle::winding(w);
}

} // namespace

TEST_CASE("Legendrian fields from generators") {
  const LegendrianField one{Generator::constant(1.0), Polarity::e_type};
  CHECK((eval_field(one, S3Point(Vec4(1, 0, 0, 0))) - Vec4(0, 0, 1, 0)).norm() == 0.0);

  Rng rng(41);
  for (const char* e : {"1", "zb1*zb2", "6*z1*z2^2", "exp(z1*zb2)"}) {
    const Generator g = parse_generator(e);
    for (Polarity pol : {Polarity::e_type, Polarity::b_type}) {
      const LegendrianField L{g, pol};
      for (int i = 0; i < 20; ++i) {
        const S3Point p = random_sphere_point(rng);
        const Vec4 X = eval_field(L, p);
        CHECK(std::abs(X.dot(oracle::frame_v4(p.coords()))) <= 1e-14 * (1 + X.norm()));
        CHECK(std::abs(X.dot(p.coords())) <= 1e-14 * (1 + X.norm()));
        CHECK((X - theta_field(g, pol, p.coords())).norm() <= 1e-13 * (1 + X.norm()));
      }
    }
  }
}

TEST_CASE("exact Jacobian matches differences") {
  Rng rng(42);
  const LegendrianField L{parse_generator("zb1*z2 + 2*z1^2"), Polarity::b_type};
  for (int i = 0; i < 10; ++i) {
    const Vec4 x = random_sphere_point(rng).coords();
    const Mat4 J = field_jacobian(L, x);
    for (int k = 0; k < 4; ++k) {
      const Vec4 col = oracle::d1(
          [&](double s) {
            Vec4 y = x;
            y[k] = s;
            return Vec4(eval_field_ambient(L, y));
          },
          x[k], 1e-4);
      CHECK((J.col(k) - col).norm() <= 1e-9);
    }
  }
}

TEST_CASE("the integrable torus field is the b_type field of zb1 zb2") {
  Rng rng(43);
  const LegendrianField L{parse_generator("zb1*zb2"), Polarity::b_type};
  for (int i = 0; i < 100; ++i) {
    const Vec4 x = random_sphere_point(rng).coords();
    const double n1 = x[0] * x[0] + x[1] * x[1], n2 = x[2] * x[2] + x[3] * x[3];
    const Vec4 explicit_field(x[1] * n2, -x[0] * n2, -x[3] * n1, x[2] * n1);
    CHECK((eval_field(L, S3Point(x)) - explicit_field).norm() <= 1e-15);
    CHECK((torus_field(x) - explicit_field).norm() <= 1e-15);
  }
}

TEST_CASE("torus flow is the closed-form flow of the torus field") {
  Rng rng(44);
  for (int i = 0; i < 10; ++i) {
    const Vec4 x0 = random_sphere_point(rng).coords();
    const double tau = rng.uniform(0, 20);
    const Vec4 ref = oracle::rk4([](double, const Vec4& x) { return Vec4(torus_field(x)); }, x0,
                                 0.0, tau, 4000);
    CHECK((torus_flow(x0, tau) - ref).norm() <= 1e-10);
    const Mat4 J = torus_field_jacobian(x0);
    for (int k = 0; k < 4; ++k) {
      const Vec4 col = oracle::d1(
          [&](double s) {
            Vec4 y = x0;
            y[k] = s;
            return Vec4(torus_field(y));
          },
          x0[k], 1e-4);
      CHECK((J.col(k) - col).norm() <= 1e-9);
    }
  }
}

TEST_CASE("divergence identities") {
  Rng rng(45);
  for (const char* e : {"1", "z1", "6*z1*z2^2", "exp(z1*z2)"}) {
    const Generator g = parse_generator(e);
    for (int i = 0; i < 20; ++i) {
      const S3Point p = random_sphere_point(rng);
      const DivergenceIdentities d = divergence_identities(g, p);
      CHECK(std::abs(d.div_e) <= 1e-12);
      CHECK(std::abs(d.div_b) <= 1e-12);
    }
  }
  const Generator zb1 = parse_generator("zb1");
  const DivergenceIdentities d = divergence_identities(zb1, S3Point(Vec4(0, 0, 1, 0)));
  CHECK(d.div_e == doctest::Approx(-2.0).epsilon(1e-14));
  for (const char* e : {"zb1", "zb1*z2 + zb2^2", "exp(zb1)"}) {
    const Generator g = parse_generator(e);
    for (int i = 0; i < 20; ++i) {
      const S3Point p = random_sphere_point(rng);
      const DivergenceIdentities d2 = divergence_identities(g, p);
      CHECK(std::abs(d2.div_e - d2.two_re_lbar) <= 1e-12);
      CHECK(std::abs(d2.div_b - d2.two_im_lbar) <= 1e-12);
      CHECK(std::abs(d2.div_e - fd_divergence(g, Polarity::e_type, p.coords())) <= 1e-8);
      CHECK(std::abs(d2.div_b - fd_divergence(g, Polarity::b_type, p.coords())) <= 1e-8);
    }
  }
}

TEST_CASE("rotation numbers of Legendrian torus loops") {
  // theta -> (a e^{i w theta}, b e^{i v theta}) with w a^2 + v b^2 = 0
  struct Loop {
    int w, v;
  };
  for (const Loop& l : {Loop{1, -1}, Loop{2, -1}, Loop{3, -1}, Loop{1, -2}, Loop{1, -3},
                        Loop{2, -3}, Loop{3, -2}}) {
    const double a = std::sqrt(-double(l.v) / double(l.w - l.v));
    const SphereCurve c = torus_curve(a, l.w, l.v, 800);
    const int r = rotation_number(c);
    CHECK(r == doctest::Approx(oracle_rotation(c.points, c.tangents)).epsilon(1e-9));
  }
  // the constant tangent coordinate -i
  const SphereCurve u = torus_curve(1.0 / std::sqrt(2.0), 1, -1, 400);
  CHECK(rotation_number(u) == 0);
  for (std::size_t i = 0; i < u.size(); i += 50) {
    CHECK(std::abs(u.tangents[i].dot(oracle::frame_v1(u.points[i]))) <= 1e-15);
    CHECK(u.tangents[i].dot(oracle::frame_v2(u.points[i])) == doctest::Approx(-1.0));
  }
  SphereCurve open = u;
  open.closed = false;
  CHECK_THROWS_AS(rotation_number(open), std::invalid_argument);
}

TEST_CASE("rotation number of the torus-field orbit matches the oracle") {
  const double a = std::sqrt(0.6);
  std::vector<Vec4> xs, ts;
  SphereCurve c;
  c.closed = true;
  const int n = 2000;
  for (int k = 0; k < n; ++k) {
    const double tau = 10.0 * oracle::pi * k / n;
    const Vec4 x = torus_flow(Vec4(a, 0, std::sqrt(0.4), 0), tau);
    c.params.push_back(tau);
    c.points.push_back(x);
    c.tangents.push_back(torus_field(x));
  }
  const double ref = oracle_rotation(c.points, c.tangents);
  CHECK(std::abs(ref - std::round(ref)) <= 1e-9);
  CHECK(rotation_number(c) == static_cast<int>(std::round(ref)));
}

TEST_CASE("Seifert fields and contact forms") {
  Rng rng(46);
  CHECK(contact_volume_ratio_closed_form({1, 1}, 0.3) == doctest::Approx(2.0));
  CHECK(contact_volume_ratio_closed_form({2, 3}, oracle::pi / 4) == doctest::Approx(12.5));
  CHECK(contact_volume_ratio_closed_form({3, 5}, oracle::pi / 6) == doctest::Approx(28.0));
  CHECK_THROWS_AS(SeifertSpec({2, 4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(SeifertSpec({0, 1}).validate(), std::invalid_argument);
  for (SeifertSpec S : {SeifertSpec{1, 1}, SeifertSpec{2, 3}, SeifertSpec{3, 5}}) {
    for (int i = 0; i < 50; ++i) {
      const S3Point p = random_sphere_point(rng);
      const HopfCoords h = hopf_coords(p);
      if (h.s < 1e-2 || h.s > oracle::pi / 2 - 1e-2) {
        continue;
      }
      const Vec4 X = seifert_field(S, p.coords());
      const Vec4 a = seifert_form(S, p);
      CHECK(std::abs(a.dot(X)) <= 1e-12);
      CHECK(std::abs(contact_volume_ratio(S, p) -
                     contact_volume_ratio_closed_form(S, h.s)) <= 1e-6);
      // the Hopf-coordinate form applied through the coordinate differentials
      const Vec4 V(0.3, -0.1, 0.7, 0.2);
      const Vec4 Vt = V - V.dot(p.coords()) * p.coords();
      CHECK(std::abs(seifert_form_hopf(S, h).dot(hopf_differentials(p, Vt)) - a.dot(Vt)) <= 1e-12);
      // seifert field tangent to the circles (z1 e^{ip phi}, z2 e^{iq phi})
      const Vec4 ref = oracle::d1(
          [&](double phi) {
            const Complex w1 = p.z1() * std::exp(I * double(S.p) * phi);
            const Complex w2 = p.z2() * std::exp(I * double(S.q) * phi);
            return Vec4(w1.real(), w1.imag(), w2.real(), w2.imag());
          },
          0.0, 1e-3);
      CHECK((X - ref).norm() <= 1e-9);
    }
  }
  // near a core circle the polynomial branch keeps working
  const S3Point core(Vec4(1, 0, 1e-9, 0));
  CHECK(std::abs(seifert_form({2, 3}, core).dot(seifert_field({2, 3}, core.coords()))) <= 1e-12);
  CHECK_THROWS_AS(contact_volume_ratio({2, 3}, core), std::domain_error);
}

TEST_CASE("first-integral generators") {
  const MixedPoly G = parse_generator("2*z1*z2 - 1").as_polynomial();
  const MixedPoly h = h_from_potential(G);
  CHECK(std::abs(h(1.0, 0.0) - 4.0) <= 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(h(r * std::exp(0.3 * I), r * std::exp(-1.1 * I))) <= 1e-15);

  const int p = 2, q = 3;
  const double rho = torus_knot_rho(p, q);
  const MixedPoly Gk = torus_knot_potential(p, q);
  Rng rng(47);
  for (int i = 0; i < 30; ++i) {
    const S3Point s = random_sphere_point(rng);
    const Complex z1 = s.z1(), z2 = s.z2();
    const Complex ref = double(p * q) * z1 * z2 * z2 *
                        (2 * rho * std::norm(z1) / p - 2 * rho * std::norm(z2) / q);
    CHECK(std::abs(h_from_potential(Gk, z1, z2) - ref) <= 1e-12);
  }
  CHECK_THROWS_AS(h_from_potential(parse_generator("zb1").as_polynomial()), std::invalid_argument);
}

TEST_CASE("Re G and Im G are first integrals of the b_type and e_type fields") {
  Rng rng(48);
  for (const char* e : {"2*z1*z2 - 1", "5.37914353639919*z1^2*z2^3 - 1", "z1^3 + 1i*z2"}) {
    const MixedPoly G = parse_generator(e).as_polynomial();
    const Generator h(h_from_potential(G));
    auto reG = [&](const Vec4& x) { return G(Complex(x[0], x[1]), Complex(x[2], x[3])).real(); };
    auto imG = [&](const Vec4& x) { return G(Complex(x[0], x[1]), Complex(x[2], x[3])).imag(); };
    for (int i = 0; i < 20; ++i) {
      const S3Point s = random_sphere_point(rng);
      const Vec4 Xb = eval_field({h, Polarity::b_type}, s);
      const Vec4 Xe = eval_field({h, Polarity::e_type}, s);
      CHECK(std::abs(fd_gradient(reG, s.coords()).dot(Xb)) <= 1e-8);
      CHECK(std::abs(fd_gradient(imG, s.coords()).dot(Xe)) <= 1e-8);
    }
  }
}

TEST_CASE("real-function generator is half the potential generator") {
  const MixedPoly G = parse_generator("2*z1*z2^2 + 1i*z1").as_polynomial();
  const MixedPoly reG = (G + G.conj()) * Complex(0.5);
  Rng rng(49);
  for (int i = 0; i < 20; ++i) {
    const S3Point s = random_sphere_point(rng);
    CHECK(std::abs(h_from_real_function(reG)(s.z1(), s.z2()) -
                   0.5 * h_from_potential(G)(s.z1(), s.z2())) <= 1e-13);
  }
  // a real function that is not the real part of a holomorphic one
  const MixedPoly f = parse_generator("z1*zb1*z2*zb2 + z1*zb2 + zb1*z2").as_polynomial();
  const Generator hf(h_from_real_function(f));
  auto fr = [&](const Vec4& x) { return f(Complex(x[0], x[1]), Complex(x[2], x[3])).real(); };
  for (int i = 0; i < 20; ++i) {
    const S3Point s = random_sphere_point(rng);
    CHECK(std::abs(fd_gradient(fr, s.coords()).dot(eval_field({hf, Polarity::b_type}, s))) <= 1e-8);
  }
}

TEST_CASE("tangency defect") {
  const MixedPoly G = torus_knot_potential(2, 3);
  const Generator h(h_from_potential(G));
  const Generator theta = parse_generator("6*z1*z2^2");
  Rng rng(50);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const S3Point p = random_sphere_point(rng);
    const TangencyDefect self = tangency_defect(h, G, p);
    if (self.vacuous) {
      continue;
    }
    ++checked;
    CHECK(self.defect <= 1e-15);
    CHECK_FALSE(self.antiparallel);
    CHECK(tangency_defect(Complex(0, 1) * h, G, p).defect == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tangency_defect(theta, G, p).defect <= 1e-10);
  }
  CHECK(checked > 80);
  const TangencyDefect v = tangency_defect(h, G, S3Point(Vec4(1, 0, 0, 0)));
  CHECK(v.vacuous);
}

TEST_CASE("torus-knot normalisation maximises |z1^p z2^q| on the sphere") {
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 5}}) {
    double best = 0.0;
    for (int k = 0; k <= 200000; ++k) {
      const double s = oracle::pi / 2 * k / 200000.0;
      best = std::max(best, std::pow(std::cos(s), p) * std::pow(std::sin(s), q));
    }
    CHECK(torus_knot_rho(p, q) == doctest::Approx(1.0 / best).epsilon(1e-9));
  }
  CHECK(torus_knot_rho(2, 3) == doctest::Approx(5.37914353).epsilon(1e-8));
}

TEST_CASE("totally tangential intersection defects") {
  const TtLinkDefect a = tt_link_defect(parse_generator("2*z1*z2 - 1").as_polynomial(),
                                        tt_torus_curve(1, 1, 400));
  CHECK(a.max_abs_g <= 1e-10);
  CHECK(a.max_contact_gradient <= 1e-10);
  const TtLinkDefect b = tt_link_defect(torus_knot_potential(2, 3), tt_torus_curve(2, 3, 1200));
  CHECK(b.max_abs_g <= 1e-8);
  CHECK(b.max_contact_gradient <= 1e-8);
  // a Hopf fiber does not lie on {z1 = 0}
  SphereCurve fiber;
  fiber.closed = true;
  for (int k = 0; k < 100; ++k) {
    const Complex e = std::exp(I * (2 * oracle::pi * k / 100));
    fiber.points.push_back(S3Point(0.6 * e, 0.8 * e).coords());
  }
  CHECK(tt_link_defect(parse_generator("z1").as_polynomial(), fiber).max_abs_g >= 0.5);
  // the tt curve is Legendrian and lies on the critical torus
  const SphereCurve c = tt_torus_curve(2, 3, 300);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(std::abs(c.tangents[i].dot(oracle::frame_v4(c.points[i]))) <= 1e-14);
    CHECK(std::norm(Complex(c.points[i][0], c.points[i][1])) == doctest::Approx(0.4));
  }
}

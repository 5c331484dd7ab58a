#include "nullfield/floquet.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nullfield {

namespace {

constexpr double kPi = std::numbers::pi;

using State20 = Eigen::Matrix<double, 20, 1>;

} // namespace

// ------------------------------------------------------------ NVE

NveSpec NveSpec::from_omega(double omega) { return constant(0.5 * omega * omega - 1.0); }

NveSpec NveSpec::constant(double g) {
  NveSpec s;
  s.g0 = g;
  return s;
}

double NveSpec::G(double t) const {
  double g = g0;
  const double w = 2.0 * kPi / period;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    g += cos_coeffs[k] * std::cos(w * static_cast<double>(k + 1) * t);
  }
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) {
    g += sin_coeffs[k] * std::sin(w * static_cast<double>(k + 1) * t);
  }
  return g;
}

Mat2 NveSpec::A(double t) const {
  Mat2 a;
  a << 0.0, -(1.0 + G(t)), 2.0, 0.0;
  return a;
}

void NveSpec::validate() const {
  if (!(period > 0.0) || !std::isfinite(period) || !std::isfinite(g0)) {
    throw std::invalid_argument("NveSpec: period must be positive and G finite");
  }
  for (double c : cos_coeffs) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("NveSpec: non-finite coefficient");
    }
  }
  for (double c : sin_coeffs) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("NveSpec: non-finite coefficient");
    }
  }
}

const char* to_string(Stability s) {
  switch (s) {
  case Stability::elliptic:
    return "elliptic";
  case Stability::hyperbolic:
    return "hyperbolic";
  case Stability::parabolic:
    return "parabolic";
  }
  return "unknown";
}

MonodromyReport classify_monodromy(const Mat2& M, double period) {
  MonodromyReport r;
  r.M = M;
  r.period = period;
  const double tr = M.trace();
  const double det = M.determinant();
  const double disc = 0.25 * tr * tr - det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    r.multipliers = {Complex(0.5 * tr + s, 0.0), Complex(0.5 * tr - s, 0.0)};
  } else {
    const double s = std::sqrt(-disc);
    r.multipliers = {Complex(0.5 * tr, s), Complex(0.5 * tr, -s)};
  }
  const double a = std::abs(tr);
  if (a < 2.0 - kParabolicBand) {
    r.classification = Stability::elliptic;
    r.omega = std::acos(0.5 * tr);
  } else if (a > 2.0 + kParabolicBand) {
    r.classification = Stability::hyperbolic;
  } else {
    r.classification = Stability::parabolic;
  }
  return r;
}

MonodromyReport monodromy(const NveSpec& spec, double tol) {
  spec.validate();
  OdeProblem<4> prob;
  prob.rhs = [&spec](double t, const Vec4& y) {
    const Mat2 A = spec.A(t);
    Eigen::Map<const Mat2> Phi(y.data());
    Vec4 out;
    Eigen::Map<Mat2>(out.data()) = A * Phi;
    return out;
  };
  IntegratorOptions opt;
  opt.atol = tol;
  opt.rtol = tol;
  opt.max_step = spec.period / 8.0;
  opt.keep_dense = false;
  Vec4 y0;
  Eigen::Map<Mat2>(y0.data()) = Mat2::Identity();
  const Curve<4> c = integrate<4>(prob, 0.0, y0, spec.period, opt);
  const Mat2 M = Eigen::Map<const Mat2>(c.points.back().data());
  return classify_monodromy(M, spec.period);
}

Mat2 analytic_monodromy(double omega) {
  if (omega == 0.0) {
    throw std::invalid_argument("analytic_monodromy: omega must be non-zero");
  }
  const double c = std::cos(omega);
  const double s = std::sin(omega);
  Mat2 M;
  M << c, -0.5 * omega * s, 2.0 / omega * s, c;
  return M;
}

// ------------------------------------------------------------ Diophantine

DiophantineVerdict diophantine_check(double w, double gamma, double tau, long q_max) {
  if (!(gamma > 0.0) || !(tau > 2.0) || q_max < 1 || !std::isfinite(w)) {
    throw std::invalid_argument("diophantine_check: need gamma > 0, tau > 2, q_max >= 1");
  }
  DiophantineVerdict v;
  v.q_max = q_max;
  v.worst_ratio = std::numeric_limits<double>::infinity();
  for (long q = 1; q <= q_max; ++q) {
    const double qd = static_cast<double>(q);
    const long p = std::lround(w * qd);
    const double dist = std::abs(w - static_cast<double>(p) / qd);
    const double bound = gamma / std::pow(qd, tau);
    const double ratio = dist / bound;
    if (ratio < v.worst_ratio) {
      v.worst_ratio = ratio;
      v.worst_p = p;
      v.worst_q = q;
    }
    if (v.pass && dist < bound) {
      v.pass = false;
      v.fail_p = p;
      v.fail_q = q;
      v.fail_distance = dist;
      v.fail_bound = bound;
    }
  }
  return v;
}

// ------------------------------------------------------------ orbits

std::array<Vec4, 2> normal_frame(const Vec4& x, const Vec4& X) {
  const double xn = X.norm();
  if (!(xn > 1e-12)) {
    throw std::domain_error("normal_frame: field vanishes at the base point");
  }
  const Vec4 e0 = x.normalized();
  const Vec4 t = X / xn;
  const Vec4 candidates[4] = {complex_structure(t), hopf_v4(e0), contact_v1(e0), contact_v2(e0)};
  std::array<Vec4, 2> out;
  int found = 0;
  for (const Vec4& c : candidates) {
    Vec4 v = c - c.dot(e0) * e0 - c.dot(t) * t;
    for (int k = 0; k < found; ++k) {
      v -= v.dot(out[k]) * out[k];
    }
    if (v.norm() > 0.1) {
      out[found++] = v.normalized();
      if (found == 2) {
        return out;
      }
    }
  }
  throw std::domain_error("normal_frame: frame degenerates");
}

MonodromyReport orbit_monodromy(const SphereFieldSpec& f, const SphereCurve& orbit, double period,
                                const OrbitMonodromyOptions& opt) {
  if (!orbit.closed || orbit.points.empty()) {
    throw std::invalid_argument("orbit_monodromy: orbit closure has not been verified");
  }
  if (!(period > 0.0)) {
    throw std::invalid_argument("orbit_monodromy: period must be positive");
  }
  const Vec4 x0 = orbit.points.front().normalized();

  auto jacobian = [&](const Vec4& x) -> Mat4 {
    if (!opt.finite_difference_jacobian) {
      return sphere_field_jacobian(f, x);
    }
    Mat4 J;
    for (int k = 0; k < 4; ++k) {
      Vec4 xp = x;
      Vec4 xm = x;
      xp[k] += opt.fd_step;
      xm[k] -= opt.fd_step;
      J.col(k) = (eval_sphere_field(f, xp) - eval_sphere_field(f, xm)) / (2.0 * opt.fd_step);
    }
    return J;
  };

  OdeProblem<20> prob;
  prob.rhs = [&](double, const State20& y) {
    const Vec4 x = y.head<4>();
    State20 out;
    out.head<4>() = eval_sphere_field(f, x);
    Eigen::Map<const Mat4> Phi(y.data() + 4);
    Eigen::Map<Mat4>(out.data() + 4) = jacobian(x) * Phi;
    return out;
  };
  State20 y0;
  y0.head<4>() = x0;
  Eigen::Map<Mat4>(y0.data() + 4) = Mat4::Identity();
  const Curve<20> c = integrate<20>(prob, 0.0, y0, period, opt.integrator);
  const State20& yT = c.points.back();
  if ((yT.head<4>() - x0).norm() > opt.closure_tol) {
    throw std::domain_error("orbit_monodromy: trajectory does not close at the given period");
  }
  // Slide the end point along the orbit to the return closest to x0; to first
  // order Phi(T + d) = Phi(T) + d J(x(T)) Phi(T).
  const Vec4 xT = yT.head<4>();
  const Vec4 XT = eval_sphere_field(f, xT);
  const double shift = -(xT - x0).dot(XT) / XT.squaredNorm();
  Mat4 Phi = Eigen::Map<const Mat4>(yT.data() + 4);
  Phi += shift * jacobian(xT) * Phi;
  const auto n = normal_frame(x0, eval_sphere_field(f, x0));
  Mat2 M;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      M(i, j) = n[i].dot(Phi * n[j]);
    }
  }
  return classify_monodromy(M, period);
}

// ------------------------------------------------------------ JSON

nlohmann::json to_json(const DiophantineVerdict& v) {
  nlohmann::json j;
  j["pass"] = v.pass;
  j["q_max"] = v.q_max;
  j["scope"] = "bounded check up to q_max";
  j["worst"] = {{"p", v.worst_p}, {"q", v.worst_q}, {"ratio", v.worst_ratio}};
  if (!v.pass) {
    j["first_violation"] = {{"p", v.fail_p},
                            {"q", v.fail_q},
                            {"distance", v.fail_distance},
                            {"bound", v.fail_bound}};
  }
  return j;
}

nlohmann::json to_json(const MonodromyReport& r) {
  nlohmann::json j;
  j["matrix"] = {{r.M(0, 0), r.M(0, 1)}, {r.M(1, 0), r.M(1, 1)}};
  j["multipliers"] = {{r.multipliers[0].real(), r.multipliers[0].imag()},
                      {r.multipliers[1].real(), r.multipliers[1].imag()}};
  j["classification"] = to_string(r.classification);
  j["omega"] = r.omega ? nlohmann::json(*r.omega) : nlohmann::json(nullptr);
  j["diophantine"] = r.diophantine ? to_json(*r.diophantine) : nlohmann::json(nullptr);
  j["period"] = r.period;
  return j;
}

} // namespace nullfield

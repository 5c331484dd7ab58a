#pragma once

// Adaptive Dormand-Prince 5(4) integration with PI step control and the
// standard fourth-order continuous extension.  The local error is measured
// in the max norm over components; state updates use compensated summation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "nullfield/curve.hpp"

namespace nullfield {

class IntegrationError : public std::runtime_error {
public:
  enum class Kind { step_underflow, left_domain, too_many_steps, non_finite };

  IntegrationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

struct IntegratorOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double max_step = 0.1;
  double initial_step = 0.0; // 0 picks a step automatically
  long max_steps = 5'000'000;
  bool keep_dense = true;

  void validate() const {
    if (!(atol > 0.0) || !(rtol > 0.0) || !(max_step > 0.0) || initial_step < 0.0 ||
        max_steps < 1) {
      throw std::invalid_argument("IntegratorOptions: tolerances and steps must be positive");
    }
  }
};

template <int Dim>
struct OdeProblem {
  using State = Eigen::Matrix<double, Dim, 1>;
  std::function<State(double, const State&)> rhs;
  /// Applied to every accepted state (e.g. renormalization onto S^3).
  std::function<void(State&)> project;
  /// Accepted states for which this returns false end the integration with
  /// IntegrationError::Kind::left_domain.
  std::function<bool(const State&)> inside;
};

namespace dp5 {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

} // namespace dp5

/// Integrates y' = rhs(t, y) from (t0, y0) to t1 (either direction).  Every
/// accepted step is recorded in the returned curve: params, points, tangents
/// (rhs at the point) and, when requested, the dense segments.  Throws
/// IntegrationError on step underflow, leaving the domain, non-finite values
/// or exceeding max_steps.
template <int Dim>
Curve<Dim> integrate(const OdeProblem<Dim>& prob, double t0,
                     const typename OdeProblem<Dim>::State& y0_in, double t1,
                     const IntegratorOptions& opt) {
  using State = typename OdeProblem<Dim>::State;
  using namespace dp5;
  opt.validate();

  Curve<Dim> out;
  State y = y0_in;
  if (prob.project) {
    prob.project(y);
  }
  State k1 = prob.rhs(t0, y);
  out.params.push_back(t0);
  out.points.push_back(y);
  out.tangents.push_back(k1);
  if (t1 == t0) {
    return out;
  }
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  auto err_norm = [&](const State& e, const State& ya, const State& yb) {
    double s = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sk = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      s = std::max(s, std::abs(e[i]) / sk);
    }
    return s;
  };

  double h = opt.initial_step;
  if (h == 0.0) {
    const State zero = State::Zero(y.size());
    const double d0 = err_norm(y, y, zero);
    const double dd1 = err_norm(k1, y, zero);
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, opt.max_step);
    const State ytry = y + dir * h0 * k1;
    const State k2 = prob.rhs(t0 + dir * h0, ytry);
    const double dd2 = err_norm(k2 - k1, y, zero) / h0;
    const double m = std::max(dd1, dd2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    h = std::min({100.0 * h0, h1, opt.max_step});
  }
  h = std::min(h, span);

  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safe = 0.8;
  constexpr double facc1 = 1.0 / 0.2; // largest shrink 5x
  constexpr double facc2 = 1.0 / 10.0; // largest growth 10x
  double facold = 1e-4;
  bool last_rejected = false;
  double t = t0;
  long steps = 0;
  State comp = State::Zero(y.size()); // Kahan compensation of y

  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps) {
      throw IntegrationError(IntegrationError::Kind::too_many_steps,
                             "integrate: maximum number of steps exceeded");
    }
    const double remaining = std::abs(t1 - t);
    bool final_step = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      final_step = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw IntegrationError(IntegrationError::Kind::step_underflow,
                             "integrate: step size underflow at t = " + std::to_string(t));
    }
    const double hs = dir * h;
    const State k2 = prob.rhs(t + c2 * hs, y + hs * (a21 * k1));
    const State k3 = prob.rhs(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    const State k4 = prob.rhs(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const State k5 =
        prob.rhs(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const State k6 = prob.rhs(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                                                 a65 * k5));
    const State incr = hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6) + comp;
    const State ynew = y + incr;
    const double tnew = final_step ? t1 : t + hs;
    const State k7 = prob.rhs(tnew, ynew);
    const State e = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = err_norm(e, y, ynew);
    if (!std::isfinite(err) || !ynew.allFinite()) {
      if (h > 1e-14 * std::max(1.0, std::abs(t))) {
        h *= 0.2;
        last_rejected = true;
        continue;
      }
      throw IntegrationError(IntegrationError::Kind::non_finite,
                             "integrate: non-finite state at t = " + std::to_string(t));
    }

    const double fac11 = std::pow(err, expo1);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double hnew = h / fac;
      facold = std::max(err, 1e-4);

      if (opt.keep_dense) {
        DenseSegment<Dim> seg;
        seg.t0 = t;
        seg.h = tnew - t;
        const State ydiff = ynew - y;
        const State bspl = hs * k1 - ydiff;
        seg.r1 = y;
        seg.r2 = ydiff;
        seg.r3 = bspl;
        seg.r4 = ydiff - hs * k7 - bspl;
        seg.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        out.dense.push_back(std::move(seg));
      }

      comp = (y - ynew) + incr;
      State yacc = ynew;
      State kacc = k7;
      if (prob.project) {
        prob.project(yacc);
        out.renormalization_displacement += (yacc - ynew).norm();
        if (yacc != ynew) {
          kacc = prob.rhs(tnew, yacc);
          comp.setZero();
        }
      }
      if (prob.inside && !prob.inside(yacc)) {
        throw IntegrationError(IntegrationError::Kind::left_domain,
                               "integrate: trajectory left the domain at t = " +
                                   std::to_string(tnew));
      }
      y = yacc;
      k1 = kacc;
      t = tnew;
      out.params.push_back(t);
      out.points.push_back(y);
      out.tangents.push_back(k1);

      if (last_rejected) {
        hnew = std::min(hnew, h);
      }
      last_rejected = false;
      h = std::min(hnew, opt.max_step);
    } else {
      h /= std::min(facc1, fac11 / safe);
      last_rejected = true;
    }
  }
  return out;
}

} // namespace nullfield

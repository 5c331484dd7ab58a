#pragma once

// Linear periodic variational equations: the 2x2 normal variational
// equation, monodromy matrices, Floquet multipliers, Diophantine frequency
// checks and numeric monodromy of closed orbits on S^3.

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "nullfield/flow.hpp"

namespace nullfield {

using Mat2 = Eigen::Matrix2d;

/// xi' = A(t) xi with A = [[0, -(1 + G(t))], [2, 0]] and
///   G(t) = g0 + sum_k a_k cos(2 pi k t / period) + b_k sin(2 pi k t / period).
struct NveSpec {
  double g0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  double period = 1.0;

  /// Constant G = omega^2 / 2 - 1, for which the monodromy is a rotation by
  /// omega in suitable coordinates.
  static NveSpec from_omega(double omega);
  static NveSpec constant(double g);

  double G(double t) const;
  Mat2 A(double t) const;
  /// Throws std::invalid_argument unless period > 0 and all values finite.
  void validate() const;
};

enum class Stability { elliptic, hyperbolic, parabolic };

const char* to_string(Stability s);

/// Dead zone around |tr M| = 2 in which the classification is parabolic.
inline constexpr double kParabolicBand = 1e-9;

struct DiophantineVerdict {
  bool pass = true;
  long q_max = 0;
  // Worst case over 1 <= q <= q_max of |w - p/q| q^tau / gamma (>= 1 passes).
  long worst_p = 0;
  long worst_q = 0;
  double worst_ratio = 0.0;
  // First violation, when any: |w - p/q| and gamma / q^tau at that (p, q).
  long fail_p = 0;
  long fail_q = 0;
  double fail_distance = 0.0;
  double fail_bound = 0.0;
};

/// Checks |w - p/q| >= gamma / q^tau for 1 <= q <= q_max with the nearest p
/// for each q.  A pass only certifies the inequality up to q_max.  Throws
/// std::invalid_argument unless gamma > 0, tau > 2 and q_max >= 1.
DiophantineVerdict diophantine_check(double w, double gamma, double tau, long q_max);

struct MonodromyReport {
  Mat2 M = Mat2::Identity();
  std::array<Complex, 2> multipliers{};
  Stability classification = Stability::parabolic;
  std::optional<double> omega; // arccos(tr M / 2) when elliptic
  std::optional<DiophantineVerdict> diophantine;
  double period = 1.0;
};

/// Classifies M and fills multipliers and omega.
MonodromyReport classify_monodromy(const Mat2& M, double period);

/// Integrates the NVE over one period from the identity.  Throws
/// IntegrationError on failure.
MonodromyReport monodromy(const NveSpec& spec, double tol = 1e-12);

/// [[cos w, -(w/2) sin w], [(2/w) sin w, cos w]]; throws
/// std::invalid_argument for w = 0.
Mat2 analytic_monodromy(double omega);

struct OrbitMonodromyOptions {
  IntegratorOptions integrator{1e-14, 1e-14, 0.05, 0.0, 5'000'000, false};
  /// Use central differences of the field instead of its exact Jacobian.
  bool finite_difference_jacobian = false;
  double fd_step = 1e-5;
  /// Largest allowed |x(period) - x(0)|.
  double closure_tol = 1e-6;
};

/// Normal frame (n1, n2) at x on S^3 for a field value X: n1 is the unit
/// vector along J X (the Legendrian orthogonal of X, i.e. -Z when X is the
/// b_type field of theta and Z its e_type partner) and n2 the Hopf field v4,
/// each made orthogonal to x, X and the previous vector; further contact
/// vectors are used when one of these degenerates.  Throws
/// std::domain_error when X vanishes.
std::array<Vec4, 2> normal_frame(const Vec4& x, const Vec4& X);

/// Monodromy of the linearized flow along the closed orbit through
/// orbit.points.front() with the given period, expressed in normal_frame at
/// that point.  Throws std::invalid_argument when the orbit is not marked
/// closed and std::domain_error when the integrated trajectory misses its
/// start by more than closure_tol.
MonodromyReport orbit_monodromy(const SphereFieldSpec& f, const SphereCurve& orbit, double period,
                                const OrbitMonodromyOptions& opt = {});

/// Fields: matrix, multipliers ([re, im] pairs), classification, omega,
/// diophantine, period.
nlohmann::json to_json(const MonodromyReport& r);
nlohmann::json to_json(const DiophantineVerdict& v);

} // namespace nullfield

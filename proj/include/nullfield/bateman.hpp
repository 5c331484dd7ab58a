#pragma once

// Hopf-type Bateman variables, their conjugate/time-reversed siblings, the
// Riemann-Silberstein field F = E + iB they generate, and the pointwise
// residuals used to verify nullness and Maxwell's equations.

#include <Eigen/Core>

#include "nullfield/funcspace.hpp"
#include "nullfield/geom.hpp"

namespace nullfield {

using CVec3 = Eigen::Vector3cd;

struct SpacetimePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;

  Vec3 space() const { return {x, y, z}; }
  static SpacetimePoint at(const Vec3& r, double t) { return {r.x(), r.y(), r.z(), t}; }
};

/// hopf:  alpha = (r^2 - t^2 - 1 + 2iz) / D,  beta = 2(x - iy) / D,
///        D = r^2 - (t - i)^2.
/// tilde: alpha~(x, t) = conj(alpha(x, -t)), likewise for beta.
enum class Variant { hopf, tilde };

/// direct: F = h(alpha, beta) grad alpha x grad beta with h holomorphic.
/// antiholomorphic: h antiholomorphic, F = conj(h)(alpha~, beta~)
/// grad alpha~ x grad beta~, where conj(h) is the holomorphic function with
/// conjugated coefficients and (alpha~, beta~) is the conjugate family of the
/// requested variant (hopf -> tilde, tilde -> hopf).  At t = 0 this is the
/// complex conjugate of the direct field whose generator is h with every zb
/// replaced by z (same coefficients).
enum class FieldMode { direct, antiholomorphic };

struct VariableJet {
  Complex alpha;
  Complex beta;
  CVec3 grad_alpha;
  CVec3 grad_beta;
  Complex dt_alpha;
  Complex dt_beta;
};

/// Riemann-Silberstein vector F = E + iB.
struct ComplexTriple {
  CVec3 F = CVec3::Zero();

  Vec3 E() const { return F.real(); }
  Vec3 B() const { return F.imag(); }
};

struct EMSample {
  Vec3 E;
  Vec3 B;
  double W = 0.0;      // (|E|^2 + |B|^2) / 2
  Vec3 P;              // E x B / W, meaningful only when has_poynting
  bool has_poynting = false;
};

/// Energy density below which the normalized Poynting field is undefined.
inline constexpr double kPoyntingEnergyFloor = 1e-14;

/// Values and exact first derivatives (closed-form quotient rule).
VariableJet variables(const SpacetimePoint& p, Variant variant);

/// grad alpha x grad beta - i (dt alpha grad beta - dt beta grad alpha).
CVec3 bateman_pde_residual(const SpacetimePoint& p, Variant variant);

/// Throws std::invalid_argument when h does not match the mode (mixed
/// holomorphic/antiholomorphic terms, or the wrong kind).
ComplexTriple rs_field(const Generator& h, const SpacetimePoint& p, Variant variant,
                       FieldMode mode);

EMSample em_sample(const ComplexTriple& F);

struct NullDefect {
  double e_dot_b;       // E . B
  double norm_gap;      // |E|^2 - |B|^2
};

NullDefect null_defect(const ComplexTriple& F);

struct MaxwellResidual {
  Vec3 ampere;    // dt E - curl B
  Vec3 faraday;   // dt B + curl E
  double div_e;
  double div_b;

  double max_norm() const;
};

/// Fourth-order central differences of rs_field in space and time.
MaxwellResidual maxwell_residual(const Generator& h, const SpacetimePoint& p, Variant variant,
                                 FieldMode mode, double fd_step = 1e-3);

/// Solves (alpha, beta)|_t (x) = target for x.  Throws std::domain_error when
/// target is within 1e-8 of the pole (1, 0) or the inversion fails.
Vec3 invert_hopf_map(const S3Point& target, double t);

/// Compares the pushforward of (E, B) at time t by (alpha, beta)|_t with
/// (Re(h (v1 + i v2)), Im(h (v1 + i v2))) at the sample point.  Returns the
/// largest of the two angle defects (radians) and the relative mismatch of
/// the two scale factors; zero means parallel with a common positive factor.
/// The differential of the map is taken by central finite differences.
double sphere_pushforward_check(const Generator& h, double t, const S3Point& sample,
                                double fd_step = 1e-5);

} // namespace nullfield

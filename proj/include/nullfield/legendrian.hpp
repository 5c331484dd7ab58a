#pragma once

// Legendrian vector fields on S^3 for the standard contact structure, the
// divergence / tangential Cauchy-Riemann identities, rotation numbers,
// Seifert fields with their adapted contact forms, and first integrals
// coming from holomorphic potentials.

#include "nullfield/curve.hpp"
#include "nullfield/funcspace.hpp"
#include "nullfield/geom.hpp"

namespace nullfield {

/// e_type: Re(theta) v1 - Im(theta) v2 = Re(theta (v1 + i v2)).
/// b_type: Re(theta) v2 + Im(theta) v1 = Im(theta (v1 + i v2)).
enum class Polarity { e_type, b_type };

struct LegendrianField {
  Generator theta;
  Polarity polarity = Polarity::e_type;
};

/// Field value at p.
Vec4 eval_field(const LegendrianField& L, const S3Point& p);
/// The same coefficient formula at an arbitrary point of R^4 (no
/// normalization); used by integrators between renormalizations.
Vec4 eval_field_ambient(const LegendrianField& L, const Vec4& x);
/// Exact ambient Jacobian d(field)/dx.
Mat4 field_jacobian(const LegendrianField& L, const Vec4& x);

struct DivergenceIdentities {
  double div_e;        // ambient divergence of the e_type field
  double div_b;        // ambient divergence of the b_type field
  double two_re_lbar;  // 2 Re(Lbar theta)
  double two_im_lbar;  // 2 Im(Lbar theta)
};

DivergenceIdentities divergence_identities(const Generator& theta, const S3Point& p);

/// Tolerance on |T . v4| / |T| for a curve to count as Legendrian.
inline constexpr double kLegendrianTol = 1e-6;

/// Winding number of s -> (T . v1) + i (T . v2) over a closed Legendrian
/// curve with tangents.  Throws std::invalid_argument when the curve is not
/// closed or has no tangents, and std::domain_error when a tangent leaves the
/// contact plane, its contact projection falls below 1e-9, or consecutive
/// samples turn by pi/2 or more.
int rotation_number(const SphereCurve& c);

struct SeifertSpec {
  int p = 1;
  int q = 1;

  /// Throws std::invalid_argument unless p, q >= 1 and gcd(p, q) = 1.
  void validate() const;
};

/// X_{p,q} = (-p y1, p x1, -q y2, q x2).
Vec4 seifert_field(const SeifertSpec& S, const Vec4& x);
Mat4 seifert_jacobian(const SeifertSpec& S);

/// Coefficients of alpha_{p,q} in (dx1, dy1, dx2, dy2) by the rational
/// Cartesian formula.  Valid off S^3 as well; throws std::domain_error when
/// |z1| or |z2| is below 1e-12.
Vec4 seifert_form_cartesian(const SeifertSpec& S, const Vec4& x);

/// alpha_{p,q} at a point of S^3.  Uses the Cartesian formula away from the
/// core circles and the equivalent polynomial expression (exact on S^3)
///   (q - p) Re(z1 z2) (x . dx) - q x2 dx1 + q y2 dy1 + p x1 dx2 - p y1 dy2
/// within 1e-6 of them.
Vec4 seifert_form(const SeifertSpec& S, const S3Point& p);

/// alpha_{p,q} in Hopf coordinates: coefficients of (ds, dphi1, dphi2).
Eigen::Vector3d seifert_form_hopf(const SeifertSpec& S, const HopfCoords& h);

/// The differentials (ds, dphi1, dphi2) applied to a vector V at p.  Requires
/// |z1|, |z2| > 0.
Eigen::Vector3d hopf_differentials(const S3Point& p, const Vec4& V);

/// (alpha ^ d alpha)(v1, v2, v4) / mu0(v1, v2, v4) with d alpha from central
/// differences of the Cartesian coefficients and mu0 = det[v3, ., ., .].
/// Throws std::domain_error within 1e-3 (in s) of the core circles.
double contact_volume_ratio(const SeifertSpec& S, const S3Point& p, double fd_step = 1e-5);

/// Closed form (p + q)(p cos^2 s + q sin^2 s) of the same ratio.
double contact_volume_ratio_closed_form(const SeifertSpec& S, double s);

/// h = 2 (dG/dz2) zb1 - 2 (dG/dz1) zb2 for holomorphic G; throws
/// std::invalid_argument otherwise.
MixedPoly h_from_potential(const MixedPoly& G);
Complex h_from_potential(const MixedPoly& G, Complex z1, Complex z2);

/// h built from a real-valued function f on S^3 given as a mixed polynomial:
///   (df/dx2 - i df/dy2)(x1 - i y1) - (df/dx1 - i df/dy1)(x2 - i y2).
/// f is first integral of the b_type field of this h.
MixedPoly h_from_real_function(const MixedPoly& f);

struct TangencyDefect {
  double defect = 0.0;     // |sin(arg theta - arg h)|
  bool vacuous = false;    // |h| or |theta| below 1e-9
  bool antiparallel = false; // arguments differ by pi rather than 0
};

/// Tangency of the b_type field of theta to the level set of Re G through p.
TangencyDefect tangency_defect(const Generator& theta, const MixedPoly& G, const S3Point& p);

struct TtLinkDefect {
  double max_abs_g = 0.0;
  double max_contact_gradient = 0.0; // contact-plane part of grad Re G
};

TtLinkDefect tt_link_defect(const MixedPoly& G, const SphereCurve& c);

/// 1 / max_{S^3} |z1|^p |z2|^q.
double torus_knot_rho(int p, int q);

/// rho z1^p z2^q - 1.
MixedPoly torus_knot_potential(int p, int q);

/// Samples of theta -> (a e^{i q theta}, b e^{-i p theta}) with
/// a^2 = p/(p+q), the Legendrian torus curve on which rho z1^p z2^q = 1.
SphereCurve tt_torus_curve(int p, int q, int samples);

/// Samples of theta -> (a e^{i w theta}, b e^{i v theta}) with exact
/// tangents; Legendrian when w a^2 + v b^2 = 0.
SphereCurve torus_curve(double a, int w, int v, int samples);

/// The explicit integrable field
///   y1 n2 dx1 - x1 n2 dy1 - y2 n1 dx2 + x2 n1 dy2,  n_i = |z_i|^2,
/// i.e. (-i z1 |z2|^2, i z2 |z1|^2) in complex form.
Vec4 torus_field(const Vec4& x);
Mat4 torus_field_jacobian(const Vec4& x);
/// Its flow (z1 e^{-i |z2|^2 tau}, z2 e^{i |z1|^2 tau}).
Vec4 torus_flow(const Vec4& x, double tau);

} // namespace nullfield

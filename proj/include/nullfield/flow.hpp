#pragma once

// Field-line tracing on S^3 and in R^3, closed-orbit detection, first-integral
// drift, phase windings and Gauss linking numbers.

#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>

#include "nullfield/bateman.hpp"
#include "nullfield/curve.hpp"
#include "nullfield/integrator.hpp"
#include "nullfield/legendrian.hpp"

namespace nullfield {

/// Vector fields on (a neighbourhood of) S^3.
struct SphereFieldSpec {
  enum class Kind { legendrian, torus, seifert };
  Kind kind = Kind::legendrian;
  LegendrianField legendrian;
  SeifertSpec seifert;

  static SphereFieldSpec from_legendrian(LegendrianField L) {
    return {Kind::legendrian, std::move(L), {}};
  }
  static SphereFieldSpec torus() { return {Kind::torus, {}, {}}; }
  static SphereFieldSpec from_seifert(SeifertSpec S) { return {Kind::seifert, {}, S}; }
};

Vec4 eval_sphere_field(const SphereFieldSpec& f, const Vec4& x);
/// Exact ambient Jacobian of the field.
Mat4 sphere_field_jacobian(const SphereFieldSpec& f, const Vec4& x);

/// Vector fields on R^3 built from a Bateman field.  electric / magnetic are
/// frozen at time t; poynting follows P(x, t + tau).
struct SpaceFieldSpec {
  enum class Kind { electric, magnetic, poynting };
  Kind kind = Kind::electric;
  Generator h = Generator::constant(1.0);
  Variant variant = Variant::hopf;
  FieldMode mode = FieldMode::direct;
  double t = 0.0;
};

/// Energy density below which Poynting tracing stops with an error.
inline constexpr double kTransportEnergyFloor = 1e-10;

/// Throws std::domain_error for poynting when W <= kTransportEnergyFloor.
Vec3 eval_space_field(const SpaceFieldSpec& f, const Vec3& x, double tau);

struct TraceOptions {
  IntegratorOptions integrator;
  /// R^3 tracing stops with IntegrationError when |x| exceeds this.
  double box_radius = 1e6;
};

/// Renormalizes onto S^3 after every accepted step.
SphereCurve trace_sphere(const SphereFieldSpec& f, const S3Point& start, double tau_max,
                         const TraceOptions& opt = {});
SpaceCurve trace_space(const SpaceFieldSpec& f, const Vec3& start, double tau_max,
                       const TraceOptions& opt = {});

/// Smallest tau* > tau_0 at which the dense trajectory returns within tol of
/// its start with tangent alignment above 0.99, refined by bisection on
/// (x - x0) . x'.  Throws std::invalid_argument without dense output.
template <int Dim>
std::optional<double> detect_closure(const Curve<Dim>& c, double tol);

/// Resamples one period of a traced closed orbit into `samples` points
/// (without repeating the start) with dense-output tangents; closed = true.
template <int Dim>
Curve<Dim> closed_orbit(const Curve<Dim>& c, double period, int samples);

using SphereFunction = std::function<double(const S3Point&)>;

/// Real and imaginary parts of a mixed polynomial as functions on S^3.
SphereFunction real_part(const MixedPoly& f);
SphereFunction imag_part(const MixedPoly& f);

/// max |f(sample) - f(start)| over the curve.
double integral_drift(const SphereCurve& c, const SphereFunction& f);
/// The same for an R^3 curve, pulling f back through stereo_lift.
double integral_drift(const SpaceCurve& c, const SphereFunction& f);

/// Winding numbers of arg z1 and arg z2 over a closed curve.  Throws
/// std::invalid_argument when the curve is not closed, too short or constant, and
/// std::domain_error when |z1| or |z2| drops below 1e-6 or the phases jump by
/// pi/2 or more between samples.
std::pair<int, int> phase_windings(const SphereCurve& c);

struct LinkingResult {
  int value = 0;
  double raw = 0.0; // extrapolated Gauss integral before rounding
};

/// Gauss linking number of two closed polygons (closing segments included)
/// by midpoint quadrature with Richardson extrapolation; curves are refined
/// by periodic cubic interpolation until the result is within 1e-3 of an
/// integer.  Throws std::invalid_argument for open curves and
/// std::domain_error when the curves come within 1e-3 of each other or no
/// integer is reached.
LinkingResult linking_number(const SpaceCurve& a, const SpaceCurve& b);

/// stereo_project applied to every sample.  Tangents are pushed forward when
/// present.  Throws std::domain_error if a sample maps to infinity.
SpaceCurve project_curve(const SphereCurve& c);

void write_curve_csv(std::ostream& os, const SphereCurve& c);
void write_curve_csv(std::ostream& os, const SpaceCurve& c);
/// Throws std::runtime_error on a wrong header or malformed rows.  The
/// result is marked closed; tangents are not stored in the file.
SphereCurve read_sphere_curve_csv(std::istream& is);
SpaceCurve read_space_curve_csv(std::istream& is);

} // namespace nullfield

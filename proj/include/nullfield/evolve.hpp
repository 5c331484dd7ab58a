#pragma once

// Transport of points and closed curves by the normalized Poynting flow of a
// Bateman field, and tangency of transported curves to the field at later
// times.

#include <vector>

#include "nullfield/flow.hpp"

namespace nullfield {

struct TransportSpec {
  Generator h = Generator::constant(1.0);
  Variant variant = Variant::hopf;
  FieldMode mode = FieldMode::direct;
  double t0 = 0.0;
  double t1 = 0.0;
  IntegratorOptions integrator{1e-12, 1e-12, 0.05, 0.0, 5'000'000, false};

  /// Throws std::invalid_argument for non-finite times or bad tolerances.
  void validate() const;
};

/// Integrates dx/dt = P(x, t) from t0 to t1.  Throws std::domain_error when
/// W drops to kTransportEnergyFloor and IntegrationError on solver failure.
Vec3 poynting_transport(const TransportSpec& spec, const Vec3& x);
/// Each point independently; order preserved.
std::vector<Vec3> poynting_transport(const TransportSpec& spec, const std::vector<Vec3>& xs);

/// Resamples a closed polygon to n points equally spaced in arc length using
/// periodic cubic (Catmull-Rom) interpolation.  Throws std::invalid_argument
/// for open curves, fewer than 4 points or n < 8.
SpaceCurve resample_closed(const SpaceCurve& c, int n);

/// Tangents of a closed sample sequence by fourth-order periodic central
/// differences in the sample index (scaled to unit parameter spacing).
void periodic_tangents(SpaceCurve& c);

struct TransportedCurve {
  SpaceCurve curve;              // closed, with periodic_tangents
  double max_speed_defect = 0.0; // max | |P| - 1 | over samples at t1
};

/// Resamples c to n points, transports every sample from t0 to t1 and
/// rebuilds tangents.
TransportedCurve transport_curve(const TransportSpec& spec, const SpaceCurve& c, int n);

/// Traces the unit direction field of the electric or magnetic part selected
/// by f (at time f.t) from c's first sample, in the direction of its tangent,
/// over 1.25 times c's polygon length, and returns the distance at the first
/// return to the start; +inf when the line does not come back within 1e-3.
double field_line_closure_defect(const SpaceFieldSpec& f, const SpaceCurve& c,
                                 const IntegratorOptions& opt = {});

/// max over samples of |F(x, t) x T| / (|F| |T|) where F is the electric or
/// magnetic part selected by f.kind (f.t is ignored).  Throws
/// std::invalid_argument without tangents or for kind = poynting, and
/// std::domain_error when the field or a tangent vanishes on c.
double tangency_at_time(const SpaceFieldSpec& f, const SpaceCurve& c, double t);

/// A closed line at time 0 of the electric (e_type) or magnetic (b_type) part
/// of the hopf-variant direct field of holomorphic h: traced on S^3 as the
/// orbit of the corresponding Legendrian field through start, resampled to
/// `samples` points and projected to R^3.  Throws std::domain_error when no
/// closure within tau_max is found.
SpaceCurve initial_field_line(const Generator& h, Polarity polarity, const S3Point& start,
                              double tau_max, int samples, const TraceOptions& opt = {});

} // namespace nullfield

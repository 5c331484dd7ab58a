#pragma once

// Seeded sample points for the verification suites.

#include "nullfield/geom.hpp"
#include "nullfield/rng.hpp"

namespace nullfield {

/// Uniform on S^3 by rejection from the cube [-1, 1]^4.
inline S3Point random_sphere_point(Rng& rng) {
  for (;;) {
    const Vec4 v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double n2 = v.squaredNorm();
    if (n2 > 1e-4 && n2 <= 1.0) {
      return S3Point(v);
    }
  }
}

/// Uniform in the box [-r, r]^3.
inline Vec3 random_box_point(Rng& rng, double r) {
  return {rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r)};
}

} // namespace nullfield

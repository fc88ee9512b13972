#pragma once

#include <array>
#include <vector>

#include "splatscene/vecmath.hpp"

namespace splat {

// Per-band rotation matrices for real spherical harmonics, bands l = 1..3,
// built with the Ivanic-Ruedenberg recurrence. band(l) is a (2l+1)^2 matrix
// in row-major order, coefficients ordered m = -l..l.
class ShRotation {
  public:
    explicit ShRotation(const Quat& q);

    // Rotates one channel's 15 rest coefficients (bands 1..3) in place.
    void apply(double* coeffs15) const;

    const std::vector<double>& band(int l) const { return bands_[l - 1]; }

  private:
    std::array<std::vector<double>, 3> bands_;
};

}  // namespace splat

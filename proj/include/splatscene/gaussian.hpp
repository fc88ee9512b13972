#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "splatscene/vecmath.hpp"

namespace splat {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input data (PLY, JSON, ...).
class FormatError : public Error {
  public:
    using Error::Error;
};

// Precondition violation on otherwise well-formed data.
class DomainError : public Error {
  public:
    using Error::Error;
};

inline constexpr int kShRestCount = 45;  // degrees 1..3, 15 coeffs x 3 channels

// One anisotropic splat. Covariance is kept factored as rotation + per-axis
// standard deviations; Sigma is only materialized inside density evaluation.
struct Gaussian {
    Vec3 mean;
    Quat rotation = Quat::identity();          // unit
    Vec3 scale{1, 1, 1};                       // stddev per local axis, > 0
    double opacity = 1.0;                      // [0, 1]
    std::array<double, 3> sh_dc{0, 0, 0};
    std::array<double, kShRestCount> sh_rest{};
};

struct GaussianCloud {
    std::vector<Gaussian> gaussians;
    std::string label;

    std::size_t size() const { return gaussians.size(); }
    bool empty() const { return gaussians.empty(); }
};

// Uniform-scale rigid-plus-scale map p -> r*(s*p) + t.
struct AffineTransform {
    double s = 1.0;  // > 0
    Quat r = Quat::identity();
    Vec3 t;

    static AffineTransform identity() { return {}; }
};

// Composition: (b * a) applies a first, then b.
AffineTransform compose(const AffineTransform& b, const AffineTransform& a);

struct Box3 {
    Vec3 min;
    Vec3 max;

    Vec3 extent() const { return max - min; }
    Vec3 center() const { return (min + max) * 0.5; }
    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }
    Box3 inflated(double c) const {
        return {min - Vec3{c, c, c}, max + Vec3{c, c, c}};
    }
    Box3 united(const Box3& o) const {
        return {min.cwiseMin(o.min), max.cwiseMax(o.max)};
    }
};

void validate(const Gaussian& g);
void validate(const AffineTransform& a);

// exp(-1/2 d^T Sigma^-1 d), d = p - mean, Sigma = R diag(scale^2) R^T
double evaluateDensity(const Gaussian& g, const Vec3& p);

// Product of the per-axis stddevs (= sqrt(det Sigma)).
double volume(const Gaussian& g);

enum class ShMode { Truncate, Rotate };

GaussianCloud applyAffine(const GaussianCloud& cloud, const AffineTransform& a,
                          ShMode sh_mode = ShMode::Truncate);

GaussianCloud mergeClouds(const std::vector<GaussianCloud>& clouds);

// Componentwise min/max over mean +/- k * rotated-ellipsoid half extent.
Box3 aabb(const GaussianCloud& cloud, double k = 3.0);
Box3 aabb(const Gaussian& g, double k = 3.0);

}  // namespace splat

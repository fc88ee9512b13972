#include "splatscene/gaussian.hpp"

#include <cmath>

#include "splatscene/sh_rotation.hpp"

namespace splat {

void validate(const Gaussian& g) {
    if (std::abs(g.rotation.norm() - 1.0) > 1e-6) {
        throw DomainError("gaussian rotation is not unit norm");
    }
    if (!(g.scale.x > 0 && g.scale.y > 0 && g.scale.z > 0)) {
        throw DomainError("gaussian scale must be strictly positive");
    }
    if (!(g.opacity >= 0.0 && g.opacity <= 1.0)) {
        throw DomainError("gaussian opacity outside [0, 1]");
    }
}

void validate(const AffineTransform& a) {
    if (!(a.s > 0)) throw DomainError("affine scale must be > 0");
    if (std::abs(a.r.norm() - 1.0) > 1e-6) {
        throw DomainError("affine rotation is not unit norm");
    }
}

AffineTransform compose(const AffineTransform& b, const AffineTransform& a) {
    AffineTransform c;
    c.s = b.s * a.s;
    c.r = (b.r * a.r).normalized();
    c.t = b.r.rotate(a.t * b.s) + b.t;
    return c;
}

double evaluateDensity(const Gaussian& g, const Vec3& p) {
    Vec3 d = p - g.mean;
    Vec3 local = g.rotation.conjugate().rotate(d);
    double q = 0.0;
    q += (local.x / g.scale.x) * (local.x / g.scale.x);
    q += (local.y / g.scale.y) * (local.y / g.scale.y);
    q += (local.z / g.scale.z) * (local.z / g.scale.z);
    return std::exp(-0.5 * q);
}

double volume(const Gaussian& g) { return g.scale.x * g.scale.y * g.scale.z; }

GaussianCloud applyAffine(const GaussianCloud& cloud, const AffineTransform& a,
                          ShMode sh_mode) {
    validate(a);
    GaussianCloud out;
    out.label = cloud.label;
    out.gaussians.reserve(cloud.size());

    ShRotation sh_rot(a.r);
    bool is_identity_rot =
        std::abs(a.r.w) > 1.0 - 1e-15 && a.r.x == 0 && a.r.y == 0 && a.r.z == 0;

    for (const Gaussian& g : cloud.gaussians) {
        Gaussian h = g;
        h.mean = a.r.rotate(g.mean * a.s) + a.t;
        h.rotation = (a.r * g.rotation).normalized();
        h.scale = g.scale * a.s;
        if (sh_mode == ShMode::Truncate) {
            if (!is_identity_rot) h.sh_rest.fill(0.0);
        } else {
            for (int ch = 0; ch < 3; ++ch) sh_rot.apply(h.sh_rest.data() + 15 * ch);
        }
        out.gaussians.push_back(h);
    }
    return out;
}

GaussianCloud mergeClouds(const std::vector<GaussianCloud>& clouds) {
    GaussianCloud out;
    std::size_t n = 0;
    for (const auto& c : clouds) n += c.size();
    out.gaussians.reserve(n);
    for (const auto& c : clouds) {
        out.gaussians.insert(out.gaussians.end(), c.gaussians.begin(),
                             c.gaussians.end());
    }
    return out;
}

Box3 aabb(const Gaussian& g, double k) {
    auto r = g.rotation.toMatrix();
    Vec3 half;
    for (int i = 0; i < 3; ++i) {
        // world-axis half extent of the rotated scale ellipsoid: sqrt(Sigma_ii)
        double s = 0.0;
        for (int j = 0; j < 3; ++j) {
            double e = r[i][j] * g.scale[j];
            s += e * e;
        }
        half[i] = k * std::sqrt(s);
    }
    return {g.mean - half, g.mean + half};
}

Box3 aabb(const GaussianCloud& cloud, double k) {
    if (cloud.empty()) throw DomainError("aabb of empty cloud");
    if (k < 0) throw DomainError("aabb sigma multiplier must be >= 0");
    Box3 box = aabb(cloud.gaussians.front(), k);
    for (std::size_t i = 1; i < cloud.size(); ++i) {
        box = box.united(aabb(cloud.gaussians[i], k));
    }
    return box;
}

}  // namespace splat

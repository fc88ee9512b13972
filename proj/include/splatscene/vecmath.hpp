#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace splat {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    double& operator[](std::size_t i) { return (&x)[i]; }
    double operator[](std::size_t i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 cwiseMul(const Vec3& o) const { return {x * o.x, y * o.y, z * o.z}; }

    bool operator==(const Vec3& o) const = default;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const { return *this / norm(); }

    Vec3 cwiseMin(const Vec3& o) const {
        return {std::min(x, o.x), std::min(y, o.y), std::min(z, o.z)};
    }
    Vec3 cwiseMax(const Vec3& o) const {
        return {std::max(x, o.x), std::max(y, o.y), std::max(z, o.z)};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Unit quaternion, (w, x, y, z) order as in the splat PLY convention.
struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    Quat() = default;
    Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    bool operator==(const Quat& o) const = default;

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
    Quat normalized() const {
        double n = norm();
        return {w / n, x / n, y / n, z / n};
    }
    Quat conjugate() const { return {w, -x, -y, -z}; }

    Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    Vec3 rotate(const Vec3& v) const {
        // q v q* with v as a pure quaternion
        Quat p{0.0, v.x, v.y, v.z};
        Quat r = (*this) * p * conjugate();
        return {r.x, r.y, r.z};
    }

    std::array<std::array<double, 3>, 3> toMatrix() const {
        double ww = w * w, xx = x * x, yy = y * y, zz = z * z;
        return {{{ww + xx - yy - zz, 2 * (x * y - w * z), 2 * (x * z + w * y)},
                 {2 * (x * y + w * z), ww - xx + yy - zz, 2 * (y * z - w * x)},
                 {2 * (x * z - w * y), 2 * (y * z + w * x), ww - xx - yy + zz}}};
    }

    static Quat fromAxisAngle(const Vec3& axis, double angle) {
        Vec3 a = axis.normalized();
        double h = 0.5 * angle;
        double s = std::sin(h);
        return {std::cos(h), a.x * s, a.y * s, a.z * s};
    }

    // Rotation about +z (scene up axis).
    static Quat fromYaw(double yaw) { return fromAxisAngle({0, 0, 1}, yaw); }

    static Quat identity() { return {1, 0, 0, 0}; }
};

inline Quat slerp(const Quat& a, Quat b, double t) {
    double d = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
    if (d < 0) {  // shortest arc
        b = {-b.w, -b.x, -b.y, -b.z};
        d = -d;
    }
    if (d > 1.0 - 1e-10) {
        Quat r{a.w + t * (b.w - a.w), a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
               a.z + t * (b.z - a.z)};
        return r.normalized();
    }
    double theta = std::acos(d);
    double s = std::sin(theta);
    double wa = std::sin((1.0 - t) * theta) / s;
    double wb = std::sin(t * theta) / s;
    return {wa * a.w + wb * b.w, wa * a.x + wb * b.x, wa * a.y + wb * b.y,
            wa * a.z + wb * b.z};
}

inline double wrapAngle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    return a;  // in [0, 2pi)
}

// Signed smallest difference a-b in (-pi, pi].
inline double angleDiff(double a, double b) {
    double d = std::fmod(a - b, 2.0 * M_PI);
    if (d <= -M_PI) d += 2.0 * M_PI;
    if (d > M_PI) d -= 2.0 * M_PI;
    return d;
}

}  // namespace splat

#include "splatscene/sh_rotation.hpp"

#include <cmath>

namespace splat {
namespace {

int delta(int a, int b) { return a == b ? 1 : 0; }

// M1: band-1 matrix indexed [m'+1][m+1], m over (-1,0,1) ~ (y,z,x).
using Band = std::vector<double>;

double get(const Band& b, int l, int m, int n) {
    return b[(m + l) * (2 * l + 1) + (n + l)];
}

double P(int i, int a, int b, int l, const Band& m1, const Band& prev) {
    if (b == l) {
        return get(m1, 1, i, 1) * get(prev, l - 1, a, l - 1) -
               get(m1, 1, i, -1) * get(prev, l - 1, a, -(l - 1));
    }
    if (b == -l) {
        return get(m1, 1, i, 1) * get(prev, l - 1, a, -(l - 1)) +
               get(m1, 1, i, -1) * get(prev, l - 1, a, l - 1);
    }
    return get(m1, 1, i, 0) * get(prev, l - 1, a, b);
}

double U(int m, int n, int l, const Band& m1, const Band& prev) {
    return P(0, m, n, l, m1, prev);
}

double V(int m, int n, int l, const Band& m1, const Band& prev) {
    if (m == 0) {
        return P(1, 1, n, l, m1, prev) + P(-1, -1, n, l, m1, prev);
    }
    if (m > 0) {
        return P(1, m - 1, n, l, m1, prev) * std::sqrt(1.0 + delta(m, 1)) -
               P(-1, -m + 1, n, l, m1, prev) * (1.0 - delta(m, 1));
    }
    return P(1, m + 1, n, l, m1, prev) * (1.0 - delta(m, -1)) +
           P(-1, -m - 1, n, l, m1, prev) * std::sqrt(1.0 + delta(m, -1));
}

double W(int m, int n, int l, const Band& m1, const Band& prev) {
    if (m == 0) return 0.0;
    if (m > 0) {
        return P(1, m + 1, n, l, m1, prev) + P(-1, -m - 1, n, l, m1, prev);
    }
    return P(1, m - 1, n, l, m1, prev) - P(-1, -m + 1, n, l, m1, prev);
}

Band buildBand(int l, const Band& m1, const Band& prev) {
    Band out((2 * l + 1) * (2 * l + 1), 0.0);
    for (int m = -l; m <= l; ++m) {
        for (int n = -l; n <= l; ++n) {
            double denom = (std::abs(n) == l) ? (2.0 * l) * (2.0 * l - 1.0)
                                              : double(l + n) * double(l - n);
            double u = std::sqrt(double(l + m) * double(l - m) / denom);
            double v = 0.5 *
                       std::sqrt((1.0 + delta(m, 0)) * double(l + std::abs(m) - 1) *
                                 double(l + std::abs(m)) / denom) *
                       (1.0 - 2.0 * delta(m, 0));
            double w = -0.5 *
                       std::sqrt(double(l - std::abs(m) - 1) * double(l - std::abs(m)) /
                                 denom) *
                       (1.0 - delta(m, 0));
            double val = 0.0;
            if (u != 0.0) val += u * U(m, n, l, m1, prev);
            if (v != 0.0) val += v * V(m, n, l, m1, prev);
            if (w != 0.0) val += w * W(m, n, l, m1, prev);
            out[(m + l) * (2 * l + 1) + (n + l)] = val;
        }
    }
    return out;
}

}  // namespace

ShRotation::ShRotation(const Quat& q) {
    auto r = q.normalized().toMatrix();
    // Band 1 in the real-SH (y, z, x) ordering.
    bands_[0] = {r[1][1], r[1][2], r[1][0],   //
                 r[2][1], r[2][2], r[2][0],   //
                 r[0][1], r[0][2], r[0][0]};
    bands_[1] = buildBand(2, bands_[0], bands_[0]);
    bands_[2] = buildBand(3, bands_[0], bands_[1]);
}

void ShRotation::apply(double* c) const {
    int offset = 0;
    for (int l = 1; l <= 3; ++l) {
        int n = 2 * l + 1;
        const Band& b = bands_[l - 1];
        double tmp[7];
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += b[i * n + j] * c[offset + j];
            tmp[i] = s;
        }
        for (int i = 0; i < n; ++i) c[offset + i] = tmp[i];
        offset += n;
    }
}

}  // namespace splat

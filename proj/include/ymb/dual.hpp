#pragma once

#include <array>
#include <cmath>

namespace ymb {

/// Forward-mode jet carrying a value and its four partial derivatives.
/// Seeding d[j] = delta_{ij} at the evaluation point turns any closed-form
/// field expression into an exact derivative evaluator.
struct Dual4 {
    double v = 0.0;
    std::array<double, 4> d{0.0, 0.0, 0.0, 0.0};

    Dual4() = default;
    Dual4(double value) : v(value) {}
    Dual4(double value, int seed) : v(value) { d[seed] = 1.0; }

    Dual4& operator+=(const Dual4& o) {
        v += o.v;
        for (int i = 0; i < 4; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual4& operator-=(const Dual4& o) {
        v -= o.v;
        for (int i = 0; i < 4; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual4& operator*=(const Dual4& o) {
        for (int i = 0; i < 4; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual4& operator/=(const Dual4& o) {
        const double inv = 1.0 / o.v;
        v *= inv;
        for (int i = 0; i < 4; ++i) d[i] = (d[i] - v * o.d[i]) * inv;
        return *this;
    }
};

inline Dual4 operator+(Dual4 a, const Dual4& b) { return a += b; }
inline Dual4 operator-(Dual4 a, const Dual4& b) { return a -= b; }
inline Dual4 operator*(Dual4 a, const Dual4& b) { return a *= b; }
inline Dual4 operator/(Dual4 a, const Dual4& b) { return a /= b; }
inline Dual4 operator-(const Dual4& a) {
    Dual4 r;
    r.v = -a.v;
    for (int i = 0; i < 4; ++i) r.d[i] = -a.d[i];
    return r;
}
inline Dual4 operator+(const Dual4& a) { return a; }

inline Dual4 sqrt(const Dual4& a) {
    Dual4 r;
    r.v = std::sqrt(a.v);
    const double s = 0.5 / r.v;
    for (int i = 0; i < 4; ++i) r.d[i] = s * a.d[i];
    return r;
}

inline Dual4 exp(const Dual4& a) {
    Dual4 r;
    r.v = std::exp(a.v);
    for (int i = 0; i < 4; ++i) r.d[i] = r.v * a.d[i];
    return r;
}

inline double value(double x) { return x; }
inline double value(const Dual4& x) { return x.v; }

} // namespace ymb

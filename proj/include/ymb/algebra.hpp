#pragma once

#include <array>
#include <cmath>
#include <Eigen/Dense>

#include "ymb/dual.hpp"

namespace ymb {

/// Quaternion w + xi + yj + zk over a generic scalar (double or Dual4).
template <class T>
struct QuatT {
    T w{}, x{}, y{}, z{};

    QuatT() = default;
    QuatT(T w_, T x_, T y_, T z_) : w(w_), x(x_), y(y_), z(z_) {}

    QuatT operator+(const QuatT& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    QuatT operator-(const QuatT& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    QuatT operator-() const { return {-w, -x, -y, -z}; }
    QuatT operator*(const T& s) const { return {w * s, x * s, y * s, z * s}; }

    // Hamilton product: i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j.
    QuatT operator*(const QuatT& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    QuatT conj() const { return {w, -x, -y, -z}; }
    T norm2() const { return w * w + x * x + y * y + z * z; }
    T norm() const { using std::sqrt; using ymb::sqrt; return sqrt(norm2()); }
};

using Quat = QuatT<double>;
using QuatJet = QuatT<Dual4>;

/// Element of Im H ~ su(2): coefficients on the (i, j, k) basis.
template <class T>
struct ImQuatT {
    std::array<T, 3> c{};

    ImQuatT() = default;
    ImQuatT(T a, T b, T d) : c{a, b, d} {}

    ImQuatT operator+(const ImQuatT& o) const { return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2]}; }
    ImQuatT operator-(const ImQuatT& o) const { return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2]}; }
    ImQuatT operator-() const { return {-c[0], -c[1], -c[2]}; }
    ImQuatT operator*(const T& s) const { return {c[0] * s, c[1] * s, c[2] * s}; }
    ImQuatT& operator+=(const ImQuatT& o) {
        for (int i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }

    QuatT<T> quat() const { return {T{}, c[0], c[1], c[2]}; }
    static ImQuatT im(const QuatT<T>& q) { return {q.x, q.y, q.z}; }
};

using ImQuat = ImQuatT<double>;
using ImQuatJet = ImQuatT<Dual4>;

/// Lie bracket [x, y] = xy - yx.  For pure imaginary quaternions this is
/// twice the cross product of the coefficient vectors.
template <class T>
ImQuatT<T> bracket(const ImQuatT<T>& x, const ImQuatT<T>& y) {
    return {T(2.0) * (x.c[1] * y.c[2] - x.c[2] * y.c[1]),
            T(2.0) * (x.c[2] * y.c[0] - x.c[0] * y.c[2]),
            T(2.0) * (x.c[0] * y.c[1] - x.c[1] * y.c[0])};
}

/// [x, y]_eps = eps [x, y].
template <class T>
ImQuatT<T> scaled_bracket(const T& eps, const ImQuatT<T>& x, const ImQuatT<T>& y) {
    ImQuatT<T> b = bracket(x, y);
    return {b.c[0] * eps, b.c[1] * eps, b.c[2] * eps};
}

/// su(2) inner product (X, Y) = -Tr(XY), i.e. (X, Y) = 2 (x, y) in
/// quaternion coefficients.
template <class T>
T inner(const ImQuatT<T>& x, const ImQuatT<T>& y) {
    return T(2.0) * (x.c[0] * y.c[0] + x.c[1] * y.c[1] + x.c[2] * y.c[2]);
}

/// phi_eps(X) = eps X, the Lie algebra isomorphism su(2)_eps -> su(2).
inline ImQuat phi_eps(double eps, const ImQuat& x) { return x * eps; }

/// Gauge rotation g in SU(2) ~ Sp(1), kept normalized.
struct UnitQuat {
    Quat q{1.0, 0.0, 0.0, 0.0};

    UnitQuat() = default;
    explicit UnitQuat(const Quat& raw) : q(raw) { renormalize(); }

    void renormalize() {
        const double n = q.norm();
        q = q * (1.0 / n);
    }
    UnitQuat inverse() const {
        UnitQuat g;
        g.q = q.conj();
        return g;
    }
    UnitQuat operator*(const UnitQuat& o) const { return UnitQuat(q * o.q); }

    /// exp((t/2) e_axis) * (*this): right-translated rotation step about a
    /// Lie axis, angle t in SO(3) terms.
    UnitQuat rotated(int axis, double t) const {
        Quat step{std::cos(0.5 * t), 0.0, 0.0, 0.0};
        if (axis == 0) step.x = std::sin(0.5 * t);
        if (axis == 1) step.y = std::sin(0.5 * t);
        if (axis == 2) step.z = std::sin(0.5 * t);
        return UnitQuat(step * q);
    }
};

/// Adjoint action g x g^-1 on Im H; an isometry of `inner`.
template <class T>
ImQuatT<T> adjoint(const QuatT<T>& g, const ImQuatT<T>& x) {
    QuatT<T> r = g * x.quat() * g.conj();
    return ImQuatT<T>::im(r);
}

inline ImQuat adjoint(const UnitQuat& g, const ImQuat& x) {
    return adjoint<double>(g.q, x);
}

using Rotation3 = Eigen::Matrix3d;

/// Matrix of adjoint(g, .) on the (i, j, k) basis; the SU(2) -> SO(3)
/// double cover, rotation_of(-g) = rotation_of(g).
Rotation3 rotation_of(const UnitQuat& g);

/// Nearest rotation to an approximate one (polar projection); used after
/// long compositions to control drift.
Rotation3 reorthonormalize(const Rotation3& r);

} // namespace ymb

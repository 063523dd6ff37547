#pragma once

#include <stdexcept>

#include "ymb/forms.hpp"

namespace ymb {

struct SingularPoint : std::runtime_error {
    SingularPoint() : std::runtime_error("field evaluated at its singular point") {}
};

/// Center and scale of the 1-instanton.
struct InstantonParams {
    Vec4 p{0, 0, 0, 0};
    double lambda = 1.0;
};

/// Chart-1 potential Im((x-p) dxbar) / (lambda^2 + |x-p|^2), expanded into
/// real components; smooth everywhere including x = p.
template <class T>
std::array<ImQuatT<T>, 4> eval_I1(const Vec4& p, double lambda, const std::array<T, 4>& x) {
    const T y0 = x[0] - T(p[0]), y1 = x[1] - T(p[1]), y2 = x[2] - T(p[2]), y3 = x[3] - T(p[3]);
    const T rho2 = T(lambda * lambda) + y0 * y0 + y1 * y1 + y2 * y2 + y3 * y3;
    const T inv = T(1.0) / rho2;
    return {ImQuatT<T>{y1 * inv, y2 * inv, y3 * inv},
            ImQuatT<T>{-y0 * inv, -y3 * inv, y2 * inv},
            ImQuatT<T>{y3 * inv, -y0 * inv, -y1 * inv},
            ImQuatT<T>{-y2 * inv, y1 * inv, -y0 * inv}};
}

/// Chart-2 potential Im(lambda^2 (xbar-pbar) dx) / (|x-p|^2 (lambda^2+|x-p|^2));
/// singular at x = p.
template <class T>
std::array<ImQuatT<T>, 4> eval_I2(const Vec4& p, double lambda, const std::array<T, 4>& x) {
    const T y0 = x[0] - T(p[0]), y1 = x[1] - T(p[1]), y2 = x[2] - T(p[2]), y3 = x[3] - T(p[3]);
    const T r2 = y0 * y0 + y1 * y1 + y2 * y2 + y3 * y3;
    const T inv = T(lambda * lambda) / (r2 * (T(lambda * lambda) + r2));
    return {ImQuatT<T>{-y1 * inv, -y2 * inv, -y3 * inv},
            ImQuatT<T>{y0 * inv, -y3 * inv, y2 * inv},
            ImQuatT<T>{y3 * inv, y0 * inv, -y1 * inv},
            ImQuatT<T>{-y2 * inv, y1 * inv, y0 * inv}};
}

/// Transition function g_{12,p}(x) = (x - p)/|x - p|.
UnitQuat transition(const Vec4& p, const Vec4& x);

/// Exact pointwise residual of the gluing relation
/// I^2 - (g^-1 dg + g^-1 I^1 g) at x; pure algebra with analytic derivatives.
double gluing_residual(const InstantonParams& ip, const Vec4& x);

struct InstantonField final : Field1 {
    InstantonParams ip;
    int chart; // 1 or 2

    InstantonField(const InstantonParams& params, int chart_) : ip(params), chart(chart_) {}
    Lie1 value(const Vec4& x) const override;
    Jet1 jet(const Vec4& x) const override;
};

/// Exact curvature F = dI + (1/2)[I, I] of chart 1 or 2 at x.
Lie2 instanton_curvature(const InstantonParams& ip, int chart, const Vec4& x);

/// Action integral of |F|^2 over an R^4 grid, evaluating chart 1 inside the
/// bubble cells and chart 2 on the tail.
double instanton_action_r4(const InstantonParams& ip, const ChartQuadrature& grid);

} // namespace ymb

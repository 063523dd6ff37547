#include "ymb/instanton.hpp"

#include <cmath>

#include "ymb/parallel.hpp"

namespace ymb {

UnitQuat transition(const Vec4& p, const Vec4& x) {
    const Vec4 y = x - p;
    const double n = std::sqrt(norm2(y));
    if (n == 0.0) throw SingularPoint();
    return UnitQuat(Quat{y[0] / n, y[1] / n, y[2] / n, y[3] / n});
}

double gluing_residual(const InstantonParams& ip, const Vec4& x) {
    const Vec4 y = x - ip.p;
    const double r2 = norm2(y);
    if (r2 == 0.0) throw SingularPoint();
    const double r = std::sqrt(r2);
    const Quat yq{y[0], y[1], y[2], y[3]};
    const Quat g = yq * (1.0 / r);
    const Quat ginv = g.conj();

    const auto I1 = eval_I1<double>(ip.p, ip.lambda, x);
    const auto I2 = eval_I2<double>(ip.p, ip.lambda, x);

    double err2 = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
        // d_mu g = e_mu / r - y y_mu / r^3
        Quat e{mu == 0 ? 1.0 : 0.0, mu == 1 ? 1.0 : 0.0, mu == 2 ? 1.0 : 0.0,
               mu == 3 ? 1.0 : 0.0};
        const Quat dg = e * (1.0 / r) - yq * (y[mu] / (r2 * r));
        const Quat maurer = ginv * dg;                   // purely imaginary
        const Quat rot = ginv * I1[mu].quat() * g;       // g^-1 I^1 g
        const Quat lhs = I2[mu].quat();
        const Quat diff = lhs - maurer - rot;
        err2 += diff.norm2();
    }
    return std::sqrt(err2);
}

Lie1 InstantonField::value(const Vec4& x) const {
    if (chart == 2 && norm2(x - ip.p) == 0.0) throw SingularPoint();
    return chart == 1 ? eval_I1<double>(ip.p, ip.lambda, x)
                      : eval_I2<double>(ip.p, ip.lambda, x);
}

Jet1 InstantonField::jet(const Vec4& x) const {
    if (chart == 2 && norm2(x - ip.p) == 0.0) throw SingularPoint();
    std::array<Dual4, 4> xd{Dual4(x[0], 0), Dual4(x[1], 1), Dual4(x[2], 2), Dual4(x[3], 3)};
    const auto a = chart == 1 ? eval_I1<Dual4>(ip.p, ip.lambda, xd)
                              : eval_I2<Dual4>(ip.p, ip.lambda, xd);
    Jet1 j;
    for (int mu = 0; mu < 4; ++mu)
        for (int l = 0; l < 3; ++l) {
            j.a[mu].c[l] = a[mu].c[l].v;
            for (int nu = 0; nu < 4; ++nu) j.d[nu][mu].c[l] = a[mu].c[l].d[nu];
        }
    return j;
}

Lie2 instanton_curvature(const InstantonParams& ip, int chart, const Vec4& x) {
    InstantonField f(ip, chart);
    return curvature_at(f.jet(x), 1.0);
}

double instanton_action_r4(const InstantonParams& ip, const ChartQuadrature& grid) {
    const InstantonField f1(ip, 1), f2(ip, 2);
    return parallel_reduce(grid.nodes.size(), [&](size_t i) {
        const QuadNode& n = grid.nodes[i];
        const Field1& f = (n.region == Region::tail) ? static_cast<const Field1&>(f2)
                                                     : static_cast<const Field1&>(f1);
        const Lie2 F = curvature_at(f.jet(n.x), 1.0);
        return n.w * norm2_lie2(F);
    });
}

} // namespace ymb

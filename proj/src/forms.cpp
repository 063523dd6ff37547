#include "ymb/forms.hpp"

#include <cmath>

#include "ymb/parallel.hpp"

namespace ymb {

Lie2 exterior_d_at(const Jet1& j) {
    Lie2 w;
    for (int s = 0; s < 6; ++s) {
        const int mu = kPairs[s][0], nu = kPairs[s][1];
        w[s] = j.d[mu][nu] - j.d[nu][mu];
    }
    return w;
}

Lie2 hodge_star2_at(const Lie2& w) {
    // slots: 01, 02, 03, 12, 13, 23
    Lie2 r;
    r[0] = w[5];
    r[5] = w[0];
    r[1] = -w[4];
    r[4] = -w[1];
    r[2] = w[3];
    r[3] = w[2];
    return r;
}

Lie2 asd_project_at(const Lie2& w) {
    const Lie2 s = hodge_star2_at(w);
    Lie2 r;
    for (int i = 0; i < 6; ++i) r[i] = (w[i] - s[i]) * 0.5;
    return r;
}

Lie2 bracket_wedge_at(const Lie1& a, const Lie1& b) {
    Lie2 w;
    for (int s = 0; s < 6; ++s) {
        const int mu = kPairs[s][0], nu = kPairs[s][1];
        w[s] = bracket(a[mu], b[nu]) - bracket(a[nu], b[mu]);
    }
    return w;
}

Lie2 curvature_at(const Jet1& j, double eps) {
    Lie2 w = exterior_d_at(j);
    if (eps != 0.0) {
        const Lie2 br = bracket_wedge_at(j.a, j.a);
        for (int s = 0; s < 6; ++s) w[s] += br[s] * (0.5 * eps);
    }
    return w;
}

Lie2 covariant_d1_at(const Lie1& A, double eps, const Jet1& ja) {
    Lie2 w = exterior_d_at(ja);
    if (eps != 0.0) {
        const Lie2 br = bracket_wedge_at(A, ja.a);
        for (int s = 0; s < 6; ++s) w[s] += br[s] * eps;
    }
    return w;
}

Lie1 codifferential2_at(const Lie1& A, double eps, const Lie2& w,
                        const std::array<Lie2, 4>& jw) {
    Lie1 r;
    for (int mu = 0; mu < 4; ++mu) {
        ImQuat acc;
        for (int nu = 0; nu < 4; ++nu) {
            if (nu == mu) continue;
            double sign;
            const int s = pair_slot(mu, nu, sign);
            ImQuat wmn = w[s] * sign;
            ImQuat dwmn = jw[nu][s] * sign;
            acc += dwmn + scaled_bracket(eps, A[nu], wmn);
        }
        r[mu] = acc;
    }
    return r;
}

double norm2_lie1(const Lie1& a) {
    double s = 0.0;
    for (int m = 0; m < 4; ++m) s += inner(a[m], a[m]);
    return s;
}

double norm2_lie2(const Lie2& w) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += inner(w[i], w[i]);
    return s;
}

double inner_lie2(const Lie2& u, const Lie2& v) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += inner(u[i], v[i]);
    return s;
}

double inner_lie1(const Lie1& u, const Lie1& v) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += inner(u[i], v[i]);
    return s;
}

double chern_density_at(const Lie2& w) {
    return 2.0 * (inner(w[0], w[5]) - inner(w[1], w[4]) + inner(w[2], w[3]));
}

double covariant_grad_norm2_at(const Lie1& A, double eps, const Jet1& ja) {
    double s = 0.0;
    for (int nu = 0; nu < 4; ++nu)
        for (int mu = 0; mu < 4; ++mu) {
            const ImQuat g = ja.d[nu][mu] + scaled_bracket(eps, A[nu], ja.a[mu]);
            s += inner(g, g);
        }
    return s;
}

SampledForm1 sample1(const std::shared_ptr<const ChartQuadrature>& grid, const Field1& f) {
    SampledForm1 out;
    out.grid = grid;
    out.vals.resize(grid->nodes.size());
    parallel_for(grid->nodes.size(), [&](size_t i) { out.vals[i] = f.value(grid->nodes[i].x); });
    return out;
}

double l2_inner(const SampledForm1& u, const SampledForm1& v) {
    if (u.grid != v.grid || u.vals.size() != v.vals.size()) throw GridMismatch();
    const auto& nodes = u.grid->nodes;
    return parallel_reduce(u.vals.size(), [&](size_t i) {
        return nodes[i].w * inner_lie1(u.vals[i], v.vals[i]);
    });
}

double l2_inner(const SampledForm2& u, const SampledForm2& v) {
    if (u.grid != v.grid || u.vals.size() != v.vals.size()) throw GridMismatch();
    const auto& nodes = u.grid->nodes;
    return parallel_reduce(u.vals.size(), [&](size_t i) {
        return nodes[i].w * inner_lie2(u.vals[i], v.vals[i]);
    });
}

double sobolev_norm(const Field1& A, double eps, const Field1& a,
                    const ChartQuadrature& grid, double p) {
    if (p != 2.0) throw std::invalid_argument("sobolev_norm: only p = 2 is implemented");
    const double g2 = parallel_reduce(grid.nodes.size(), [&](size_t i) {
        const Vec4& x = grid.nodes[i].x;
        const Jet1 ja = a.jet(x);
        const Lie1 Ax = A.value(x);
        return grid.nodes[i].w * covariant_grad_norm2_at(Ax, eps, ja);
    });
    const double l2 = parallel_reduce(grid.nodes.size(), [&](size_t i) {
        return grid.nodes[i].w * norm2_lie1(a.value(grid.nodes[i].x));
    });
    return std::sqrt(g2) + std::sqrt(l2);
}

double sobolev_pairing(const Field1& A, double eps, const Field1& a, const Field1& b,
                       const ChartQuadrature& grid) {
    return parallel_reduce(grid.nodes.size(), [&](size_t i) {
        const Vec4& x = grid.nodes[i].x;
        const Jet1 ja = a.jet(x);
        const Jet1 jb = b.jet(x);
        const Lie1 Ax = A.value(x);
        double s = inner_lie1(ja.a, jb.a);
        for (int nu = 0; nu < 4; ++nu)
            for (int mu = 0; mu < 4; ++mu) {
                const ImQuat ga = ja.d[nu][mu] + scaled_bracket(eps, Ax[nu], ja.a[mu]);
                const ImQuat gb = jb.d[nu][mu] + scaled_bracket(eps, Ax[nu], jb.a[mu]);
                s += inner(ga, gb);
            }
        return grid.nodes[i].w * s;
    });
}

Lie2 exterior_d_sampled(const CartesianForm1& f, const std::array<int, 4>& idx, int order) {
    if (order != 2 && order != 4)
        throw std::invalid_argument("exterior_d_sampled: stencil order must be 2 or 4");
    const int half = order / 2;
    for (int a = 0; a < 4; ++a)
        if (idx[a] < half || idx[a] >= f.grid->n[a] - half) throw StencilUnderflow();

    // d_nu a_mu by centered differences
    std::array<Lie1, 4> d{};
    for (int nu = 0; nu < 4; ++nu) {
        const double h = f.grid->spacing(nu);
        auto shifted = [&](int offset) {
            std::array<int, 4> j = idx;
            j[nu] += offset;
            return f.vals[f.grid->index(j)];
        };
        for (int mu = 0; mu < 4; ++mu) {
            if (order == 2) {
                d[nu][mu] = (shifted(1)[mu] - shifted(-1)[mu]) * (0.5 / h);
            } else {
                d[nu][mu] = (shifted(-2)[mu] - shifted(2)[mu]) * (1.0 / (12.0 * h)) +
                            (shifted(1)[mu] - shifted(-1)[mu]) * (8.0 / (12.0 * h));
            }
        }
    }
    Lie2 w;
    for (int s = 0; s < 6; ++s) {
        const int mu = kPairs[s][0], nu = kPairs[s][1];
        w[s] = d[mu][nu] - d[nu][mu];
    }
    return w;
}

} // namespace ymb

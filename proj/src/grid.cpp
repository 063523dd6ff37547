#include "ymb/grid.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ymb {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev estimate.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

S3Rule S3Rule::build(int n1, int n2, int n3) {
    S3Rule r;
    r.n1 = n1;
    r.n2 = n2;
    r.n3 = n3;
    // theta1: weight sin^2(theta1) dtheta1 -> Gauss-Chebyshev second kind.
    std::vector<double> c1(n1), w1(n1);
    for (int i = 0; i < n1; ++i) {
        const double t = (i + 1) * M_PI / (n1 + 1);
        c1[i] = std::cos(t);
        w1[i] = M_PI / (n1 + 1) * std::sin(t) * std::sin(t);
    }
    std::vector<double> c2, w2;
    gauss_legendre(n2, c2, w2);
    const double wphi = 2.0 * M_PI / n3;

    r.xs.reserve(size_t(n1) * n2 * n3);
    r.ws.reserve(size_t(n1) * n2 * n3);
    for (int i = 0; i < n1; ++i) {
        const double s1 = std::sqrt(1.0 - c1[i] * c1[i]);
        for (int j = 0; j < n2; ++j) {
            const double s2 = std::sqrt(1.0 - c2[j] * c2[j]);
            for (int k = 0; k < n3; ++k) {
                const double phi = (k + 0.5) * 2.0 * M_PI / n3;
                r.xs.push_back({c1[i], s1 * c2[j], s1 * s2 * std::cos(phi),
                                s1 * s2 * std::sin(phi)});
                r.ws.push_back(w1[i] * w2[j] * wphi);
            }
        }
    }
    return r;
}

double ChartQuadrature::weight_sum() const {
    double s = 0.0, c = 0.0;
    for (const QuadNode& n : nodes) {
        const double y = n.w - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t ChartQuadrature::hash() const {
    uint64_t h = fnv1a64(&bubble_scale, sizeof(double));
    h = fnv1a64(bubble_center.data(), 4 * sizeof(double), h);
    for (const QuadNode& n : nodes) {
        h = fnv1a64(n.x.data(), 4 * sizeof(double), h);
        h = fnv1a64(&n.w, sizeof(double), h);
    }
    return h;
}

namespace {

Region classify(double rho, double lambda) {
    if (lambda <= 0.0) return Region::far;
    if (rho < 0.25 * lambda) return Region::core;
    if (rho < 0.5 * lambda) return Region::collar;
    if (rho < 2.0 * lambda) return Region::annulus;
    return Region::far;
}

/// Appends p-centered radial cells [breaks[i], breaks[i+1]] x angular rule.
void add_radial_cells(ChartQuadrature& q, const Vec4& p, const std::vector<double>& breaks,
                      int gl, const S3Rule& ang, double lambda, const std::string& name) {
    std::vector<double> gx, gw;
    gauss_legendre(gl, gx, gw);
    const size_t begin = q.nodes.size();
    for (size_t c = 0; c + 1 < breaks.size(); ++c) {
        for (size_t a = 0; a < ang.size(); ++a) {
            const Vec4& om = ang.xs[a];
            const double r0 = breaks[c], r1 = breaks[c + 1];
            for (int g = 0; g < gl; ++g) {
                const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gx[g];
                const double wr = 0.5 * (r1 - r0) * gw[g];
                QuadNode node;
                node.x = p + om * r;
                node.w = wr * r * r * r * ang.ws[a];
                node.region = classify(r, lambda);
                q.nodes.push_back(node);
            }
        }
    }
    q.charts.push_back({name, begin, q.nodes.size()});
}

/// Appends p-centered shells from r_in out to the unit sphere, with
/// per-direction geometric breakpoints r_i(om) = r_in * (l(om)/r_in)^(i/n),
/// where l(om) is the distance from p to the sphere along om.
void add_fitted_shells(ChartQuadrature& q, const Vec4& p, double r_in, int n_cells, int gl,
                       const S3Rule& ang, double lambda, const std::string& name) {
    std::vector<double> gx, gw;
    gauss_legendre(gl, gx, gw);
    const size_t begin = q.nodes.size();
    for (size_t a = 0; a < ang.size(); ++a) {
        const Vec4& om = ang.xs[a];
        const double b = dot(p, om);
        const double ell = -b + std::sqrt(b * b + 1.0 - norm2(p));
        const double ratio = std::pow(ell / r_in, 1.0 / n_cells);
        double r0 = r_in;
        for (int c = 0; c < n_cells; ++c) {
            const double r1 = (c + 1 == n_cells) ? ell : r0 * ratio;
            for (int g = 0; g < gl; ++g) {
                const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gx[g];
                const double wr = 0.5 * (r1 - r0) * gw[g];
                QuadNode node;
                node.x = p + om * r;
                node.w = wr * r * r * r * ang.ws[a];
                node.region = classify(r, lambda);
                q.nodes.push_back(node);
            }
            r0 = r1;
        }
    }
    q.charts.push_back({name, begin, q.nodes.size()});
}

} // namespace

ChartQuadrature ball_grid(const Vec4& center, double R, int radial_cells, int gl_per_cell,
                          const S3Rule& ang) {
    ChartQuadrature q;
    q.bubble_center = center;
    q.bubble_scale = 0.0;
    std::vector<double> breaks;
    for (int i = 0; i <= radial_cells; ++i) breaks.push_back(R * i / radial_cells);
    add_radial_cells(q, center, breaks, gl_per_cell, ang, 0.0, "ball");
    q.declared_volume = 0.5 * M_PI * M_PI * R * R * R * R;
    return q;
}

ChartQuadrature bubble_ball_grid(const Vec4& p, double lambda, int gl_per_cell,
                                 int outer_cells, const S3Rule& ang, double split_mult) {
    if (lambda <= 0.0) throw std::invalid_argument("bubble_ball_grid: lambda must be positive");
    const double dist_to_boundary = 1.0 - std::sqrt(norm2(p));
    if (split_mult * lambda >= dist_to_boundary)
        throw std::invalid_argument("bubble_ball_grid: bubble chart reaches the boundary");

    ChartQuadrature q;
    q.bubble_center = p;
    q.bubble_scale = lambda;

    std::vector<double> inner;
    for (double m : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
        if (m < split_mult) inner.push_back(m * lambda);
    }
    inner.push_back(split_mult * lambda);
    add_radial_cells(q, p, inner, gl_per_cell, ang, lambda, "bubble");

    add_fitted_shells(q, p, split_mult * lambda, outer_cells, gl_per_cell, ang, lambda,
                      "background");

    q.declared_volume = 0.5 * M_PI * M_PI;
    return q;
}

ChartQuadrature r4_grid(const Vec4& p, double lambda, int gl_per_cell, int tail_cells,
                        const S3Rule& ang, double split_mult) {
    if (lambda <= 0.0) throw std::invalid_argument("r4_grid: lambda must be positive");
    ChartQuadrature q;
    q.bubble_center = p;
    q.bubble_scale = lambda;

    std::vector<double> inner;
    for (double m : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
        if (m < split_mult) inner.push_back(m * lambda);
    }
    inner.push_back(split_mult * lambda);
    add_radial_cells(q, p, inner, gl_per_cell, ang, lambda, "bubble");

    // Tail r in [split_mult*lambda, infinity) via u = 1/r:
    // int r^3 f dr = int u^-5 f(1/u) du over (0, 1/(split_mult*lambda)].
    std::vector<double> gx, gw;
    gauss_legendre(gl_per_cell, gx, gw);
    const double u_max = 1.0 / (split_mult * lambda);
    const size_t begin = q.nodes.size();
    for (int c = 0; c < tail_cells; ++c) {
        const double u0 = u_max * c / tail_cells, u1 = u_max * (c + 1) / tail_cells;
        for (size_t a = 0; a < ang.size(); ++a) {
            const Vec4& om = ang.xs[a];
            for (int g = 0; g < gl_per_cell; ++g) {
                const double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * gx[g];
                const double wu = 0.5 * (u1 - u0) * gw[g];
                const double r = 1.0 / u;
                QuadNode node;
                node.x = p + om * r;
                node.w = wu / (u * u * u * u * u) * ang.ws[a];
                node.region = Region::tail;
                q.nodes.push_back(node);
            }
        }
    }
    q.charts.push_back({"tail", begin, q.nodes.size()});
    q.declared_volume = -1.0; // unbounded region
    return q;
}

CartesianGrid CartesianGrid::build(const Vec4& lo, const Vec4& hi, const std::array<int, 4>& n) {
    CartesianGrid g;
    g.lo = lo;
    g.hi = hi;
    g.n = n;
    g.xs.reserve(size_t(n[0]) * n[1] * n[2] * n[3]);
    for (int i0 = 0; i0 < n[0]; ++i0)
        for (int i1 = 0; i1 < n[1]; ++i1)
            for (int i2 = 0; i2 < n[2]; ++i2)
                for (int i3 = 0; i3 < n[3]; ++i3) {
                    Vec4 x;
                    const std::array<int, 4> idx{i0, i1, i2, i3};
                    for (int a = 0; a < 4; ++a)
                        x[a] = lo[a] + (hi[a] - lo[a]) * (idx[a] + 0.5) / n[a];
                    g.xs.push_back(x);
                }
    return g;
}

double CartesianGrid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < 4; ++a) v *= (hi[a] - lo[a]) / n[a];
    return v;
}

size_t CartesianGrid::index(const std::array<int, 4>& idx) const {
    return ((size_t(idx[0]) * n[1] + idx[1]) * n[2] + idx[2]) * n[3] + idx[3];
}

double CartesianGrid::spacing(int axis) const { return (hi[axis] - lo[axis]) / n[axis]; }

} // namespace ymb

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ymb {

using Vec4 = std::array<double, 4>;

inline double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
inline double norm2(const Vec4& a) { return dot(a, a); }
inline Vec4 operator+(const Vec4& a, const Vec4& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Vec4 operator-(const Vec4& a, const Vec4& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline Vec4 operator*(const Vec4& a, double s) {
    return {a[0] * s, a[1] * s, a[2] * s, a[3] * s};
}

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Product quadrature on S^3: Gauss-Chebyshev (2nd kind) in cos(theta1),
/// Gauss-Legendre in cos(theta2), trapezoid in phi.  Exact for spherical
/// polynomials of degree up to about 2*min(n1, n2, n3/2) - 1.
struct S3Rule {
    std::vector<Vec4> xs;
    std::vector<double> ws;
    int n1 = 0, n2 = 0, n3 = 0;

    static S3Rule build(int n1, int n2, int n3);
    size_t size() const { return xs.size(); }
};

/// Subdomain tags used by the expansion bookkeeping (radii relative to the
/// bubble center p at scale lambda).
enum class Region : uint8_t {
    core,       // |x-p| < lambda/4
    collar,     // lambda/4 .. lambda/2
    annulus,    // lambda/2 .. 2 lambda
    far,        // beyond 2 lambda
    tail,       // outside the ball (R^4 grids only)
};

struct QuadNode {
    Vec4 x;
    double w;
    Region region;
};

/// Quadrature decomposition of B^4 (or R^4) into charts: a list of nodes and
/// weights grouped into named charts with disjoint regions.
struct ChartQuadrature {
    struct Chart {
        std::string name;
        size_t begin = 0, end = 0;
    };

    std::vector<QuadNode> nodes;
    std::vector<Chart> charts;
    Vec4 bubble_center{0, 0, 0, 0};
    double bubble_scale = 0.0;
    double declared_volume = 0.0;

    double weight_sum() const;
    uint64_t hash() const;
};

/// Hyperspherical tensor grid on the ball |x - center| <= R.
ChartQuadrature ball_grid(const Vec4& center, double R, int radial_cells, int gl_per_cell,
                          const S3Rule& ang);

/// Bubble-fitted decomposition of B^4 for a bubble at p with scale lambda:
/// p-centered radial cells with breakpoints at multiples of lambda
/// (lambda/4, lambda/2, lambda, 2 lambda, ..., split_mult*lambda), then
/// boundary-fitted shells out to the unit sphere.  Covers B^4 exactly.
ChartQuadrature bubble_ball_grid(const Vec4& p, double lambda, int gl_per_cell,
                                 int outer_cells, const S3Rule& ang, double split_mult = 8.0);

/// Grid over all of R^4 for instanton integrals: p-centered cells out to
/// split_mult*lambda plus an inverted-radius (u = 1/r) tail chart.
ChartQuadrature r4_grid(const Vec4& p, double lambda, int gl_per_cell, int tail_cells,
                        const S3Rule& ang, double split_mult = 8.0);

/// Uniform Cartesian tensor grid on a box (midpoint nodes); supports the
/// finite-difference path for sampled fields.
struct CartesianGrid {
    Vec4 lo, hi;
    std::array<int, 4> n;
    std::vector<Vec4> xs;

    static CartesianGrid build(const Vec4& lo, const Vec4& hi, const std::array<int, 4>& n);
    size_t size() const { return xs.size(); }
    double cell_volume() const;
    size_t index(const std::array<int, 4>& idx) const;
    double spacing(int axis) const;
};

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 1469598103934665603ull);

} // namespace ymb

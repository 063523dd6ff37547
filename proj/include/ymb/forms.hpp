#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>

#include "ymb/algebra.hpp"
#include "ymb/grid.hpp"
#include "ymb/poly.hpp"

namespace ymb {

struct GridMismatch : std::runtime_error {
    GridMismatch() : std::runtime_error("form grids do not match") {}
};
struct StencilUnderflow : std::runtime_error {
    StencilUnderflow() : std::runtime_error("node too close to chart boundary for stencil") {}
};

using Lie1 = std::array<ImQuat, 4>;
using Lie2 = std::array<ImQuat, 6>;
/// jet.d[nu][mu] = d_nu A_mu
struct Jet1 {
    Lie1 a{};
    std::array<Lie1, 4> d{};
};

/// Closed-form Im H-valued 1-form field: value and exact derivative at any
/// point of its domain.
struct Field1 {
    virtual ~Field1() = default;
    virtual Lie1 value(const Vec4& x) const = 0;
    virtual Jet1 jet(const Vec4& x) const = 0;
};

struct PolyField1 final : Field1 {
    PolyLie1 p;
    explicit PolyField1(PolyLie1 poly) : p(std::move(poly)) {}
    Lie1 value(const Vec4& x) const override { return p.value(x); }
    Jet1 jet(const Vec4& x) const override {
        Jet1 j;
        p.jet(x, j.a, j.d);
        return j;
    }
};

// --- pointwise kernels ------------------------------------------------------

static const int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

/// (da)_{mu nu} from a jet.
Lie2 exterior_d_at(const Jet1& j);

/// Hodge star on 2-forms, orientation dx0^dx1^dx2^dx3 > 0.
Lie2 hodge_star2_at(const Lie2& w);

/// Anti-self-dual projection (w - *w)/2.
Lie2 asd_project_at(const Lie2& w);

/// ([a, b])_{mu nu} = [a_mu, b_nu] - [a_nu, b_mu].
Lie2 bracket_wedge_at(const Lie1& a, const Lie1& b);

/// F^eps = da + (eps/2)[a, a].
Lie2 curvature_at(const Jet1& j, double eps);

/// d_A^eps a = da + eps [A, a].
Lie2 covariant_d1_at(const Lie1& A, double eps, const Jet1& ja);

/// Codifferential on 2-forms, the L^2 adjoint of d_A^eps:
/// (delta w)_mu = sum_nu (d_nu w_{mu nu} + eps [A_nu, w_{mu nu}]).
/// jw[nu][slot] = d_nu w_slot.
Lie1 codifferential2_at(const Lie1& A, double eps, const Lie2& w,
                        const std::array<Lie2, 4>& jw);

/// Pointwise norms under the su(2) inner product.
double norm2_lie1(const Lie1& a);
double norm2_lie2(const Lie2& w);
double inner_lie2(const Lie2& u, const Lie2& v);
double inner_lie1(const Lie1& u, const Lie1& v);

/// 4-form coefficient of the trace pairing, sign pinned so a self-dual
/// curvature has positive density (relative charge of the glued instanton
/// comes out +1 in this convention).
double chern_density_at(const Lie2& w);

/// Covariant gradient entries (nabla_A^eps a)_{nu mu} = d_nu a_mu + eps [A_nu, a_mu];
/// returns the pointwise su(2) square sum over all 16 entries.
double covariant_grad_norm2_at(const Lie1& A, double eps, const Jet1& ja);

// --- grid-sampled forms -----------------------------------------------------

struct SampledForm1 {
    std::shared_ptr<const ChartQuadrature> grid;
    std::vector<Lie1> vals;
};
struct SampledForm2 {
    std::shared_ptr<const ChartQuadrature> grid;
    std::vector<Lie2> vals;
};

SampledForm1 sample1(const std::shared_ptr<const ChartQuadrature>& grid, const Field1& f);

/// L^2 inner product over the quadrature (deterministic reduction order).
double l2_inner(const SampledForm1& u, const SampledForm1& v);
double l2_inner(const SampledForm2& u, const SampledForm2& v);

/// ||nabla_A^eps a||_p + ||a||_p on a quadrature grid (p = 2 supported).
double sobolev_norm(const Field1& A, double eps, const Field1& a,
                    const ChartQuadrature& grid, double p = 2.0);

/// Sobolev pairing: int (nabla_A^eps a, nabla_A^eps b) + (a, b).
double sobolev_pairing(const Field1& A, double eps, const Field1& a, const Field1& b,
                       const ChartQuadrature& grid);

// --- finite-difference path for sampled fields ------------------------------

/// Values of a 1-form sampled on a Cartesian tensor grid.
struct CartesianForm1 {
    std::shared_ptr<const CartesianGrid> grid;
    std::vector<Lie1> vals;
};

/// Centered-stencil exterior derivative (order 2 or 4) at an interior node;
/// throws StencilUnderflow if the stencil leaves the grid.
Lie2 exterior_d_sampled(const CartesianForm1& f, const std::array<int, 4>& idx, int order = 2);

} // namespace ymb

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "ymb/forms.hpp"

namespace ymb {

struct NearBoundary : std::runtime_error {
    NearBoundary() : std::runtime_error("kernel quadrature unreliable this close to the boundary") {}
};
struct NonContraction : std::runtime_error {
    explicit NonContraction(double eps)
        : std::runtime_error("picard update norms grew: eps too large for this discretization"),
          eps_value(eps) {}
    double eps_value;
};

/// h_p closed form: harmonic on B^4 with boundary data
/// Im((xbar - pbar) dx)/|x - p|^4, obtained by reflecting the exterior
/// harmonic extension of the data across S^3.  Writing s = |x|^2,
/// m = x - p s and w^2 = 1 - 2 <p, x> + |p|^2 s, the components are the
/// I^2-pattern in m divided by w^4.  Smooth on the closed ball for |p| < 1.
template <class T>
std::array<ImQuatT<T>, 4> eval_hp(const Vec4& p, const std::array<T, 4>& x) {
    const T s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    const T m0 = x[0] - T(p[0]) * s, m1 = x[1] - T(p[1]) * s, m2 = x[2] - T(p[2]) * s,
            m3 = x[3] - T(p[3]) * s;
    const T w2 = T(1.0) - T(2.0) * (T(p[0]) * x[0] + T(p[1]) * x[1] + T(p[2]) * x[2] +
                                    T(p[3]) * x[3]) +
                 T(norm2(p)) * s;
    const T inv = T(1.0) / (w2 * w2);
    return {ImQuatT<T>{-m1 * inv, -m2 * inv, -m3 * inv},
            ImQuatT<T>{m0 * inv, -m3 * inv, m2 * inv},
            ImQuatT<T>{m3 * inv, m0 * inv, -m1 * inv},
            ImQuatT<T>{-m2 * inv, m1 * inv, m0 * inv}};
}

struct HpField final : Field1 {
    Vec4 p;
    explicit HpField(const Vec4& p_) : p(p_) {}
    Lie1 value(const Vec4& x) const override { return eval_hp<double>(p, x); }
    Jet1 jet(const Vec4& x) const override;
};

/// Boundary 1-form data sampled on S^3 (all four components prescribed).
struct BoundarySampler {
    virtual ~BoundarySampler() = default;
    virtual Lie1 value(const Vec4& zeta) const = 0;
};

/// Boundary trace of h_p: Im((xbar - pbar) dx)/|x - p|^4 on S^3.
struct HpBoundary final : BoundarySampler {
    Vec4 p;
    explicit HpBoundary(const Vec4& p_) : p(p_) {}
    Lie1 value(const Vec4& zeta) const override { return eval_hp<double>(p, zeta); }
};

/// Boundary trace of I^2_{lambda,p} on S^3 (the h_{lambda,p} data).
struct I2Boundary final : BoundarySampler {
    Vec4 p;
    double lambda;
    I2Boundary(const Vec4& p_, double l) : p(p_), lambda(l) {}
    Lie1 value(const Vec4& zeta) const override;
};

/// Remainder data r_{lambda,p} = I^2|_{S^3} - lambda^2 h_p|_{S^3}; O(lambda^4).
struct HlpRemainderBoundary final : BoundarySampler {
    Vec4 p;
    double lambda;
    HlpRemainderBoundary(const Vec4& p_, double l) : p(p_), lambda(l) {}
    Lie1 value(const Vec4& zeta) const override;
};

/// Polynomial boundary data: a polynomial 1-form evaluated on S^3, with or
/// without tangential projection (normal component zeroed).
struct PolyBoundary final : BoundarySampler {
    PolyLie1 form;
    bool tangential_part;
    PolyBoundary(PolyLie1 f, bool tang) : form(std::move(f)), tangential_part(tang) {}
    Lie1 value(const Vec4& zeta) const override;
};

/// Tangential boundary 1-form on a shared S^3 node set; contraction with the
/// outward normal vanishes by construction.
struct BoundaryForm {
    std::shared_ptr<const S3Rule> rule;
    std::vector<Lie1> vals;

    static BoundaryForm from_sampler(const std::shared_ptr<const S3Rule>& rule,
                                     const BoundarySampler& s, bool project_tangential);
    uint64_t hash() const;
};

/// Componentwise Poisson-kernel extension of full boundary data:
/// h(x) = int P(x, zeta) data(zeta) dsigma, P = (1 - |x|^2)/(2 pi^2 |x - zeta|^4).
/// Evaluation refuses |x| >= 1 - delta_near.  A nonnegative trunc_degree
/// replaces P by its zonal expansion truncated at that degree, which the
/// rule integrates exactly (and which agrees with P against data of degree
/// <= trunc_degree - 1).
class PoissonField final : public Field1 {
public:
    PoissonField(std::shared_ptr<const S3Rule> rule, std::vector<Lie1> data,
                 double delta_near = 0.05, int trunc_degree = -1);
    Lie1 value(const Vec4& x) const override;
    Jet1 jet(const Vec4& x) const override;

private:
    template <class T>
    std::array<ImQuatT<T>, 4> eval(const std::array<T, 4>& x) const;

    std::shared_ptr<const S3Rule> rule_;
    std::vector<Lie1> data_;
    double delta_near_;
    int trunc_;
};

/// Truncated-Poisson (spectral) harmonic extension: the harmonic polynomial
/// of degree <= L whose spherical-harmonic coefficients match the data as
/// integrated by the rule.  Valid on the closed ball; exact when the data is
/// the restriction of a polynomial of degree <= L and the rule is exact to
/// degree L + deg(data).
PolyLie1 spectral_extend(const BoundarySampler& data, int L, const S3Rule& rule);

/// h_{lambda,p} = lambda^2 h_p + s where s is the spectral extension of the
/// O(lambda^4) remainder data; carries analytic derivatives.
struct HlpField final : Field1 {
    Vec4 p;
    double lambda;
    PolyLie1 s;

    HlpField(const Vec4& p_, double lambda_, int L, const S3Rule& rule);
    Lie1 value(const Vec4& x) const override;
    Jet1 jet(const Vec4& x) const override;
};

/// PI^2_{lambda,p} = I^2_{lambda,p} - h_{lambda,p}; zero full trace on S^3.
struct PI2Field final : Field1 {
    std::shared_ptr<const HlpField> h;

    explicit PI2Field(std::shared_ptr<const HlpField> h_) : h(std::move(h_)) {}
    Lie1 value(const Vec4& x) const override;
    Jet1 jet(const Vec4& x) const override;
};

/// Least-squares fit of log(sup_B |h_{lambda,p} - lambda^2 h_p|) against
/// log(lambda); the paper-level scaling exponent is 4.
struct HScalingReport {
    std::vector<double> lambdas;
    std::vector<double> sup_norms;
    double slope = 0.0;
};
HScalingReport check_h_scaling(const Vec4& p, const std::vector<double>& lambdas, double d0,
                               int L, const S3Rule& rule);

// --- the (D_0) energy minimizer and the Picard small solution ---------------

struct D0Config {
    int degree = 6;          // total degree of the trial space
    int ext_L = 8;           // spectral extension cutoff for the boundary lift
    int rule_n1 = 16, rule_n2 = 16, rule_n3 = 32;
    double pinv_rtol = 1e-11; // relative eigenvalue cutoff in the Gram pseudo-inverse
};

struct D0Solution {
    PolyLie1 lift;      // harmonic lift H of the boundary data
    PolyLie1 A0bar;     // energy minimizer
    PolyLie2 dA0bar;    // its differential (the relative-Hodge object)
    double energy = 0.0;        // int |dA|^2 (su(2) norm)
    double coclosed_res = 0.0;  // ||delta dA||_L2 discrete
    double closed_res = 0.0;    // ||d dA||_L2 (zero up to roundoff)
    double trace_res = 0.0;     // boundary trace mismatch of dA vs d_tau A0
};

class D0Solver {
public:
    explicit D0Solver(const D0Config& cfg = {});

    const D0Config& config() const { return cfg_; }
    const S3Rule& rule() const { return rule_; }

    /// Minimizes int_B |dA|^2 over A = H + (1 - r^2) C with exact tangential
    /// trace; data_degree bounds the polynomial degree of the boundary data
    /// (used for the exact harmonic lift).
    D0Solution solve(const BoundarySampler& data, int data_degree) const;

    /// Picard iteration for the small solution: repeatedly solves the
    /// linearized system with the quadratic-energy Gram matrix and an
    /// eps-scaled source.  Returns A_eps = A0bar + omega.
    struct PicardReport {
        int iterations = 0;
        std::vector<double> update_norms;
        bool converged = true;
    };
    PolyLie1 picard(const D0Solution& base, double eps, double tol,
                    PicardReport* report = nullptr, int max_iter = 40) const;

private:
    struct BasisElem {
        int mu;
        Poly beta;                  // scalar coefficient, divisible by (1 - r^2)
        std::array<Poly, 6> dbeta;  // exterior derivative slots
    };

    Eigen::VectorXd solve_gram(const Eigen::VectorXd& rhs) const;

    D0Config cfg_;
    S3Rule rule_;
    std::vector<BasisElem> basis_;
    Eigen::MatrixXd evecs_;
    Eigen::VectorXd evals_;
};

/// Moment table: key -> int_B x^key * P dx for all keys of total degree <= D.
class MomentTable {
public:
    MomentTable(const Poly& P, int D);
    double dot(const Poly& q) const; // int_B q * P, q of degree <= D

private:
    std::vector<double> moments_;
    int D_;
};

} // namespace ymb

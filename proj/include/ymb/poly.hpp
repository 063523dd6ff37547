#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ymb/algebra.hpp"

namespace ymb {

/// Sparse polynomial in (x0, x1, x2, x3).  Exponents are packed 5 bits per
/// variable, terms kept sorted by packed key.
class Poly {
public:
    struct Term {
        uint32_t key;
        double coeff;
    };

    Poly() = default;
    static Poly constant(double c);
    static Poly monomial(const std::array<int, 4>& exps, double c);
    static Poly variable(int axis, double c = 1.0);
    /// |x|^2 = x0^2 + x1^2 + x2^2 + x3^2.
    static Poly radius2();

    static uint32_t pack(const std::array<int, 4>& e);
    static std::array<int, 4> unpack(uint32_t key);

    bool empty() const { return terms_.empty(); }
    int degree() const;
    const std::vector<Term>& terms() const { return terms_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(double s) const;
    Poly& operator+=(const Poly& o);

    Poly derivative(int axis) const;
    Poly laplacian() const;

    double eval(const std::array<double, 4>& x) const;
    Dual4 eval_dual(const std::array<Dual4, 4>& x) const;

    /// Exact integral over the unit ball B^4.
    double integral_ball() const;
    /// Exact integral over the unit sphere S^3.
    double integral_sphere() const;

    /// Largest |coefficient|.
    double max_abs_coeff() const;

    /// Drops terms with |coeff| <= tol * max_abs_coeff().
    Poly pruned(double tol = 1e-300) const;

    static void add_term(std::vector<Term>& acc, uint32_t key, double c);
    static Poly from_unsorted(std::vector<Term> acc);

private:
    std::vector<Term> terms_;
};

/// Exact integral of x^alpha over the unit ball in R^4 (0 if any exponent odd).
double ball_monomial_integral(uint32_t key);
/// Exact integral of x^alpha over S^3 (0 if any exponent odd).
double sphere_monomial_integral(uint32_t key);

/// Im H-valued polynomial q-form components: comp[slot][lie].
struct PolyLie1 {
    std::array<std::array<Poly, 3>, 4> comp;

    PolyLie1 operator+(const PolyLie1& o) const;
    PolyLie1 operator-(const PolyLie1& o) const;
    PolyLie1 operator*(double s) const;
    bool empty() const;
    int degree() const;

    std::array<ImQuat, 4> value(const std::array<double, 4>& x) const;
    /// jet[nu][mu] = d_nu A_mu.
    void jet(const std::array<double, 4>& x, std::array<ImQuat, 4>& a,
             std::array<std::array<ImQuat, 4>, 4>& da) const;
};

struct PolyLie2 {
    std::array<std::array<Poly, 3>, 6> comp;

    PolyLie2 operator+(const PolyLie2& o) const;
    PolyLie2 operator*(double s) const;
};

/// Ordered 2-form slots (01, 02, 03, 12, 13, 23).
int pair_slot(int mu, int nu, double& sign);

PolyLie1 poly_lie1_zero();

/// (da)_{mu nu} = d_mu a_nu - d_nu a_mu.
PolyLie2 exterior_d(const PolyLie1& a);

/// ([a, b])_{mu nu} = [a_mu, b_nu] - [a_nu, b_mu].
PolyLie2 bracket_wedge(const PolyLie1& a, const PolyLie1& b);

/// su(2) L^2 inner product over B^4 of two polynomial 2-forms, exact.
double inner_ball(const PolyLie2& u, const PolyLie2& v);
/// Same for 1-forms.
double inner_ball(const PolyLie1& u, const PolyLie1& v);

/// Exact harmonic polynomial extension: returns the harmonic polynomial of
/// degree <= deg(f) whose restriction to S^3 agrees with f.
Poly harmonic_extension(const Poly& f);

/// Flattened polynomial 1-form with precomputed derivative polynomials for
/// fast jet evaluation at many points (shared power tables per point).
class CompiledLie1 {
public:
    CompiledLie1() = default;
    explicit CompiledLie1(const PolyLie1& f);

    /// a[mu], da[nu][mu] = d_nu a_mu
    void jet(const std::array<double, 4>& x, std::array<ImQuat, 4>& a,
             std::array<std::array<ImQuat, 4>, 4>& da) const;
    std::array<ImQuat, 4> value(const std::array<double, 4>& x) const;
    bool empty() const { return slots_.empty(); }

private:
    struct FlatPoly {
        std::vector<uint8_t> e0, e1, e2, e3;
        std::vector<double> c;
    };
    // slot layout: 12 value polys (mu*3+l), then 48 derivative polys
    // ((nu*4 + mu)*3 + l).
    std::vector<FlatPoly> slots_;
    std::array<int, 4> max_exp_{0, 0, 0, 0};
};

} // namespace ymb

#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>

#include "ymb/harmonic.hpp"

namespace ymb {

/// The seven concentration functions built from the mu-spectrum and F.
/// Keys: G1+, G1-, G2+, G2-, G3-, G10, G20.
std::map<std::string, double> g_functions(const std::array<double, 3>& mu, double F);

/// Descending eigenvalues of M^t M (squared singular values of M).
std::array<double, 3> mu_spectrum(const Eigen::Matrix3d& M);

/// Maximizes tr(N^t R) over R in SO(3): value sigma1 + sigma2 + sign(det N) sigma3.
struct So3Max {
    double value;
    Rotation3 argmax;
};
So3Max so3_linear_max(const Eigen::Matrix3d& N);

/// Unit quaternion covering a rotation matrix (either sheet).
UnitQuat quaternion_of(const Rotation3& r);

/// Full reduction data at a point p.
struct MomentReport {
    Vec4 p;
    double F = 0.0;
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    std::array<double, 3> mu{0, 0, 0};
    double detM = 0.0;
    std::map<std::string, double> G;
};

/// Optimal bubble parameters for the reduced energy
/// 2 lambda^4 F - 4 eps lambda^2 T(g).
struct OptimalBubble {
    double T = 0.0;          // max of the rotation pairing over SO(3)
    UnitQuat g;              // a maximizer
    double lambda = 0.0;     // argmin scale
    double value = 0.0;      // reduced energy at the optimum (-2 eps^2 T^2/F)
    bool has_bubble = false; // T > 0
    bool in_window = false;  // D1 eps < lambda^2 < D2 eps
};

enum class CritClass { maximum, minimum, saddle, degenerate };

struct CriticalPoint {
    Vec4 p{};
    std::string which_G;
    double value = 0.0;
    double grad_norm = 0.0;
    std::array<double, 4> hessian_eigs{};
    CritClass cls = CritClass::degenerate;
    std::vector<std::string> theorem_case;
    MomentReport report;
};

struct LandscapeResult {
    std::string which_G;
    std::vector<MomentReport> scan;
    std::vector<CriticalPoint> critical;
    bool degenerate = false;
};

struct ReducedConfig {
    std::vector<double> radial_breaks{0.0, 0.4, 0.65, 0.82, 0.92, 0.975, 1.0};
    int gl = 8;
    int n1 = 10, n2 = 10, n3 = 20;
    double d0 = 0.3;
    double strict_gap = 1e-6; // relative gap for strict mu inequalities
};

/// Quadrature engine for the moment data of a fixed boundary solution.
class ReducedEngine {
public:
    ReducedEngine(const ReducedConfig& cfg, const PolyLie2& dA0bar);

    const ReducedConfig& config() const { return cfg_; }
    const ChartQuadrature& grid() const { return *grid_; }

    /// F(p) = int_B |(dh_p)^-|^2 (su(2) norm).
    double big_F(const Vec4& p) const;

    /// m_ij = int ((d A0bar_j)^-, (dh_{p,i})^-) in the real-form inner product.
    Eigen::Matrix3d moment_matrix(const Vec4& p) const;

    MomentReport report(const Vec4& p) const;

    /// T(g) = int <(dA0bar)^-, g (dh_p)^- g^-1> by direct quadrature; equals
    /// 2 tr(M R) with R = rotation_of(g).
    double rotation_pairing_direct(const Vec4& p, const Rotation3& R) const;

    OptimalBubble optimal_bubble(const Vec4& p, double eps, double D1, double D2) const;

    /// Scans the chosen G over a lattice in the ball of radius 1 - d0,
    /// refines interior extrema by quasi-Newton on finite differences, and
    /// classifies them against the hypothesis clauses.
    LandscapeResult landscape_scan(const std::string& which_G, int points_per_axis,
                                   bool slice_p3 = true) const;

    std::vector<std::string> classify_theorem_cases(const MomentReport& rep,
                                                    const std::string& which_G,
                                                    CritClass cls) const;

private:
    void asd_dhp_at_nodes(const Vec4& p, std::vector<Lie2>& out) const;

    ReducedConfig cfg_;
    std::shared_ptr<const ChartQuadrature> grid_;
    std::vector<Lie2> asd_dA0_; // cached (dA0bar)^- at grid nodes
    bool dA0_zero_ = true;
};

} // namespace ymb

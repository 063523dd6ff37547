#include "ymb/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ymb/instanton.hpp"
#include "ymb/parallel.hpp"

namespace ymb {

namespace {

template <class T>
std::array<T, 4> seed_jet(const Vec4& x) {
    return {T(x[0], 0), T(x[1], 1), T(x[2], 2), T(x[3], 3)};
}

Jet1 jet_from_dual(const std::array<ImQuatT<Dual4>, 4>& a) {
    Jet1 j;
    for (int mu = 0; mu < 4; ++mu)
        for (int l = 0; l < 3; ++l) {
            j.a[mu].c[l] = a[mu].c[l].v;
            for (int nu = 0; nu < 4; ++nu) j.d[nu][mu].c[l] = a[mu].c[l].d[nu];
        }
    return j;
}

/// The I^2 component pattern: Im(conj(y) e_mu) for a 4-vector y.
template <class T>
std::array<ImQuatT<T>, 4> conj_pattern(const std::array<T, 4>& y) {
    return {ImQuatT<T>{-y[1], -y[2], -y[3]}, ImQuatT<T>{y[0], -y[3], y[2]},
            ImQuatT<T>{y[3], y[0], -y[1]}, ImQuatT<T>{-y[2], y[1], y[0]}};
}

} // namespace

Jet1 HpField::jet(const Vec4& x) const {
    return jet_from_dual(eval_hp<Dual4>(p, seed_jet<Dual4>(x)));
}

Lie1 I2Boundary::value(const Vec4& zeta) const { return eval_I2<double>(p, lambda, zeta); }

Lie1 HlpRemainderBoundary::value(const Vec4& zeta) const {
    const Vec4 y = zeta - p;
    const double r2 = norm2(y);
    const double l2 = lambda * lambda;
    const double f = -l2 * l2 / (r2 * r2 * (l2 + r2));
    auto pat = conj_pattern<double>(y);
    Lie1 out;
    for (int mu = 0; mu < 4; ++mu) out[mu] = pat[mu] * f;
    return out;
}

Lie1 PolyBoundary::value(const Vec4& zeta) const {
    Lie1 b = form.value(zeta);
    if (tangential_part) {
        ImQuat normal_comp;
        for (int mu = 0; mu < 4; ++mu) normal_comp += b[mu] * zeta[mu];
        for (int mu = 0; mu < 4; ++mu) b[mu] = b[mu] - normal_comp * zeta[mu];
    }
    return b;
}

BoundaryForm BoundaryForm::from_sampler(const std::shared_ptr<const S3Rule>& rule,
                                        const BoundarySampler& s, bool project_tangential) {
    BoundaryForm bf;
    bf.rule = rule;
    bf.vals.resize(rule->size());
    for (size_t i = 0; i < rule->size(); ++i) {
        const Vec4& z = rule->xs[i];
        Lie1 b = s.value(z);
        if (project_tangential) {
            ImQuat nc;
            for (int mu = 0; mu < 4; ++mu) nc += b[mu] * z[mu];
            for (int mu = 0; mu < 4; ++mu) b[mu] = b[mu] - nc * z[mu];
        }
        bf.vals[i] = b;
    }
    return bf;
}

uint64_t BoundaryForm::hash() const {
    uint64_t h = fnv1a64(&rule->n1, sizeof(int));
    h = fnv1a64(&rule->n2, sizeof(int), h);
    h = fnv1a64(&rule->n3, sizeof(int), h);
    for (const Lie1& v : vals)
        for (int mu = 0; mu < 4; ++mu) h = fnv1a64(v[mu].c.data(), 3 * sizeof(double), h);
    return h;
}

// ---------------------------------------------------------------------------
// Poisson kernel extension

PoissonField::PoissonField(std::shared_ptr<const S3Rule> rule, std::vector<Lie1> data,
                           double delta_near, int trunc_degree)
    : rule_(std::move(rule)), data_(std::move(data)), delta_near_(delta_near),
      trunc_(trunc_degree) {
    if (data_.size() != rule_->size())
        throw std::invalid_argument("PoissonField: data does not match the S^3 rule");
}

template <class T>
std::array<ImQuatT<T>, 4> PoissonField::eval(const std::array<T, 4>& x) const {
    const double om3 = 2.0 * M_PI * M_PI;
    std::array<ImQuatT<T>, 4> acc;
    const T rho2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    for (size_t n = 0; n < rule_->size(); ++n) {
        const Vec4& z = rule_->xs[n];
        T kernel;
        if (trunc_ < 0) {
            const T d0 = x[0] - T(z[0]), d1 = x[1] - T(z[1]), d2 = x[2] - T(z[2]),
                    d3 = x[3] - T(z[3]);
            const T dist2 = d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3;
            kernel = (T(1.0) - rho2) / (T(om3) * dist2 * dist2);
        } else {
            // Zonal expansion: sum_k (k+1) U_k(t) rho^k via the homogeneous
            // recurrence Z_k = 2 <x, z> Z_{k-1} - rho^2 Z_{k-2}.
            const T a = x[0] * T(z[0]) + x[1] * T(z[1]) + x[2] * T(z[2]) + x[3] * T(z[3]);
            T zk_m2 = T(1.0), zk_m1 = T(2.0) * a;
            T sum = zk_m2 * T(1.0);
            if (trunc_ >= 1) sum += zk_m1 * T(2.0);
            for (int k = 2; k <= trunc_; ++k) {
                const T zk = T(2.0) * a * zk_m1 - rho2 * zk_m2;
                sum += zk * T(double(k + 1));
                zk_m2 = zk_m1;
                zk_m1 = zk;
            }
            kernel = sum * T(1.0 / om3);
        }
        const T wk = kernel * T(rule_->ws[n]);
        for (int mu = 0; mu < 4; ++mu)
            for (int l = 0; l < 3; ++l) acc[mu].c[l] += wk * T(data_[n][mu].c[l]);
    }
    return acc;
}

Lie1 PoissonField::value(const Vec4& x) const {
    if (trunc_ < 0 && std::sqrt(norm2(x)) >= 1.0 - delta_near_) throw NearBoundary();
    std::array<double, 4> xx{x[0], x[1], x[2], x[3]};
    auto a = eval<double>(xx);
    Lie1 out;
    for (int mu = 0; mu < 4; ++mu) out[mu] = a[mu];
    return out;
}

Jet1 PoissonField::jet(const Vec4& x) const {
    if (trunc_ < 0 && std::sqrt(norm2(x)) >= 1.0 - delta_near_) throw NearBoundary();
    return jet_from_dual(eval<Dual4>(seed_jet<Dual4>(x)));
}

// ---------------------------------------------------------------------------
// Spectral (truncated-Poisson) extension

namespace {

struct HomogIndex {
    std::vector<uint32_t> keys;
    std::unordered_map<uint32_t, int> idx;
};

const HomogIndex& homog_index(int k) {
    static std::vector<HomogIndex> cache;
    if (int(cache.size()) <= k) {
        const int old = int(cache.size());
        cache.resize(k + 1);
        for (int d = old; d <= k; ++d) {
            HomogIndex hi;
            for (int e0 = d; e0 >= 0; --e0)
                for (int e1 = d - e0; e1 >= 0; --e1)
                    for (int e2 = d - e0 - e1; e2 >= 0; --e2) {
                        const int e3 = d - e0 - e1 - e2;
                        const uint32_t key = Poly::pack({e0, e1, e2, e3});
                        hi.idx[key] = int(hi.keys.size());
                        hi.keys.push_back(key);
                    }
            cache[d] = std::move(hi);
        }
    }
    return cache[k];
}

} // namespace

PolyLie1 spectral_extend(const BoundarySampler& data, int L, const S3Rule& rule) {
    const double om3 = 2.0 * M_PI * M_PI;
    // Dense per-degree accumulators for the 12 scalar components.
    std::vector<std::array<std::vector<double>, 12>> acc(L + 1);
    for (int k = 0; k <= L; ++k)
        for (int c = 0; c < 12; ++c) acc[k][c].assign(homog_index(k).keys.size(), 0.0);

    // Index maps for multiply-by-x_a (degree k-1 -> k) and by x_a^2 (k-2 -> k).
    std::vector<std::array<std::vector<int>, 4>> mul1(L + 1), mul2(L + 1);
    for (int k = 1; k <= L; ++k) {
        const auto& lo = homog_index(k - 1);
        const auto& hi = homog_index(k);
        for (int a = 0; a < 4; ++a) {
            mul1[k][a].resize(lo.keys.size());
            std::array<int, 4> ea{0, 0, 0, 0};
            ea[a] = 1;
            const uint32_t da = Poly::pack(ea);
            for (size_t i = 0; i < lo.keys.size(); ++i)
                mul1[k][a][i] = hi.idx.at(lo.keys[i] + da);
        }
    }
    for (int k = 2; k <= L; ++k) {
        const auto& lo = homog_index(k - 2);
        const auto& hi = homog_index(k);
        for (int a = 0; a < 4; ++a) {
            mul2[k][a].resize(lo.keys.size());
            std::array<int, 4> ea{0, 0, 0, 0};
            ea[a] = 2;
            const uint32_t da = Poly::pack(ea);
            for (size_t i = 0; i < lo.keys.size(); ++i)
                mul2[k][a][i] = hi.idx.at(lo.keys[i] + da);
        }
    }

    std::vector<std::vector<double>> Z(L + 1);
    for (int k = 0; k <= L; ++k) Z[k].assign(homog_index(k).keys.size(), 0.0);

    for (size_t n = 0; n < rule.size(); ++n) {
        const Vec4& z = rule.xs[n];
        const double w = rule.ws[n];
        const Lie1 d = data.value(z);

        // Z_0 = 1, Z_1 = 2 <x, z>, Z_k = 2 <x, z> Z_{k-1} - |x|^2 Z_{k-2}.
        Z[0][0] = 1.0;
        if (L >= 1)
            for (int a = 0; a < 4; ++a) Z[1][mul1[1][a][0]] = 2.0 * z[a];
        for (int k = 2; k <= L; ++k) {
            std::fill(Z[k].begin(), Z[k].end(), 0.0);
            const auto& prev = Z[k - 1];
            for (int a = 0; a < 4; ++a) {
                const double za2 = 2.0 * z[a];
                const auto& map = mul1[k][a];
                for (size_t i = 0; i < prev.size(); ++i) Z[k][map[i]] += za2 * prev[i];
            }
            const auto& prev2 = Z[k - 2];
            for (int a = 0; a < 4; ++a) {
                const auto& map = mul2[k][a];
                for (size_t i = 0; i < prev2.size(); ++i) Z[k][map[i]] -= prev2[i];
            }
        }

        for (int k = 0; k <= L; ++k) {
            const double scale = w * (k + 1) / om3;
            for (int mu = 0; mu < 4; ++mu)
                for (int l = 0; l < 3; ++l) {
                    const double c = scale * d[mu].c[l];
                    if (c == 0.0) continue;
                    auto& dst = acc[k][mu * 3 + l];
                    const auto& src = Z[k];
                    for (size_t i = 0; i < src.size(); ++i) dst[i] += c * src[i];
                }
        }
    }

    // Assemble polynomials, pruning coefficients that are pure noise.
    PolyLie1 out;
    for (int mu = 0; mu < 4; ++mu)
        for (int l = 0; l < 3; ++l) {
            std::vector<Poly::Term> terms;
            double maxc = 0.0;
            for (int k = 0; k <= L; ++k)
                for (double v : acc[k][mu * 3 + l]) maxc = std::max(maxc, std::abs(v));
            const double cut = maxc * 1e-14;
            for (int k = 0; k <= L; ++k) {
                const auto& hi = homog_index(k);
                for (size_t i = 0; i < hi.keys.size(); ++i) {
                    const double v = acc[k][mu * 3 + l][i];
                    if (std::abs(v) > cut) terms.push_back({hi.keys[i], v});
                }
            }
            out.comp[mu][l] = Poly::from_unsorted(std::move(terms));
        }
    return out;
}

// ---------------------------------------------------------------------------
// h_{lambda,p} and PI^2

HlpField::HlpField(const Vec4& p_, double lambda_, int L, const S3Rule& rule)
    : p(p_), lambda(lambda_) {
    HlpRemainderBoundary rem(p, lambda);
    s = spectral_extend(rem, L, rule);
}

Lie1 HlpField::value(const Vec4& x) const {
    const double l2 = lambda * lambda;
    Lie1 base = eval_hp<double>(p, x);
    Lie1 sv = s.value(x);
    Lie1 out;
    for (int mu = 0; mu < 4; ++mu) out[mu] = base[mu] * l2 + sv[mu];
    return out;
}

Jet1 HlpField::jet(const Vec4& x) const {
    const double l2 = lambda * lambda;
    Jet1 jh = jet_from_dual(eval_hp<Dual4>(p, seed_jet<Dual4>(x)));
    Jet1 js;
    s.jet(x, js.a, js.d);
    Jet1 out;
    for (int mu = 0; mu < 4; ++mu) {
        out.a[mu] = jh.a[mu] * l2 + js.a[mu];
        for (int nu = 0; nu < 4; ++nu) out.d[nu][mu] = jh.d[nu][mu] * l2 + js.d[nu][mu];
    }
    return out;
}

Lie1 PI2Field::value(const Vec4& x) const {
    const auto i2 = eval_I2<double>(h->p, h->lambda, x);
    const Lie1 hv = h->value(x);
    Lie1 out;
    for (int mu = 0; mu < 4; ++mu) out[mu] = i2[mu] - hv[mu];
    return out;
}

Jet1 PI2Field::jet(const Vec4& x) const {
    InstantonField i2({h->p, h->lambda}, 2);
    const Jet1 ji = i2.jet(x);
    const Jet1 jh = h->jet(x);
    Jet1 out;
    for (int mu = 0; mu < 4; ++mu) {
        out.a[mu] = ji.a[mu] - jh.a[mu];
        for (int nu = 0; nu < 4; ++nu) out.d[nu][mu] = ji.d[nu][mu] - jh.d[nu][mu];
    }
    return out;
}

HScalingReport check_h_scaling(const Vec4& p, const std::vector<double>& lambdas, double d0,
                               int L, const S3Rule& rule) {
    if (lambdas.size() < 2)
        throw std::invalid_argument("check_h_scaling: need at least two lambda values");
    HScalingReport rep;
    rep.lambdas = lambdas;

    // Probe set for the sup norm over B_{1 - d0/2}.
    const S3Rule probe_ang = S3Rule::build(4, 4, 8);
    std::vector<Vec4> probes;
    probes.push_back({0, 0, 0, 0});
    for (int ir = 1; ir <= 6; ++ir) {
        const double r = (1.0 - 0.5 * d0) * ir / 6.0;
        for (const Vec4& om : probe_ang.xs) probes.push_back(om * r);
    }

    for (double l : lambdas) {
        HlpField h(p, l, L, rule);
        // h_{lambda,p} - lambda^2 h_p is exactly the spectral remainder s.
        double sup = 0.0;
        for (const Vec4& x : probes) {
            const Lie1 v = h.s.value(x);
            sup = std::max(sup, std::sqrt(norm2_lie1(v)));
        }
        rep.sup_norms.push_back(sup);
    }

    // log-log least squares
    const size_t n = lambdas.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double lx = std::log(lambdas[i]);
        const double ly = std::log(rep.sup_norms[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14) throw std::invalid_argument("check_h_scaling: degenerate fit");
    rep.slope = (n * sxy - sx * sy) / denom;
    return rep;
}

// ---------------------------------------------------------------------------
// Moment table

MomentTable::MomentTable(const Poly& P, int D) : D_(D) {
    const int dim = int(homog_index(0).keys.size()); // force cache init
    (void)dim;
    // enumerate all keys of total degree <= D
    size_t count = 0;
    for (int d = 0; d <= D; ++d) count += homog_index(d).keys.size();
    moments_.assign(count, 0.0);
    size_t base = 0;
    for (int d = 0; d <= D; ++d) {
        const auto& hi = homog_index(d);
        for (size_t i = 0; i < hi.keys.size(); ++i) {
            double m = 0.0;
            for (const auto& t : P.terms()) m += t.coeff * ball_monomial_integral(hi.keys[i] + t.key);
            moments_[base + i] = m;
        }
        base += hi.keys.size();
    }
}

double MomentTable::dot(const Poly& q) const {
    double s = 0.0;
    for (const auto& t : q.terms()) {
        const auto e = Poly::unpack(t.key);
        const int d = e[0] + e[1] + e[2] + e[3];
        if (d > D_) throw std::invalid_argument("MomentTable::dot: degree exceeds table");
        size_t base = 0;
        for (int k = 0; k < d; ++k) base += homog_index(k).keys.size();
        s += t.coeff * moments_[base + homog_index(d).idx.at(t.key)];
    }
    return s;
}

// ---------------------------------------------------------------------------
// D0 solver

D0Solver::D0Solver(const D0Config& cfg) : cfg_(cfg) {
    rule_ = S3Rule::build(cfg.rule_n1, cfg.rule_n2, cfg.rule_n3);

    const Poly one_minus_r2 = Poly::constant(1.0) - Poly::radius2();
    const int N = cfg.degree;
    for (int mu = 0; mu < 4; ++mu) {
        for (int d = 0; d + 2 <= N; ++d) {
            const auto& hi = homog_index(d);
            for (uint32_t key : hi.keys) {
                BasisElem be;
                be.mu = mu;
                be.beta = one_minus_r2 * Poly::monomial(Poly::unpack(key), 1.0);
                for (int s = 0; s < 6; ++s) {
                    const int a = kPairs[s][0], b = kPairs[s][1];
                    // (d beta)_ab = d_a b_b - d_b b_a with b_nu = delta_{nu mu} beta
                    Poly v;
                    if (b == mu) v += be.beta.derivative(a);
                    if (a == mu) v = v - be.beta.derivative(b);
                    be.dbeta[s] = v;
                }
                basis_.push_back(std::move(be));
            }
        }
    }

    const int n = int(basis_.size());
    Eigen::MatrixXd gram(n, n);
    parallel_for(size_t(n), [&](size_t i) {
        for (int j = int(i); j < n; ++j) {
            double s = 0.0;
            for (int p = 0; p < 6; ++p)
                s += (basis_[i].dbeta[p] * basis_[j].dbeta[p]).integral_ball();
            gram(int(i), j) = s;
            gram(j, int(i)) = s;
        }
    });

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    evecs_ = es.eigenvectors();
    evals_ = es.eigenvalues();
}

Eigen::VectorXd D0Solver::solve_gram(const Eigen::VectorXd& rhs) const {
    const double cutoff = cfg_.pinv_rtol * evals_.maxCoeff();
    Eigen::VectorXd y = evecs_.transpose() * rhs;
    for (int i = 0; i < y.size(); ++i) y(i) = (evals_(i) > cutoff) ? y(i) / evals_(i) : 0.0;
    return evecs_ * y;
}

D0Solution D0Solver::solve(const BoundarySampler& data, int data_degree) const {
    D0Solution sol;
    const int L = std::max(cfg_.ext_L, data_degree);
    sol.lift = spectral_extend(data, L, rule_);
    const PolyLie2 dH = exterior_d(sol.lift);

    const int n = int(basis_.size());
    PolyLie1 corr;
    for (int l = 0; l < 3; ++l) {
        // rhs_i = -sum_pairs int (dH_l)_pair (dbeta_i)_pair
        std::array<MomentTable, 6> mt{
            MomentTable(dH.comp[0][l], cfg_.degree), MomentTable(dH.comp[1][l], cfg_.degree),
            MomentTable(dH.comp[2][l], cfg_.degree), MomentTable(dH.comp[3][l], cfg_.degree),
            MomentTable(dH.comp[4][l], cfg_.degree), MomentTable(dH.comp[5][l], cfg_.degree)};
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int p = 0; p < 6; ++p)
                if (!basis_[i].dbeta[p].empty()) s += mt[p].dot(basis_[i].dbeta[p]);
            rhs(i) = -s;
        }
        const Eigen::VectorXd coef = solve_gram(rhs);
        for (int i = 0; i < n; ++i)
            if (coef(i) != 0.0) corr.comp[basis_[i].mu][l] += basis_[i].beta * coef(i);
    }

    sol.A0bar = sol.lift + corr;
    for (int mu = 0; mu < 4; ++mu)
        for (int l = 0; l < 3; ++l) sol.A0bar.comp[mu][l] = sol.A0bar.comp[mu][l].pruned(1e-14);
    sol.dA0bar = exterior_d(sol.A0bar);
    sol.energy = inner_ball(sol.dA0bar, sol.dA0bar);

    // Remark-style diagnostics: closedness (exact), coclosedness, trace.
    {
        // delta(dA)_mu = sum_nu d_nu (dA)_{mu nu}
        PolyLie1 delta;
        for (int mu = 0; mu < 4; ++mu)
            for (int l = 0; l < 3; ++l) {
                Poly acc;
                for (int nu = 0; nu < 4; ++nu) {
                    if (nu == mu) continue;
                    double sign;
                    const int s = pair_slot(mu, nu, sign);
                    acc += sol.dA0bar.comp[s][l].derivative(nu) * sign;
                }
                delta.comp[mu][l] = acc;
            }
        sol.coclosed_res = std::sqrt(std::max(0.0, inner_ball(delta, delta)));

        double ddmax = 0.0;
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu)
                for (int rho = nu + 1; rho < 4; ++rho)
                    for (int l = 0; l < 3; ++l) {
                        double s1, s2, s3;
                        Poly dd = sol.dA0bar.comp[pair_slot(nu, rho, s1)][l].derivative(mu) * s1 -
                                  sol.dA0bar.comp[pair_slot(mu, rho, s2)][l].derivative(nu) * s2 +
                                  sol.dA0bar.comp[pair_slot(mu, nu, s3)][l].derivative(rho) * s3;
                        ddmax = std::max(ddmax, dd.max_abs_coeff());
                    }
        sol.closed_res = ddmax;

        // tangential trace of d(A0bar - H) on S^3 nodes (should vanish).
        const PolyLie2 diff = exterior_d(corr);
        double sup = 0.0;
        for (size_t a = 0; a < rule_.size(); a += 7) {
            const Vec4& z = rule_.xs[a];
            Lie2 w;
            for (int s = 0; s < 6; ++s)
                for (int l = 0; l < 3; ++l) w[s].c[l] = diff.comp[s][l].eval(z);
            // tangential part: project both slots with P = I - z z^T
            double t2 = 0.0;
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = mu + 1; nu < 4; ++nu) {
                    ImQuat acc;
                    for (int al = 0; al < 4; ++al)
                        for (int be = 0; be < 4; ++be) {
                            if (al == be) continue;
                            const double pma = (mu == al ? 1.0 : 0.0) - z[mu] * z[al];
                            const double pnb = (nu == be ? 1.0 : 0.0) - z[nu] * z[be];
                            double sign;
                            const int s = pair_slot(al, be, sign);
                            acc += w[s] * (sign * pma * pnb);
                        }
                    t2 += inner(acc, acc);
                }
            sup = std::max(sup, std::sqrt(t2));
        }
        sol.trace_res = sup;
    }
    return sol;
}

PolyLie1 D0Solver::picard(const D0Solution& base, double eps, double tol,
                          PicardReport* report, int max_iter) const {
    PicardReport local;
    PicardReport& rep = report ? *report : local;
    rep = PicardReport{};

    PolyLie1 omega; // zero
    if (eps == 0.0) {
        rep.converged = true;
        return base.A0bar;
    }

    const int n = int(basis_.size());
    int grow_streak = 0;
    double prev_update = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        const PolyLie1 A = base.A0bar + omega;
        const PolyLie2 S2 = bracket_wedge(A, A) * 0.5;
        const PolyLie2 F = exterior_d(A) + S2 * eps;

        // J_mu = sum_nu [A_nu, F_{mu nu}]
        PolyLie1 J;
        for (int mu = 0; mu < 4; ++mu) {
            std::array<Poly, 3> acc;
            for (int nu = 0; nu < 4; ++nu) {
                if (nu == mu) continue;
                double sign;
                const int s = pair_slot(mu, nu, sign);
                // [A_nu, F_{mu nu}] = 2 A_nu x F_{mu nu} (cross on Lie coefficients)
                const auto& a = A.comp[nu];
                const auto& f = F.comp[s];
                acc[0] += (a[1] * f[2] - a[2] * f[1]) * (2.0 * sign);
                acc[1] += (a[2] * f[0] - a[0] * f[2]) * (2.0 * sign);
                acc[2] += (a[0] * f[1] - a[1] * f[0]) * (2.0 * sign);
            }
            for (int l = 0; l < 3; ++l) J.comp[mu][l] = acc[l];
        }

        PolyLie1 omega_new;
        for (int l = 0; l < 3; ++l) {
            std::array<MomentTable, 6> mt{
                MomentTable(S2.comp[0][l], cfg_.degree), MomentTable(S2.comp[1][l], cfg_.degree),
                MomentTable(S2.comp[2][l], cfg_.degree), MomentTable(S2.comp[3][l], cfg_.degree),
                MomentTable(S2.comp[4][l], cfg_.degree), MomentTable(S2.comp[5][l], cfg_.degree)};
            std::array<MomentTable, 4> mj{
                MomentTable(J.comp[0][l], cfg_.degree), MomentTable(J.comp[1][l], cfg_.degree),
                MomentTable(J.comp[2][l], cfg_.degree), MomentTable(J.comp[3][l], cfg_.degree)};
            Eigen::VectorXd rhs(n);
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int p = 0; p < 6; ++p)
                    if (!basis_[i].dbeta[p].empty()) s += mt[p].dot(basis_[i].dbeta[p]);
                s += mj[basis_[i].mu].dot(basis_[i].beta);
                rhs(i) = -eps * s;
            }
            const Eigen::VectorXd coef = solve_gram(rhs);
            for (int i = 0; i < n; ++i)
                if (coef(i) != 0.0)
                    omega_new.comp[basis_[i].mu][l] += basis_[i].beta * coef(i);
        }

        const PolyLie1 diff = omega_new - omega;
        const PolyLie2 ddiff = exterior_d(diff);
        const double update =
            std::sqrt(std::max(0.0, inner_ball(diff, diff) + inner_ball(ddiff, ddiff)));
        rep.update_norms.push_back(update);
        rep.iterations = it + 1;
        omega = omega_new;
        if (update < tol) {
            rep.converged = true;
            return base.A0bar + omega;
        }
        if (prev_update >= 0.0 && update > prev_update) {
            if (++grow_streak >= 3) throw NonContraction(eps);
        } else {
            grow_streak = 0;
        }
        prev_update = update;
    }
    rep.converged = false;
    return base.A0bar + omega;
}

} // namespace ymb

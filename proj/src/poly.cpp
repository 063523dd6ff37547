#include "ymb/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace ymb {

uint32_t Poly::pack(const std::array<int, 4>& e) {
    return uint32_t(e[0]) | (uint32_t(e[1]) << 5) | (uint32_t(e[2]) << 10) |
           (uint32_t(e[3]) << 15);
}

std::array<int, 4> Poly::unpack(uint32_t key) {
    return {int(key & 31u), int((key >> 5) & 31u), int((key >> 10) & 31u),
            int((key >> 15) & 31u)};
}

Poly Poly::constant(double c) {
    Poly p;
    if (c != 0.0) p.terms_.push_back({0u, c});
    return p;
}

Poly Poly::monomial(const std::array<int, 4>& exps, double c) {
    Poly p;
    if (c != 0.0) p.terms_.push_back({pack(exps), c});
    return p;
}

Poly Poly::variable(int axis, double c) {
    std::array<int, 4> e{0, 0, 0, 0};
    e[axis] = 1;
    return monomial(e, c);
}

Poly Poly::radius2() {
    Poly p;
    for (int i = 0; i < 4; ++i) {
        std::array<int, 4> e{0, 0, 0, 0};
        e[i] = 2;
        p.terms_.push_back({pack(e), 1.0});
    }
    std::sort(p.terms_.begin(), p.terms_.end(),
              [](const Term& a, const Term& b) { return a.key < b.key; });
    return p;
}

int Poly::degree() const {
    int d = -1;
    for (const Term& t : terms_) {
        auto e = unpack(t.key);
        d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    }
    return d;
}

Poly Poly::from_unsorted(std::vector<Term> acc) {
    std::sort(acc.begin(), acc.end(),
              [](const Term& a, const Term& b) { return a.key < b.key; });
    Poly p;
    p.terms_.reserve(acc.size());
    for (const Term& t : acc) {
        if (!p.terms_.empty() && p.terms_.back().key == t.key)
            p.terms_.back().coeff += t.coeff;
        else
            p.terms_.push_back(t);
    }
    std::erase_if(p.terms_, [](const Term& t) { return t.coeff == 0.0; });
    return p;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].key < o.terms_[j].key)) {
            r.terms_.push_back(terms_[i++]);
        } else if (i == terms_.size() || o.terms_[j].key < terms_[i].key) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            const double c = terms_[i].coeff + o.terms_[j].coeff;
            if (c != 0.0) r.terms_.push_back({terms_[i].key, c});
            ++i;
            ++j;
        }
    }
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * (-1.0); }

Poly Poly::operator*(double s) const {
    Poly r = *this;
    if (s == 0.0) {
        r.terms_.clear();
        return r;
    }
    for (Term& t : r.terms_) t.coeff *= s;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    *this = *this + o;
    return *this;
}

Poly Poly::operator*(const Poly& o) const {
    std::unordered_map<uint32_t, double> acc;
    acc.reserve(terms_.size() * 2 + o.terms_.size());
    for (const Term& a : terms_)
        for (const Term& b : o.terms_) acc[a.key + b.key] += a.coeff * b.coeff;
    std::vector<Term> v;
    v.reserve(acc.size());
    for (auto& [k, c] : acc)
        if (c != 0.0) v.push_back({k, c});
    return from_unsorted(std::move(v));
}

Poly Poly::derivative(int axis) const {
    std::vector<Term> v;
    v.reserve(terms_.size());
    for (const Term& t : terms_) {
        auto e = unpack(t.key);
        if (e[axis] == 0) continue;
        const double c = t.coeff * e[axis];
        e[axis] -= 1;
        v.push_back({pack(e), c});
    }
    return from_unsorted(std::move(v));
}

Poly Poly::laplacian() const {
    Poly r;
    for (int i = 0; i < 4; ++i) r += derivative(i).derivative(i);
    return r;
}

double Poly::eval(const std::array<double, 4>& x) const {
    // Power tables up to the max exponent in each variable.
    std::array<int, 4> maxe{0, 0, 0, 0};
    for (const Term& t : terms_) {
        auto e = unpack(t.key);
        for (int i = 0; i < 4; ++i) maxe[i] = std::max(maxe[i], e[i]);
    }
    std::array<std::array<double, 32>, 4> pw;
    for (int i = 0; i < 4; ++i) {
        pw[i][0] = 1.0;
        for (int k = 1; k <= maxe[i]; ++k) pw[i][k] = pw[i][k - 1] * x[i];
    }
    double s = 0.0;
    for (const Term& t : terms_) {
        auto e = unpack(t.key);
        s += t.coeff * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]];
    }
    return s;
}

Dual4 Poly::eval_dual(const std::array<Dual4, 4>& x) const {
    // Value plus gradient in one pass via the power-table derivative rule.
    std::array<int, 4> maxe{0, 0, 0, 0};
    for (const Term& t : terms_) {
        auto e = unpack(t.key);
        for (int i = 0; i < 4; ++i) maxe[i] = std::max(maxe[i], e[i]);
    }
    std::array<std::array<double, 32>, 4> pw;
    for (int i = 0; i < 4; ++i) {
        pw[i][0] = 1.0;
        for (int k = 1; k <= maxe[i]; ++k) pw[i][k] = pw[i][k - 1] * x[i].v;
    }
    Dual4 s;
    for (const Term& t : terms_) {
        auto e = unpack(t.key);
        const double m0 = pw[0][e[0]], m1 = pw[1][e[1]], m2 = pw[2][e[2]], m3 = pw[3][e[3]];
        const double mono = m0 * m1 * m2 * m3;
        s.v += t.coeff * mono;
        // chain rule against the seeded coordinates
        std::array<double, 4> g{};
        if (e[0]) g[0] = e[0] * pw[0][e[0] - 1] * m1 * m2 * m3;
        if (e[1]) g[1] = e[1] * m0 * pw[1][e[1] - 1] * m2 * m3;
        if (e[2]) g[2] = e[2] * m0 * m1 * pw[2][e[2] - 1] * m3;
        if (e[3]) g[3] = e[3] * m0 * m1 * m2 * pw[3][e[3] - 1];
        for (int var = 0; var < 4; ++var)
            for (int dir = 0; dir < 4; ++dir) s.d[dir] += t.coeff * g[var] * x[var].d[dir];
    }
    return s;
}

namespace {
double half_gamma(int n) {
    // Gamma(n/2) for n >= 1.
    static const double sqrt_pi = std::sqrt(M_PI);
    if (n == 1) return sqrt_pi;
    if (n == 2) return 1.0;
    return 0.5 * (n - 2) * half_gamma(n - 2);
}
} // namespace

double ball_monomial_integral(uint32_t key) {
    auto e = Poly::unpack(key);
    if ((e[0] | e[1] | e[2] | e[3]) & 1) return 0.0;
    double num = 1.0;
    int sum = 0;
    for (int i = 0; i < 4; ++i) {
        num *= half_gamma(e[i] + 1);
        sum += e[i] + 1;
    }
    return num / half_gamma(sum + 2); // Gamma(sum/2 + 1)
}

double sphere_monomial_integral(uint32_t key) {
    auto e = Poly::unpack(key);
    if ((e[0] | e[1] | e[2] | e[3]) & 1) return 0.0;
    double num = 2.0;
    int sum = 0;
    for (int i = 0; i < 4; ++i) {
        num *= half_gamma(e[i] + 1);
        sum += e[i] + 1;
    }
    return num / half_gamma(sum);
}

double Poly::integral_ball() const {
    double s = 0.0;
    for (const Term& t : terms_) s += t.coeff * ball_monomial_integral(t.key);
    return s;
}

double Poly::integral_sphere() const {
    double s = 0.0;
    for (const Term& t : terms_) s += t.coeff * sphere_monomial_integral(t.key);
    return s;
}

double Poly::max_abs_coeff() const {
    double m = 0.0;
    for (const Term& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
}

Poly Poly::pruned(double tol) const {
    const double cut = tol * max_abs_coeff();
    Poly r;
    for (const Term& t : terms_)
        if (std::abs(t.coeff) > cut) r.terms_.push_back(t);
    return r;
}

// ---------------------------------------------------------------------------
// Polynomial Lie-valued forms

PolyLie1 PolyLie1::operator+(const PolyLie1& o) const {
    PolyLie1 r;
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) r.comp[m][l] = comp[m][l] + o.comp[m][l];
    return r;
}

PolyLie1 PolyLie1::operator-(const PolyLie1& o) const {
    PolyLie1 r;
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) r.comp[m][l] = comp[m][l] - o.comp[m][l];
    return r;
}

PolyLie1 PolyLie1::operator*(double s) const {
    PolyLie1 r;
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) r.comp[m][l] = comp[m][l] * s;
    return r;
}

bool PolyLie1::empty() const {
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l)
            if (!comp[m][l].empty()) return false;
    return true;
}

int PolyLie1::degree() const {
    int d = -1;
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) d = std::max(d, comp[m][l].degree());
    return d;
}

std::array<ImQuat, 4> PolyLie1::value(const std::array<double, 4>& x) const {
    std::array<ImQuat, 4> a;
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) a[m].c[l] = comp[m][l].eval(x);
    return a;
}

void PolyLie1::jet(const std::array<double, 4>& x, std::array<ImQuat, 4>& a,
                   std::array<std::array<ImQuat, 4>, 4>& da) const {
    std::array<Dual4, 4> xd{Dual4(x[0], 0), Dual4(x[1], 1), Dual4(x[2], 2), Dual4(x[3], 3)};
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) {
            const Dual4 v = comp[m][l].eval_dual(xd);
            a[m].c[l] = v.v;
            for (int n = 0; n < 4; ++n) da[n][m].c[l] = v.d[n];
        }
}

PolyLie2 PolyLie2::operator+(const PolyLie2& o) const {
    PolyLie2 r;
    for (int s = 0; s < 6; ++s)
        for (int l = 0; l < 3; ++l) r.comp[s][l] = comp[s][l] + o.comp[s][l];
    return r;
}

PolyLie2 PolyLie2::operator*(double sc) const {
    PolyLie2 r;
    for (int s = 0; s < 6; ++s)
        for (int l = 0; l < 3; ++l) r.comp[s][l] = comp[s][l] * sc;
    return r;
}

int pair_slot(int mu, int nu, double& sign) {
    static const int slot[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    sign = mu < nu ? 1.0 : -1.0;
    return slot[mu][nu];
}

PolyLie1 poly_lie1_zero() { return PolyLie1{}; }

PolyLie2 exterior_d(const PolyLie1& a) {
    PolyLie2 r;
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int s = 0; s < 6; ++s) {
        const int mu = pairs[s][0], nu = pairs[s][1];
        for (int l = 0; l < 3; ++l)
            r.comp[s][l] = a.comp[nu][l].derivative(mu) - a.comp[mu][l].derivative(nu);
    }
    return r;
}

namespace {
// [x, y] = 2 x cross y on coefficient polynomials.
void lie_cross(const std::array<const Poly*, 3>& x, const std::array<const Poly*, 3>& y,
               std::array<Poly, 3>& out) {
    out[0] = (*x[1] * *y[2] - *x[2] * *y[1]) * 2.0;
    out[1] = (*x[2] * *y[0] - *x[0] * *y[2]) * 2.0;
    out[2] = (*x[0] * *y[1] - *x[1] * *y[0]) * 2.0;
}
} // namespace

PolyLie2 bracket_wedge(const PolyLie1& a, const PolyLie1& b) {
    PolyLie2 r;
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int s = 0; s < 6; ++s) {
        const int mu = pairs[s][0], nu = pairs[s][1];
        std::array<Poly, 3> t1, t2;
        lie_cross({&a.comp[mu][0], &a.comp[mu][1], &a.comp[mu][2]},
                  {&b.comp[nu][0], &b.comp[nu][1], &b.comp[nu][2]}, t1);
        lie_cross({&a.comp[nu][0], &a.comp[nu][1], &a.comp[nu][2]},
                  {&b.comp[mu][0], &b.comp[mu][1], &b.comp[mu][2]}, t2);
        for (int l = 0; l < 3; ++l) r.comp[s][l] = t1[l] - t2[l];
    }
    return r;
}

double inner_ball(const PolyLie2& u, const PolyLie2& v) {
    double s = 0.0;
    for (int p = 0; p < 6; ++p)
        for (int l = 0; l < 3; ++l) s += (u.comp[p][l] * v.comp[p][l]).integral_ball();
    return 2.0 * s;
}

double inner_ball(const PolyLie1& u, const PolyLie1& v) {
    double s = 0.0;
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) s += (u.comp[m][l] * v.comp[m][l]).integral_ball();
    return 2.0 * s;
}

Poly harmonic_extension(const Poly& f) {
    // h = f - (1 - |x|^2) q with Delta h = 0; solve for q degree by degree
    // from the top.  The degree-k block of q -> Delta((1-r^2) q) restricted
    // to homogeneous degree k is q_k -> -(8 + 4k) q_k - r^2 Delta q_k, an
    // invertible map on homogeneous polynomials.
    const int df = f.degree();
    if (df <= 1) return f;
    const Poly r2 = Poly::radius2();

    // Split a polynomial into homogeneous parts.
    auto split = [](const Poly& p, int maxdeg) {
        std::vector<std::vector<Poly::Term>> parts(maxdeg + 1);
        for (const auto& t : p.terms()) {
            auto e = Poly::unpack(t.key);
            const int d = e[0] + e[1] + e[2] + e[3];
            if (d <= maxdeg) parts[d].push_back(t);
        }
        std::vector<Poly> out(maxdeg + 1);
        for (int d = 0; d <= maxdeg; ++d) out[d] = Poly::from_unsorted(parts[d]);
        return out;
    };

    const int K = df - 2;
    Poly g = f.laplacian();
    std::vector<Poly> qk(K + 1);
    for (int k = K; k >= 0; --k) {
        auto gparts = split(g, K);
        Poly gk = gparts[k];
        if (gk.empty()) {
            qk[k] = Poly();
            continue;
        }
        // Solve -(8 + 4k) q - r^2 Delta q = gk exactly on homogeneous
        // polynomials of degree k (dense solve in the monomial basis).
        std::vector<uint32_t> keys;
        {
            for (int e0 = 0; e0 <= k; ++e0)
                for (int e1 = 0; e1 + e0 <= k; ++e1)
                    for (int e2 = 0; e2 + e1 + e0 <= k; ++e2)
                        keys.push_back(Poly::pack({e0, e1, e2, k - e0 - e1 - e2}));
        }
        std::unordered_map<uint32_t, int> index;
        for (size_t i = 0; i < keys.size(); ++i) index[keys[i]] = int(i);
        const int n = int(keys.size());
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < n; ++j) {
            auto e = Poly::unpack(keys[j]);
            Poly basis = Poly::monomial(e, 1.0);
            Poly img = basis * (-(8.0 + 4.0 * k)) - r2 * basis.laplacian();
            for (const auto& t : img.terms()) L(index.at(t.key), j) += t.coeff;
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        for (const auto& t : gk.terms()) rhs(index.at(t.key)) = t.coeff;
        Eigen::VectorXd sol = L.partialPivLu().solve(rhs);
        std::vector<Poly::Term> qterms;
        for (int i = 0; i < n; ++i)
            if (sol(i) != 0.0) qterms.push_back({keys[i], sol(i)});
        Poly q = Poly::from_unsorted(std::move(qterms));
        qk[k] = q;
        // Remove this block's full contribution from the residual.
        Poly contrib = (Poly::constant(1.0) - r2) * q;
        g = g - contrib.laplacian();
    }
    Poly q_total;
    for (int k = 0; k <= K; ++k) q_total += qk[k];
    Poly h = f - (Poly::constant(1.0) - r2) * q_total;
    return h.pruned(1e-15);
}

} // namespace ymb

namespace ymb {

CompiledLie1::CompiledLie1(const PolyLie1& f) {
    slots_.resize(60);
    auto flatten = [&](const Poly& p, int slot) {
        FlatPoly& fp = slots_[slot];
        for (const auto& t : p.terms()) {
            const auto e = Poly::unpack(t.key);
            fp.e0.push_back(uint8_t(e[0]));
            fp.e1.push_back(uint8_t(e[1]));
            fp.e2.push_back(uint8_t(e[2]));
            fp.e3.push_back(uint8_t(e[3]));
            fp.c.push_back(t.coeff);
            for (int a = 0; a < 4; ++a) max_exp_[a] = std::max(max_exp_[a], e[a]);
        }
    };
    for (int mu = 0; mu < 4; ++mu)
        for (int l = 0; l < 3; ++l) {
            flatten(f.comp[mu][l], mu * 3 + l);
            for (int nu = 0; nu < 4; ++nu)
                flatten(f.comp[mu][l].derivative(nu), 12 + (nu * 4 + mu) * 3 + l);
        }
}

void CompiledLie1::jet(const std::array<double, 4>& x, std::array<ImQuat, 4>& a,
                       std::array<std::array<ImQuat, 4>, 4>& da) const {
    std::array<std::array<double, 33>, 4> pw;
    for (int i = 0; i < 4; ++i) {
        pw[i][0] = 1.0;
        for (int k = 1; k <= max_exp_[i]; ++k) pw[i][k] = pw[i][k - 1] * x[i];
    }
    auto eval_slot = [&](const FlatPoly& fp) {
        double s = 0.0;
        const size_t n = fp.c.size();
        for (size_t t = 0; t < n; ++t)
            s += fp.c[t] * pw[0][fp.e0[t]] * pw[1][fp.e1[t]] * pw[2][fp.e2[t]] * pw[3][fp.e3[t]];
        return s;
    };
    for (int mu = 0; mu < 4; ++mu)
        for (int l = 0; l < 3; ++l) {
            a[mu].c[l] = eval_slot(slots_[mu * 3 + l]);
            for (int nu = 0; nu < 4; ++nu)
                da[nu][mu].c[l] = eval_slot(slots_[12 + (nu * 4 + mu) * 3 + l]);
        }
}

std::array<ImQuat, 4> CompiledLie1::value(const std::array<double, 4>& x) const {
    std::array<std::array<double, 33>, 4> pw;
    for (int i = 0; i < 4; ++i) {
        pw[i][0] = 1.0;
        for (int k = 1; k <= max_exp_[i]; ++k) pw[i][k] = pw[i][k - 1] * x[i];
    }
    std::array<ImQuat, 4> a;
    for (int mu = 0; mu < 4; ++mu)
        for (int l = 0; l < 3; ++l) {
            const FlatPoly& fp = slots_[mu * 3 + l];
            double s = 0.0;
            for (size_t t = 0; t < fp.c.size(); ++t)
                s += fp.c[t] * pw[0][fp.e0[t]] * pw[1][fp.e1[t]] * pw[2][fp.e2[t]] *
                     pw[3][fp.e3[t]];
            a[mu].c[l] = s;
        }
    return a;
}

} // namespace ymb

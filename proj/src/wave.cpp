#include "acfront/wave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace acfront {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double ext(const std::vector<double>& v, int k, double left, double right) {
    if (k < 0) return left;
    if (k >= static_cast<int>(v.size())) return right;
    return v[k];
}

constexpr int kD1Offsets[4] = {-2, -1, 1, 2};
constexpr double kD1Weights[4] = {1.0, -8.0, 8.0, -1.0};  // divided by 12h
constexpr int kD2Offsets[5] = {-2, -1, 0, 1, 2};
constexpr double kD2Weights[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};  // divided by 12h^2

double d1(const std::vector<double>& v, int k, double h, double left, double right) {
    double s = 0.0;
    for (int m = 0; m < 4; ++m) s += kD1Weights[m] * ext(v, k + kD1Offsets[m], left, right);
    return s / (12.0 * h);
}

double d2(const std::vector<double>& v, int k, double h, double left, double right) {
    double s = 0.0;
    for (int m = 0; m < 5; ++m) s += kD2Weights[m] * ext(v, k + kD2Offsets[m], left, right);
    return s / (12.0 * h * h);
}

std::vector<double> d1_array(const std::vector<double>& v, double h, double left, double right) {
    std::vector<double> out(v.size());
    for (int k = 0; k < static_cast<int>(v.size()); ++k) out[k] = d1(v, k, h, left, right);
    return out;
}

std::vector<double> d2_array(const std::vector<double>& v, double h, double left, double right) {
    std::vector<double> out(v.size());
    for (int k = 0; k < static_cast<int>(v.size()); ++k) out[k] = d2(v, k, h, left, right);
    return out;
}

/// The four lattice-neighbour shifts of the direction-theta MFDE, in cells.
std::vector<ShiftStencil> direction_stencils(double theta, double h) {
    const double along = std::cos(theta) / h;
    const double across = std::abs(std::sin(theta)) / h;
    return {shift_stencil(along), shift_stencil(-along), shift_stencil(across),
            shift_stencil(-across)};
}

double shifted_sum(const std::vector<ShiftStencil>& stencils, const std::vector<double>& v, int k,
                   double left, double right) {
    double s = 0.0;
    for (const auto& st : stencils)
        for (int m = 0; m < st.count; ++m)
            s += st.weights[m] * ext(v, k + st.offsets[m], left, right);
    return s;
}

double interpolate(const std::vector<double>& v, double L, double h, double x, double left,
                   double right) {
    const int n = static_cast<int>(v.size());
    const double s = (x + L) / h;
    if (s <= 0.0) return s == 0.0 ? v[0] : left;
    if (s >= n - 1) return s == n - 1 ? v[n - 1] : right;
    const ShiftStencil st = shift_stencil(s);
    double out = 0.0;
    for (int m = 0; m < st.count; ++m) out += st.weights[m] * ext(v, st.offsets[m], left, right);
    return out;
}

/// Jacobian of the interior equations with respect to the interior values.
/// Row/column index k-1 corresponds to grid index k.
std::vector<Triplet> interior_jacobian(const WaveProfile& w, const std::vector<ShiftStencil>& stencils,
                                       const std::vector<double>& coeff_diag, double c) {
    const int n = w.size();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(n) * 24);
    auto add = [&](int row, int col, double v) {
        if (col >= 1 && col <= n - 2) trips.emplace_back(row - 1, col - 1, v);
    };
    for (int k = 1; k <= n - 2; ++k) {
        for (int m = 0; m < 4; ++m) add(k, k + kD1Offsets[m], c * kD1Weights[m] / (12.0 * w.h));
        for (const auto& st : stencils)
            for (int m = 0; m < st.count; ++m) add(k, k + st.offsets[m], st.weights[m]);
        add(k, k, coeff_diag[k] - 4.0);
    }
    return trips;
}

std::vector<double> g_prime_on_grid(const WaveProfile& w) {
    std::vector<double> out(w.phi.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = w.f.derivative(w.phi[k]);
    return out;
}

std::vector<double> residual_for(const WaveProfile& w, const std::vector<ShiftStencil>& stencils) {
    const int n = w.size();
    std::vector<double> out(n, 0.0);
    for (int k = 1; k <= n - 2; ++k)
        out[k] = w.c * d1(w.phi, k, w.h, 0.0, 1.0) + shifted_sum(stencils, w.phi, k, 0.0, 1.0) -
                 4.0 * w.phi[k] + w.f(w.phi[k]);
    return out;
}

int grid_size(double L, double h) {
    const double inv = 1.0 / h;
    if (!(h > 0.0) || std::abs(inv - std::round(inv)) > 1e-9)
        throw UsageError("grid spacing h must satisfy 1/h integer");
    const double cells = 2.0 * L / h;
    if (std::abs(cells - std::round(cells)) > 1e-9)
        throw UsageError("2L/h must be an integer");
    return static_cast<int>(std::round(cells)) + 1;
}

}  // namespace

ShiftStencil shift_stencil(double s) {
    ShiftStencil st{};
    const double r = std::round(s);
    if (std::abs(s - r) < 1e-12) {
        st.count = 1;
        st.offsets[0] = static_cast<int>(r);
        st.weights[0] = 1.0;
        return st;
    }
    const int base = static_cast<int>(std::floor(s));
    const double y = s - base + 1.0;  // local coordinate on nodes 0..3
    const double denom[4] = {-6.0, 2.0, -2.0, 6.0};
    st.count = 4;
    for (int m = 0; m < 4; ++m) {
        double p = 1.0;
        for (int q = 0; q < 4; ++q)
            if (q != m) p *= (y - q);
        st.offsets[m] = base - 1 + m;
        st.weights[m] = p / denom[m];
    }
    return st;
}

int WaveProfile::zero_index() const { return static_cast<int>(std::lround(L / h)); }

double WaveProfile::phi_at(double x) const { return interpolate(phi, L, h, x, 0.0, 1.0); }
double WaveProfile::dphi_at(double x) const { return interpolate(dphi, L, h, x, 0.0, 0.0); }
double WaveProfile::d2phi_at(double x) const { return interpolate(d2phi, L, h, x, 0.0, 0.0); }
double WaveProfile::r_at(double x) const { return interpolate(r, L, h, x, 0.0, 0.0); }
double WaveProfile::dr_at(double x) const { return interpolate(dr, L, h, x, 0.0, 0.0); }

WaveProfile solve_wave(const BistableNonlinearity& f, double L, double h, const WaveOptions& options) {
    f.validate();
    if (L < 20.0) throw UsageError("half-width L must be at least 20");
    if (std::abs(options.theta) > 0.3 + 1e-12) throw UsageError("|theta| must not exceed 0.3");
    const int n = grid_size(L, h);

    WaveProfile w;
    w.f = f;
    w.theta = options.theta;
    w.L = L;
    w.h = h;
    w.phi.resize(n);
    const double slope = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < n; ++k) w.phi[k] = 1.0 / (1.0 + std::exp(-slope * w.xi(k)));
    w.phi.front() = 0.0;
    w.phi.back() = 1.0;
    w.c = std::sqrt(2.0) * (f.a() - 0.5);

    const auto stencils = direction_stencils(options.theta, h);
    const int k0 = w.zero_index();
    const int unknowns = n - 1;  // interior values plus c

    auto full_residual = [&](const WaveProfile& cand, Eigen::VectorXd& out) {
        const auto res = residual_for(cand, stencils);
        out.resize(unknowns);
        for (int k = 1; k <= n - 2; ++k) out[k - 1] = res[k];
        out[n - 2] = cand.phi[k0] - 0.5;
        return out.cwiseAbs().maxCoeff();
    };

    Eigen::VectorXd F;
    double norm = full_residual(w, F);
    bool diverged = false;
    for (int iter = 0; iter < options.max_iterations && norm > options.target; ++iter) {
        auto trips = interior_jacobian(w, stencils, g_prime_on_grid(w), w.c);
        for (int k = 1; k <= n - 2; ++k) trips.emplace_back(k - 1, n - 2, d1(w.phi, k, h, 0.0, 1.0));
        trips.emplace_back(n - 2, k0 - 1, 1.0);
        SparseMatrix J(unknowns, unknowns);
        J.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<SparseMatrix> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            diverged = true;
            break;
        }
        const Eigen::VectorXd step = lu.solve(-F);
        if (!step.allFinite()) {
            diverged = true;
            break;
        }
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            WaveProfile cand = w;
            for (int k = 1; k <= n - 2; ++k) cand.phi[k] += lambda * step[k - 1];
            cand.c += lambda * step[n - 2];
            Eigen::VectorXd Fc;
            const double nc = full_residual(cand, Fc);
            if (std::isfinite(nc) && nc < norm) {
                w = std::move(cand);
                F = std::move(Fc);
                norm = nc;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }

    if (std::abs(w.c) < options.pinning_threshold) throw PinningDetected(w.c);
    if (diverged || !(norm < options.tolerance))
        throw NewtonDiverged("travelling-wave Newton iteration stalled at residual " +
                             std::to_string(norm));
    // Strictly increasing where the profile is resolved; the clamped tails only
    // need to be non-decreasing up to the truncation layer.
    for (int k = 0; k + 1 < n; ++k) {
        const bool resolved = w.phi[k] > 1e-8 && w.phi[k + 1] < 1.0 - 1e-8;
        if (resolved ? !(w.phi[k + 1] > w.phi[k]) : !(w.phi[k + 1] >= w.phi[k] - 1e-10))
            throw NewtonDiverged("travelling-wave profile is not monotone near xi = " +
                                 std::to_string(w.xi(k)));
    }

    w.dphi = d1_array(w.phi, h, 0.0, 1.0);
    w.d2phi = d2_array(w.phi, h, 0.0, 1.0);
    return w;
}

WaveProfile solve_wave_full(const BistableNonlinearity& f, double L, double h,
                            const WaveOptions& options) {
    WaveProfile w = solve_wave(f, L, h, options);
    adjoint_solve(w);
    compute_d(w);
    solve_r(w);
    return w;
}

std::vector<double> mfde_residual(const WaveProfile& w) {
    return residual_for(w, direction_stencils(w.theta, w.h));
}

std::vector<double> apply_linearization(const WaveProfile& w, std::span<const double> v) {
    const int n = w.size();
    if (static_cast<int>(v.size()) != n) throw UsageError("vector length does not match the grid");
    const std::vector<double> vv(v.begin(), v.end());
    const auto stencils = direction_stencils(w.theta, w.h);
    std::vector<double> out(n, 0.0);
    for (int k = 1; k <= n - 2; ++k)
        out[k] = w.c * d1(vv, k, w.h, 0.0, 0.0) + shifted_sum(stencils, vv, k, 0.0, 0.0) -
                 4.0 * vv[k] + w.f.derivative(w.phi[k]) * vv[k];
    return out;
}

std::vector<double> apply_adjoint(const WaveProfile& w, std::span<const double> v) {
    const int n = w.size();
    if (static_cast<int>(v.size()) != n) throw UsageError("vector length does not match the grid");
    const std::vector<double> vv(v.begin(), v.end());
    const auto stencils = direction_stencils(w.theta, w.h);
    std::vector<double> out(n, 0.0);
    for (int k = 1; k <= n - 2; ++k)
        out[k] = -w.c * d1(vv, k, w.h, 0.0, 0.0) + shifted_sum(stencils, vv, k, 0.0, 0.0) -
                 4.0 * vv[k] + w.f.derivative(w.phi[k]) * vv[k];
    return out;
}

double pairing(const WaveProfile& w, std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (b.size() != n || n < 2) throw UsageError("pairing needs two arrays on the same grid");
    double s = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
    for (std::size_t k = 1; k + 1 < n; ++k) s += a[k] * b[k];
    return s * w.h;
}

void adjoint_solve(WaveProfile& w) {
    if (std::abs(w.c) < 1e-4) throw PinningDetected(w.c);
    const int n = w.size();
    const int m = n - 2;
    const auto stencils = direction_stencils(w.theta, w.h);
    const auto trips = interior_jacobian(w, stencils, g_prime_on_grid(w), w.c);
    SparseMatrix A(m, m);
    A.setFromTriplets(trips.begin(), trips.end());
    SparseMatrix At = A.transpose();
    Eigen::SparseLU<SparseMatrix> lu, lut;
    lu.compute(A);
    lut.compute(At);
    if (lu.info() != Eigen::Success || lut.info() != Eigen::Success)
        throw DegenerateKernel("linearization is singular to working precision");

    // Block inverse iteration on (A A^T)^{-1} for the two smallest left singular vectors.
    Eigen::MatrixXd Y(m, 2);
    for (int k = 1; k <= n - 2; ++k) {
        Y(k - 1, 0) = w.dphi[k];
        Y(k - 1, 1) = w.xi(k) * w.dphi[k];
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Y = qr.householderQ() * Eigen::MatrixXd::Identity(m, 2);
    for (int iter = 0; iter < 12; ++iter) {
        Eigen::MatrixXd Z(m, 2);
        for (int col = 0; col < 2; ++col) {
            const Eigen::VectorXd wv = lu.solve(Y.col(col));
            Z.col(col) = lut.solve(wv);
        }
        if (!Z.allFinite()) throw DegenerateKernel("inverse iteration produced non-finite values");
        Eigen::HouseholderQR<Eigen::MatrixXd> q(Z);
        Y = q.householderQ() * Eigen::MatrixXd::Identity(m, 2);
    }
    const Eigen::MatrixXd B = At * Y;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinV);
    const double s_small = svd.singularValues()(1);
    const double s_next = svd.singularValues()(0);
    w.sigma_min = s_small;
    w.sigma_ratio = s_small > 0.0 ? s_next / s_small : INFINITY;
    if (!(w.sigma_ratio >= 10.0))
        throw DegenerateKernel("adjoint kernel not separated: singular value ratio " +
                               std::to_string(w.sigma_ratio));
    Eigen::VectorXd y = Y * svd.matrixV().col(1);
    if (y.sum() < 0.0) y = -y;

    w.psi.assign(n, 0.0);
    for (int k = 1; k <= n - 2; ++k) w.psi[k] = y[k - 1];
    // Entries below the rounding floor of the inverse iteration (and the two
    // clamped endpoints) are continued geometrically from the resolved tail.
    const double floor = 1e-12 * y.cwiseAbs().maxCoeff();
    int lo = 1;
    while (lo < n - 2 && !(w.psi[lo] > floor)) ++lo;
    int hi = n - 2;
    while (hi > 1 && !(w.psi[hi] > floor)) --hi;
    if (hi - lo < 4) throw DegenerateKernel("adjoint kernel has no resolved support");
    const double left_ratio = std::min(w.psi[lo] / w.psi[lo + 1], 1.0);
    for (int k = lo - 1; k >= 0; --k) w.psi[k] = w.psi[k + 1] * left_ratio;
    const double right_ratio = std::min(w.psi[hi] / w.psi[hi - 1], 1.0);
    for (int k = hi + 1; k < n; ++k) w.psi[k] = w.psi[k - 1] * right_ratio;
    for (int k = lo; k <= hi; ++k)
        if (!(w.psi[k] > 0.0)) throw DegenerateKernel("adjoint kernel changes sign");
    const double norm = pairing(w, w.psi, w.dphi);
    if (!(norm > 0.0)) throw DegenerateKernel("adjoint kernel is orthogonal to the profile derivative");
    for (double& v : w.psi) v /= norm;
    w.has_psi = true;
}

double compute_d(WaveProfile& w) {
    if (!w.has_psi) adjoint_solve(w);
    w.d = -pairing(w, w.d2phi, w.psi);
    w.has_d = true;
    return w.d;
}

void solve_r(WaveProfile& w) {
    if (!w.has_d) compute_d(w);
    const int n = w.size();
    const int m = n - 2;
    const auto stencils = direction_stencils(w.theta, w.h);
    auto trips = interior_jacobian(w, stencils, g_prime_on_grid(w), w.c);
    for (int k = 1; k <= n - 2; ++k) {
        trips.emplace_back(k - 1, m, w.dphi[k]);
        trips.emplace_back(m, k - 1, w.h * w.psi[k]);
    }
    SparseMatrix B(m + 1, m + 1);
    B.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd rhs(m + 1);
    for (int k = 1; k <= n - 2; ++k) rhs[k - 1] = -w.d2phi[k] - w.d * w.dphi[k];
    rhs[m] = 0.0;
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success) throw SolveFailed("bordered corrector system is singular");
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) throw SolveFailed("corrector solve produced non-finite values");

    w.r.assign(n, 0.0);
    for (int k = 1; k <= n - 2; ++k) w.r[k] = sol[k - 1];
    const auto lr = apply_linearization(w, w.r);
    double res = 0.0;
    for (int k = 1; k <= n - 2; ++k)
        res = std::max(res, std::abs(lr[k] + w.d * w.dphi[k] + w.d2phi[k]));
    if (!(res < 1e-7))
        throw SolveFailed("corrector residual " + std::to_string(res) + " exceeds 1e-7");
    w.dr = d1_array(w.r, w.h, 0.0, 0.0);
    w.has_r = true;
}

double c_theta(const BistableNonlinearity& f, double theta, double L, double h,
               const WaveOptions& options) {
    WaveOptions o = options;
    o.theta = theta;
    o.tolerance = std::max(o.tolerance, 1e-7);
    return solve_wave(f, L, h, o).c;
}

double dispersion(const BistableNonlinearity& f, double theta, double L, double h,
                  const WaveOptions& options) {
    return c_theta(f, theta, L, h, options) / std::cos(theta);
}

double phi_inverse(const WaveProfile& w, double v) {
    const int n = w.size();
    if (!(v > w.phi[0] && v < w.phi[n - 1]))
        throw OutOfRange("value " + std::to_string(v) + " outside the profile range");
    const auto it = std::upper_bound(w.phi.begin(), w.phi.end(), v);
    const int k = static_cast<int>(it - w.phi.begin()) - 1;  // phi[k] <= v < phi[k+1]
    if (w.phi[k] == v) return w.xi(k);
    double lo = w.xi(k);
    double hi = w.xi(k + 1);
    for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (w.phi_at(mid) < v)
            lo = mid;
        else
            hi = mid;
    }
    const double flo = std::abs(w.phi_at(lo) - v);
    const double fhi = std::abs(w.phi_at(hi) - v);
    return flo <= fhi ? lo : hi;
}

}  // namespace acfront

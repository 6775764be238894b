#pragma once

#include <span>
#include <vector>

#include "acfront/core.hpp"

namespace acfront {

/// Travelling-wave pair (Phi, c) on the uniform grid xi_k = -L + k h,
/// together with the adjoint kernel psi, the drift coefficient d and the
/// corrector r once those have been computed.
///
/// Phi is clamped to 0 at and beyond -L and to 1 at and beyond +L; psi, r and
/// all derivative arrays are extended by 0. Derivatives use fourth-order
/// central differences on the extended arrays.
struct WaveProfile {
    BistableNonlinearity f = BistableNonlinearity::cubic(0.3);
    double theta = 0.0;
    double L = 0.0;
    double h = 0.0;
    double c = 0.0;
    std::vector<double> phi;
    std::vector<double> dphi;
    std::vector<double> d2phi;

    bool has_psi = false;
    std::vector<double> psi;
    double sigma_min = 0.0;   ///< smallest singular value of the discrete linearization
    double sigma_ratio = 0.0; ///< second-smallest over smallest

    bool has_d = false;
    double d = 0.0;

    bool has_r = false;
    std::vector<double> r;
    std::vector<double> dr;

    int size() const { return static_cast<int>(phi.size()); }
    double xi(int k) const { return -L + k * h; }
    int zero_index() const;

    /// Cubic interpolants of the grid arrays at arbitrary xi.
    double phi_at(double x) const;
    double dphi_at(double x) const;
    double d2phi_at(double x) const;
    double r_at(double x) const;
    double dr_at(double x) const;
};

struct WaveOptions {
    double tolerance = 1e-9;        ///< required sup-norm of the MFDE residual
    double target = 1e-12;          ///< Newton stops early once below this
    int max_iterations = 60;
    double pinning_threshold = 1e-4;
    double theta = 0.0;             ///< propagation angle, |theta| <= 0.3
};

/// Solves -c Phi' = sum of the four shifted differences + g(Phi) with Phi(0) = 1/2.
WaveProfile solve_wave(const BistableNonlinearity& f, double L, double h,
                       const WaveOptions& options = {});

/// solve_wave followed by adjoint_solve, compute_d and solve_r.
WaveProfile solve_wave_full(const BistableNonlinearity& f, double L, double h,
                            const WaveOptions& options = {});

/// c Phi' + shifted differences + g(Phi) on the grid (zero at the clamped endpoints).
std::vector<double> mfde_residual(const WaveProfile& w);

/// Applies the discrete linearization L_tw to v (extended by zero) on the grid.
std::vector<double> apply_linearization(const WaveProfile& w, std::span<const double> v);
/// Applies the discrete formal adjoint (-c w' + shifts + g'(Phi) w).
std::vector<double> apply_adjoint(const WaveProfile& w, std::span<const double> v);

/// Trapezoid pairing on the collocation grid.
double pairing(const WaveProfile& w, std::span<const double> a, std::span<const double> b);

/// Positive kernel of the adjoint, normalized so that <psi, Phi'> = 1.
void adjoint_solve(WaveProfile& w);

/// d = -<Phi'', psi>; stores and returns it.
double compute_d(WaveProfile& w);

/// Solves L_tw r + d Phi' = -Phi'' with <psi, r> = 0.
void solve_r(WaveProfile& w);

/// Wave speed in direction theta (off-grid shifts by cubic interpolation).
double c_theta(const BistableNonlinearity& f, double theta, double L, double h,
               const WaveOptions& options = {});

/// c_theta / cos(theta).
double dispersion(const BistableNonlinearity& f, double theta, double L, double h,
                  const WaveOptions& options = {});

/// Unique xi with Phi(xi) = v; throws OutOfRange outside (Phi(-L), Phi(L)).
double phi_inverse(const WaveProfile& w, double v);

/// 4-point Lagrange weights for a shift of `shift` grid spacings. Returns the
/// offsets of the nodes relative to the base index and their weights.
struct ShiftStencil {
    int offsets[4];
    double weights[4];
    int count;
};
ShiftStencil shift_stencil(double shift_in_cells);

}  // namespace acfront

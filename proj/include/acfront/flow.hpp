#pragma once

#include <cstdint>
#include <vector>

#include "acfront/core.hpp"

namespace acfront {

// ---------------------------------------------------------------------------
// Modified Bessel functions

/// e^{-t} I_k(t), k >= 0, t >= 0.
double bessel_I_scaled(int k, double t);
/// I_k(t) without scaling; overflows for large t.
double bessel_I(int k, double t);
/// e^{-t} I_k(t) for k = 0..k_max in one backward sweep.
std::vector<double> bessel_I_scaled_table(int k_max, double t);

// ---------------------------------------------------------------------------
// Discrete heat kernel

/// G_k(t) = e^{-2t} I_k(2t) for |k| <= k_max.
struct HeatKernelTable {
    double t = 0.0;
    int k_max = 0;
    std::vector<double> values;  ///< values[k + k_max]

    double operator()(int k) const {
        return (k < -k_max || k > k_max) ? 0.0 : values[static_cast<std::size_t>(k + k_max)];
    }
    double mass() const;
};

/// Truncation radius 2t + 40 sqrt(t+1) + 20.
int heat_kernel_radius(double t);
HeatKernelTable heat_kernel(double t, int k_max = -1);

/// Solution at time t of h' = d2(h) with h(0) = h0, by convolution with the
/// kernel. Periodic sequences use the periodized kernel; reflect uses the
/// mirror-image extension.
PhaseSequence heat_solve(const PhaseSequence& h0, double t);
/// Same with a precomputed kernel.
PhaseSequence heat_solve(const PhaseSequence& h0, const HeatKernelTable& kernel);

/// Explicit Euler for the heat LDE; used as an independent route.
PhaseSequence heat_euler(const PhaseSequence& h0, double t, double dt);

/// Piecewise-constant sequence: n entries in blocks of `block`, each block
/// uniform in [-amplitude, amplitude] from a SplitMix64 stream.
PhaseSequence random_block_sequence(int n, int block, double amplitude, std::uint64_t seed,
                                    BoundaryJ boundary_j = BoundaryJ::periodic);

/// `count` points spaced evenly in log t on [lo, hi].
std::vector<double> log_time_grid(double lo, double hi, int count);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LogLogFit loglog_fit(const std::vector<double>& t, const std::vector<double>& y);

struct DecayReport {
    std::vector<double> t;
    std::vector<double> grad;  ///< ||d+ h(t)||
    std::vector<double> lap;   ///< ||d2 h(t)||
    double grad0 = 0.0;
    double lap0 = 0.0;
    double sup0 = 0.0;
    double K_grad = 0.0;  ///< fitted: max_t grad(t) sqrt(t) / ||h0||
    double K_lap = 0.0;   ///< fitted: max_t lap(t) t / ||h0||
    double slope_grad = 0.0;
    double slope_lap = 0.0;
    bool monotone_grad = false;  ///< grad(t) <= grad0 for all t
    bool monotone_lap = false;   ///< lap(t) <= lap0 for all t
};

/// Slopes are fitted on t in [fit_lo, fit_hi].
DecayReport decay_report(const PhaseSequence& h0, const std::vector<double>& t_grid,
                         double fit_lo = 10.0, double fit_hi = 1000.0);

struct BesselBoundsReport {
    std::vector<double> t;
    std::vector<double> grad_sum;      ///< sqrt(t) e^{-t} sum_k |I_{k+1} - I_k|
    std::vector<double> lap_sum;       ///< t e^{-t} sum_k |I_{k+1} - 2I_k + I_{k-1}|
    std::vector<double> telescoping;   ///< |e^{-t} sum_k |I_{k+1}-I_k| - 2 e^{-t} I_0|
    std::vector<int> sign_changes;     ///< of k -> I_{k+1} - 2I_k + I_{k-1} on 0 <= k <= k_max
    bool decreasing_in_k = false;      ///< I_k > I_{k+1} at every sampled (k, t)
    bool single_sign_change = false;
};

BesselBoundsReport bessel_bounds_report(const std::vector<double>& t_grid, int k_max = -1);

// ---------------------------------------------------------------------------
// Phase dynamics

struct FlowParams {
    enum class Variant { exp_lde, linear_heat };
    double c = 0.0;
    double d = 0.0;
    Variant variant = Variant::exp_lde;
    double dt = 0.0;  ///< 0 selects 0.1 min(1, 1/(2+2|d|))
    double t_end = 0.0;
    double delta = 0.1;  ///< flatness bound for mcf/gradient solvers

    /// Picks the variant from d (|d| < 1e-8 selects linear_heat).
    static FlowParams from_wave(double c, double d);
    double step() const;
};

/// V' for the exponential heat LDE (or the linear one when d = 0).
std::vector<double> v_rhs(const PhaseSequence& V, const FlowParams& p);

/// Trajectory stored as V_j(t_k) = anchor + shape[k][j].
struct VTrajectory {
    std::vector<double> times;
    double anchor = 0.0;
    std::vector<std::vector<double>> shape;
    BoundaryJ boundary_j = BoundaryJ::periodic;

    PhaseSequence at(std::size_t k) const;
};

/// Cole-Hopf route: h = exp(d (V - V0_0 - ct)) solves the heat LDE.
VTrajectory v_solve(const PhaseSequence& V0, const FlowParams& p, const std::vector<double>& times);

/// Direct explicit Euler route with step dt.
VTrajectory v_solve_direct(const PhaseSequence& V0, const FlowParams& p,
                           const std::vector<double>& times, double dt);

struct GradientReport {
    std::vector<double> t;
    std::vector<double> grad;
    std::vector<double> lap;
    double M_fit = 0.0;  ///< max_t grad(t) / min(grad0, t^{-1/2}) / e^{kappa dev}
    double kappa = 1.0;
    double slope_grad = 0.0;
    double slope_lap = 0.0;
    bool monotone_envelope = false;  ///< grad(t) <= grad(0) for all t
};

GradientReport v_gradient_report(const VTrajectory& traj, double fit_lo = 10.0,
                                 double fit_hi = 500.0);

/// Trajectory of a phase sequence on a time grid.
struct PhaseTrajectory {
    std::vector<double> times;
    std::vector<PhaseSequence> values;
};

/// Gamma' = d2(Gamma) / beta^2 + 2 d beta + c - 2d.
std::vector<double> mcf_rhs(const PhaseSequence& G, const FlowParams& p);
/// Gamma' = d2(Gamma) / beta^2 + beta (c + c2) - c2 with c2 the angular second derivative.
std::vector<double> mcf_rhs_angular(const PhaseSequence& G, double c, double c2);

/// Explicit Euler; records at the requested times (rounded to steps).
/// Throws FlatnessViolated if ||d+ Gamma|| exceeds p.delta.
PhaseTrajectory mcf_solve(const PhaseSequence& G0, const FlowParams& p,
                          const std::vector<double>& times);

std::vector<double> gradient_rhs(const PhaseSequence& U, const FlowParams& p);
PhaseTrajectory gradient_lde_solve(const PhaseSequence& U0, const FlowParams& p,
                                   const std::vector<double>& times);

}  // namespace acfront

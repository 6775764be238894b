#pragma once

#include <functional>
#include <vector>

#include "acfront/core.hpp"
#include "acfront/flow.hpp"
#include "acfront/wave.hpp"

namespace acfront {

/// Explicit Euler integration settings for u' = Laplacian(u) + g(u).
struct SimConfig {
    BistableNonlinearity f = BistableNonlinearity::cubic(0.3);
    double dt = 0.0;
    double t_end = 0.0;
    int record_every = 1;  ///< snapshot cadence in steps
    int threads = 1;       ///< row partitions per step; results do not depend on it

    /// Default step 0.2 / (4 + sup |g'| on [-1, 2]).
    static SimConfig defaults(const BistableNonlinearity& f, double t_end);
    /// Throws UsageError unless dt (4 + sup |g'|) <= 1 and the other fields are sane.
    void validate() const;
};

double monotone_dt_limit(const BistableNonlinearity& f);
double default_dt(const BistableNonlinearity& f);

/// One Euler step. Throws NonFinite if any output is not finite.
LatticeField step(const LatticeField& u, const SimConfig& cfg);
void step_into(const LatticeField& u, LatticeField& out, const SimConfig& cfg);

/// Called with (step index, time, field) at t = 0, every `record_every`
/// steps and at the final step.
using Observer = std::function<void(long, double, const LatticeField&)>;

/// Integrates to the first multiple of dt at or beyond t_end - dt/2.
LatticeField run(LatticeField u0, const SimConfig& cfg, const Observer& observer = {});

/// Number of steps run() takes for the given config.
long step_count(const SimConfig& cfg);

/// (u1 - u0)/dt - Laplacian(u0) - g(u0) on the window.
LatticeField residual_J(const LatticeField& u0, const LatticeField& u1, double dt,
                        const BistableNonlinearity& f);

// ---------------------------------------------------------------------------
// Super- and sub-solutions

struct PlanarSpec {
    double q0 = 0.1;
    double q1 = 0.1;
    double mu = 0.05;
    double C = 1.0;
    void validate(double a) const;
};

/// Parameters of the curved construction u = Phi(i - V_j +- q) + r(.) alpha_j +- p.
struct CurvedSpec {
    double eps = 0.03;
    double delta = 0.0;  ///< ||d+ V0||
    double M = 1.0;
    double m = 0.0;
    double C = 1.0;
    bool zero_offsets = false;  ///< negative control: p = q = 0

    double K(double t) const;
    double p(double t) const;
    double p_dot(double t) const;
    double q(double t) const;
    double q_dot(double t) const;
    /// p(0) - ||r|| delta^2.
    double initial_margin(const WaveProfile& w) const;
};

/// Fills M, m, C and delta for the given profile and initial phase.
CurvedSpec make_curved_spec(const WaveProfile& w, const PhaseSequence& V0, double eps = 0.03);

struct FieldPair {
    LatticeField upper;
    LatticeField lower;
};

/// Geometry of a verification window.
struct Window {
    int width = 256;
    int height = 64;
    int i_offset = -128;
    BoundaryJ boundary_j = BoundaryJ::periodic;
};

FieldPair build_planar_supersub(const WaveProfile& w, const PlanarSpec& spec, double t,
                                const Window& win);

/// V and its time derivative at one instant.
struct VState {
    PhaseSequence V;
    std::vector<double> V_dot;
};

FieldPair build_curved_supersub(const WaveProfile& w, const CurvedSpec& spec, const VState& v,
                                double t, const Window& win);

struct SuperSubReport {
    bool pass = false;
    double tolerance = 0.0;
    double min_upper = 0.0;  ///< min of J[u+] over window x times
    double max_lower = 0.0;  ///< max of J[u-] over window x times
    int worst_i = 0;
    int worst_j = 0;
    double worst_t = 0.0;
    double worst_residual = 0.0;
    double mu = 0.0;
    double C = 0.0;
};

/// Default residual tolerance for the analytic sign checks.
inline constexpr double kSuperSubTolerance = 1e-7;

/// J computed with exact time derivatives; J[u+] >= -tol, J[u-] <= tol.
SuperSubReport verify_planar(const WaveProfile& w, const PlanarSpec& spec, const Window& win,
                             const std::vector<double>& t_grid, double tol = kSuperSubTolerance);

/// Scans mu and C on log grids; returns the first certified pair (pass = false if none).
SuperSubReport search_planar(const WaveProfile& w, double q0, double q1, const Window& win,
                             const std::vector<double>& t_grid, double tol = kSuperSubTolerance);

/// V is advanced by the Cole-Hopf route of module flow.
SuperSubReport verify_curved(const WaveProfile& w, const CurvedSpec& spec, const PhaseSequence& V0,
                             const Window& win, const std::vector<double>& t_grid,
                             double tol = kSuperSubTolerance);

/// Throws VerificationFailed at the worst site when the report does not pass.
void require_pass(const SuperSubReport& report, const char* what);

}  // namespace acfront

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "acfront/config.hpp"
#include "acfront/core.hpp"
#include "acfront/wave.hpp"

namespace acfront {

inline constexpr const char* kVersion = "1.0.0";

/// Generator for the initial phase sequence kappa_j.
struct KappaSpec {
    enum class Kind { zero, constant, periodic, step, random };
    Kind kind = Kind::zero;
    int P = 32;               ///< period of the periodic kind
    double amplitude = 0.0;   ///< periodic: amplitude * sin(2 pi j / P); random: uniform in [-amp, amp]
    double value = 0.0;       ///< constant kind
    double minus = 0.0;       ///< step kind: rows j < height/2
    double plus = 4.0;        ///< step kind: rows j >= height/2
    std::uint64_t seed = 1;

    PhaseSequence generate(int height, BoundaryJ boundary_j) const;
    double sup() const;  ///< bound on |kappa_j|
};

/// Localized perturbation v0 added to Phi(i - kappa_j).
struct PerturbationSpec {
    enum class Kind { none, gaussian, random_l1 };
    Kind kind = Kind::none;
    double amplitude = 0.0;
    double center_i = 0.0;
    double center_j = -1.0;  ///< negative: height / 2
    double width = 3.0;      ///< gaussian standard deviation in cells
    int radius = 8;          ///< random_l1: support is the (2 radius + 1)^2 box around the center
    std::uint64_t seed = 1;
};

struct Tolerances {
    double front_error = 0.02;
    double tracking = 0.1;       ///< sup ||Gamma - gamma||
    double flatness = 0.1;       ///< required flatness at the hand-off
    double mu_stability = 0.01;
    double mu_prediction = 0.05;
    double edge = 0.1;           ///< step experiment edge-row phases
    double slope_target = 0.5;
    double slope = 0.1;
    double spread = 0.05;        ///< trapping experiment phase spread
};

struct ExperimentSpec {
    std::string name = "thm22";  ///< thm22 | thm23 | thm24 | step_kappa | trap
    double a = 0.3;
    int width = 256;
    int height = 64;
    bool auto_offset = true;     ///< center the window on the expected front path
    int i_offset = -128;
    BoundaryJ boundary_j = BoundaryJ::periodic;
    double dt = 0.0;             ///< 0: monotone default rounded to divide record_interval
    double t_end = 150.0;
    double tau = 60.0;
    double t_check = -1.0;       ///< step experiment: edge check time and end of the width fit; <0 means t_end
    double record_interval = 1.0;
    int threads = 1;
    double wave_L = 40.0;
    double wave_h = 1.0 / 16.0;
    KappaSpec kappa;
    PerturbationSpec v0;
    double trap_theta = 1.0;
    Tolerances tol;

    /// Defaults of the named experiment.
    static ExperimentSpec defaults(const std::string& name);
    /// Defaults of cfg["name"] (or `name` when given) overridden by the other keys.
    static ExperimentSpec from_config(const Config& cfg, const std::string& name = "");
    Config to_config() const;
    std::string hash() const;
    void validate() const;

    /// Window offset actually used for a front of speed c.
    int offset_for(double c) const;
    /// Time step actually used.
    double effective_dt() const;
};

/// u0 = Phi(i - kappa_j) + v0 on the experiment window, after the edge check
/// on the first and last five columns. Throws H0Violated.
LatticeField make_initial(const ExperimentSpec& spec, const WaveProfile& w);

/// Raises H0Violated unless max over the first 5 columns < a < min over the last 5.
void check_h0(const LatticeField& u, double a);

struct Verdict {
    std::string name;
    double value = 0.0;
    std::string op;  ///< "<" or ">" or "<=" or "==" (integer counts)
    double tolerance = 0.0;
    bool pass = false;
};

struct ExperimentReport {
    std::string name;
    std::string version = kVersion;
    std::string config_hash;
    std::map<std::string, std::string> params;
    std::vector<double> times;
    std::map<std::string, std::vector<double>> series;  ///< aligned with times; NaN where undefined
    std::map<std::string, double> scalars;
    std::vector<Verdict> verdicts;
    double runtime_seconds = 0.0;

    void check(const std::string& verdict, double value, const std::string& op, double tolerance);
    bool passed() const;
    const Verdict* verdict(const std::string& name) const;
    double scalar(const std::string& name) const;

    /// One record per line: header, one per series, one per verdict, summary.
    void write_ndjson(std::ostream& out) const;
    std::string summary() const;
};

ExperimentReport run_thm22(const ExperimentSpec& spec);
ExperimentReport run_thm23(const ExperimentSpec& spec);
ExperimentReport run_thm24(const ExperimentSpec& spec);
ExperimentReport run_step_kappa(const ExperimentSpec& spec);
ExperimentReport run_trapping(const ExperimentSpec& spec);

/// Dispatches on spec.name.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Cole-Hopf average (1/d) ln(mean_j exp(d (gamma_j - c tau))) over all rows.
double mu_prediction(const PhaseSequence& gamma_tau, double c, double d, double tau);

}  // namespace acfront

#pragma once

#include <vector>

#include "acfront/core.hpp"
#include "acfront/wave.hpp"

namespace acfront {

/// Per-row interface phase gamma_j = i*_j - Phi^{-1}(u_{i*,j}), where i*_j is
/// the unique column with 0 < u_{i*,j} <= 1/2 < u_{i*+1,j}. Rows with no or
/// several such columns are left undefined (gamma stored as 0).
struct PhaseExtract {
    PhaseSequence gamma;
    std::vector<int> i_star;
    std::vector<char> defined;
    std::vector<char> clamped;  ///< u_{i*} outside the profile's range; gamma uses the clamp

    int defined_count() const;
    bool all_defined() const;
};

PhaseExtract extract(const LatticeField& u, const WaveProfile& w);

struct MonotonicityReport {
    double min_difference = 0.0;  ///< min of u_{i+1,j} - u_{i,j} over the interfacial region
    long region_size = 0;
    long violations_left = 0;   ///< u_{i,j} <= Phi(-2) but u_{i-1,j} > Phi(-2)
    long violations_right = 0;  ///< u_{i,j} >= Phi(2) but u_{i+1,j} < Phi(2)
    bool ok() const { return region_size > 0 && min_difference > 0.0 && violations_left == 0 &&
                             violations_right == 0; }
};

/// Interfacial region {Phi(-2) <= u <= Phi(2)} with ghost reads at the window edges.
MonotonicityReport interfacial_monotonicity(const LatticeField& u, const WaveProfile& w);

/// sup |gamma_{j+1} - gamma_j| over adjacent defined rows; throws NoDefinedRows.
double flatness(const PhaseExtract& g);

/// max_j gamma_j - min_j gamma_j over defined rows; throws NoDefinedRows.
double phase_spread(const PhaseExtract& g);

/// sup over the window of |u_{i,j} - Phi(i - gamma_j)|; throws UndefinedRows.
double front_error(const LatticeField& u, const WaveProfile& w, const PhaseExtract& g);

/// sup over the window of |u_{i,j} - Phi(i - shift)|.
double planar_error(const LatticeField& u, const WaveProfile& w, double shift);

}  // namespace acfront

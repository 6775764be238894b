#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "acfront/errors.hpp"

namespace acfront {

/// Bistable reaction term g(u; a) with stable zeros 0, 1 and unstable zero a.
///
/// Two kinds are supported: the cubic u(1-u)(u-a), evaluated in closed form,
/// and a user table sampled on a uniform u-grid. Tables are evaluated by
/// piecewise-linear or piecewise-cubic (4-point Lagrange) interpolation and
/// extended linearly beyond the sampled range.
class BistableNonlinearity {
public:
    enum class Kind { cubic, table };
    enum class Interp { linear, cubic };

    static BistableNonlinearity cubic(double a);
    static BistableNonlinearity table(double a, double u_min, double u_max,
                                      std::vector<double> samples, Interp rule = Interp::cubic);

    double operator()(double u) const;
    double derivative(double u) const;
    double second_derivative(double u) const;

    double a() const { return a_; }
    Kind kind() const { return kind_; }
    double u_min() const { return u_min_; }
    double u_max() const { return u_max_; }
    const std::vector<double>& samples() const { return samples_; }
    Interp rule() const { return rule_; }

    /// sup |g'(u)| over [lo, hi] by dense sampling (exact endpoints for the cubic).
    double sup_abs_derivative(double lo = -1.0, double hi = 2.0) const;
    double sup_abs_second_derivative(double lo = -1.0, double hi = 2.0) const;

    /// Checks the bistability hypotheses; throws InvalidNonlinearity.
    void validate() const;

private:
    BistableNonlinearity() = default;
    double table_eval(double u, int order) const;

    Kind kind_ = Kind::cubic;
    double a_ = 0.0;
    double u_min_ = 0.0;
    double u_max_ = 1.0;
    std::vector<double> samples_;
    Interp rule_ = Interp::cubic;
};

double g_eval(const BistableNonlinearity& f, double u);

enum class BoundaryJ { periodic, reflect };

/// Maps an arbitrary row index into [0, n) under the j-boundary policy.
/// `reflect` is the half-sample mirror: -1 -> 0, n -> n-1.
int wrap_index(int j, int n, BoundaryJ policy);

/// State u_{i,j} on a window of `width` columns (lattice i = i_offset + ix)
/// and `height` rows. Reads left of the window return 0, right of it 1.
class LatticeField {
public:
    LatticeField() = default;
    LatticeField(int width, int height, int i_offset, BoundaryJ boundary_j = BoundaryJ::periodic,
                 double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    int i_offset() const { return i_offset_; }
    BoundaryJ boundary_j() const { return boundary_j_; }

    int i_begin() const { return i_offset_; }
    int i_end() const { return i_offset_ + width_; }
    bool contains(int i, int j) const {
        return i >= i_begin() && i < i_end() && j >= 0 && j < height_;
    }

    /// Storage access by array index (ix in [0,width), j in [0,height)).
    double& cell(int ix, int j) { return values_[static_cast<std::size_t>(j) * width_ + ix]; }
    double cell(int ix, int j) const { return values_[static_cast<std::size_t>(j) * width_ + ix]; }

    /// Value at lattice coordinate (i, j) with ghost reads applied.
    double value(int i, int j) const {
        if (i < i_offset_) return 0.0;
        if (i >= i_offset_ + width_) return 1.0;
        return cell(i - i_offset_, wrap_index(j, height_, boundary_j_));
    }

    /// Writable value at an in-window lattice coordinate.
    double& at(int i, int j);
    double at(int i, int j) const;

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> row(int j) const {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(j) * width_, width_);
    }

    bool all_finite() const;

    friend bool operator==(const LatticeField&, const LatticeField&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int i_offset_ = 0;
    BoundaryJ boundary_j_ = BoundaryJ::periodic;
    std::vector<double> values_;
};

/// Five-point Laplacian at an in-window lattice site.
double discrete_laplacian(const LatticeField& u, int i, int j);

/// A bounded real sequence indexed by j over the window height.
class PhaseSequence {
public:
    PhaseSequence() = default;
    explicit PhaseSequence(std::vector<double> values, BoundaryJ boundary_j = BoundaryJ::periodic);

    int size() const { return static_cast<int>(values_.size()); }
    BoundaryJ boundary_j() const { return boundary_j_; }

    /// Value at any integer j with the boundary policy applied.
    double operator[](int j) const { return values_[wrap_index(j, size(), boundary_j_)]; }
    double& raw(int j) { return values_[j]; }

    std::span<const double> values() const { return values_; }
    std::vector<double>& storage() { return values_; }

    bool all_finite() const;

private:
    std::vector<double> values_;
    BoundaryJ boundary_j_ = BoundaryJ::periodic;
};

double d_plus(const PhaseSequence& s, int j);
double d_minus(const PhaseSequence& s, int j);
double d2(const PhaseSequence& s, int j);

/// sqrt(1 + ((d+ s)^2 + (d- s)^2) / 2)
double beta(const PhaseSequence& s, int j);
/// beta^2 - 1, computed without cancellation.
double alpha(const PhaseSequence& s, int j);

/// sup_j |s_j - s_0|.
double deviation_seminorm(const PhaseSequence& s);

double sup_norm(std::span<const double> v);
double sup_d_plus(const PhaseSequence& s);
double sup_d2(const PhaseSequence& s);

}  // namespace acfront

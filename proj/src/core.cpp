#include "acfront/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace acfront {

BistableNonlinearity BistableNonlinearity::cubic(double a) {
    if (!(a > 0.0 && a < 1.0)) throw InvalidNonlinearity("detuning a must lie in (0,1)");
    BistableNonlinearity f;
    f.kind_ = Kind::cubic;
    f.a_ = a;
    return f;
}

BistableNonlinearity BistableNonlinearity::table(double a, double u_min, double u_max,
                                                 std::vector<double> samples, Interp rule) {
    if (!(a > 0.0 && a < 1.0)) throw InvalidNonlinearity("detuning a must lie in (0,1)");
    if (samples.size() < 4 || !(u_max > u_min))
        throw InvalidNonlinearity("table needs at least 4 samples on a non-empty range");
    BistableNonlinearity f;
    f.kind_ = Kind::table;
    f.a_ = a;
    f.u_min_ = u_min;
    f.u_max_ = u_max;
    f.samples_ = std::move(samples);
    f.rule_ = rule;
    return f;
}

// order 0: value, 1: first derivative, 2: second derivative
double BistableNonlinearity::table_eval(double u, int order) const {
    const int n = static_cast<int>(samples_.size());
    const double step = (u_max_ - u_min_) / (n - 1);
    auto slope_at = [&](bool left) {
        return left ? (samples_[1] - samples_[0]) / step : (samples_[n - 1] - samples_[n - 2]) / step;
    };
    if (u < u_min_) {
        if (order == 0) return samples_[0] + slope_at(true) * (u - u_min_);
        return order == 1 ? slope_at(true) : 0.0;
    }
    if (u > u_max_) {
        if (order == 0) return samples_[n - 1] + slope_at(false) * (u - u_max_);
        return order == 1 ? slope_at(false) : 0.0;
    }
    const double x = (u - u_min_) / step;
    int k = std::min(static_cast<int>(std::floor(x)), n - 2);
    const double s = x - k;
    if (rule_ == Interp::linear) {
        if (order == 0) return samples_[k] + s * (samples_[k + 1] - samples_[k]);
        return order == 1 ? (samples_[k + 1] - samples_[k]) / step : 0.0;
    }
    // 4-point Lagrange on nodes k0..k0+3 with local coordinate x - k0.
    const int k0 = std::clamp(k - 1, 0, n - 4);
    const double y = x - k0;
    const double* p = &samples_[k0];
    const double nodes[4] = {0.0, 1.0, 2.0, 3.0};
    const double denom[4] = {-6.0, 2.0, -2.0, 6.0};
    double result = 0.0;
    for (int m = 0; m < 4; ++m) {
        double w = 0.0;
        if (order == 0) {
            w = 1.0;
            for (int q = 0; q < 4; ++q)
                if (q != m) w *= (y - nodes[q]);
        } else if (order == 1) {
            for (int q = 0; q < 4; ++q) {
                if (q == m) continue;
                double term = 1.0;
                for (int r = 0; r < 4; ++r)
                    if (r != m && r != q) term *= (y - nodes[r]);
                w += term;
            }
        } else {
            // product of three linear factors: P'' = 2 * sum of the factors
            for (int q = 0; q < 4; ++q)
                if (q != m) w += (y - nodes[q]);
            w *= 2.0;
        }
        result += p[m] * w / denom[m];
    }
    const double scale = order == 0 ? 1.0 : (order == 1 ? 1.0 / step : 1.0 / (step * step));
    return result * scale;
}

double BistableNonlinearity::operator()(double u) const {
    if (kind_ == Kind::cubic) return u * (1.0 - u) * (u - a_);
    return table_eval(u, 0);
}

double BistableNonlinearity::derivative(double u) const {
    if (kind_ == Kind::cubic) return -3.0 * u * u + 2.0 * (1.0 + a_) * u - a_;
    return table_eval(u, 1);
}

double BistableNonlinearity::second_derivative(double u) const {
    if (kind_ == Kind::cubic) return -6.0 * u + 2.0 * (1.0 + a_);
    return table_eval(u, 2);
}

double BistableNonlinearity::sup_abs_derivative(double lo, double hi) const {
    double sup = std::max(std::abs(derivative(lo)), std::abs(derivative(hi)));
    if (kind_ == Kind::cubic) {
        const double vertex = (1.0 + a_) / 3.0;
        if (vertex > lo && vertex < hi) sup = std::max(sup, std::abs(derivative(vertex)));
        return sup;
    }
    constexpr int samples = 4001;
    for (int k = 0; k < samples; ++k)
        sup = std::max(sup, std::abs(derivative(lo + (hi - lo) * k / (samples - 1))));
    return sup;
}

double BistableNonlinearity::sup_abs_second_derivative(double lo, double hi) const {
    double sup = std::max(std::abs(second_derivative(lo)), std::abs(second_derivative(hi)));
    if (kind_ == Kind::cubic) return sup;
    constexpr int samples = 4001;
    for (int k = 0; k < samples; ++k)
        sup = std::max(sup, std::abs(second_derivative(lo + (hi - lo) * k / (samples - 1))));
    return sup;
}

void BistableNonlinearity::validate() const {
    const double zero_tol = kind_ == Kind::cubic ? 0.0 : 1e-10;
    for (double z : {0.0, a_, 1.0})
        if (std::abs((*this)(z)) > zero_tol)
            throw InvalidNonlinearity("g does not vanish at u = " + std::to_string(z));
    constexpr int samples = 2000;
    for (int k = 1; k < samples; ++k) {
        const double s = static_cast<double>(k) / samples;
        const double below = s * a_;
        const double above = a_ + s * (1.0 - a_);
        if (!((*this)(below) < 0.0)) throw InvalidNonlinearity("g must be negative on (0,a)");
        if (!((*this)(above) > 0.0)) throw InvalidNonlinearity("g must be positive on (a,1)");
    }
    constexpr double fd = 1e-6;
    const double g0 = ((*this)(fd) - (*this)(-fd)) / (2 * fd);
    const double g1 = ((*this)(1.0 + fd) - (*this)(1.0 - fd)) / (2 * fd);
    if (!(g0 < 0.0) || !(g1 < 0.0))
        throw InvalidNonlinearity("equilibria 0 and 1 must be stable (g'(0) < 0, g'(1) < 0)");
}

double g_eval(const BistableNonlinearity& f, double u) { return f(u); }

int wrap_index(int j, int n, BoundaryJ policy) {
    if (j >= 0 && j < n) return j;
    if (policy == BoundaryJ::periodic) {
        const int r = j % n;
        return r < 0 ? r + n : r;
    }
    const int period = 2 * n;
    int r = j % period;
    if (r < 0) r += period;
    return r < n ? r : period - 1 - r;
}

LatticeField::LatticeField(int width, int height, int i_offset, BoundaryJ boundary_j, double fill)
    : width_(width), height_(height), i_offset_(i_offset), boundary_j_(boundary_j) {
    if (width <= 0 || height <= 0) throw UsageError("lattice window must be non-empty");
    values_.assign(static_cast<std::size_t>(width) * height, fill);
}

double& LatticeField::at(int i, int j) {
    if (!contains(i, j))
        throw IndexError("site (" + std::to_string(i) + "," + std::to_string(j) + ") outside window");
    return cell(i - i_offset_, j);
}

double LatticeField::at(int i, int j) const {
    if (!contains(i, j))
        throw IndexError("site (" + std::to_string(i) + "," + std::to_string(j) + ") outside window");
    return cell(i - i_offset_, j);
}

bool LatticeField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double discrete_laplacian(const LatticeField& u, int i, int j) {
    if (!u.contains(i, j))
        throw IndexError("laplacian requested at (" + std::to_string(i) + "," + std::to_string(j) +
                         ") outside window");
    return u.value(i + 1, j) + u.value(i, j + 1) + u.value(i - 1, j) + u.value(i, j - 1) -
           4.0 * u.value(i, j);
}

PhaseSequence::PhaseSequence(std::vector<double> values, BoundaryJ boundary_j)
    : values_(std::move(values)), boundary_j_(boundary_j) {
    if (values_.empty()) throw UsageError("phase sequence must be non-empty");
}

bool PhaseSequence::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double d_plus(const PhaseSequence& s, int j) { return s[j + 1] - s[j]; }
double d_minus(const PhaseSequence& s, int j) { return s[j] - s[j - 1]; }
double d2(const PhaseSequence& s, int j) { return s[j + 1] - 2.0 * s[j] + s[j - 1]; }

double alpha(const PhaseSequence& s, int j) {
    const double p = d_plus(s, j);
    const double m = d_minus(s, j);
    return 0.5 * (p * p + m * m);
}

double beta(const PhaseSequence& s, int j) { return std::sqrt(1.0 + alpha(s, j)); }

double deviation_seminorm(const PhaseSequence& s) {
    const double anchor = s[0];
    double sup = 0.0;
    for (double v : s.values()) sup = std::max(sup, std::abs(v - anchor));
    return sup;
}

double sup_norm(std::span<const double> v) {
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::abs(x));
    return sup;
}

double sup_d_plus(const PhaseSequence& s) {
    double sup = 0.0;
    for (int j = 0; j < s.size(); ++j) sup = std::max(sup, std::abs(d_plus(s, j)));
    return sup;
}

double sup_d2(const PhaseSequence& s) {
    double sup = 0.0;
    for (int j = 0; j < s.size(); ++j) sup = std::max(sup, std::abs(d2(s, j)));
    return sup;
}

}  // namespace acfront

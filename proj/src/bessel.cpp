#include <algorithm>
#include <cmath>

#include "acfront/flow.hpp"

namespace acfront {

namespace {

double series_scaled(int k, double t) {
    const double half = 0.5 * t;
    double term = 1.0;
    for (int m = 1; m <= k; ++m) term *= half / m;
    double sum = term;
    const double q = half * half;
    for (int m = 1; m < 500; ++m) {
        term *= q / (static_cast<double>(m) * (m + k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return std::exp(-t) * sum;
}

}  // namespace

std::vector<double> bessel_I_scaled_table(int k_max, double t) {
    if (k_max < 0) throw UsageError("bessel order must be non-negative");
    if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("bessel argument must be finite and >= 0");
    std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
    if (t == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (t < 1.0) {
        for (int k = 0; k <= k_max; ++k) out[k] = series_scaled(k, t);
        return out;
    }
    // Miller backward recurrence I_{n-1} = (2n/t) I_n + I_{n+1}, normalized by
    // the generating-function identity e^{-t}(I_0 + 2 sum_{n>=1} I_n) = 1.
    const int start = k_max + static_cast<int>(t + 50.0 + 15.0 * std::sqrt(t));
    constexpr double kBig = 1e200;
    double next = 0.0;   // I_{n+1}
    double cur = 1e-300;  // I_n
    double sum = 0.0;    // sum_{m > n} of the unnormalized values, weight 2
    for (int n = start; n >= 1; --n) {
        if (n <= k_max) out[n] = cur;
        sum += 2.0 * cur;
        const double prev = (2.0 * n / t) * cur + next;
        next = cur;
        cur = prev;
        if (cur > kBig) {
            const double s = 1.0 / kBig;
            cur *= s;
            next *= s;
            sum *= s;
            for (int k = std::min(n, k_max + 1); k <= k_max; ++k) out[k] *= s;
        }
    }
    out[0] = cur;
    sum += cur;
    for (double& v : out) v /= sum;
    return out;
}

double bessel_I_scaled(int k, double t) {
    if (k < 0) k = -k;
    if (t > 0.0 && t < 1.0) return series_scaled(k, t);
    return bessel_I_scaled_table(k, t)[static_cast<std::size_t>(k)];
}

double bessel_I(int k, double t) { return bessel_I_scaled(k, t) * std::exp(t); }

double HeatKernelTable::mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

int heat_kernel_radius(double t) {
    return static_cast<int>(std::ceil(2.0 * t + 40.0 * std::sqrt(t + 1.0) + 20.0));
}

HeatKernelTable heat_kernel(double t, int k_max) {
    if (!(t >= 0.0)) throw UsageError("heat kernel time must be >= 0");
    HeatKernelTable table;
    table.t = t;
    table.k_max = k_max >= 0 ? k_max : heat_kernel_radius(t);
    const auto half = bessel_I_scaled_table(table.k_max, 2.0 * t);
    table.values.resize(static_cast<std::size_t>(2 * table.k_max + 1));
    for (int k = -table.k_max; k <= table.k_max; ++k)
        table.values[static_cast<std::size_t>(k + table.k_max)] = half[static_cast<std::size_t>(std::abs(k))];
    return table;
}

}  // namespace acfront

#include "oisac/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace oisac {

void AllocationProblem::validate() const {
    if (comm_gains.empty() || comm_gains.size() != sense_gains.size()) {
        throw ConfigError("allocate: gain vectors must be non-empty and equally sized");
    }
    for (double g : comm_gains) {
        if (g < 0.0) throw ConfigError("allocate: comm gains must be >= 0");
    }
    for (double g : sense_gains) {
        if (g < 0.0) throw ConfigError("allocate: sense gains must be >= 0");
    }
    if (!(noise_variance > 0.0)) {
        throw ConfigError("allocate: noise_variance must be > 0");
    }
    if (!(total_power > 0.0)) {
        throw ConfigError("allocate: total_power must be > 0");
    }
    if (weight_alpha < 0.0 || weight_alpha > 1.0) {
        throw ConfigError("allocate: weight_alpha must lie in [0, 1]");
    }
}

namespace {

// Marginal utility of subcarrier k at power p (natural-log units; the log2
// factor is a constant scale and cancels in the KKT comparisons).
double marginal(double a, double b, double alpha, double p) {
    return alpha * a / (1.0 + a * p) + (1.0 - alpha) * b / (1.0 + b * p);
}

// Power at which the marginal utility of one subcarrier drops to nu;
// zero if it is already below nu at p = 0.
double power_for_level(double a, double b, double alpha, double nu, double p_hi) {
    if (marginal(a, b, alpha, 0.0) <= nu) return 0.0;
    if (marginal(a, b, alpha, p_hi) >= nu) return p_hi;
    double lo = 0.0, hi = p_hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (marginal(a, b, alpha, mid) > nu) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<double> allocate_power(const AllocationProblem& p) {
    p.validate();
    const std::size_t n = p.comm_gains.size();
    const double alpha = p.weight_alpha;

    std::vector<double> a(n), b(n);
    double nu_hi = 0.0;
    bool any_active = false;
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = p.comm_gains[k] / p.noise_variance;
        b[k] = p.sense_gains[k] / p.noise_variance;
        const double m0 = marginal(a[k], b[k], alpha, 0.0);
        nu_hi = std::max(nu_hi, m0);
        if (m0 > 0.0) any_active = true;
    }
    if (!any_active) {
        throw ConfigError("allocate: all effective gains are zero, the objective is flat");
    }

    // The per-subcarrier water level never needs more than the full budget.
    const double p_cap = p.total_power;
    auto total_at = [&](double nu) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            sum += power_for_level(a[k], b[k], alpha, nu, p_cap);
        }
        return sum;
    };

    // total_at(0) = cap * n_active >= total_power, total_at(nu_hi) = 0, and
    // the sum is monotone in nu, so the bisection bracket is always valid.
    double hi = nu_hi;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (total_at(mid) > p.total_power) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double nu = 0.5 * (lo + hi);

    std::vector<double> out(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = power_for_level(a[k], b[k], alpha, nu, p_cap);
        sum += out[k];
    }
    // Distribute the residual bisection slack over the active set.
    const double residual = p.total_power - sum;
    if (sum > 0.0 && std::abs(residual) > 0.0) {
        const double scale = p.total_power / sum;
        for (double& v : out) v *= scale;
    }
    return out;
}

} // namespace oisac

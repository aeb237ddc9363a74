#pragma once

#include <vector>

#include "oisac/types.hpp"

namespace oisac {

/// Weighted two-objective rate allocation across subcarriers:
/// maximize sum_k [ alpha log2(1 + p_k g_c[k] / sigma^2)
///                + (1 - alpha) log2(1 + p_k g_s[k] / sigma^2) ]
/// subject to sum p_k = total_power, p_k >= 0.
struct AllocationProblem {
    std::vector<double> comm_gains;  // g_c[k] >= 0
    std::vector<double> sense_gains; // g_s[k] >= 0
    double noise_variance = 1.0;
    double total_power = 1.0;
    double weight_alpha = 0.5; // alpha in [0, 1]

    void validate() const;
};

/// KKT point of the concave program above, found by bisection on the dual
/// variable. Powers sum to total_power within 1e-6 relative.
std::vector<double> allocate_power(const AllocationProblem& p);

} // namespace oisac

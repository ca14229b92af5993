#pragma once

#include "rsnn/topology.hpp"

#include <optional>
#include <vector>

namespace rsnn {

// Mean-field threshold-linear reduction of the spiking network:
//   tau * dnu/dt = -nu + phi(alpha * A * nu + bias + input),
//   phi(x) = gain * max(x, 0) per unit.
// Serves as an independent fixed-point and critical-gain oracle.
struct RateModel {
    double time_constant_ms = 20.0;
    double gain = 1.0; // activation slope
    AdjacencyMatrix adjacency;
    double alpha = 0.0;
    std::vector<double> bias;  // per-unit background drive
    std::vector<double> input; // per-unit external drive

    void validate() const;
    int size() const { return adjacency.n; }
};

std::vector<double> rate_dynamics_step(const std::vector<double>& state,
                                       const RateModel& model, double dt_ms);

struct FixedPointResult {
    std::vector<std::vector<double>> fixed_points; // duplicates merged
    std::vector<int> unconverged;                  // indices of failed ICs
};

// Damped fixed-point iteration nu += gamma * (phi(...) - nu) from each
// initial condition; exact fixed points are preserved bit-for-bit.
FixedPointResult find_fixed_points(const RateModel& model,
                                   const std::vector<std::vector<double>>& initial_conditions,
                                   double damping = 0.2, int max_iterations = 200000);

// Loop-gain-one condition at the interior symmetric fixed point:
// alpha* = 1 / (gain * lambda_max). Empty when units sit on the activation
// kink there (no closed form).
std::optional<double> predict_critical_alpha(const RateModel& model);

// Centered projection of a rate vector onto v/||v||, the same reduction the
// empirical diagram uses.
double centered_projection(const std::vector<double>& rates,
                           const std::vector<int>& v);

} // namespace rsnn

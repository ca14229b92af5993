#pragma once

#include "rsnn/engine.hpp"
#include "rsnn/topology.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rsnn {

// Per-neuron firing rates on a uniform sample grid, causal sliding window.
struct RateTrace {
    std::vector<double> times_ms;
    std::vector<std::vector<double>> rates_hz; // [sample][neuron]
    double window_ms = 100.0;

    int num_neurons() const {
        return rates_hz.empty() ? 0 : static_cast<int>(rates_hz.front().size());
    }
};

struct AlignmentTrace {
    std::vector<double> times_ms;
    std::vector<std::vector<double>> rho; // [sample][output index], |rho| <= 1
};

struct BifurcationPoint {
    double alpha = 0.0;
    std::string initial_condition; // "A", "B" or "background"
    std::uint64_t seed = 0;
    double projection_hz = 0.0;
    bool valid = true;
    std::string diagnostic; // set when a run aborted
};

struct BifurcationDiagram {
    std::vector<BifurcationPoint> points;
};

RateTrace estimate_rates(const SpikeRecord& record, double window_ms,
                         double step_ms);

// rho = (v_out/||v_out||) . ((nu - mean(nu))/||nu||); a silent network has
// alignment 0 by definition.
double alignment_index(const std::vector<double>& rates_hz,
                       const std::vector<double>& output_vector);

// Alignment traces against the four canonical outputs +v, -v, +v_perp,
// -v_perp.
AlignmentTrace alignment_traces(const RateTrace& rates,
                                const std::vector<std::vector<double>>& outputs);

// Mean rate vector over [start, end], centered, projected onto v/||v||.
double steady_state_projection(const SpikeRecord& record, const SignVector& v,
                               double window_start_ms, double window_end_ms,
                               double earliest_allowed_ms = 0.0);

// One bifurcation run: given (alpha, ic label, seed), produce a steady-state
// projection. Supplied by the experiment layer; kept abstract here so sweeps
// can be driven by the spiking engine or by the rate model alike.
using SweepRunner = std::function<double(double alpha, const std::string& ic,
                                         std::uint64_t seed)>;

BifurcationDiagram bifurcation_sweep(const std::vector<double>& alphas,
                                     const std::vector<std::string>& ics,
                                     const std::vector<std::uint64_t>& seeds,
                                     const SweepRunner& runner,
                                     int num_workers = 1);

struct CriticalAlpha {
    double alpha_star = 0.0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    double noise_sigma = 0.0; // background-IC std near the detection point
};

// Smallest grid alpha where the A/B branch separation exceeds 5x the
// background-IC standard deviation at that alpha.
std::optional<CriticalAlpha> detect_critical_alpha(const BifurcationDiagram& diagram);

// True per stimulus iff |rho| stays above threshold for the whole hold
// window after the stimulus offset.
std::vector<bool> persistence_check(const AlignmentTrace& alignment,
                                    int output_index,
                                    const std::vector<double>& stimulus_offsets_ms,
                                    double hold_ms, double threshold);

} // namespace rsnn

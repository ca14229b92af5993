#pragma once

#include "rsnn/analysis.hpp"
#include "rsnn/config.hpp"
#include "rsnn/rate_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rsnn {

// f-I calibration of the spiking neuron at the background operating point.
struct GainCalibration {
    double basal_rate_hz = 0.0;
    double slope_hz_per_unit = 0.0; // Hz per current-equivalent
    double gain = 0.0;              // dimensionless loop gain per presyn Hz
    double predicted_alpha_star = 0.0;
};

GainCalibration calibrate_gain(const ExperimentConfig& cfg);

// Steady-state projection for one sweep run; used by the bifurcation driver.
double sweep_projection(const ExperimentConfig& cfg, double alpha,
                        const std::string& ic, std::uint64_t seed);

struct ExperimentOutputs {
    std::vector<std::string> files; // paths written, relative to output_dir
    // sweep results, when applicable
    std::optional<CriticalAlpha> critical;
    std::optional<GainCalibration> calibration;
};

// Run the configured experiment and write spike records, CSVs, SVGs and a
// manifest into cfg.output_dir.
ExperimentOutputs run_experiment(const ExperimentConfig& cfg, int num_workers = 1);

// Assemble the stimulus schedule (mixed-feedback kinds) and derived duration.
StimulusSchedule build_protocol_schedule(const ExperimentConfig& cfg);
double derive_duration(const ExperimentConfig& cfg);

// Per-cluster input rates for the swta bump stimulus.
std::vector<double> swta_input_rates(const ExperimentConfig& cfg);

// Realized input streams for the swta run (bump-driven excitatory clusters
// plus background everywhere).
InputStreams build_swta_streams(const ExperimentConfig& cfg, int num_neurons,
                                double duration_ms);

} // namespace rsnn

#pragma once

#include "rsnn/engine.hpp"
#include "rsnn/stimulus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rsnn {

enum class ExperimentKind { mixed_feedback, swta, bifurcation_sweep };

// one Gaussian-profile input bump over cluster index
struct InputBump {
    double center = 0.0;   // cluster index
    double width = 1.0;    // gaussian sigma, clusters
    double peak_rate_hz = 0.0;
};

struct SweepSection {
    std::vector<double> alphas;
    std::vector<std::uint64_t> seeds;
    double stim_rate_hz = 200.0;
    double stim_duration_ms = 300.0;
    double warmup_ms = 300.0;
    double settle_ms = 500.0;
    double measure_ms = 500.0;
    // f-I calibration probe for the rate-model prediction
    double calibration_delta = 2.0;       // DC offset, current-equivalent
    double calibration_duration_ms = 4000.0;
    int calibration_seeds = 3;
};

struct AnalysisSection {
    double rate_window_ms = 100.0;
    double rate_step_ms = 10.0;
    double measure_start_ms = 0.0; // swta: steady-state window
    double measure_end_ms = 0.0;
};

struct StimulusSection {
    // mixed-feedback protocol
    std::vector<SequenceItem> sequence; // symbols resolved against the sign vector
    double gap_ms = 300.0;
    double warmup_ms = 300.0;
    double tail_ms = 300.0;
    double input_weight = 1.0;
    BackgroundSpec background;
    // swta protocol
    std::vector<InputBump> bumps;
    double stimulus_ms = 2000.0;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::mixed_feedback;
    NetworkSpec network;            // includes neuron/synapse params
    double alpha = 0.0;             // run gain (mixed-feedback, swta)
    StimulusSection stimulus;
    SimulationConfig simulation;    // duration may be derived from the protocol
    bool explicit_duration = false;
    AnalysisSection analysis;
    SweepSection sweep;
    std::string output_dir = "out";

    std::string canonical_text;     // config file bytes, for hashing
    std::uint64_t config_hash = 0;
};

struct ConfigViolation {
    std::string where;   // dotted path
    std::string message;
    int line = 0;        // best-effort line in the file, 0 if unknown
};

// Full static validation; returns every violation found.
std::vector<ConfigViolation> validate_config_text(const std::string& text,
                                                  ExperimentConfig* parsed = nullptr);

// Load + validate; throws ConfigError carrying the first violation.
ExperimentConfig load_config_file(const std::string& path);
std::vector<ConfigViolation> validate_config_file(const std::string& path,
                                                  ExperimentConfig* parsed = nullptr);

const char* experiment_kind_name(ExperimentKind kind);

} // namespace rsnn

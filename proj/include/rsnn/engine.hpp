#pragma once

#include "rsnn/stimulus.hpp"
#include "rsnn/topology.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rsnn {

struct SimulationConfig {
    double dt_ms = 0.1;
    double duration_ms = 1000.0;
    std::uint64_t seed = 1;
    double mismatch_cv = 0.0;
    bool record_state = false;
    double synaptic_delay_ms = 1.0;

    void validate() const;
    std::uint64_t digest() const;
};

struct SpikeEvent {
    double time_ms;
    int neuron;
};

struct SpikeRecord {
    std::vector<SpikeEvent> events; // sorted by time, ties by neuron index
    int num_neurons = 0;
    double duration_ms = 0.0;
    SimulationConfig config;      // snapshot of the run
    std::uint64_t network_hash = 0;

    std::uint64_t hash() const;
};

// Membrane potentials sampled on a coarse grid (only when record_state).
struct StateTrace {
    double sample_step_ms = 1.0;
    std::vector<double> times_ms;
    std::vector<std::vector<double>> membrane; // [sample][neuron]
};

struct SimulationResult {
    SpikeRecord record;
    std::optional<StateTrace> trace;
};

// The parallel mode runs the per-neuron inner loops under OpenMP; per-neuron
// arithmetic and accumulation order are identical to the serial kernel, so
// both modes produce byte-identical records.
enum class ExecMode { serial, parallel };

std::uint64_t network_hash(const WeightedNetwork& network);

// Clock-driven simulation: external spikes land on their step, recurrent
// spikes are fed back after synaptic_delay_ms, every neuron advances one dt
// per step. Fully deterministic given (network, streams, config).
SimulationResult simulate(const WeightedNetwork& network,
                          const InputStreams& streams,
                          const SimulationConfig& config,
                          ExecMode mode = ExecMode::serial);

SimulationResult simulate(const WeightedNetwork& network,
                          const StimulusSchedule& schedule,
                          const SimulationConfig& config,
                          ExecMode mode = ExecMode::serial,
                          double stimulus_weight = 0.0);

// Recipe that fixes everything about a network except its gain.
struct NetworkSpec {
    enum class Kind { mixed_feedback, swta };
    Kind kind = Kind::mixed_feedback;
    SignVector sign_vector;   // mixed feedback
    double unit_weight = 1.0; // mixed feedback
    SWTAConfig swta;          // swta; gain_alpha is overridden per run
    NeuronParams neuron;
    SynapseParams synapse;

    WeightedNetwork build(double alpha) const;
};

SimulationResult run_with_alpha(const NetworkSpec& spec, double alpha,
                                const StimulusSchedule& schedule,
                                const SimulationConfig& config,
                                ExecMode mode = ExecMode::serial,
                                double stimulus_weight = 0.0);

} // namespace rsnn

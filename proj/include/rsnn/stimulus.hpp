#pragma once

#include "rsnn/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rsnn {

// A symbol is a ±1 pattern over the network; sign +1 routes the spike train
// through an excitatory synapse, -1 through an inhibitory one.
struct SymbolPattern {
    std::string name;
    std::vector<int> signs; // entries in {-1, +1}

    void validate() const;
};

struct StimulusEvent {
    SymbolPattern pattern;
    double rate_hz = 0.0;
    double onset_ms = 0.0;
    double duration_ms = 0.0;
};

// Timed symbol presentations plus background drive for the whole run.
// Background has a stochastic part (independent Poisson train per neuron at
// background_rate_hz through background_weight) and a DC part added to every
// neuron's input current.
struct StimulusSchedule {
    std::vector<StimulusEvent> events; // sorted by onset, non-overlapping
    double background_rate_hz = 0.0;
    double background_weight = 0.0;
    double background_dc = 0.0;

    void validate() const;
};

// Homogeneous Poisson process on [start, start+duration); strictly
// increasing times, deterministic per rng stream.
std::vector<double> generate_poisson_train(double rate_hz, double start_ms,
                                           double duration_ms, Rng& rng);

// Per-neuron channel assignment for one symbol presentation.
struct ChannelAssignment {
    double rate_hz = 0.0;
    std::vector<int> signs;
};

ChannelAssignment encode_symbol(const SymbolPattern& pattern, double rate_hz);

struct SequenceItem {
    SymbolPattern symbol;
    double rate_hz = 0.0;
    double duration_ms = 0.0;
    // explicit placement; items without it follow the previous event
    std::optional<double> onset_ms;
};

struct BackgroundSpec {
    double rate_hz = 0.0;
    double weight = 0.0;
    double dc = 0.0;
};

// Lay the items out back to back with the given inter-stimulus gap, first
// onset at start_ms.
StimulusSchedule build_schedule(const std::vector<SequenceItem>& sequence,
                                double gap_ms, const BackgroundSpec& background,
                                double start_ms = 0.0);

// Realized input: per-neuron sorted spike/weight streams plus DC drive.
struct InputSpike {
    double time_ms;
    double weight;
};

struct InputStreams {
    std::vector<std::vector<InputSpike>> per_neuron;
    double dc = 0.0;
};

// Expand a schedule into concrete spike streams for num_neurons neurons over
// [0, duration). Streams are keyed by (seed, event index, neuron index +
// neuron_index_base), so expansion order and threading cannot change them.
// stimulus_weight scales the per-spike magnitude of symbol inputs.
InputStreams expand_schedule(const StimulusSchedule& schedule, int num_neurons,
                             double duration_ms, double stimulus_weight,
                             std::uint64_t seed,
                             std::uint64_t neuron_index_base = 0);

} // namespace rsnn

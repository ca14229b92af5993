#pragma once

#include "rsnn/rng.hpp"

namespace rsnn {

// Adaptive-exponential integrate-and-fire. Currents are kept in
// voltage-equivalent units (membrane resistance folded in), so a constant
// input of x mV shifts the subthreshold equilibrium by x mV.
struct NeuronParams {
    double membrane_time_constant = 20.0; // ms
    double resting_potential = -70.0;     // mV
    double spike_threshold = -50.0;       // mV
    double reset_potential = -60.0;       // mV
    double refractory_period = 2.0;       // ms
    double exp_slope = 2.0;               // mV; 0 disables the exponential term
    double adaptation_increment = 0.0;    // per spike, current-equivalent
    double adaptation_time_constant = 100.0; // ms
    double adaptation_coupling = 0.0;     // subthreshold adaptation strength

    void validate() const;
};

struct NeuronState {
    double membrane_potential = -70.0;  // mV
    double adaptation_variable = 0.0;   // current-equivalent
    double refractory_remaining = 0.0;  // ms
    double exc_synaptic_current = 0.0;  // current-equivalent, >= 0
    double inh_synaptic_current = 0.0;  // current-equivalent, >= 0

    bool finite() const;
};

struct SynapseParams {
    double exc_time_constant = 5.0; // ms
    double inh_time_constant = 5.0; // ms
    double unit_weight = 1.0;       // current-equivalent per spike

    void validate() const;
};

NeuronState resting_state(const NeuronParams& params);

// Per-step filter decay constants; hoisted so tight loops do not recompute
// the exponentials.
struct SynapseDecayFactors {
    double exc = 1.0;
    double inh = 1.0;
};

SynapseDecayFactors synapse_decay_factors(const SynapseParams& synapse, double dt);

// One fixed-step update. Synaptic filters decay with exact exponential
// factors; membrane and adaptation use forward Euler. On threshold crossing
// the membrane is reset, the adaptation variable jumps by
// adaptation_increment and the refractory clock starts.
bool integrate_step(NeuronState& state, const NeuronParams& params,
                    const SynapseParams& synapse, double external_current,
                    double dt);

bool integrate_step(NeuronState& state, const NeuronParams& params,
                    const SynapseDecayFactors& decay, double external_current,
                    double dt);

// Deliver one input spike: positive weights drive the excitatory filter,
// negative ones the inhibitory filter. Net drive is exc - inh.
void apply_input_spike(NeuronState& state, double weight);

// Multiplicative truncated-Gaussian jitter (mean 1, given CV, clipped to
// [0.5, 1.5]) applied per parameter. Voltages are jittered through their
// distance from rest so threshold ordering survives.
NeuronParams apply_mismatch(const NeuronParams& params,
                            double coefficient_of_variation, Rng& rng);

} // namespace rsnn

#include "rsnn/neuron.hpp"

#include "rsnn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rsnn {

void NeuronParams::validate() const {
    const bool finite = std::isfinite(membrane_time_constant) &&
                        std::isfinite(resting_potential) &&
                        std::isfinite(spike_threshold) &&
                        std::isfinite(reset_potential) &&
                        std::isfinite(refractory_period) &&
                        std::isfinite(exp_slope) &&
                        std::isfinite(adaptation_increment) &&
                        std::isfinite(adaptation_time_constant) &&
                        std::isfinite(adaptation_coupling);
    if (!finite)
        throw NumericalError("neuron params contain non-finite values");
    if (membrane_time_constant <= 0.0)
        throw ParameterError("membrane_time_constant must be > 0");
    if (adaptation_time_constant <= 0.0)
        throw ParameterError("adaptation_time_constant must be > 0");
    if (!(spike_threshold > resting_potential))
        throw ParameterError("spike_threshold must exceed resting_potential");
    if (!(reset_potential <= spike_threshold))
        throw ParameterError("reset_potential must not exceed spike_threshold");
    if (refractory_period < 0.0)
        throw ParameterError("refractory_period must be >= 0");
    if (exp_slope < 0.0)
        throw ParameterError("exp_slope must be >= 0");
}

bool NeuronState::finite() const {
    return std::isfinite(membrane_potential) && std::isfinite(adaptation_variable) &&
           std::isfinite(refractory_remaining) && std::isfinite(exc_synaptic_current) &&
           std::isfinite(inh_synaptic_current);
}

void SynapseParams::validate() const {
    if (exc_time_constant <= 0.0 || inh_time_constant <= 0.0)
        throw ParameterError("synaptic time constants must be > 0");
    if (unit_weight <= 0.0)
        throw ParameterError("unit_weight must be > 0");
}

NeuronState resting_state(const NeuronParams& params) {
    NeuronState s;
    s.membrane_potential = params.resting_potential;
    return s;
}

SynapseDecayFactors synapse_decay_factors(const SynapseParams& synapse, double dt) {
    synapse.validate();
    if (dt <= 0.0)
        throw ParameterError("dt must be > 0");
    return {std::exp(-dt / synapse.exc_time_constant),
            std::exp(-dt / synapse.inh_time_constant)};
}

bool integrate_step(NeuronState& state, const NeuronParams& params,
                    const SynapseParams& synapse, double external_current,
                    double dt) {
    return integrate_step(state, params, synapse_decay_factors(synapse, dt),
                          external_current, dt);
}

bool integrate_step(NeuronState& state, const NeuronParams& params,
                    const SynapseDecayFactors& decay, double external_current,
                    double dt) {
    if (dt <= 0.0)
        throw ParameterError("dt must be > 0");
    if (!state.finite() || !std::isfinite(external_current))
        throw NumericalError("non-finite neuron state or input");

    const double syn_drive = state.exc_synaptic_current - state.inh_synaptic_current;
    bool spiked = false;

    if (state.refractory_remaining > 0.0) {
        state.membrane_potential = params.reset_potential;
        state.refractory_remaining = std::max(0.0, state.refractory_remaining - dt);
    } else {
        const double v = state.membrane_potential;
        double exp_term = 0.0;
        if (params.exp_slope > 0.0) {
            // clamp at threshold so the term stays bounded by exp_slope
            const double arg = (std::min(v, params.spike_threshold) -
                                params.spike_threshold) / params.exp_slope;
            exp_term = params.exp_slope * std::exp(arg);
        }
        const double dv = (-(v - params.resting_potential) + exp_term + syn_drive +
                           external_current - state.adaptation_variable) /
                          params.membrane_time_constant;
        const double dw = (params.adaptation_coupling * (v - params.resting_potential) -
                           state.adaptation_variable) / params.adaptation_time_constant;
        state.membrane_potential = v + dt * dv;
        state.adaptation_variable += dt * dw;

        if (state.membrane_potential >= params.spike_threshold) {
            spiked = true;
            state.membrane_potential = params.reset_potential;
            state.adaptation_variable += params.adaptation_increment;
            state.refractory_remaining = params.refractory_period;
        }
    }

    state.exc_synaptic_current *= decay.exc;
    state.inh_synaptic_current *= decay.inh;

    if (!state.finite())
        throw NumericalError("neuron state became non-finite");
    return spiked;
}

void apply_input_spike(NeuronState& state, double weight) {
    if (!std::isfinite(weight))
        throw NumericalError("non-finite spike weight");
    if (weight > 0.0)
        state.exc_synaptic_current += weight;
    else if (weight < 0.0)
        state.inh_synaptic_current += -weight;
}

namespace {

double truncated_gauss_factor(Rng& rng, double cv) {
    for (;;) {
        const double f = rng.normal(1.0, cv);
        if (f >= 0.5 && f <= 1.5) return f;
    }
}

} // namespace

NeuronParams apply_mismatch(const NeuronParams& params,
                            double coefficient_of_variation, Rng& rng) {
    if (!(coefficient_of_variation >= 0.0) || coefficient_of_variation >= 0.5)
        throw ParameterError("coefficient_of_variation must lie in [0, 0.5)");
    params.validate();
    if (coefficient_of_variation == 0.0) return params;

    const double cv = coefficient_of_variation;
    NeuronParams out = params;
    out.membrane_time_constant *= truncated_gauss_factor(rng, cv);
    // jitter voltages through their offsets from rest, not absolute values
    const double thresh_gap = params.spike_threshold - params.resting_potential;
    const double reset_gap = params.reset_potential - params.resting_potential;
    out.spike_threshold =
        params.resting_potential + thresh_gap * truncated_gauss_factor(rng, cv);
    out.reset_potential =
        params.resting_potential + reset_gap * truncated_gauss_factor(rng, cv);
    out.reset_potential = std::min(out.reset_potential, out.spike_threshold);
    out.refractory_period *= truncated_gauss_factor(rng, cv);
    if (params.exp_slope > 0.0)
        out.exp_slope = params.exp_slope * truncated_gauss_factor(rng, cv);
    out.adaptation_increment *= truncated_gauss_factor(rng, cv);
    out.adaptation_time_constant *= truncated_gauss_factor(rng, cv);
    out.adaptation_coupling *= truncated_gauss_factor(rng, cv);
    out.validate();
    return out;
}

} // namespace rsnn

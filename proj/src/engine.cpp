#include "rsnn/engine.hpp"

#include "rsnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rsnn {

void SimulationConfig::validate() const {
    if (dt_ms <= 0.0)
        throw ParameterError("dt must be > 0");
    if (duration_ms <= 0.0)
        throw ParameterError("duration must be > 0");
    if (synaptic_delay_ms < dt_ms)
        throw ParameterError("synaptic_delay must be >= dt");
    if (!(mismatch_cv >= 0.0) || mismatch_cv >= 0.5)
        throw ParameterError("mismatch_cv must lie in [0, 0.5)");
}

namespace {

void hash_doubles(std::uint64_t& h, const double* p, std::size_t count) {
    h = fnv1a(p, count * sizeof(double), h);
}

} // namespace

std::uint64_t SimulationConfig::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    const double fields[] = {dt_ms, duration_ms, static_cast<double>(seed),
                             mismatch_cv, record_state ? 1.0 : 0.0,
                             synaptic_delay_ms};
    hash_doubles(h, fields, 6);
    return h;
}

std::uint64_t SpikeRecord::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& e : events) {
        hash_doubles(h, &e.time_ms, 1);
        h = fnv1a(&e.neuron, sizeof(e.neuron), h);
    }
    h = fnv1a(&num_neurons, sizeof(num_neurons), h);
    return h;
}

std::uint64_t network_hash(const WeightedNetwork& network) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    h = fnv1a(&network.n, sizeof(network.n), h);
    hash_doubles(h, network.weights.data(), network.weights.size());
    h = fnv1a(network.roles.data(), network.roles.size(), h);
    const double syn[] = {network.synapse.exc_time_constant,
                          network.synapse.inh_time_constant,
                          network.synapse.unit_weight};
    hash_doubles(h, syn, 3);
    return h;
}

namespace {

struct StepFailure {
    bool failed = false;
    int neuron = -1;
    double time_ms = 0.0;
    std::string what;
};

struct NeuronFailure {
    int neuron;
    std::string what;
};

} // namespace

SimulationResult simulate(const WeightedNetwork& network,
                          const InputStreams& streams,
                          const SimulationConfig& config, ExecMode mode) {
    network.validate();
    config.validate();
    const int n = network.n;
    if (static_cast<int>(streams.per_neuron.size()) != n)
        throw ParameterError("input streams do not match network size");

    const double dt = config.dt_ms;
    const long long steps = std::llround(config.duration_ms / dt);
    const int delay_steps =
        std::max<long long>(1, std::llround(config.synaptic_delay_ms / dt));

    // per-neuron parameter set, with optional device-mismatch jitter
    std::vector<NeuronParams> params = network.neuron_params;
    if (config.mismatch_cv > 0.0) {
        for (int i = 0; i < n; ++i) {
            Rng rng = make_rng(config.seed, Stream::mismatch,
                               static_cast<std::uint64_t>(i));
            params[static_cast<std::size_t>(i)] = apply_mismatch(
                params[static_cast<std::size_t>(i)], config.mismatch_cv, rng);
        }
    }

    // start each membrane at its subthreshold DC equilibrium, so a constant
    // background carries no turn-on transient and runs are time-translation
    // invariant
    std::vector<NeuronState> states(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& p = params[static_cast<std::size_t>(i)];
        NeuronState s = resting_state(p);
        double v = p.resting_potential + streams.dc;
        if (p.exp_slope > 0.0) {
            // Newton polish of -(v - rest) + slope*exp((v - theta)/slope) + dc
            for (int it = 0; it < 50 && v < p.spike_threshold; ++it) {
                const double ex = std::exp((std::min(v, p.spike_threshold) -
                                            p.spike_threshold) / p.exp_slope);
                const double f = -(v - p.resting_potential) + p.exp_slope * ex +
                                 streams.dc;
                const double df = -1.0 + ex;
                if (df >= -1e-6) { v = p.spike_threshold; break; }
                const double next = v - f / df;
                if (next == v) break;
                v = next;
            }
        }
        if (v < p.spike_threshold) s.membrane_potential = v;
        states[static_cast<std::size_t>(i)] = s;
    }

    std::vector<std::size_t> cursor(static_cast<std::size_t>(n), 0);
    // ring buffer of spiker index lists, one slot per delayed step; indices
    // ascend, which pins the per-target accumulation order
    std::vector<std::vector<int>> history(static_cast<std::size_t>(delay_steps));
    std::vector<unsigned char> spiked_now(static_cast<std::size_t>(n), 0);

    SimulationResult result;
    result.record.num_neurons = n;
    result.record.duration_ms = config.duration_ms;
    result.record.config = config;
    result.record.network_hash = network_hash(network);

    long long state_stride = 0;
    if (config.record_state) {
        state_stride = std::max<long long>(1, std::llround(1.0 / dt));
        StateTrace trace;
        trace.sample_step_ms = static_cast<double>(state_stride) * dt;
        result.trace = std::move(trace);
    }

    StepFailure failure;
    bool abort_run = false;

    const SynapseDecayFactors decay = synapse_decay_factors(network.synapse, dt);

    // weights transposed to pre-major so spike delivery streams contiguous
    // memory per source; the per-target accumulation order (ascending source
    // index) matches the row-major loop bit for bit
    std::vector<double> weights_by_pre(static_cast<std::size_t>(n) * n);
    for (int post = 0; post < n; ++post)
        for (int pre = 0; pre < n; ++pre)
            weights_by_pre[static_cast<std::size_t>(pre) * n + post] =
                network.weights[static_cast<std::size_t>(post) * n + pre];

    // targets advance in fixed-size chunks; chunk boundaries do not affect
    // any per-neuron arithmetic, only work distribution
    constexpr int kChunk = 256;
    const int num_chunks = (n + kChunk - 1) / kChunk;

    const auto advance_chunk = [&](int chunk, long long step, double t_end) {
        const int i0 = chunk * kChunk;
        const int i1 = std::min(n, i0 + kChunk);
        if (step >= delay_steps) {
            const auto& spikers = history[static_cast<std::size_t>(
                step % delay_steps)];
            for (int j : spikers) {
                const double* col = weights_by_pre.data() +
                                    static_cast<std::size_t>(j) * n;
                for (int i = i0; i < i1; ++i) {
                    const double w = col[i];
                    auto& st = states[static_cast<std::size_t>(i)];
                    if (w > 0.0)
                        st.exc_synaptic_current += w;
                    else
                        st.inh_synaptic_current -= w;
                }
            }
        }
        for (int i = i0; i < i1; ++i) {
            try {
                auto& st = states[static_cast<std::size_t>(i)];
                const auto& stream = streams.per_neuron[static_cast<std::size_t>(i)];
                std::size_t& cur = cursor[static_cast<std::size_t>(i)];
                while (cur < stream.size() && stream[cur].time_ms < t_end) {
                    apply_input_spike(st, stream[cur].weight);
                    ++cur;
                }
                const bool fired = integrate_step(st, params[static_cast<std::size_t>(i)],
                                                  decay, streams.dc, dt);
                spiked_now[static_cast<std::size_t>(i)] = fired ? 1 : 0;
            } catch (const std::exception& ex) {
                throw NeuronFailure{i, ex.what()};
            }
        }
    };

    // sequential per-step bookkeeping shared by both kernels
    const auto finish_step = [&](long long step, double t_end) {
        if (failure.failed) {
            abort_run = true;
            return;
        }
        auto& slot = history[static_cast<std::size_t>(step % delay_steps)];
        slot.clear();
        for (int i = 0; i < n; ++i) {
            if (!spiked_now[static_cast<std::size_t>(i)]) continue;
            slot.push_back(i);
            result.record.events.push_back({t_end, i});
        }
        if (config.record_state && step % state_stride == 0) {
            auto& trace = *result.trace;
            trace.times_ms.push_back(static_cast<double>(step) * dt);
            trace.membrane.emplace_back();
            auto& row = trace.membrane.back();
            row.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                row[static_cast<std::size_t>(i)] =
                    states[static_cast<std::size_t>(i)].membrane_potential;
        }
    };

    const auto record_failure = [&](int neuron, double t_end, const std::string& what) {
        if (!failure.failed || neuron < failure.neuron) {
            failure.failed = true;
            failure.neuron = neuron;
            failure.time_ms = t_end;
            failure.what = what;
        }
    };

#ifdef _OPENMP
    if (mode == ExecMode::parallel) {
        // one persistent team; worksharing per step with implicit barriers
#pragma omp parallel
        {
            for (long long step = 0; step < steps; ++step) {
                const double t_end = static_cast<double>(step + 1) * dt;
#pragma omp for schedule(static)
                for (int c = 0; c < num_chunks; ++c) {
                    try {
                        advance_chunk(c, step, t_end);
                    } catch (const NeuronFailure& nf) {
#pragma omp critical
                        record_failure(nf.neuron, t_end, nf.what);
                    }
                }
#pragma omp single
                finish_step(step, t_end);
                // implicit barrier: every thread sees a consistent abort flag
                if (abort_run) break;
            }
        }
    } else
#endif
    {
        for (long long step = 0; step < steps && !abort_run; ++step) {
            const double t_end = static_cast<double>(step + 1) * dt;
            for (int c = 0; c < num_chunks; ++c) {
                try {
                    advance_chunk(c, step, t_end);
                } catch (const NeuronFailure& nf) {
                    record_failure(nf.neuron, t_end, nf.what);
                    break;
                }
            }
            finish_step(step, t_end);
        }
    }
    if (failure.failed)
        throw NumericalError(
            "simulation aborted at t=" + std::to_string(failure.time_ms) +
            " ms, neuron " + std::to_string(failure.neuron) + ": " + failure.what);
    return result;
}

SimulationResult simulate(const WeightedNetwork& network,
                          const StimulusSchedule& schedule,
                          const SimulationConfig& config, ExecMode mode,
                          double stimulus_weight) {
    config.validate();
    const double w = stimulus_weight != 0.0 ? stimulus_weight
                                            : network.synapse.unit_weight;
    const InputStreams streams = expand_schedule(
        schedule, network.n, config.duration_ms, w, config.seed);
    return simulate(network, streams, config, mode);
}

WeightedNetwork NetworkSpec::build(double alpha) const {
    if (kind == Kind::mixed_feedback) {
        const AdjacencyMatrix A = build_mixed_feedback_adjacency(sign_vector);
        return scale_network(A, alpha, unit_weight, neuron, synapse);
    }
    SWTAConfig cfg = swta;
    cfg.gain_alpha = alpha;
    return build_swta(cfg, neuron, synapse);
}

SimulationResult run_with_alpha(const NetworkSpec& spec, double alpha,
                                const StimulusSchedule& schedule,
                                const SimulationConfig& config, ExecMode mode,
                                double stimulus_weight) {
    if (alpha < 0.0)
        throw ParameterError("alpha must be >= 0");
    return simulate(spec.build(alpha), schedule, config, mode, stimulus_weight);
}

} // namespace rsnn

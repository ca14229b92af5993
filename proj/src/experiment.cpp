#include "rsnn/experiment.hpp"

#include "rsnn/errors.hpp"
#include "rsnn/io.hpp"
#include "rsnn/svg_plot.hpp"

#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

namespace rsnn {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
    return buf;
}

double rate_in_window(const SpikeRecord& record, double start_ms, double end_ms) {
    std::size_t count = 0;
    for (const auto& e : record.events)
        if (e.time_ms > start_ms && e.time_ms <= end_ms) ++count;
    return static_cast<double>(count) / (end_ms - start_ms) * 1000.0 /
           std::max(record.num_neurons, 1);
}

WeightedNetwork single_probe_neuron(const ExperimentConfig& cfg) {
    WeightedNetwork net;
    net.n = 1;
    net.weights = {0.0};
    net.neuron_params = {cfg.network.neuron};
    net.roles = {NeuronRole::excitatory};
    net.synapse = cfg.network.synapse;
    return net;
}

} // namespace

GainCalibration calibrate_gain(const ExperimentConfig& cfg) {
    const SweepSection& sw = cfg.sweep;
    const WeightedNetwork probe = single_probe_neuron(cfg);
    const double warmup = 500.0;
    const double duration = warmup + sw.calibration_duration_ms;

    const auto measure = [&](double dc_offset) {
        double acc = 0.0;
        for (int s = 0; s < sw.calibration_seeds; ++s) {
            StimulusSchedule sched;
            sched.background_rate_hz = cfg.stimulus.background.rate_hz;
            sched.background_weight = cfg.stimulus.background.weight;
            sched.background_dc = cfg.stimulus.background.dc + dc_offset;
            SimulationConfig sim = cfg.simulation;
            sim.duration_ms = duration;
            sim.seed = derive_seed(cfg.simulation.seed, Stream::generic,
                                   0xca11b, static_cast<std::uint64_t>(s));
            sim.record_state = false;
            const auto result =
                simulate(probe, sched, sim, ExecMode::serial, cfg.stimulus.input_weight);
            acc += rate_in_window(result.record, warmup, duration);
        }
        return acc / sw.calibration_seeds;
    };

    GainCalibration out;
    out.basal_rate_hz = measure(0.0);
    const double hi = measure(sw.calibration_delta);
    const double lo = measure(-sw.calibration_delta);
    out.slope_hz_per_unit = (hi - lo) / (2.0 * sw.calibration_delta);

    // one unit of presynaptic rate through one unit of matrix weight
    // contributes unit_weight * tau_exc / 1000 current-equivalents
    const double drive_per_hz =
        cfg.network.unit_weight * cfg.network.synapse.exc_time_constant / 1000.0;
    out.gain = out.slope_hz_per_unit * drive_per_hz;

    const EigenPair eig =
        dominant_eigenpair(build_mixed_feedback_adjacency(cfg.network.sign_vector));
    if (out.gain > 0.0 && eig.eigenvalue > 0.0)
        out.predicted_alpha_star = 1.0 / (out.gain * eig.eigenvalue);
    return out;
}

StimulusSchedule build_protocol_schedule(const ExperimentConfig& cfg) {
    return build_schedule(cfg.stimulus.sequence, cfg.stimulus.gap_ms,
                          cfg.stimulus.background, cfg.stimulus.warmup_ms);
}

double derive_duration(const ExperimentConfig& cfg) {
    if (cfg.explicit_duration) return cfg.simulation.duration_ms;
    if (cfg.kind == ExperimentKind::swta)
        return cfg.stimulus.warmup_ms + cfg.stimulus.stimulus_ms + cfg.stimulus.tail_ms;
    double end = cfg.stimulus.warmup_ms;
    const StimulusSchedule sched = build_protocol_schedule(cfg);
    if (!sched.events.empty())
        end = sched.events.back().onset_ms + sched.events.back().duration_ms;
    return end + cfg.stimulus.tail_ms;
}

std::vector<double> swta_input_rates(const ExperimentConfig& cfg) {
    const int clusters = cfg.network.swta.num_clusters;
    std::vector<double> rates(static_cast<std::size_t>(clusters), 0.0);
    for (int c = 0; c < clusters; ++c) {
        double r = 0.0;
        for (const auto& bump : cfg.stimulus.bumps) {
            const double d = (static_cast<double>(c) - bump.center) / bump.width;
            r += bump.peak_rate_hz * std::exp(-0.5 * d * d);
        }
        rates[static_cast<std::size_t>(c)] = r;
    }
    return rates;
}

InputStreams build_swta_streams(const ExperimentConfig& cfg, int num_neurons,
                                double duration_ms) {
    InputStreams streams;
    streams.per_neuron.resize(static_cast<std::size_t>(num_neurons));
    streams.dc = cfg.stimulus.background.dc;

    const std::uint64_t seed = cfg.simulation.seed;
    const auto rates = swta_input_rates(cfg);
    const int per_cluster = cfg.network.swta.neurons_per_cluster;
    const int ne = cfg.network.swta.num_clusters * per_cluster;
    const double t0 = cfg.stimulus.warmup_ms;
    const double dur = cfg.stimulus.stimulus_ms;

    for (int i = 0; i < num_neurons; ++i) {
        auto& dest = streams.per_neuron[static_cast<std::size_t>(i)];
        if (cfg.stimulus.background.rate_hz > 0.0 &&
            cfg.stimulus.background.weight != 0.0) {
            Rng rng = make_rng(seed, Stream::background, static_cast<std::uint64_t>(i));
            for (double t : generate_poisson_train(cfg.stimulus.background.rate_hz,
                                                   0.0, duration_ms, rng))
                dest.push_back({t, cfg.stimulus.background.weight});
        }
        if (i < ne) {
            const double rate = rates[static_cast<std::size_t>(i / per_cluster)];
            if (rate > 0.0 && t0 < duration_ms) {
                Rng rng = make_rng(seed, Stream::stimulus, 0,
                                   static_cast<std::uint64_t>(i));
                for (double t : generate_poisson_train(rate, t0, dur, rng))
                    if (t < duration_ms)
                        dest.push_back({t, cfg.stimulus.input_weight});
            }
        }
        std::sort(dest.begin(), dest.end(), [](const InputSpike& a, const InputSpike& b) {
            return a.time_ms < b.time_ms;
        });
    }
    return streams;
}

double sweep_projection(const ExperimentConfig& cfg, double alpha,
                        const std::string& ic, std::uint64_t seed) {
    const SweepSection& sw = cfg.sweep;

    std::vector<SequenceItem> sequence;
    if (ic == "A" || ic == "B") {
        SequenceItem item;
        item.symbol.name = ic;
        item.symbol.signs = cfg.network.sign_vector.entries;
        if (ic == "B")
            for (int& s : item.symbol.signs) s = -s;
        item.rate_hz = sw.stim_rate_hz;
        item.duration_ms = sw.stim_duration_ms;
        sequence.push_back(std::move(item));
    } else if (ic != "background") {
        throw ParameterError("initial condition must be A, B or background");
    }

    const StimulusSchedule sched =
        build_schedule(sequence, 0.0, cfg.stimulus.background, sw.warmup_ms);

    const double offset = sw.warmup_ms + sw.stim_duration_ms;
    const double t_start = offset + sw.settle_ms;
    const double t_end = t_start + sw.measure_ms;

    SimulationConfig sim = cfg.simulation;
    sim.duration_ms = t_end;
    sim.seed = derive_seed(cfg.simulation.seed, Stream::generic, seed,
                           static_cast<std::uint64_t>(ic.size()));
    sim.record_state = false;

    const auto result = run_with_alpha(cfg.network, alpha, sched, sim,
                                       ExecMode::serial, cfg.stimulus.input_weight);
    return steady_state_projection(result.record, cfg.network.sign_vector, t_start,
                                   t_end, offset);
}

namespace {

namespace fs = std::filesystem;

void write_output(const std::string& dir, const std::string& name,
                  const std::string& content, ExperimentOutputs& outputs) {
    write_text_file((fs::path(dir) / name).string(), content);
    outputs.files.push_back(name);
}

std::vector<std::vector<double>> canonical_outputs(const SignVector& v) {
    std::vector<double> a(v.entries.begin(), v.entries.end());
    std::vector<double> b(a);
    for (double& x : b) x = -x;
    std::vector<double> c;
    std::vector<double> d;
    if (v.size() % 2 == 0) {
        const OrthogonalPattern p = orthogonal_sign_vector(v);
        c.assign(p.signs.begin(), p.signs.end());
        d = c;
        for (double& x : d) x = -x;
    }
    std::vector<std::vector<double>> outs{a, b};
    if (!c.empty()) {
        outs.push_back(c);
        outs.push_back(d);
    }
    return outs;
}

nlohmann::ordered_json base_manifest(const ExperimentConfig& cfg) {
    nlohmann::ordered_json m;
    m["tool"] = "rsnn";
    m["version"] = "0.1.0";
    m["format_version"] = 1;
    m["experiment"] = experiment_kind_name(cfg.kind);
    m["config_hash"] = hex64(cfg.config_hash);
    m["seed"] = cfg.simulation.seed;
    return m;
}

std::string state_trace_csv(const StateTrace& trace) {
    std::string out = "time_ms";
    const std::size_t n = trace.membrane.empty() ? 0 : trace.membrane.front().size();
    for (std::size_t i = 0; i < n; ++i) out += ",v_" + std::to_string(i);
    out += "\n";
    for (std::size_t k = 0; k < trace.times_ms.size(); ++k) {
        out += format_g9(trace.times_ms[k]);
        for (double v : trace.membrane[k]) out += "," + format_g9(v);
        out += "\n";
    }
    return out;
}

ExperimentOutputs run_mixed_feedback(const ExperimentConfig& cfg) {
    ExperimentOutputs outputs;
    const StimulusSchedule sched = build_protocol_schedule(cfg);
    SimulationConfig sim = cfg.simulation;
    sim.duration_ms = derive_duration(cfg);

    const auto result = run_with_alpha(cfg.network, cfg.alpha, sched, sim,
                                       ExecMode::parallel, cfg.stimulus.input_weight);
    write_output(cfg.output_dir, "network.txt",
                 network_to_text(cfg.network.build(cfg.alpha)), outputs);
    if (result.trace)
        write_output(cfg.output_dir, "state.csv", state_trace_csv(*result.trace),
                     outputs);

    const RateTrace rates = estimate_rates(result.record, cfg.analysis.rate_window_ms,
                                           cfg.analysis.rate_step_ms);
    const AlignmentTrace alignment =
        alignment_traces(rates, canonical_outputs(cfg.network.sign_vector));

    write_output(cfg.output_dir, "spikes.csv", spike_record_to_text(result.record),
                 outputs);
    write_output(cfg.output_dir, "rates.csv", rates_to_csv(rates), outputs);
    write_output(cfg.output_dir, "alignment.csv", alignment_to_csv(alignment), outputs);

    static const char* colors[4] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
    std::vector<ShadedInterval> shading;
    for (const auto& e : sched.events) {
        int idx = 0;
        if (e.pattern.name == "B") idx = 1;
        else if (e.pattern.name == "C") idx = 2;
        else if (e.pattern.name == "D") idx = 3;
        shading.push_back({e.onset_ms, e.onset_ms + e.duration_ms, colors[idx]});
    }
    PlotStyle style;
    style.title = "spike raster (alpha=" + format_g9(cfg.alpha) + ")";
    write_output(cfg.output_dir, "raster.svg",
                 render_raster_svg(result.record, shading, style), outputs);
    style.title = "alignment indices (alpha=" + format_g9(cfg.alpha) + ")";
    write_output(cfg.output_dir, "alignment.svg",
                 render_alignment_svg(alignment, style), outputs);

    nlohmann::ordered_json m = base_manifest(cfg);
    m["alpha"] = cfg.alpha;
    m["duration_ms"] = sim.duration_ms;
    m["network_hash"] = hex64(result.record.network_hash);
    m["spike_count"] = result.record.events.size();
    write_output(cfg.output_dir, "manifest.json", m.dump(2) + "\n", outputs);
    return outputs;
}

ExperimentOutputs run_swta(const ExperimentConfig& cfg) {
    ExperimentOutputs outputs;
    const WeightedNetwork net = cfg.network.build(cfg.alpha);
    SimulationConfig sim = cfg.simulation;
    sim.duration_ms = derive_duration(cfg);

    const InputStreams streams = build_swta_streams(cfg, net.n, sim.duration_ms);
    const auto result = simulate(net, streams, sim, ExecMode::parallel);
    write_output(cfg.output_dir, "network.txt", network_to_text(net), outputs);
    if (result.trace)
        write_output(cfg.output_dir, "state.csv", state_trace_csv(*result.trace),
                     outputs);

    const RateTrace rates = estimate_rates(result.record, cfg.analysis.rate_window_ms,
                                           cfg.analysis.rate_step_ms);

    // steady-state per-cluster output rates
    double m_start = cfg.analysis.measure_start_ms;
    double m_end = cfg.analysis.measure_end_ms;
    if (m_end <= m_start) {
        m_start = cfg.stimulus.warmup_ms + 0.25 * cfg.stimulus.stimulus_ms;
        m_end = cfg.stimulus.warmup_ms + cfg.stimulus.stimulus_ms;
    }
    const int per_cluster = cfg.network.swta.neurons_per_cluster;
    const int clusters = cfg.network.swta.num_clusters;
    std::vector<double> cluster_rates(static_cast<std::size_t>(clusters), 0.0);
    for (const auto& e : result.record.events) {
        if (e.neuron >= clusters * per_cluster) continue;
        if (e.time_ms <= m_start || e.time_ms > m_end) continue;
        cluster_rates[static_cast<std::size_t>(e.neuron / per_cluster)] += 1.0;
    }
    for (double& r : cluster_rates)
        r = r / (m_end - m_start) * 1000.0 / per_cluster;

    const auto input_rates = swta_input_rates(cfg);

    write_output(cfg.output_dir, "spikes.csv", spike_record_to_text(result.record),
                 outputs);
    write_output(cfg.output_dir, "rates.csv", rates_to_csv(rates), outputs);

    std::string profile = "cluster,input_rate_hz,output_rate_hz\n";
    for (int c = 0; c < clusters; ++c)
        profile += std::to_string(c) + "," +
                   format_g9(input_rates[static_cast<std::size_t>(c)]) + "," +
                   format_g9(cluster_rates[static_cast<std::size_t>(c)]) + "\n";
    write_output(cfg.output_dir, "profile.csv", profile, outputs);

    PlotStyle style;
    style.title = "swta raster (alpha=" + format_g9(cfg.alpha) + ")";
    write_output(cfg.output_dir, "raster.svg",
                 render_raster_svg(result.record, {}, style), outputs);
    style.title = "cluster rate profile (alpha=" + format_g9(cfg.alpha) + ")";
    write_output(cfg.output_dir, "profile.svg",
                 render_profile_svg(input_rates, cluster_rates, style), outputs);

    nlohmann::ordered_json m = base_manifest(cfg);
    m["alpha"] = cfg.alpha;
    m["duration_ms"] = sim.duration_ms;
    m["network_hash"] = hex64(result.record.network_hash);
    m["measure_window_ms"] = {m_start, m_end};
    write_output(cfg.output_dir, "manifest.json", m.dump(2) + "\n", outputs);
    return outputs;
}

ExperimentOutputs run_sweep(const ExperimentConfig& cfg, int num_workers) {
    ExperimentOutputs outputs;

    const GainCalibration calib = calibrate_gain(cfg);
    outputs.calibration = calib;

    const std::vector<std::string> ics{"A", "B", "background"};
    const SweepRunner runner = [&cfg](double alpha, const std::string& ic,
                                      std::uint64_t seed) {
        return sweep_projection(cfg, alpha, ic, seed);
    };
    const BifurcationDiagram diagram =
        bifurcation_sweep(cfg.sweep.alphas, ics, cfg.sweep.seeds, runner, num_workers);
    std::set<double> distinct(cfg.sweep.alphas.begin(), cfg.sweep.alphas.end());
    if (distinct.size() >= 5)
        outputs.critical = detect_critical_alpha(diagram);

    write_output(cfg.output_dir, "diagram.csv", diagram_to_csv(diagram), outputs);
    PlotStyle style;
    style.title = "empirical bifurcation diagram";
    write_output(cfg.output_dir, "diagram.svg", render_diagram_svg(diagram, style),
                 outputs);

    // rate-oracle diagram over the same grid, calibrated to the spiking net
    if (calib.gain > 0.0) {
        BifurcationDiagram oracle;
        RateModel model;
        model.adjacency = build_mixed_feedback_adjacency(cfg.network.sign_vector);
        model.gain = calib.gain;
        const std::size_t n = cfg.network.sign_vector.entries.size();
        model.bias.assign(n, calib.basal_rate_hz / calib.gain);
        model.input.assign(n, 0.0);
        const double level = std::max(calib.basal_rate_hz, 1.0);
        for (double alpha : cfg.sweep.alphas) {
            model.alpha = alpha;
            std::vector<double> up(n), down(n), sym(n, level);
            for (std::size_t i = 0; i < n; ++i) {
                const double dv = 0.1 * level * cfg.network.sign_vector.entries[i];
                up[i] = level + dv;
                down[i] = level - dv;
            }
            const std::vector<std::vector<double>> starts{up, down, sym};
            static const char* labels[3] = {"fp-from-A", "fp-from-B", "fp-symmetric"};
            for (int k = 0; k < 3; ++k) {
                const FixedPointResult fp = find_fixed_points(model, {starts[static_cast<std::size_t>(k)]});
                if (fp.fixed_points.empty()) continue;
                oracle.points.push_back(
                    {alpha, labels[k], 0,
                     centered_projection(fp.fixed_points.front(),
                                         cfg.network.sign_vector.entries),
                     true, ""});
            }
        }
        write_output(cfg.output_dir, "oracle_diagram.csv", diagram_to_csv(oracle),
                     outputs);
    }

    nlohmann::ordered_json m = base_manifest(cfg);
    m["alphas"] = cfg.sweep.alphas;
    m["seeds_per_point"] = cfg.sweep.seeds.size();
    m["calibration"] = {{"basal_rate_hz", calib.basal_rate_hz},
                        {"slope_hz_per_unit", calib.slope_hz_per_unit},
                        {"gain", calib.gain},
                        {"predicted_alpha_star", calib.predicted_alpha_star}};
    if (outputs.critical) {
        m["alpha_star"] = outputs.critical->alpha_star;
        m["alpha_star_band"] = {outputs.critical->band_lo, outputs.critical->band_hi};
        m["noise_sigma_hz"] = outputs.critical->noise_sigma;
    } else {
        m["alpha_star"] = nullptr;
    }
    write_output(cfg.output_dir, "manifest.json", m.dump(2) + "\n", outputs);
    return outputs;
}

} // namespace

ExperimentOutputs run_experiment(const ExperimentConfig& cfg, int num_workers) {
    std::filesystem::create_directories(cfg.output_dir);
    switch (cfg.kind) {
        case ExperimentKind::mixed_feedback: return run_mixed_feedback(cfg);
        case ExperimentKind::swta: return run_swta(cfg);
        case ExperimentKind::bifurcation_sweep: return run_sweep(cfg, num_workers);
    }
    throw ParameterError("unknown experiment kind");
}

} // namespace rsnn

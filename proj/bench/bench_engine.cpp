// Compares the serial reference engine against the OpenMP kernel on
// swta-shaped networks of increasing size and checks that both produce the
// same spike record.

#include "rsnn/engine.hpp"
#include "rsnn/stimulus.hpp"
#include "rsnn/topology.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace rsnn;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch()).count();
}

WeightedNetwork make_network(int clusters) {
    SWTAConfig cfg;
    cfg.num_clusters = clusters;
    cfg.neurons_per_cluster = 8;
    cfg.num_inhibitory = clusters * 2;
    cfg.self_excitation = 5.0;
    cfg.lateral_excitation = 1.2;
    cfg.exc_to_inh = 1.5;
    cfg.inh_to_exc = -1.5;
    cfg.gain_alpha = 0.4;
    NeuronParams neuron;
    neuron.adaptation_increment = 0.05;
    SynapseParams synapse;
    synapse.exc_time_constant = 10.0;
    synapse.inh_time_constant = 10.0;
    return build_swta(cfg, neuron, synapse);
}

double run_once(const WeightedNetwork& net, const InputStreams& streams,
                const SimulationConfig& sim, ExecMode mode, std::uint64_t& hash) {
    const double t0 = now_seconds();
    const auto result = simulate(net, streams, sim, mode);
    const double dt = now_seconds() - t0;
    hash = result.record.hash();
    return dt;
}

} // namespace

int main(int argc, char** argv) {
    double duration_ms = 500.0;
    for (int i = 1; i + 1 < argc; i += 2) {
        if (std::strcmp(argv[i], "--duration-ms") == 0)
            duration_ms = std::atof(argv[i + 1]);
#ifdef _OPENMP
        else if (std::strcmp(argv[i], "--threads") == 0)
            omp_set_num_threads(std::atoi(argv[i + 1]));
#endif
    }

#ifdef _OPENMP
    std::printf("engine benchmark: serial reference vs OpenMP kernel (%d threads), "
                "%.0f ms simulated\n", omp_get_max_threads(), duration_ms);
#else
    std::printf("engine benchmark: built without OpenMP, both modes run serially; "
                "%.0f ms simulated\n", duration_ms);
#endif
    std::printf("%8s %10s %12s %12s %9s %8s\n", "neurons", "spikes", "serial (s)",
                "parallel (s)", "speedup", "match");

    for (int clusters : {16, 64, 160, 320, 512}) {
        const WeightedNetwork net = make_network(clusters);

        StimulusSchedule sched;
        sched.background_rate_hz = 2000.0;
        sched.background_weight = 0.05;
        sched.background_dc = 21.0;

        SimulationConfig sim;
        sim.duration_ms = duration_ms;
        sim.seed = 7;
        const InputStreams streams =
            expand_schedule(sched, net.n, sim.duration_ms, 1.0, sim.seed);

        // warm-up pass keeps first-touch allocation out of the timings
        std::uint64_t hash_serial = 0;
        std::uint64_t hash_parallel = 0;
        run_once(net, streams, sim, ExecMode::serial, hash_serial);

        const double serial = run_once(net, streams, sim, ExecMode::serial, hash_serial);
        const double parallel =
            run_once(net, streams, sim, ExecMode::parallel, hash_parallel);

        const auto count = simulate(net, streams, sim, ExecMode::serial)
                               .record.events.size();
        std::printf("%8d %10zu %12.3f %12.3f %8.2fx %8s\n", net.n, count, serial,
                    parallel, serial / parallel,
                    hash_serial == hash_parallel ? "yes" : "NO");
        if (hash_serial != hash_parallel) {
            std::fprintf(stderr, "serial and parallel records diverged\n");
            return 1;
        }
    }
    return 0;
}

#include "rsnn/analysis.hpp"

#include "rsnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rsnn {

RateTrace estimate_rates(const SpikeRecord& record, double window_ms,
                         double step_ms) {
    if (window_ms <= 0.0 || step_ms <= 0.0)
        throw ParameterError("window and step must be > 0");
    const int n = record.num_neurons;
    if (n <= 0)
        throw ParameterError("record has no neurons");

    std::vector<std::vector<double>> per_neuron(static_cast<std::size_t>(n));
    for (const auto& e : record.events)
        per_neuron[static_cast<std::size_t>(e.neuron)].push_back(e.time_ms);

    RateTrace trace;
    trace.window_ms = window_ms;
    const long long samples =
        static_cast<long long>(std::floor(record.duration_ms / step_ms)) + 1;
    trace.times_ms.reserve(static_cast<std::size_t>(samples));
    trace.rates_hz.assign(static_cast<std::size_t>(samples),
                          std::vector<double>(static_cast<std::size_t>(n), 0.0));

    std::vector<std::size_t> lo(static_cast<std::size_t>(n), 0);
    std::vector<std::size_t> hi(static_cast<std::size_t>(n), 0);
    for (long long k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) * step_ms;
        trace.times_ms.push_back(t);
        auto& row = trace.rates_hz[static_cast<std::size_t>(k)];
        for (int i = 0; i < n; ++i) {
            const auto& times = per_neuron[static_cast<std::size_t>(i)];
            auto& a = lo[static_cast<std::size_t>(i)];
            auto& b = hi[static_cast<std::size_t>(i)];
            while (b < times.size() && times[b] <= t) ++b;
            while (a < times.size() && times[a] <= t - window_ms) ++a;
            row[static_cast<std::size_t>(i)] =
                static_cast<double>(b - a) / window_ms * 1000.0;
        }
    }
    return trace;
}

double alignment_index(const std::vector<double>& rates_hz,
                       const std::vector<double>& output_vector) {
    const std::size_t n = rates_hz.size();
    if (n == 0 || output_vector.size() != n)
        throw ParameterError("rate and output vectors must have equal nonzero size");

    double out_norm2 = 0.0;
    for (double v : output_vector) out_norm2 += v * v;
    if (out_norm2 == 0.0)
        throw ParameterError("output vector must be nonzero");

    double nu_norm2 = 0.0;
    double mean = 0.0;
    for (double r : rates_hz) {
        nu_norm2 += r * r;
        mean += r;
    }
    if (nu_norm2 == 0.0) return 0.0; // silent network
    mean /= static_cast<double>(n);

    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        dot += output_vector[i] * (rates_hz[i] - mean);
    const double rho = dot / (std::sqrt(out_norm2) * std::sqrt(nu_norm2));
    if (std::abs(rho) > 1.0 + 1e-9)
        throw NumericalError("alignment index escaped [-1, 1]");
    return std::clamp(rho, -1.0, 1.0);
}

AlignmentTrace alignment_traces(const RateTrace& rates,
                                const std::vector<std::vector<double>>& outputs) {
    AlignmentTrace trace;
    trace.times_ms = rates.times_ms;
    trace.rho.reserve(rates.rates_hz.size());
    for (const auto& nu : rates.rates_hz) {
        std::vector<double> row;
        row.reserve(outputs.size());
        for (const auto& out : outputs) row.push_back(alignment_index(nu, out));
        trace.rho.push_back(std::move(row));
    }
    return trace;
}

double steady_state_projection(const SpikeRecord& record, const SignVector& v,
                               double window_start_ms, double window_end_ms,
                               double earliest_allowed_ms) {
    v.validate();
    if (v.size() != record.num_neurons)
        throw ParameterError("sign vector does not match record size");
    if (window_end_ms <= window_start_ms)
        throw ParameterError("measurement window must have positive length");
    if (window_start_ms < earliest_allowed_ms)
        throw ProtocolError("measurement window precedes stimulus offset");
    if (window_end_ms > record.duration_ms + 1e-9)
        throw ProtocolError("measurement window exceeds record duration");

    const int n = record.num_neurons;
    std::vector<double> mean_rates(static_cast<std::size_t>(n), 0.0);
    const double window = window_end_ms - window_start_ms;
    for (const auto& e : record.events)
        if (e.time_ms > window_start_ms && e.time_ms <= window_end_ms)
            mean_rates[static_cast<std::size_t>(e.neuron)] += 1.0;
    for (double& r : mean_rates) r = r / window * 1000.0;

    double mean = std::accumulate(mean_rates.begin(), mean_rates.end(), 0.0) /
                  static_cast<double>(n);
    double vnorm = 0.0;
    for (int e : v.entries) vnorm += static_cast<double>(e * e);
    vnorm = std::sqrt(vnorm);

    double dot = 0.0;
    for (int i = 0; i < n; ++i)
        dot += static_cast<double>(v.entries[static_cast<std::size_t>(i)]) *
               (mean_rates[static_cast<std::size_t>(i)] - mean);
    return dot / vnorm;
}

BifurcationDiagram bifurcation_sweep(const std::vector<double>& alphas,
                                     const std::vector<std::string>& ics,
                                     const std::vector<std::uint64_t>& seeds,
                                     const SweepRunner& runner, int num_workers) {
    if (alphas.empty())
        throw ParameterError("alpha grid must be non-empty");
    if (!std::is_sorted(alphas.begin(), alphas.end()))
        throw ParameterError("alpha grid must be sorted");
    if (ics.empty() || seeds.empty())
        throw ParameterError("need at least one initial condition and seed");

    BifurcationDiagram diagram;
    for (double a : alphas)
        for (const auto& ic : ics)
            for (std::uint64_t s : seeds)
                diagram.points.push_back({a, ic, s, 0.0, true, ""});

    const int total = static_cast<int>(diagram.points.size());
#ifdef _OPENMP
    const int threads = std::max(1, num_workers);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
    (void)num_workers;
#endif
    for (int k = 0; k < total; ++k) {
        auto& pt = diagram.points[static_cast<std::size_t>(k)];
        try {
            pt.projection_hz = runner(pt.alpha, pt.initial_condition, pt.seed);
        } catch (const std::exception& ex) {
            pt.valid = false;
            pt.diagnostic = ex.what();
        }
    }
    return diagram;
}

namespace {

struct AlphaGroup {
    double alpha = 0.0;
    std::vector<double> a_proj;
    std::vector<double> b_proj;
    std::vector<double> bg_proj;
};

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) /
           static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

double median_of(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

} // namespace

std::optional<CriticalAlpha> detect_critical_alpha(const BifurcationDiagram& diagram) {
    std::vector<AlphaGroup> groups;
    for (const auto& pt : diagram.points) {
        if (!pt.valid) continue;
        auto it = std::find_if(groups.begin(), groups.end(), [&](const AlphaGroup& g) {
            return g.alpha == pt.alpha;
        });
        if (it == groups.end()) {
            groups.push_back({pt.alpha, {}, {}, {}});
            it = std::prev(groups.end());
        }
        if (pt.initial_condition == "A")
            it->a_proj.push_back(pt.projection_hz);
        else if (pt.initial_condition == "B")
            it->b_proj.push_back(pt.projection_hz);
        else
            it->bg_proj.push_back(pt.projection_hz);
    }
    if (groups.size() < 5)
        throw ParameterError("need at least 5 alpha values spanning both regimes");
    std::sort(groups.begin(), groups.end(),
              [](const AlphaGroup& x, const AlphaGroup& y) { return x.alpha < y.alpha; });

    // Branch positions are medians over seeds (robust against runs that flip
    // attractor during the settle window). The noise band is the median of
    // per-alpha background-IC standard deviations seen so far: above the
    // bifurcation the background runs fall onto the branches themselves, so
    // the raw per-alpha std stops measuring noise.
    std::vector<double> sigmas;
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const auto& g = groups[k];
        if (g.a_proj.empty() || g.b_proj.empty() || g.bg_proj.size() < 2) continue;
        const double separation =
            std::abs(median_of(g.a_proj) - median_of(g.b_proj));
        const double floor = sigmas.empty() ? 0.0 : median_of(sigmas);
        sigmas.push_back(std_of(g.bg_proj));
        const double sigma = median_of(sigmas);
        if (sigma > 0.0 && separation > 5.0 * sigma) {
            CriticalAlpha out;
            out.alpha_star = g.alpha;
            out.band_lo = k > 0 ? groups[k - 1].alpha : g.alpha;
            out.band_hi = k + 1 < groups.size() ? groups[k + 1].alpha : g.alpha;
            // report the pre-critical noise floor; the detection point's own
            // std may already carry branch structure
            out.noise_sigma = floor > 0.0 ? floor : sigma;
            return out;
        }
    }
    return std::nullopt;
}

std::vector<bool> persistence_check(const AlignmentTrace& alignment,
                                    int output_index,
                                    const std::vector<double>& stimulus_offsets_ms,
                                    double hold_ms, double threshold) {
    if (hold_ms <= 0.0)
        throw ParameterError("hold must be > 0");
    if (alignment.times_ms.empty())
        throw ParameterError("empty alignment trace");
    const double t_last = alignment.times_ms.back();

    std::vector<bool> persistent;
    persistent.reserve(stimulus_offsets_ms.size());
    for (double offset : stimulus_offsets_ms) {
        if (offset + hold_ms > t_last + 1e-9)
            throw ProtocolError("hold window extends beyond the record");
        bool ok = true;
        for (std::size_t k = 0; k < alignment.times_ms.size(); ++k) {
            const double t = alignment.times_ms[k];
            if (t < offset || t > offset + hold_ms) continue;
            if (std::abs(alignment.rho[k][static_cast<std::size_t>(output_index)]) <
                threshold) {
                ok = false;
                break;
            }
        }
        persistent.push_back(ok);
    }
    return persistent;
}

} // namespace rsnn

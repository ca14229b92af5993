#include "rsnn/stimulus.hpp"

#include "rsnn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rsnn {

void SymbolPattern::validate() const {
    if (signs.size() < 2)
        throw ParameterError("symbol pattern needs at least 2 entries");
    for (int s : signs)
        if (s != -1 && s != 1)
            throw ParameterError("symbol pattern entries must be -1 or +1");
}

void StimulusSchedule::validate() const {
    if (background_rate_hz < 0.0)
        throw ParameterError("background rate must be >= 0");
    double prev_end = -1.0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto& e = events[k];
        e.pattern.validate();
        if (e.rate_hz < 0.0)
            throw ParameterError("event rate must be >= 0");
        if (e.duration_ms <= 0.0)
            throw ParameterError("event duration must be > 0");
        if (e.onset_ms < prev_end)
            throw ScheduleError("events " + std::to_string(k - 1) + " and " +
                                std::to_string(k) + " overlap or are unsorted");
        prev_end = e.onset_ms + e.duration_ms;
    }
}

std::vector<double> generate_poisson_train(double rate_hz, double start_ms,
                                           double duration_ms, Rng& rng) {
    if (rate_hz < 0.0)
        throw ParameterError("rate must be >= 0");
    if (duration_ms <= 0.0)
        throw ParameterError("duration must be > 0");
    std::vector<double> times;
    if (rate_hz == 0.0) return times;
    const double rate_per_ms = rate_hz / 1000.0;
    double t = start_ms;
    for (;;) {
        t += rng.exponential(rate_per_ms);
        if (t >= start_ms + duration_ms) break;
        times.push_back(t);
    }
    return times;
}

ChannelAssignment encode_symbol(const SymbolPattern& pattern, double rate_hz) {
    pattern.validate();
    if (rate_hz < 0.0)
        throw ParameterError("rate must be >= 0");
    return ChannelAssignment{rate_hz, pattern.signs};
}

StimulusSchedule build_schedule(const std::vector<SequenceItem>& sequence,
                                double gap_ms, const BackgroundSpec& background,
                                double start_ms) {
    if (gap_ms < 0.0)
        throw ParameterError("gap must be >= 0");
    StimulusSchedule schedule;
    schedule.background_rate_hz = background.rate_hz;
    schedule.background_weight = background.weight;
    schedule.background_dc = background.dc;
    double cursor = start_ms;
    for (const auto& item : sequence) {
        if (item.duration_ms <= 0.0)
            throw ParameterError("sequence durations must be > 0");
        StimulusEvent e;
        e.pattern = item.symbol;
        e.rate_hz = item.rate_hz;
        e.onset_ms = item.onset_ms.value_or(cursor);
        e.duration_ms = item.duration_ms;
        cursor = e.onset_ms + e.duration_ms + gap_ms;
        schedule.events.push_back(std::move(e));
    }
    schedule.validate();
    return schedule;
}

InputStreams expand_schedule(const StimulusSchedule& schedule, int num_neurons,
                             double duration_ms, double stimulus_weight,
                             std::uint64_t seed, std::uint64_t neuron_index_base) {
    schedule.validate();
    if (num_neurons <= 0)
        throw ParameterError("num_neurons must be > 0");
    if (duration_ms <= 0.0)
        throw ParameterError("duration must be > 0");

    InputStreams streams;
    streams.dc = schedule.background_dc;
    streams.per_neuron.resize(static_cast<std::size_t>(num_neurons));

    for (int i = 0; i < num_neurons; ++i) {
        auto& dest = streams.per_neuron[static_cast<std::size_t>(i)];
        const std::uint64_t nkey = neuron_index_base + static_cast<std::uint64_t>(i);

        if (schedule.background_rate_hz > 0.0 && schedule.background_weight != 0.0) {
            Rng rng = make_rng(seed, Stream::background, nkey);
            for (double t : generate_poisson_train(schedule.background_rate_hz, 0.0,
                                                   duration_ms, rng))
                dest.push_back({t, schedule.background_weight});
        }

        for (std::size_t k = 0; k < schedule.events.size(); ++k) {
            const auto& e = schedule.events[k];
            if (e.rate_hz <= 0.0) continue;
            if (static_cast<std::size_t>(num_neurons) != e.pattern.signs.size())
                throw ParameterError("pattern length does not match network size");
            const int sign = e.pattern.signs[static_cast<std::size_t>(i)];
            Rng rng = make_rng(seed, Stream::stimulus, k, nkey);
            for (double t : generate_poisson_train(e.rate_hz, e.onset_ms,
                                                   e.duration_ms, rng)) {
                if (t < duration_ms)
                    dest.push_back({t, sign * stimulus_weight});
            }
        }

        std::sort(dest.begin(), dest.end(),
                  [](const InputSpike& a, const InputSpike& b) {
                      return a.time_ms < b.time_ms;
                  });
    }
    return streams;
}

} // namespace rsnn

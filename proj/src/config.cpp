#include "rsnn/config.hpp"

#include "rsnn/errors.hpp"
#include "rsnn/io.hpp"
#include "rsnn/rng.hpp"
#include "rsnn/topology.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace rsnn {

namespace {

using nlohmann::json;

// best-effort line of the first occurrence of "key" in the file text
int locate_line(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\"";
    const auto pos = text.find(needle);
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() +
                                           static_cast<long>(pos), '\n'));
}

struct ErrorSink {
    const std::string* text = nullptr;
    std::vector<ConfigViolation> violations;

    void add(const std::string& where, const std::string& message,
             const std::string& line_key = "") {
        ConfigViolation v;
        v.where = where;
        v.message = message;
        if (text) {
            std::string key = line_key;
            if (key.empty()) {
                key = where;
                const auto dot = key.rfind('.');
                if (dot != std::string::npos) key = key.substr(dot + 1);
                const auto bracket = key.find('[');
                if (bracket != std::string::npos) key = key.substr(0, bracket);
            }
            v.line = locate_line(*text, key);
        }
        violations.push_back(std::move(v));
    }
};

// strict section reader: typed getters, defaults, unknown-key detection
class Section {
public:
    Section(const json* j, std::string path, ErrorSink& sink)
        : j_(j), path_(std::move(path)), sink_(&sink) {
        if (j_ && !j_->is_object()) {
            sink_->add(path_, "must be an object");
            j_ = nullptr;
        }
    }

    bool present() const { return j_ != nullptr; }

    double number(const std::string& key, double fallback, bool required = false) {
        if (!claim(key, required)) return fallback;
        const json& v = (*j_)[key];
        if (!v.is_number()) {
            sink_->add(dotted(key), "must be a number");
            return fallback;
        }
        return v.get<double>();
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback,
                         bool required = false) {
        if (!claim(key, required)) return fallback;
        const json& v = (*j_)[key];
        if (!v.is_number_integer()) {
            sink_->add(dotted(key), "must be an integer");
            return fallback;
        }
        return v.get<std::int64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!claim(key, false)) return fallback;
        const json& v = (*j_)[key];
        if (!v.is_boolean()) {
            sink_->add(dotted(key), "must be a boolean");
            return fallback;
        }
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback,
                     bool required = false) {
        if (!claim(key, required)) return fallback;
        const json& v = (*j_)[key];
        if (!v.is_string()) {
            sink_->add(dotted(key), "must be a string");
            return fallback;
        }
        return v.get<std::string>();
    }

    const json* array(const std::string& key, bool required = false) {
        if (!claim(key, required)) return nullptr;
        const json& v = (*j_)[key];
        if (!v.is_array()) {
            sink_->add(dotted(key), "must be an array");
            return nullptr;
        }
        return &v;
    }

    Section child(const std::string& key, bool required = false) {
        if (!claim(key, required)) return Section(nullptr, dotted(key), *sink_);
        return Section(&(*j_)[key], dotted(key), *sink_);
    }

    Section element(const json& e, const std::string& label) {
        return Section(&e, dotted(label), *sink_);
    }

    // every key must have been claimed by now
    void finish() {
        if (!j_) return;
        for (auto it = j_->begin(); it != j_->end(); ++it)
            if (!seen_.count(it.key()))
                sink_->add(dotted(it.key()), "unknown key", it.key());
    }

    std::string dotted(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    ErrorSink& sink() { return *sink_; }

private:
    bool claim(const std::string& key, bool required) {
        if (!j_) return false;
        seen_.insert(key);
        if (!j_->contains(key)) {
            if (required) sink_->add(dotted(key), "missing required key", key);
            return false;
        }
        return true;
    }

    const json* j_;
    std::string path_;
    ErrorSink* sink_;
    std::set<std::string> seen_;
};

SignVector default_sign_vector(int n) {
    SignVector v;
    v.entries.assign(static_cast<std::size_t>(std::max(n, 0)), 1);
    for (int i = n / 2; i < n; ++i) v.entries[static_cast<std::size_t>(i)] = -1;
    if (n % 2 == 1) v.entries[static_cast<std::size_t>(n / 2)] = 0;
    return v;
}

NeuronParams parse_neuron(Section& parent) {
    NeuronParams p;
    Section s = parent.child("neuron");
    if (s.present()) {
        p.membrane_time_constant =
            s.number("membrane_time_constant_ms", p.membrane_time_constant);
        p.resting_potential = s.number("resting_potential_mv", p.resting_potential);
        p.spike_threshold = s.number("spike_threshold_mv", p.spike_threshold);
        p.reset_potential = s.number("reset_potential_mv", p.reset_potential);
        p.refractory_period = s.number("refractory_period_ms", p.refractory_period);
        p.exp_slope = s.number("exp_slope_mv", p.exp_slope);
        p.adaptation_increment = s.number("adaptation_increment", p.adaptation_increment);
        p.adaptation_time_constant =
            s.number("adaptation_time_constant_ms", p.adaptation_time_constant);
        p.adaptation_coupling = s.number("adaptation_coupling", p.adaptation_coupling);
        s.finish();
        try {
            p.validate();
        } catch (const Error& e) {
            s.sink().add(parent.dotted("neuron"), e.what(), "neuron");
            p = NeuronParams{};
        }
    }
    return p;
}

SynapseParams parse_synapse(Section& parent) {
    SynapseParams p;
    Section s = parent.child("synapse");
    if (s.present()) {
        p.exc_time_constant = s.number("exc_time_constant_ms", p.exc_time_constant);
        p.inh_time_constant = s.number("inh_time_constant_ms", p.inh_time_constant);
        s.finish();
        try {
            p.validate();
        } catch (const Error& e) {
            s.sink().add(parent.dotted("synapse"), e.what(), "synapse");
            p = SynapseParams{};
        }
    }
    return p;
}

void parse_network(Section& root, ExperimentConfig& cfg, ErrorSink& sink) {
    Section net = root.child("network", true);
    if (!net.present()) return;

    const bool needs_alpha = cfg.kind != ExperimentKind::bifurcation_sweep;
    cfg.alpha = net.number("alpha", 0.0, needs_alpha);
    if (cfg.alpha < 0.0) sink.add(net.dotted("alpha"), "must be >= 0");

    cfg.network.neuron = parse_neuron(net);
    cfg.network.synapse = parse_synapse(net);

    if (cfg.kind == ExperimentKind::swta) {
        cfg.network.kind = NetworkSpec::Kind::swta;
        SWTAConfig& w = cfg.network.swta;
        w.num_clusters = static_cast<int>(net.integer("clusters", 16));
        w.neurons_per_cluster = static_cast<int>(net.integer("neurons_per_cluster", 8));
        w.num_inhibitory = static_cast<int>(net.integer(
            "num_inhibitory", std::max(1, w.num_clusters * w.neurons_per_cluster / 4)));
        w.self_excitation = net.number("self_excitation", 1.0);
        w.lateral_excitation = net.number("lateral_excitation", 0.5);
        w.exc_to_inh = net.number("exc_to_inh", 1.0);
        w.inh_to_exc = net.number("inh_to_exc", -1.0);
        w.periodic = net.boolean("periodic", false);
        w.gain_alpha = cfg.alpha;
        try {
            w.validate();
        } catch (const Error& e) {
            sink.add("network", e.what(), "network");
        }
    } else {
        cfg.network.kind = NetworkSpec::Kind::mixed_feedback;
        const int size = static_cast<int>(net.integer("size", 8));
        if (size < 2) sink.add(net.dotted("size"), "must be >= 2");
        cfg.network.unit_weight = net.number("unit_weight", 1.0);
        if (const json* sv = net.array("sign_vector")) {
            SignVector v;
            bool ok = true;
            for (const auto& e : *sv) {
                if (!e.is_number_integer()) {
                    sink.add(net.dotted("sign_vector"), "entries must be -1, 0 or +1");
                    ok = false;
                    break;
                }
                v.entries.push_back(e.get<int>());
            }
            if (ok) cfg.network.sign_vector = v;
        }
        if (cfg.network.sign_vector.entries.empty())
            cfg.network.sign_vector = default_sign_vector(std::max(size, 2));
        try {
            cfg.network.sign_vector.validate();
            if (static_cast<int>(cfg.network.sign_vector.entries.size()) != size)
                sink.add(net.dotted("sign_vector"), "length must equal network.size");
        } catch (const Error& e) {
            sink.add(net.dotted("sign_vector"), e.what());
            cfg.network.sign_vector = default_sign_vector(std::max(size, 2));
        }
    }
    net.finish();
}

void parse_background(Section& stim, ExperimentConfig& cfg, ErrorSink& sink) {
    Section bg = stim.child("background");
    if (!bg.present()) return;
    cfg.stimulus.background.rate_hz = bg.number("rate_hz", 0.0);
    cfg.stimulus.background.weight = bg.number("weight", 0.0);
    cfg.stimulus.background.dc = bg.number("dc", 0.0);
    if (cfg.stimulus.background.rate_hz < 0.0)
        sink.add(bg.dotted("rate_hz"), "must be >= 0");
    bg.finish();
}

// resolve a symbol name against the network's sign vector
bool resolve_symbol(const std::string& name, const SignVector& v, SymbolPattern& out) {
    if (v.entries.empty()) return false;
    out.name = name;
    out.signs = v.entries;
    if (name == "A") return true;
    if (name == "B") {
        for (int& s : out.signs) s = -s;
        return true;
    }
    if (name == "C" || name == "D") {
        if (v.size() % 2 != 0) return false;
        try {
            out.signs = orthogonal_sign_vector(v).signs;
        } catch (const Error&) {
            return false;
        }
        if (name == "D")
            for (int& s : out.signs) s = -s;
        return true;
    }
    return false;
}

void parse_stimulus(Section& root, ExperimentConfig& cfg, ErrorSink& sink) {
    Section stim = root.child("stimulus",
                              cfg.kind != ExperimentKind::bifurcation_sweep);
    if (!stim.present()) return;

    cfg.stimulus.input_weight = stim.number("input_weight", 1.0);
    parse_background(stim, cfg, sink);
    cfg.stimulus.warmup_ms = stim.number("warmup_ms", 300.0);
    cfg.stimulus.tail_ms = stim.number("tail_ms", 300.0);

    if (cfg.kind == ExperimentKind::swta) {
        cfg.stimulus.stimulus_ms = stim.number("stimulus_ms", 2000.0);
        if (cfg.stimulus.stimulus_ms <= 0.0)
            sink.add(stim.dotted("stimulus_ms"), "must be > 0");
        if (const json* bumps = stim.array("bumps", true)) {
            int idx = 0;
            for (const auto& b : *bumps) {
                Section bs = stim.element(b, "bumps[" + std::to_string(idx) + "]");
                InputBump bump;
                bump.center = bs.number("center", 0.0, true);
                bump.width = bs.number("width", 1.0);
                bump.peak_rate_hz = bs.number("peak_rate_hz", 0.0, true);
                bs.finish();
                if (bump.width <= 0.0)
                    sink.add(bs.dotted("width"), "must be > 0");
                if (bump.peak_rate_hz < 0.0)
                    sink.add(bs.dotted("peak_rate_hz"), "must be >= 0");
                cfg.stimulus.bumps.push_back(bump);
                ++idx;
            }
            if (cfg.stimulus.bumps.empty())
                sink.add(stim.dotted("bumps"), "needs at least one bump");
        }
    } else if (cfg.kind == ExperimentKind::mixed_feedback) {
        cfg.stimulus.gap_ms = stim.number("gap_ms", 300.0);
        if (cfg.stimulus.gap_ms < 0.0) sink.add(stim.dotted("gap_ms"), "must be >= 0");
        if (const json* seq = stim.array("sequence")) {
            int idx = 0;
            for (const auto& item : *seq) {
                Section is = stim.element(item, "sequence[" + std::to_string(idx) + "]");
                const std::string symbol = is.text("symbol", "A", true);
                SequenceItem si;
                si.rate_hz = is.number("rate_hz", 0.0, true);
                si.duration_ms = is.number("duration_ms", 300.0);
                const double onset = is.number("onset_ms", -1.0);
                if (onset >= 0.0) si.onset_ms = onset;
                is.finish();
                if (si.rate_hz < 0.0)
                    sink.add(is.dotted("rate_hz"), "must be >= 0");
                if (si.duration_ms <= 0.0)
                    sink.add(is.dotted("duration_ms"), "must be > 0");
                if (!resolve_symbol(symbol, cfg.network.sign_vector, si.symbol))
                    sink.add(is.dotted("symbol"),
                             "must be one of A, B, C, D (C/D need even size)");
                cfg.stimulus.sequence.push_back(std::move(si));
                ++idx;
            }
        }
    }
    stim.finish();
}

void parse_simulation(Section& root, ExperimentConfig& cfg, ErrorSink& sink) {
    Section sim = root.child("simulation");
    if (!sim.present()) return;

    cfg.simulation.dt_ms = sim.number("dt_ms", 0.1);
    cfg.simulation.seed = static_cast<std::uint64_t>(sim.integer("seed", 1));
    cfg.simulation.mismatch_cv = sim.number("mismatch_cv", 0.0);
    cfg.simulation.record_state = sim.boolean("record_state", false);
    cfg.simulation.synaptic_delay_ms = sim.number("synaptic_delay_ms", 1.0);
    // duration may be given explicitly; otherwise derived from the protocol
    const double d = sim.number("duration_ms", -1.0);
    if (d > 0.0) {
        cfg.simulation.duration_ms = d;
        cfg.explicit_duration = true;
    } else if (d != -1.0) {
        sink.add(sim.dotted("duration_ms"), "must be > 0");
    }
    sim.finish();

    SimulationConfig check = cfg.simulation;
    if (!cfg.explicit_duration) check.duration_ms = 1000.0;
    try {
        check.validate();
    } catch (const Error& e) {
        sink.add("simulation", e.what(), "simulation");
    }
}

void parse_analysis(Section& root, ExperimentConfig& cfg, ErrorSink& sink) {
    Section an = root.child("analysis");
    if (!an.present()) return;
    cfg.analysis.rate_window_ms = an.number("rate_window_ms", 100.0);
    cfg.analysis.rate_step_ms = an.number("rate_step_ms", 10.0);
    cfg.analysis.measure_start_ms = an.number("measure_start_ms", 0.0);
    cfg.analysis.measure_end_ms = an.number("measure_end_ms", 0.0);
    an.finish();
    if (cfg.analysis.rate_window_ms <= 0.0)
        sink.add("analysis.rate_window_ms", "must be > 0");
    if (cfg.analysis.rate_step_ms <= 0.0)
        sink.add("analysis.rate_step_ms", "must be > 0");
}

void parse_sweep(Section& root, ExperimentConfig& cfg, ErrorSink& sink) {
    Section sw = root.child("sweep", cfg.kind == ExperimentKind::bifurcation_sweep);
    if (!sw.present()) return;

    if (const json* alphas = sw.array("alphas")) {
        for (const auto& a : *alphas) {
            if (!a.is_number()) {
                sink.add(sw.dotted("alphas"), "entries must be numbers");
                break;
            }
            cfg.sweep.alphas.push_back(a.get<double>());
        }
    } else {
        const double from = sw.number("alpha_from", 0.0, true);
        const double to = sw.number("alpha_to", 0.0, true);
        const double step = sw.number("alpha_step", 0.0, true);
        if (step <= 0.0 || to < from) {
            sink.add(sw.dotted("alpha_step"), "need alpha_from <= alpha_to and step > 0");
        } else {
            for (double a = from; a <= to + 1e-12; a += step)
                cfg.sweep.alphas.push_back(a);
        }
    }
    if (!cfg.sweep.alphas.empty() &&
        !std::is_sorted(cfg.sweep.alphas.begin(), cfg.sweep.alphas.end()))
        sink.add(sw.dotted("alphas"), "must be sorted ascending");
    for (double a : cfg.sweep.alphas)
        if (a < 0.0) {
            sink.add(sw.dotted("alphas"), "entries must be >= 0");
            break;
        }

    const int num_seeds = static_cast<int>(sw.integer("seeds", 5));
    if (num_seeds < 1) sink.add(sw.dotted("seeds"), "must be >= 1");
    for (int s = 0; s < std::max(num_seeds, 0); ++s)
        cfg.sweep.seeds.push_back(static_cast<std::uint64_t>(s + 1));

    cfg.sweep.stim_rate_hz = sw.number("stim_rate_hz", 200.0);
    cfg.sweep.stim_duration_ms = sw.number("stim_duration_ms", 300.0);
    cfg.sweep.warmup_ms = sw.number("warmup_ms", 300.0);
    cfg.sweep.settle_ms = sw.number("settle_ms", 500.0);
    cfg.sweep.measure_ms = sw.number("measure_ms", 500.0);
    cfg.sweep.calibration_delta = sw.number("calibration_delta", 2.0);
    cfg.sweep.calibration_duration_ms = sw.number("calibration_duration_ms", 4000.0);
    cfg.sweep.calibration_seeds = static_cast<int>(sw.integer("calibration_seeds", 3));
    sw.finish();

    if (cfg.sweep.stim_rate_hz < 0.0) sink.add(sw.dotted("stim_rate_hz"), "must be >= 0");
    for (const char* key : {"stim_duration_ms", "warmup_ms", "settle_ms", "measure_ms"}) {
        double v = 0.0;
        if (std::string(key) == "stim_duration_ms") v = cfg.sweep.stim_duration_ms;
        if (std::string(key) == "warmup_ms") v = cfg.sweep.warmup_ms;
        if (std::string(key) == "settle_ms") v = cfg.sweep.settle_ms;
        if (std::string(key) == "measure_ms") v = cfg.sweep.measure_ms;
        if (v <= 0.0) sink.add(sw.dotted(key), "must be > 0");
    }
    if (cfg.sweep.calibration_delta <= 0.0)
        sink.add(sw.dotted("calibration_delta"), "must be > 0");
    if (cfg.sweep.calibration_seeds < 1)
        sink.add(sw.dotted("calibration_seeds"), "must be >= 1");
}

} // namespace

std::vector<ConfigViolation> validate_config_text(const std::string& text,
                                                  ExperimentConfig* parsed) {
    ErrorSink sink;
    sink.text = &text;

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        ConfigViolation v;
        v.where = "";
        v.message = e.what();
        const std::string msg = e.what();
        const auto at = msg.find("at line ");
        if (at != std::string::npos)
            v.line = std::atoi(msg.c_str() + at + 8);
        sink.violations.push_back(std::move(v));
        return sink.violations;
    }

    ExperimentConfig cfg;
    cfg.canonical_text = text;
    cfg.config_hash = fnv1a(text.data(), text.size());

    Section root(&j, "", sink);
    const std::string kind = root.text("experiment", "", true);
    if (kind == "mixed-feedback") cfg.kind = ExperimentKind::mixed_feedback;
    else if (kind == "swta") cfg.kind = ExperimentKind::swta;
    else if (kind == "bifurcation-sweep") cfg.kind = ExperimentKind::bifurcation_sweep;
    else if (!kind.empty())
        sink.add("experiment", "must be mixed-feedback, swta or bifurcation-sweep");

    cfg.output_dir = root.text("output_dir", "out");

    parse_network(root, cfg, sink);
    parse_stimulus(root, cfg, sink);
    parse_simulation(root, cfg, sink);
    parse_analysis(root, cfg, sink);
    parse_sweep(root, cfg, sink);
    root.finish();

    // explicit onsets may collide; surface that as a static violation
    if (cfg.kind == ExperimentKind::mixed_feedback && sink.violations.empty()) {
        try {
            build_schedule(cfg.stimulus.sequence, cfg.stimulus.gap_ms,
                           cfg.stimulus.background, cfg.stimulus.warmup_ms);
        } catch (const ScheduleError& e) {
            sink.add("stimulus.sequence", e.what(), "sequence");
        } catch (const Error& e) {
            sink.add("stimulus", e.what(), "stimulus");
        }
    }

    if (parsed && sink.violations.empty()) *parsed = std::move(cfg);
    return sink.violations;
}

std::vector<ConfigViolation> validate_config_file(const std::string& path,
                                                  ExperimentConfig* parsed) {
    return validate_config_text(read_text_file(path), parsed);
}

ExperimentConfig load_config_file(const std::string& path) {
    ExperimentConfig cfg;
    const auto violations = validate_config_file(path, &cfg);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << path;
        if (violations.front().line > 0) msg << ":" << violations.front().line;
        throw ConfigError(violations.front().where,
                          msg.str() + ": " + violations.front().message +
                              (violations.size() > 1
                                   ? " (+" + std::to_string(violations.size() - 1) +
                                         " more)"
                                   : ""));
    }
    return cfg;
}

const char* experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::mixed_feedback: return "mixed-feedback";
        case ExperimentKind::swta: return "swta";
        case ExperimentKind::bifurcation_sweep: return "bifurcation-sweep";
    }
    return "?";
}

} // namespace rsnn

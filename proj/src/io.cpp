#include "rsnn/io.hpp"

#include "rsnn/errors.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rsnn {

std::string format_g9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

namespace {

std::string format_u64_hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
    return buf;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("malformed number '" + s + "' in " + context);
    }
}

} // namespace

std::string spike_record_to_text(const SpikeRecord& record) {
    std::ostringstream out;
    out << "# rsnn spike record v1\n";
    out << "# neurons " << record.num_neurons << "\n";
    out << "# duration_ms " << format_g9(record.duration_ms) << "\n";
    out << "# seed " << record.config.seed << "\n";
    out << "# dt_ms " << format_g9(record.config.dt_ms) << "\n";
    out << "# config_hash " << format_u64_hex(record.config.digest()) << "\n";
    out << "# network_hash " << format_u64_hex(record.network_hash) << "\n";
    out << "time_ms,neuron_index\n";
    for (const auto& e : record.events)
        out << format_g9(e.time_ms) << ',' << e.neuron << '\n';
    return out.str();
}

SpikeRecord spike_record_from_text(const std::string& text) {
    SpikeRecord record;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "neurons") ls >> record.num_neurons;
            else if (key == "duration_ms") ls >> record.duration_ms;
            else if (key == "seed") ls >> record.config.seed;
            else if (key == "dt_ms") ls >> record.config.dt_ms;
            continue;
        }
        if (!header_seen) {
            if (line != "time_ms,neuron_index")
                throw ParameterError("spike record line " + std::to_string(lineno) +
                                     ": expected column header");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParameterError("spike record line " + std::to_string(lineno) +
                                 ": expected 'time_ms,neuron_index'");
        SpikeEvent e;
        e.time_ms = parse_double(line.substr(0, comma),
                                 "spike record line " + std::to_string(lineno));
        try {
            e.neuron = std::stoi(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ParameterError("malformed neuron index in spike record line " +
                                 std::to_string(lineno));
        }
        record.events.push_back(e);
    }
    return record;
}

std::string network_to_text(const WeightedNetwork& network) {
    network.validate();
    std::ostringstream out;
    out << "# rsnn network v1\n";
    out << "size " << network.n << "\n";
    out << "roles ";
    for (NeuronRole r : network.roles)
        out << (r == NeuronRole::excitatory ? 'E' : 'I');
    out << "\n";
    out << "synapse " << format_g9(network.synapse.exc_time_constant) << ' '
        << format_g9(network.synapse.inh_time_constant) << ' '
        << format_g9(network.synapse.unit_weight) << "\n";
    out << "weights\n";
    for (int i = 0; i < network.n; ++i) {
        for (int j = 0; j < network.n; ++j) {
            if (j) out << ' ';
            out << format_g9(network.weight(i, j));
        }
        out << '\n';
    }
    return out.str();
}

WeightedNetwork network_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    WeightedNetwork net;
    std::string roles;
    bool in_weights = false;
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!in_weights) {
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key == "size") {
                ls >> net.n;
                if (net.n <= 0) throw ParameterError("network size must be > 0");
            } else if (key == "roles") {
                ls >> roles;
            } else if (key == "synapse") {
                ls >> net.synapse.exc_time_constant >> net.synapse.inh_time_constant >>
                    net.synapse.unit_weight;
            } else if (key == "weights") {
                if (net.n <= 0) throw ParameterError("network size missing");
                net.weights.assign(static_cast<std::size_t>(net.n) * net.n, 0.0);
                in_weights = true;
            } else {
                throw ParameterError("unknown network file key '" + key + "'");
            }
            continue;
        }
        std::istringstream ls(line);
        for (int j = 0; j < net.n; ++j)
            if (!(ls >> net.weights[static_cast<std::size_t>(row) * net.n + j]))
                throw ParameterError("short weight row " + std::to_string(row));
        ++row;
    }
    if (row != net.n)
        throw ParameterError("expected " + std::to_string(net.n) + " weight rows, got " +
                             std::to_string(row));
    if (static_cast<int>(roles.size()) != net.n)
        throw ParameterError("roles string does not match network size");
    net.roles.reserve(roles.size());
    for (char c : roles) {
        if (c == 'E') net.roles.push_back(NeuronRole::excitatory);
        else if (c == 'I') net.roles.push_back(NeuronRole::inhibitory);
        else throw ParameterError("role characters must be E or I");
    }
    net.neuron_params.assign(static_cast<std::size_t>(net.n), NeuronParams{});
    net.validate();
    return net;
}

std::string rates_to_csv(const RateTrace& trace) {
    std::ostringstream out;
    out << "time_ms";
    for (int i = 0; i < trace.num_neurons(); ++i) out << ",neuron_" << i;
    out << '\n';
    for (std::size_t k = 0; k < trace.times_ms.size(); ++k) {
        out << format_g9(trace.times_ms[k]);
        for (double r : trace.rates_hz[k]) out << ',' << format_g9(r);
        out << '\n';
    }
    return out.str();
}

std::string alignment_to_csv(const AlignmentTrace& trace) {
    static const char* names[] = {"rho_A", "rho_B", "rho_C", "rho_D"};
    std::ostringstream out;
    out << "time_ms";
    const std::size_t k_outputs = trace.rho.empty() ? 4 : trace.rho.front().size();
    for (std::size_t i = 0; i < k_outputs; ++i) {
        out << ',';
        if (i < 4) out << names[i];
        else out << "rho_" << i;
    }
    out << '\n';
    for (std::size_t k = 0; k < trace.times_ms.size(); ++k) {
        out << format_g9(trace.times_ms[k]);
        for (double r : trace.rho[k]) out << ',' << format_g9(r);
        out << '\n';
    }
    return out.str();
}

std::string diagram_to_csv(const BifurcationDiagram& diagram) {
    std::ostringstream out;
    out << "alpha,ic,seed,projection_hz\n";
    for (const auto& pt : diagram.points) {
        if (!pt.valid) {
            out << "# skipped alpha=" << format_g9(pt.alpha) << " ic=" << pt.initial_condition
                << " seed=" << pt.seed << ": " << pt.diagnostic << '\n';
            continue;
        }
        out << format_g9(pt.alpha) << ',' << pt.initial_condition << ',' << pt.seed
            << ',' << format_g9(pt.projection_hz) << '\n';
    }
    return out.str();
}

BifurcationDiagram diagram_from_csv(const std::string& text) {
    BifurcationDiagram diagram;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 || line.rfind("alpha,", 0) == 0) continue;
        std::istringstream ls(line);
        std::string alpha_s, ic, seed_s, proj_s;
        if (!std::getline(ls, alpha_s, ',') || !std::getline(ls, ic, ',') ||
            !std::getline(ls, seed_s, ',') || !std::getline(ls, proj_s))
            throw ParameterError("diagram line " + std::to_string(lineno) +
                                 ": expected 4 columns");
        BifurcationPoint pt;
        pt.alpha = parse_double(alpha_s, "diagram line " + std::to_string(lineno));
        pt.initial_condition = ic;
        pt.seed = std::stoull(seed_s);
        pt.projection_hz = parse_double(proj_s, "diagram line " + std::to_string(lineno));
        diagram.points.push_back(std::move(pt));
    }
    return diagram;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParameterError("cannot open '" + path + "' for writing");
    out << content;
    if (!out)
        throw ParameterError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParameterError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void save_spike_record(const SpikeRecord& record, const std::string& path) {
    write_text_file(path, spike_record_to_text(record));
}

SpikeRecord load_spike_record(const std::string& path) {
    return spike_record_from_text(read_text_file(path));
}

void save_network(const WeightedNetwork& network, const std::string& path) {
    write_text_file(path, network_to_text(network));
}

WeightedNetwork load_network(const std::string& path) {
    return network_from_text(read_text_file(path));
}

} // namespace rsnn

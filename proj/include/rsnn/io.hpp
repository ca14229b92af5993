#pragma once

#include "rsnn/analysis.hpp"
#include "rsnn/engine.hpp"
#include "rsnn/topology.hpp"

#include <string>

namespace rsnn {

// All numeric text is written with %.9g so every file round-trips
// byte-exactly at the printed precision.
std::string format_g9(double x);

// SpikeRecord: comment header ("# key value") then one "time_ms,neuron"
// line per event.
std::string spike_record_to_text(const SpikeRecord& record);
SpikeRecord spike_record_from_text(const std::string& text);
void save_spike_record(const SpikeRecord& record, const std::string& path);
SpikeRecord load_spike_record(const std::string& path);

// WeightedNetwork: header (size, roles as E/I string, synapse constants),
// then dense row-major weights, one row per line.
std::string network_to_text(const WeightedNetwork& network);
WeightedNetwork network_from_text(const std::string& text);
void save_network(const WeightedNetwork& network, const std::string& path);
WeightedNetwork load_network(const std::string& path);

// CSV emitters with fixed column orders.
std::string rates_to_csv(const RateTrace& trace);
std::string alignment_to_csv(const AlignmentTrace& trace);
std::string diagram_to_csv(const BifurcationDiagram& diagram);
BifurcationDiagram diagram_from_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace rsnn

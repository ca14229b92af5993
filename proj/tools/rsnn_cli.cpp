#include "rsnn/analysis.hpp"
#include "rsnn/config.hpp"
#include "rsnn/errors.hpp"
#include "rsnn/experiment.hpp"
#include "rsnn/io.hpp"
#include "rsnn/svg_plot.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;

double parse_cell(const std::string& cell, const std::string& file, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw rsnn::ParameterError(file + ":" + std::to_string(line) +
                                   ": malformed number '" + cell + "'");
    }
}

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    int workers = 0;
};

std::string default_out_dir() {
    if (const char* env = std::getenv("RSNN_OUT_DIR")) return env;
    return "";
}

rsnn::ExperimentConfig load_with_overrides(const CommonOpts& opts) {
    rsnn::ExperimentConfig cfg = rsnn::load_config_file(opts.config_path);
    if (opts.seed) cfg.simulation.seed = *opts.seed;
    if (opts.out_dir) cfg.output_dir = *opts.out_dir;
    else if (const std::string env = default_out_dir(); !env.empty())
        cfg.output_dir = (std::filesystem::path(env) /
                          std::filesystem::path(cfg.output_dir).filename()).string();
    return cfg;
}

int cmd_run(const CommonOpts& opts, bool require_sweep) {
    rsnn::ExperimentConfig cfg = load_with_overrides(opts);
    if (require_sweep && cfg.kind != rsnn::ExperimentKind::bifurcation_sweep) {
        std::cerr << "error: 'sweep' needs a bifurcation-sweep config (got "
                  << rsnn::experiment_kind_name(cfg.kind) << ")\n";
        return kExitConfig;
    }
    const int workers = opts.workers > 0
                            ? opts.workers
                            : static_cast<int>(std::thread::hardware_concurrency());
    const rsnn::ExperimentOutputs outputs = rsnn::run_experiment(cfg, workers);
    std::cout << rsnn::experiment_kind_name(cfg.kind) << " experiment done; wrote "
              << outputs.files.size() << " files to " << cfg.output_dir << "\n";
    if (outputs.calibration)
        std::cout << "  calibrated gain " << outputs.calibration->gain
                  << ", predicted alpha* " << outputs.calibration->predicted_alpha_star
                  << "\n";
    if (outputs.critical)
        std::cout << "  detected alpha* " << outputs.critical->alpha_star << " in ["
                  << outputs.critical->band_lo << ", " << outputs.critical->band_hi
                  << "]\n";
    else if (cfg.kind == rsnn::ExperimentKind::bifurcation_sweep)
        std::cout << "  no bifurcation detected in range\n";
    return 0;
}

int cmd_validate(const std::string& path) {
    rsnn::ExperimentConfig cfg;
    const auto violations = rsnn::validate_config_file(path, &cfg);
    if (violations.empty()) {
        std::cout << "OK\n";
        return 0;
    }
    for (const auto& v : violations) {
        std::cerr << path;
        if (v.line > 0) std::cerr << ":" << v.line;
        if (!v.where.empty()) std::cerr << ": " << v.where;
        std::cerr << ": " << v.message << "\n";
    }
    return kExitConfig;
}

int cmd_plot(const std::string& kind, const std::string& input,
             const std::string& output, const std::string& title) {
    rsnn::PlotStyle style;
    style.title = title;
    std::string svg;
    if (kind == "raster") {
        const rsnn::SpikeRecord record = rsnn::load_spike_record(input);
        svg = rsnn::render_raster_svg(record, {}, style);
    } else if (kind == "alignment") {
        const std::string text = rsnn::read_text_file(input);
        rsnn::AlignmentTrace trace;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || lineno == 1) continue;
            std::istringstream ls(line);
            std::string cell;
            std::vector<double> row;
            while (std::getline(ls, cell, ','))
                row.push_back(parse_cell(cell, input, lineno));
            if (row.size() < 2)
                throw rsnn::ParameterError(input + ":" + std::to_string(lineno) +
                                           ": expected time and at least one rho column");
            trace.times_ms.push_back(row.front());
            trace.rho.emplace_back(row.begin() + 1, row.end());
        }
        svg = rsnn::render_alignment_svg(trace, style);
    } else if (kind == "profile") {
        const std::string text = rsnn::read_text_file(input);
        std::istringstream in(text);
        std::string line;
        std::vector<double> inputs, outputs;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || lineno == 1) continue;
            std::istringstream ls(line);
            std::string cluster, i, o;
            if (!std::getline(ls, cluster, ',') || !std::getline(ls, i, ',') ||
                !std::getline(ls, o))
                throw rsnn::ParameterError(input + ":" + std::to_string(lineno) +
                                           ": expected 3 columns");
            inputs.push_back(parse_cell(i, input, lineno));
            outputs.push_back(parse_cell(o, input, lineno));
        }
        svg = rsnn::render_profile_svg(inputs, outputs, style);
    } else if (kind == "diagram") {
        const rsnn::BifurcationDiagram diagram =
            rsnn::diagram_from_csv(rsnn::read_text_file(input));
        svg = rsnn::render_diagram_svg(diagram, style);
    } else {
        std::cerr << "error: unknown plot kind '" << kind << "'\n";
        return kExitConfig;
    }
    rsnn::write_text_file(output, svg);
    std::cout << "wrote " << output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"recurrent spiking network simulator and analysis toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("--config", opts.config_path, "experiment config file")->required();
    run->add_option("--seed", opts.seed, "override the config seed");
    run->add_option("--out", opts.out_dir, "override the output directory");
    run->add_option("--workers", opts.workers, "parallel sweep workers");

    auto* sweep = app.add_subcommand("sweep", "run a bifurcation sweep config");
    sweep->add_option("--config", opts.config_path, "sweep config file")->required();
    sweep->add_option("--seed", opts.seed, "override the config seed");
    sweep->add_option("--out", opts.out_dir, "override the output directory");
    sweep->add_option("--workers", opts.workers, "parallel sweep workers");

    auto* validate = app.add_subcommand("validate", "validate a config file");
    std::string validate_path;
    validate->add_option("--config", validate_path, "config file")->required();

    auto* plot = app.add_subcommand("plot", "render a data file to SVG");
    std::string plot_kind, plot_in, plot_out, plot_title;
    plot->add_option("--kind", plot_kind, "raster|alignment|profile|diagram")->required();
    plot->add_option("--in", plot_in, "input data file")->required();
    plot->add_option("--out", plot_out, "output SVG path")->required();
    plot->add_option("--title", plot_title, "plot title");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts, false);
        if (sweep->parsed()) return cmd_run(opts, true);
        if (validate->parsed()) return cmd_validate(validate_path);
        if (plot->parsed()) return cmd_plot(plot_kind, plot_in, plot_out, plot_title);
    } catch (const rsnn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rsnn::NumericalError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitSimulation;
    } catch (const rsnn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}

#include "bspf/error.hpp"
#include "bspf/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<int> parse_sizes(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

std::vector<bspf::Method> parse_methods(const std::string& s) {
    std::vector<bspf::Method> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(bspf::parse_method(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"B-spline-periodized Fourier experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", bspf::version());

    std::string config_path;
    std::string out_dir;
    std::string sizes;
    std::string method;
    std::uint64_t seed = 0;
    bool print_config = false;

    const std::pair<bspf::Experiment, const char*> commands[] = {
        {bspf::Experiment::diff_bench, "Differentiation convergence sweep"},
        {bspf::Experiment::int_bench, "Integration convergence sweep"},
        {bspf::Experiment::map_bench, "Uniform vs mapped grid differentiation"},
        {bspf::Experiment::timing, "Wall time of one derivative vs N"},
        {bspf::Experiment::burgers, "Viscous Burgers traveling front"},
        {bspf::Experiment::swe, "Shallow water with Manning friction"},
    };
    for (const auto& [e, help] : commands) {
        CLI::App* sub = app.add_subcommand(bspf::to_string(e), help);
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Noise seed");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--sizes", sizes, "Comma-separated grid sizes");
        sub->add_option("--method", method, "Comma-separated methods: bspf, chebyshev, simpson, fd");
        sub->add_flag("--print-config", print_config, "Print the resolved config and exit");
    }
    CLI11_PARSE(app, argc, argv);

    try {
        const CLI::App* sub = app.get_subcommands().front();
        const bspf::Experiment e = bspf::parse_experiment(sub->get_name());
        bspf::ExperimentConfig cfg = bspf::default_config(e);
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            nlohmann::json j;
            try {
                is >> j;
            } catch (const nlohmann::json::exception& ex) {
                throw bspf::Error(bspf::ErrorKind::invalid_config, std::string("cannot parse config: ") + ex.what());
            }
            if (j.contains("experiment") && j.at("experiment") != sub->get_name()) {
                throw bspf::Error(bspf::ErrorKind::invalid_config, "config experiment differs from the subcommand");
            }
            cfg = bspf::config_from_json(j, cfg);
        }
        if (sub->count("--seed")) cfg.seed = seed;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!sizes.empty()) cfg.sizes = parse_sizes(sizes);
        if (!method.empty()) cfg.methods = parse_methods(method);
        bspf::validate(cfg);
        if (print_config) {
            std::cout << bspf::to_json(cfg).dump(2) << '\n';
            return 0;
        }
        const nlohmann::json man = bspf::run_experiment(cfg);
        std::cout << man.dump(2) << '\n';
        return man.at("status") == "ok" ? 0 : 1;
    } catch (const bspf::Error& ex) {
        std::cerr << "error (" << bspf::to_string(ex.kind()) << "): " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
}

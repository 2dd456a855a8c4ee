#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rahbo/benchmarks.hpp"
#include "rahbo/config.hpp"
#include "rahbo/errors.hpp"
#include "rahbo/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

int cmd_run(const std::string& config_path, const std::vector<std::uint64_t>& seeds,
            const std::string& out, int threads) {
    rahbo::ExperimentConfig config;
    try {
        config = rahbo::load_config_file(config_path);
        if (!seeds.empty()) {
            config.seeds = seeds;
        }
        if (!out.empty()) {
            config.output_dir = out;
        }
    } catch (const rahbo::InputError& e) {
        std::cerr << "config error (" << config_path << "):\n" << e.what() << '\n';
        return kExitConfigError;
    }
    for (const auto& w : rahbo::config_warnings(config)) {
        std::cerr << "warning: " << w << '\n';
    }
    try {
        const auto artifacts = rahbo::run_experiment(config, threads);
        std::cout << "wrote " << artifacts.results.size() << " trace(s) to "
                  << artifacts.out_dir.string() << " (config " << artifacts.hash
                  << ", " << artifacts.wall_time_seconds << " s)\n";
        return kExitOk;
    } catch (const rahbo::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const rahbo::InputError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

int cmd_validate(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "config error: cannot open " << config_path << '\n';
        return kExitConfigError;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "config error (" << config_path << "): " << e.what() << '\n';
        return kExitConfigError;
    }
    const auto errors = rahbo::validate_config(j);
    if (!errors.empty()) {
        std::cerr << "config error (" << config_path << "):\n";
        for (const auto& e : errors) {
            std::cerr << "  " << e << '\n';
        }
        return kExitConfigError;
    }
    const auto config = rahbo::config_from_json(j);
    for (const auto& w : rahbo::config_warnings(config)) {
        std::cerr << "warning: " << w << '\n';
    }
    std::cout << rahbo::config_to_json(config).dump(2) << '\n';
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& metric,
                const std::string& out) {
    try {
        std::vector<std::filesystem::path> paths(dirs.begin(), dirs.end());
        rahbo::compare_runs(paths, metric, out.empty() ? "compare_out" : out, std::cout);
        return kExitOk;
    } catch (const rahbo::InputError& e) {
        std::cerr << "compare error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

int cmd_list_benchmarks() {
    for (const auto& name : rahbo::benchmark_names()) {
        const auto bench = rahbo::make_benchmark(name);
        std::cout << name << ": dim=" << bench.dim() << " domain=[";
        for (int d = 0; d < bench.dim(); ++d) {
            if (d > 0) std::cout << "]x[";
            std::cout << bench.lo(d) << "," << bench.hi(d);
        }
        std::cout << "] noise_var in [" << bench.var_lo << "," << bench.var_hi << "]\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-averse heteroscedastic Bayesian optimization benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::string out;
    int threads = 1;

    auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", config_path, "Path to the JSON config")->required();
    run->add_option("--seeds", seeds, "Override the config's seed list");
    run->add_option("--out", out, "Override the config's output directory");
    run->add_option("--threads", threads, "Seed-level parallelism")
        ->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Validate a JSON config");
    validate->add_option("--config", config_path, "Path to the JSON config")->required();

    std::vector<std::string> dirs;
    std::string metric = "cumulative";
    auto* compare = app.add_subcommand("compare", "Compare finished run directories");
    compare->add_option("dirs", dirs, "Run directories")->required()->expected(-1);
    compare->add_option("--metric", metric, "cumulative or simple");
    compare->add_option("--out", out, "Output directory for comparison CSVs");

    auto* list = app.add_subcommand("list-benchmarks", "List available benchmarks");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(config_path, seeds, out, threads);
    }
    if (validate->parsed()) {
        return cmd_validate(config_path);
    }
    if (compare->parsed()) {
        return cmd_compare(dirs, metric, out);
    }
    if (list->parsed()) {
        return cmd_list_benchmarks();
    }
    return kExitOk;
}

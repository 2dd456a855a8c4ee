#include "rahbo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rahbo/algorithms.hpp"
#include "rahbo/benchmarks.hpp"
#include "rahbo/csv.hpp"
#include "rahbo/errors.hpp"

namespace rahbo {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kRuleColumn[kNumReportRules] = {
    "simple_lcb_mv", "simple_lcb_mv_per_round", "simple_best_observed",
    "simple_max_empirical_mv"};

void write_aggregate_csv(std::ostream& out, const std::vector<RunResult>& results) {
    const int T = static_cast<int>(results.front().trace.size());
    const int n = static_cast<int>(results.size());
    out << "round,r_cum_mean,r_cum_se,r_cum_lo,r_cum_hi";
    for (const char* name : kRuleColumn) {
        out << ',' << name << "_mean" << ',' << name << "_se" << ',' << name
            << "_lo" << ',' << name << "_hi";
    }
    out << '\n';

    auto mean_se = [n](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double v : xs) mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : xs) ss += (v - mean) * (v - mean);
        const double se = n > 1 ? std::sqrt(ss / (n - 1)) / std::sqrt(double(n)) : 0.0;
        return std::pair<double, double>(mean, se);
    };

    std::vector<double> buffer(static_cast<std::size_t>(n));
    for (int t = 0; t < T; ++t) {
        out << (t + 1);
        for (int i = 0; i < n; ++i) {
            buffer[i] = results[i].trace[t].r_cum;
        }
        auto [m, se] = mean_se(buffer);
        out << ',' << format_real(m) << ',' << format_real(se) << ','
            << format_real(m - 2 * se) << ',' << format_real(m + 2 * se);
        for (int rule = 0; rule < kNumReportRules; ++rule) {
            for (int i = 0; i < n; ++i) {
                buffer[i] = results[i].trace[t].simple_regret_by_rule[rule];
            }
            auto [ms, ses] = mean_se(buffer);
            out << ',' << format_real(ms) << ',' << format_real(ses) << ','
                << format_real(ms - 2 * ses) << ',' << format_real(ms + 2 * ses);
        }
        out << '\n';
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

struct LoadedRun {
    std::string algorithm;
    std::string benchmark;
    double alpha = 0.0;
    int T = 0;
    int k = 0;
    std::vector<std::uint64_t> seeds;
    // aggregate.csv columns by name
    std::map<std::string, std::vector<double>> aggregate;
    // per seed, per round: acquired points (domain coordinates)
    std::vector<std::vector<Eigen::VectorXd>> acquired;
};

LoadedRun load_run_dir(const fs::path& dir) {
    std::ifstream meta_in(dir / "meta.json");
    if (!meta_in) {
        throw InputError("compare: cannot open " + (dir / "meta.json").string());
    }
    json meta;
    try {
        meta = json::parse(meta_in);
    } catch (const json::parse_error& e) {
        throw InputError("compare: bad meta.json in " + dir.string() + ": " + e.what());
    }
    LoadedRun run;
    const json& cfg = meta.at("config");
    run.algorithm = cfg.at("algorithm").get<std::string>();
    run.benchmark = cfg.at("benchmark").get<std::string>();
    run.alpha = cfg.at("alpha").get<double>();
    run.T = cfg.at("T").get<int>();
    run.k = cfg.at("k").get<int>();
    for (const auto& s : cfg.at("seeds")) {
        run.seeds.push_back(s.get<std::uint64_t>());
    }

    {
        std::ifstream agg_in(dir / "aggregate.csv");
        if (!agg_in) {
            throw InputError("compare: cannot open " + (dir / "aggregate.csv").string());
        }
        std::string line;
        std::getline(agg_in, line);
        const std::vector<std::string> header = split_csv_line(line);
        std::vector<std::vector<double>> columns(header.size());
        while (std::getline(agg_in, line)) {
            if (line.empty()) continue;
            const auto cells = split_csv_line(line);
            for (std::size_t c = 0; c < cells.size() && c < columns.size(); ++c) {
                columns[c].push_back(std::stod(cells[c]));
            }
        }
        for (std::size_t c = 0; c < header.size(); ++c) {
            run.aggregate[header[c]] = std::move(columns[c]);
        }
    }

    const int dim = make_benchmark(run.benchmark).dim();
    for (std::uint64_t seed : run.seeds) {
        const fs::path trace_path = dir / ("trace_seed" + std::to_string(seed) + ".csv");
        std::ifstream trace_in(trace_path);
        if (!trace_in) {
            throw InputError("compare: cannot open " + trace_path.string());
        }
        std::string line;
        std::getline(trace_in, line);  // header
        std::vector<Eigen::VectorXd> points;
        while (std::getline(trace_in, line)) {
            if (line.empty()) continue;
            const auto cells = split_csv_line(line);
            Eigen::VectorXd x(dim);
            for (int d = 0; d < dim; ++d) {
                x(d) = std::stod(cells[static_cast<std::size_t>(1 + d)]);
            }
            points.push_back(std::move(x));
        }
        run.acquired.push_back(std::move(points));
    }
    return run;
}

}  // namespace

std::vector<std::string> config_warnings(const ExperimentConfig& config) {
    std::vector<std::string> warnings;
    const bool theoretical =
        config.beta.mode == BetaSchedule::Mode::Theoretical ||
        config.beta_var.mode == BetaSchedule::Mode::Theoretical;
    auto check_scale = [&](const std::optional<KernelSpec>& kern, const char* name) {
        if (theoretical && kern.has_value() && kern->output_scale > 1.0) {
            warnings.push_back(std::string(name) +
                               ": output_scale > 1 with a theoretical beta schedule; "
                               "the confidence bounds assume kappa <= 1");
        }
    };
    check_scale(config.kernel_f, "kernel_f");
    check_scale(config.kernel_var, "kernel_var");
    if (config.algorithm != Algorithm::RahboUs && config.n_us != 10) {
        warnings.push_back("n_us: only used by rahbo_us; ignored for this algorithm");
    }
    return warnings;
}

void write_trace_csv(std::ostream& out, const RunResult& result, int dim) {
    out << "round";
    for (int d = 0; d < dim; ++d) {
        out << ",x_" << d;
    }
    out << ",sample_mean,sample_var,mv_true,r_inst,r_cum,r_cum_per_sample,"
           "info_gain_f,info_gain_var,beta_used,beta_var_used\n";
    for (const TraceRow& row : result.trace) {
        out << row.round;
        for (int d = 0; d < dim; ++d) {
            out << ',' << format_real(row.x(d));
        }
        out << ',' << format_real(row.sample_mean) << ',' << format_real(row.sample_var)
            << ',' << format_real(row.mv_true) << ',' << format_real(row.r_inst)
            << ',' << format_real(row.r_cum) << ',' << format_real(row.r_cum_per_sample)
            << ',' << format_real(row.info_gain_f) << ',' << format_real(row.info_gain_var)
            << ',' << format_real(row.beta_used) << ',' << format_real(row.beta_var_used)
            << '\n';
    }
}

ExperimentArtifacts run_experiment(const ExperimentConfig& config, int threads) {
    const auto t_start = std::chrono::steady_clock::now();
    const Benchmark bench = make_benchmark(config.benchmark);
    const RunSpec spec = to_run_spec(config);
    validate_run_spec(spec, bench);
    const std::string hash = config_hash(config);

    const int n_seeds = static_cast<int>(config.seeds.size());
    std::vector<RunResult> results(static_cast<std::size_t>(n_seeds));
    std::vector<std::string> failures(static_cast<std::size_t>(n_seeds));

    auto run_one = [&](int i) {
        try {
            RunResult r = run_algorithm(spec, bench, config.seeds[static_cast<std::size_t>(i)]);
            r.config_hash = hash;
            results[static_cast<std::size_t>(i)] = std::move(r);
        } catch (const NumericalError& e) {
            failures[static_cast<std::size_t>(i)] = e.what();
        }
    };

    const int workers = std::max(1, threads);
    if (workers == 1) {
        for (int i = 0; i < n_seeds; ++i) {
            run_one(i);
        }
    } else {
        for (int base = 0; base < n_seeds; base += workers) {
            std::vector<std::future<void>> futs;
            const int end = std::min(n_seeds, base + workers);
            for (int i = base; i < end; ++i) {
                futs.push_back(std::async(std::launch::async, run_one, i));
            }
            for (auto& f : futs) {
                f.get();
            }
        }
    }
    for (int i = 0; i < n_seeds; ++i) {
        if (!failures[static_cast<std::size_t>(i)].empty()) {
            throw NumericalError("seed " + std::to_string(config.seeds[static_cast<std::size_t>(i)]) +
                                 ": " + failures[static_cast<std::size_t>(i)]);
        }
    }

    const fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir);
    for (int i = 0; i < n_seeds; ++i) {
        const fs::path path =
            out_dir / ("trace_seed" + std::to_string(config.seeds[static_cast<std::size_t>(i)]) + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw InputError("cannot write " + path.string());
        }
        write_trace_csv(out, results[static_cast<std::size_t>(i)], bench.dim());
    }
    {
        std::ofstream out(out_dir / "aggregate.csv", std::ios::binary);
        write_aggregate_csv(out, results);
    }

    const auto t_end = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(t_end - t_start).count();
    {
        json meta;
        meta["config"] = config_to_json(config);
        meta["config_hash"] = hash;
        meta["version"] = RAHBO_VERSION;
        meta["wall_time_seconds"] = wall;
        meta["mv_reference"] = results.empty() ? 0.0 : results.front().mv_reference;
        json reported = json::array();
        for (const auto& r : results) {
            std::vector<double> pt(r.reported_point.data(),
                                   r.reported_point.data() + r.reported_point.size());
            reported.push_back(json{{"seed", r.seed}, {"point", pt}});
        }
        meta["reported"] = reported;
        std::ofstream out(out_dir / "meta.json", std::ios::binary);
        out << meta.dump(2) << '\n';
    }

    ExperimentArtifacts artifacts;
    artifacts.results = std::move(results);
    artifacts.out_dir = out_dir;
    artifacts.hash = hash;
    artifacts.wall_time_seconds = wall;
    return artifacts;
}

void compare_runs(const std::vector<fs::path>& run_dirs, const std::string& metric,
                  const fs::path& out_dir, std::ostream& table_out) {
    if (run_dirs.size() < 1) {
        throw InputError("compare: needs at least one run directory");
    }
    if (metric != "cumulative" && metric != "simple") {
        throw InputError("compare: metric must be 'cumulative' or 'simple'");
    }
    std::vector<LoadedRun> runs;
    runs.reserve(run_dirs.size());
    for (const auto& dir : run_dirs) {
        runs.push_back(load_run_dir(dir));
    }
    const LoadedRun& first = runs.front();
    for (std::size_t i = 1; i < runs.size(); ++i) {
        std::vector<std::string> mismatched;
        if (runs[i].benchmark != first.benchmark) mismatched.push_back("benchmark");
        if (runs[i].alpha != first.alpha) mismatched.push_back("alpha");
        if (runs[i].T != first.T) mismatched.push_back("T");
        if (!mismatched.empty()) {
            std::string fields;
            for (const auto& f : mismatched) {
                if (!fields.empty()) fields += ", ";
                fields += f;
            }
            throw InputError("compare: run " + run_dirs[i].string() +
                             " is incompatible with " + run_dirs.front().string() +
                             " (mismatched: " + fields + ")");
        }
    }

    const std::string mean_col =
        metric == "cumulative" ? "r_cum_mean" : "simple_lcb_mv_mean";
    const std::string se_col = metric == "cumulative" ? "r_cum_se" : "simple_lcb_mv_se";

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string label = runs[i].algorithm;
        for (std::size_t jj = 0; jj < i; ++jj) {
            if (runs[jj].algorithm == runs[i].algorithm) {
                label += "#" + std::to_string(i);
                break;
            }
        }
        labels.push_back(label);
    }

    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "comparison.csv", std::ios::binary);
        out << "round";
        for (const auto& label : labels) {
            out << ',' << label << "_mean," << label << "_se";
        }
        out << '\n';
        for (int t = 0; t < first.T; ++t) {
            out << (t + 1);
            for (const auto& run : runs) {
                out << ',' << format_real(run.aggregate.at(mean_col)[static_cast<std::size_t>(t)])
                    << ',' << format_real(run.aggregate.at(se_col)[static_cast<std::size_t>(t)]);
            }
            out << '\n';
        }
    }

    // Histogram of the true noise variance at every acquired point,
    // 20 bins over the benchmark's [var_lo, var_hi].
    const Benchmark bench = make_benchmark(first.benchmark);
    constexpr int kBins = 20;
    const double lo = bench.var_lo, hi = bench.var_hi;
    const double width = (hi - lo) / kBins;
    std::vector<std::vector<int>> counts(runs.size(), std::vector<int>(kBins, 0));
    std::vector<double> mean_rho(runs.size(), 0.0);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        int total = 0;
        for (const auto& per_seed : runs[i].acquired) {
            for (const auto& x : per_seed) {
                const double rho = bench.noise_var(x);
                int bin = static_cast<int>((rho - lo) / width);
                bin = std::clamp(bin, 0, kBins - 1);
                counts[i][static_cast<std::size_t>(bin)]++;
                mean_rho[i] += rho;
                total++;
            }
        }
        if (total > 0) mean_rho[i] /= total;
    }
    {
        std::ofstream out(out_dir / "rho_hist.csv", std::ios::binary);
        out << "bin_lo,bin_hi";
        for (const auto& label : labels) {
            out << ',' << label << "_count";
        }
        out << '\n';
        for (int b = 0; b < kBins; ++b) {
            out << format_real(lo + b * width) << ',' << format_real(lo + (b + 1) * width);
            for (std::size_t i = 0; i < runs.size(); ++i) {
                out << ',' << counts[i][static_cast<std::size_t>(b)];
            }
            out << '\n';
        }
    }

    table_out << "benchmark=" << first.benchmark << " alpha=" << first.alpha
              << " T=" << first.T << " metric=" << metric << '\n';
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& mean = runs[i].aggregate.at(mean_col);
        const auto& se = runs[i].aggregate.at(se_col);
        const double m = mean.back();
        const double s = se.back();
        table_out << "  " << labels[i] << ": final " << metric << " = " << m
                  << " +/- " << 2 * s << " (2 SE), mean acquired rho^2 = "
                  << mean_rho[i] << '\n';
    }
}

}  // namespace rahbo

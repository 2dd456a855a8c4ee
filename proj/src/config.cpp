#include "rahbo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rahbo/benchmarks.hpp"
#include "rahbo/errors.hpp"

namespace rahbo {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "benchmark", "algorithm", "alpha", "k", "T", "n_init", "n_us",
    "beta", "beta_var", "kernel_f", "kernel_var", "fit_family",
    "hyperfit_budget", "refit_every", "candidate_grid", "var_lo", "var_hi",
    "seeds", "report_rule", "output_dir"};

struct Parser {
    const json& j;
    std::vector<std::string>& errors;

    void fail(const std::string& field, const std::string& message) {
        errors.push_back(field + ": " + message);
    }

    double number(const char* field, double fallback) {
        if (!j.contains(field)) return fallback;
        if (!j.at(field).is_number()) {
            fail(field, "must be a number");
            return fallback;
        }
        return j.at(field).get<double>();
    }

    int integer(const char* field, int fallback) {
        if (!j.contains(field)) return fallback;
        if (!j.at(field).is_number_integer()) {
            fail(field, "must be an integer");
            return fallback;
        }
        return j.at(field).get<int>();
    }

    std::string text(const char* field, const std::string& fallback) {
        if (!j.contains(field)) return fallback;
        if (!j.at(field).is_string()) {
            fail(field, "must be a string");
            return fallback;
        }
        return j.at(field).get<std::string>();
    }
};

BetaSchedule parse_schedule(const json& j, const std::string& field,
                            std::vector<std::string>& errors) {
    BetaSchedule schedule;
    if (!j.contains(field)) return schedule;
    const json& s = j.at(field);
    if (!s.is_object()) {
        errors.push_back(field + ": must be an object");
        return schedule;
    }
    if (s.contains("mode")) {
        const std::string mode = s.at("mode").is_string() ? s.at("mode").get<std::string>() : "";
        if (mode == "fixed") {
            schedule.mode = BetaSchedule::Mode::Fixed;
        } else if (mode == "theoretical") {
            schedule.mode = BetaSchedule::Mode::Theoretical;
        } else {
            errors.push_back(field + ".mode: must be 'fixed' or 'theoretical'");
        }
    }
    auto num = [&](const char* key, double fallback) {
        if (!s.contains(key)) return fallback;
        if (!s.at(key).is_number()) {
            errors.push_back(field + "." + key + ": must be a number");
            return fallback;
        }
        return s.at(key).get<double>();
    };
    schedule.fixed_value = num("fixed_value", schedule.fixed_value);
    schedule.delta = num("delta", schedule.delta);
    schedule.rkhs_bound = num("rkhs_bound", schedule.rkhs_bound);
    schedule.lambda = num("lambda", schedule.lambda);
    if (!(schedule.fixed_value > 0.0)) {
        errors.push_back(field + ".fixed_value: must be > 0");
    }
    if (!(schedule.delta > 0.0 && schedule.delta < 1.0)) {
        errors.push_back(field + ".delta: must lie in (0,1)");
    }
    if (!(schedule.rkhs_bound > 0.0)) {
        errors.push_back(field + ".rkhs_bound: must be > 0");
    }
    if (!(schedule.lambda > 0.0)) {
        errors.push_back(field + ".lambda: must be > 0");
    }
    return schedule;
}

std::optional<KernelSpec> parse_kernel(const json& j, const std::string& field,
                                       int bench_dim,
                                       std::vector<std::string>& errors) {
    if (!j.contains(field)) return std::nullopt;
    const json& s = j.at(field);
    if (s.is_string()) {
        if (s.get<std::string>() != "fit") {
            errors.push_back(field + ": string form must be \"fit\"");
        }
        return std::nullopt;
    }
    if (!s.is_object()) {
        errors.push_back(field + ": must be \"fit\" or a kernel object");
        return std::nullopt;
    }
    KernelSpec spec;
    if (s.contains("family") && s.at("family").is_string()) {
        try {
            spec.family = kernel_family_from_string(s.at("family").get<std::string>());
        } catch (const InputError& e) {
            errors.push_back(field + ".family: " + e.what());
        }
    } else {
        errors.push_back(field + ".family: required string");
    }
    if (s.contains("lengthscales") && s.at("lengthscales").is_array()) {
        const auto& arr = s.at("lengthscales");
        spec.lengthscales.resize(static_cast<Eigen::Index>(arr.size()));
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number() || !(arr[i].get<double>() > 0.0)) {
                errors.push_back(field + ".lengthscales: entries must be positive numbers");
                return std::nullopt;
            }
            spec.lengthscales(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
        }
        if (bench_dim > 0 && spec.dim() != bench_dim) {
            errors.push_back(field + ".lengthscales: expected " +
                             std::to_string(bench_dim) + " entries for this benchmark");
        }
    } else {
        errors.push_back(field + ".lengthscales: required array of positive numbers");
        return std::nullopt;
    }
    if (s.contains("output_scale")) {
        if (!s.at("output_scale").is_number() || !(s.at("output_scale").get<double>() > 0.0)) {
            errors.push_back(field + ".output_scale: must be a positive number");
        } else {
            spec.output_scale = s.at("output_scale").get<double>();
        }
    }
    return spec;
}

json schedule_to_json(const BetaSchedule& s) {
    return json{{"mode", s.mode == BetaSchedule::Mode::Fixed ? "fixed" : "theoretical"},
                {"fixed_value", s.fixed_value},
                {"delta", s.delta},
                {"rkhs_bound", s.rkhs_bound},
                {"lambda", s.lambda}};
}

json kernel_to_json(const std::optional<KernelSpec>& spec) {
    if (!spec.has_value()) return json("fit");
    std::vector<double> ls(spec->lengthscales.data(),
                           spec->lengthscales.data() + spec->lengthscales.size());
    return json{{"family", to_string(spec->family)},
                {"lengthscales", ls},
                {"output_scale", spec->output_scale}};
}

ExperimentConfig parse(const json& j, std::vector<std::string>& errors) {
    ExperimentConfig config;
    if (!j.is_object()) {
        errors.push_back("config: top level must be a JSON object");
        return config;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!kKnownKeys.contains(it.key())) {
            errors.push_back(it.key() + ": unknown field");
        }
    }
    Parser p{j, errors};

    config.benchmark = p.text("benchmark", config.benchmark);
    int bench_dim = 0;
    try {
        bench_dim = make_benchmark(config.benchmark).dim();
    } catch (const InputError& e) {
        errors.push_back(std::string("benchmark: ") + e.what());
    }

    const std::string algo = p.text("algorithm", to_string(config.algorithm));
    try {
        config.algorithm = algorithm_from_string(algo);
    } catch (const InputError& e) {
        errors.push_back(std::string("algorithm: ") + e.what());
    }

    config.alpha = p.number("alpha", config.alpha);
    if (!(config.alpha >= 0.0)) {
        errors.push_back("alpha: must be >= 0");
    }
    config.k = p.integer("k", config.k);
    if (config.k < 2) {
        errors.push_back("k: must be >= 2 (sample variance needs two draws)");
    }
    config.T = p.integer("T", config.T);
    if (config.T < 1) {
        errors.push_back("T: must be >= 1");
    }
    config.n_init = p.integer("n_init", config.n_init);
    if (config.n_init < 1) {
        errors.push_back("n_init: must be >= 1");
    }
    config.n_us = p.integer("n_us", config.n_us);
    if (config.n_us < 0) {
        errors.push_back("n_us: must be >= 0");
    }
    config.beta = parse_schedule(j, "beta", errors);
    config.beta_var = parse_schedule(j, "beta_var", errors);
    config.kernel_f = parse_kernel(j, "kernel_f", bench_dim, errors);
    config.kernel_var = parse_kernel(j, "kernel_var", bench_dim, errors);
    const std::string family = p.text("fit_family", to_string(config.fit_family));
    try {
        config.fit_family = kernel_family_from_string(family);
    } catch (const InputError& e) {
        errors.push_back(std::string("fit_family: ") + e.what());
    }
    config.hyperfit_budget = p.integer("hyperfit_budget", config.hyperfit_budget);
    if (config.hyperfit_budget < 1) {
        errors.push_back("hyperfit_budget: must be >= 1");
    }
    config.refit_every = p.integer("refit_every", config.refit_every);
    if (config.refit_every < 0) {
        errors.push_back("refit_every: must be >= 0");
    }
    config.candidate_grid = p.integer("candidate_grid", config.candidate_grid);
    if (config.candidate_grid < 0) {
        errors.push_back("candidate_grid: must be >= 0 (0 means 1000 per dimension)");
    }
    if (j.contains("var_lo") && !j.at("var_lo").is_null()) {
        config.var_lo = p.number("var_lo", config.var_lo);
        if (!(config.var_lo >= 0.0)) {
            errors.push_back("var_lo: must be >= 0");
        }
    }
    if (j.contains("var_hi") && !j.at("var_hi").is_null()) {
        config.var_hi = p.number("var_hi", config.var_hi);
        if (!(config.var_hi > 0.0)) {
            errors.push_back("var_hi: must be > 0");
        }
    }
    if (config.var_lo >= 0.0 && config.var_hi >= 0.0 && !(config.var_lo < config.var_hi)) {
        errors.push_back("var_lo/var_hi: requires var_lo < var_hi");
    }
    if (j.contains("seeds")) {
        if (!j.at("seeds").is_array() || j.at("seeds").empty()) {
            errors.push_back("seeds: must be a non-empty array of integers");
        } else {
            config.seeds.clear();
            std::set<std::uint64_t> seen;
            for (const auto& s : j.at("seeds")) {
                if (!s.is_number_integer() || s.get<long long>() < 0) {
                    errors.push_back("seeds: entries must be nonnegative integers");
                    break;
                }
                const auto value = s.get<std::uint64_t>();
                if (!seen.insert(value).second) {
                    errors.push_back("seeds: entries must be distinct");
                    break;
                }
                config.seeds.push_back(value);
            }
        }
    }
    if (config.beta.lambda != config.beta_var.lambda) {
        errors.push_back("beta/beta_var: lambda must match (one GP regularizer)");
    }
    const std::string rule = p.text("report_rule", to_string(config.report_rule));
    try {
        config.report_rule = report_rule_from_string(rule);
    } catch (const InputError& e) {
        errors.push_back(std::string("report_rule: ") + e.what());
    }
    config.output_dir = p.text("output_dir", config.output_dir);
    return config;
}

}  // namespace

std::vector<std::string> validate_config(const nlohmann::json& j) {
    std::vector<std::string> errors;
    parse(j, errors);
    return errors;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    std::vector<std::string> errors;
    ExperimentConfig config = parse(j, errors);
    if (!errors.empty()) {
        std::ostringstream oss;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (i > 0) oss << '\n';
            oss << errors[i];
        }
        throw InputError(oss.str());
    }
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open config file: " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    return json{{"benchmark", config.benchmark},
                {"algorithm", to_string(config.algorithm)},
                {"alpha", config.alpha},
                {"k", config.k},
                {"T", config.T},
                {"n_init", config.n_init},
                {"n_us", config.n_us},
                {"beta", schedule_to_json(config.beta)},
                {"beta_var", schedule_to_json(config.beta_var)},
                {"kernel_f", kernel_to_json(config.kernel_f)},
                {"kernel_var", kernel_to_json(config.kernel_var)},
                {"fit_family", to_string(config.fit_family)},
                {"hyperfit_budget", config.hyperfit_budget},
                {"refit_every", config.refit_every},
                {"candidate_grid", config.candidate_grid},
                {"var_lo", config.var_lo},
                {"var_hi", config.var_hi},
                {"seeds", config.seeds},
                {"report_rule", to_string(config.report_rule)},
                {"output_dir", config.output_dir}};
}

std::string config_hash(const ExperimentConfig& config) {
    json j = config_to_json(config);
    j.erase("output_dir");
    const std::string canonical = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

RunSpec to_run_spec(const ExperimentConfig& config) {
    RunSpec spec;
    spec.algorithm = config.algorithm;
    spec.alpha = config.alpha;
    spec.k = config.k;
    spec.T = config.T;
    spec.n_init = config.n_init;
    spec.n_us = config.n_us;
    spec.beta = config.beta;
    spec.beta_var = config.beta_var;
    spec.kernel_f = config.kernel_f;
    spec.kernel_var = config.kernel_var;
    spec.fit_family = config.fit_family;
    spec.hyperfit_budget = config.hyperfit_budget;
    spec.refit_every = config.refit_every;
    spec.candidate_grid = config.candidate_grid;
    spec.lambda = config.beta.lambda;
    spec.var_lo = config.var_lo;
    spec.var_hi = config.var_hi;
    spec.report_rule = config.report_rule;
    return spec;
}

}  // namespace rahbo

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rmtlab/error.hpp"
#include "rmtlab/lab/config.hpp"
#include "rmtlab/lab/csv.hpp"
#include "rmtlab/lab/experiments.hpp"
#include "rmtlab/lab/verify.hpp"

namespace {

using namespace rmtlab;
using namespace rmtlab::lab;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Overrides {
    std::string config_path;
    std::optional<std::string> model;
    std::optional<Index> n;
    std::optional<std::string> t;
    std::optional<std::string> t_range;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon;
    std::optional<std::string> out;
    bool svg = false;
    std::optional<std::string> w;
    std::optional<Index> rank;
    std::optional<double> radius;
    std::optional<double> level;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON config file; flags override its fields");
    sub->add_option("--model", o.model, "additive | antihermitian | multiplicative");
    sub->add_option("--n", o.n, "matrix dimension");
    sub->add_option("--t", o.t, "t value or regime: 2.5, mu_sqrt_n:2, mu_over_sqrt_n:2, n_pow:-0.7[:c]");
    sub->add_option("--t-range", o.t_range, "a:b:steps");
    sub->add_option("--trials", o.trials, "number of trials");
    sub->add_option("--seed", o.seed, "master seed (default from RMT_LAB_SEED, else 0)");
    sub->add_option("--epsilon", o.epsilon, "domain exponent epsilon");
    sub->add_option("--out", o.out, "output directory");
    sub->add_flag("--svg", o.svg, "also write SVG trajectory plots");
    sub->add_option("--w", o.w, "additive w vector: v | random");
    sub->add_option("--rank", o.rank, "perturbation rank (multiplicative)");
    sub->add_option("--radius", o.radius, "gaf: disk radius in (0, 1)");
    sub->add_option("--level", o.level, "gaf: level c of g - c");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig c;
    if (!o.config_path.empty()) c = load_config_file(o.config_path, c);
    if (const auto env = seed_from_env()) c.seed = *env;
    if (o.model) c.model = parse_model_kind(*o.model);
    if (o.n) c.n = *o.n;
    if (o.t && o.t_range) fail(ErrorKind::InvalidConfig, "--t and --t-range are mutually exclusive");
    if (o.t) c.t = TSpec::parse(*o.t);
    if (o.t_range) {
        c.t = TSpec::parse(*o.t_range);
        if (c.t.kind != TSpec::Kind::Range) fail(ErrorKind::InvalidConfig, "--t-range expects a:b:steps");
    }
    if (o.trials) c.trials = *o.trials;
    if (o.seed) c.seed = *o.seed;
    if (o.epsilon) c.epsilon = *o.epsilon;
    if (o.out) c.out_dir = *o.out;
    if (o.svg) c.svg = true;
    if (o.w) {
        if (*o.w != "v" && *o.w != "random") fail(ErrorKind::InvalidConfig, "--w must be v or random");
        c.w = *o.w == "v" ? WMode::SameAsV : WMode::Random;
    }
    if (o.rank) c.rank = *o.rank;
    if (o.radius) c.radius = *o.radius;
    if (o.level) c.level = *o.level;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rank-one perturbations of random matrices: experiments and verification"};
    app.require_subcommand(1);

    Overrides overrides;
    for (const auto& name : experiment_commands()) {
        add_common(app.add_subcommand(name, "run the " + name + " experiment"), overrides);
    }

    std::string suite = "all";
    std::optional<std::uint64_t> verify_seed;
    std::string json_path;
    auto* verify = app.add_subcommand("verify", "run acceptance suites");
    verify->add_option("suite", suite, "suite name or 'all'");
    verify->add_option("--seed", verify_seed, "master seed for the suites");
    verify->add_option("--json", json_path, "write machine-readable records to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (verify->parsed()) {
            const auto& names = suite_names();
            if (std::find(names.begin(), names.end(), suite) == names.end()) {
                std::cerr << "unknown suite '" << suite << "'; choose one of:";
                for (const auto& n : names) std::cerr << ' ' << n;
                std::cerr << '\n';
                return kExitUsage;
            }
            VerifyOptions options;
            if (const auto env = seed_from_env()) options.seed = *env;
            if (verify_seed) options.seed = *verify_seed;
            const auto records = run_suite(suite, options);
            print_report(std::cout, records);
            if (!json_path.empty()) write_text_file(json_path, records_to_json(records) + "\n");
            return all_pass(records) ? 0 : kExitFailure;
        }
        for (const auto* sub : app.get_subcommands()) {
            const ExperimentConfig config = resolve(overrides);
            const RunSummary summary = run_experiment(sub->get_name(), config);
            std::cout << summary.json << '\n';
            for (const auto& f : summary.files) std::cerr << "wrote " << f.string() << '\n';
        }
        return 0;
    } catch (const LabError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::InvalidConfig ? kExitUsage : kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

// greenplace: batch experiment driver for energy-aware VM placement.
//
//   greenplace run     --algo hapso --synth 500 --seed 1 --out out/
//   greenplace compare --algo hapso --algo ffd --synth 500 --synth 1000 \
//                      --seed 1 --seed 2 --out out/
//
// Exit codes: 0 success, 1 partial comparison failure, 2 bad config,
// 3 workload error.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greenplace/experiment.hpp"

using namespace greenplace;

namespace {

struct CliArgs {
    std::string algo = "hapso";
    std::vector<std::string> algos;
    std::vector<int> synth_sizes;
    std::string swf_path;
    std::vector<std::uint64_t> seeds;
    std::string config_path;
    std::string out_dir = "out";
    int steps = 144;
};

int build_spec(const CliArgs& args, ExperimentSpec& spec, std::string* error) {
    try {
        spec.base_config = args.config_path.empty() ? SimConfig{}
                                                    : load_config_file(args.config_path);
    } catch (const ConfigError& e) {
        *error = e.what();
        return kExitConfig;
    }
    spec.seeds = args.seeds.empty() ? std::vector<std::uint64_t>{1} : args.seeds;
    spec.out_dir = args.out_dir;
    spec.steps = args.steps;
    spec.workload.swf_path = args.swf_path;
    if (!args.synth_sizes.empty())
        spec.workload.synth_n = args.synth_sizes.front();
    if (spec.workload.swf_path.empty() && spec.workload.synth_n <= 0) {
        *error = "a workload is required: --synth N or --swf PATH";
        return kExitConfig;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy-aware VM placement simulator and optimization toolkit"};
    app.require_subcommand(1);

    CliArgs run_args;
    CLI::App* run = app.add_subcommand("run", "single simulation with report files");
    run->add_option("--algo", run_args.algo, "hapso | aco_only | ffd | bfd");
    run->add_option("--synth", run_args.synth_sizes, "synthetic workload size");
    run->add_option("--swf", run_args.swf_path, "SWF trace path");
    run->add_option("--seed", run_args.seeds, "run seed (repeatable; first is used)");
    run->add_option("--config", run_args.config_path, "JSON config file");
    run->add_option("--out", run_args.out_dir, "output directory");
    run->add_option("--steps", run_args.steps, "synthetic arrival horizon in steps");

    CliArgs cmp_args;
    CLI::App* cmp = app.add_subcommand("compare", "algorithm sweep with comparison table");
    cmp->add_option("--algo", cmp_args.algos, "algorithms to compare (repeatable)");
    cmp->add_option("--synth", cmp_args.synth_sizes, "workload sizes (repeatable)");
    cmp->add_option("--swf", cmp_args.swf_path, "SWF trace path");
    cmp->add_option("--seed", cmp_args.seeds, "seeds (repeatable)");
    cmp->add_option("--config", cmp_args.config_path, "JSON config file");
    cmp->add_option("--out", cmp_args.out_dir, "output directory");
    cmp->add_option("--steps", cmp_args.steps, "synthetic arrival horizon in steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kExitConfig;
    }

    std::string error;
    if (run->parsed()) {
        ExperimentSpec spec;
        int rc = build_spec(run_args, spec, &error);
        if (rc != kExitOk) {
            std::fprintf(stderr, "error: %s\n", error.c_str());
            return rc;
        }
        try {
            spec.algorithms = {algorithm_from_string(run_args.algo)};
        } catch (const std::invalid_argument& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return kExitConfig;
        }
        rc = cmd_run(spec, &error);
        if (rc != kExitOk)
            std::fprintf(stderr, "error: %s\n", error.c_str());
        else
            std::printf("wrote %s/ledger.json, steps.csv, config.json\n",
                        spec.out_dir.c_str());
        return rc;
    }

    ExperimentSpec spec;
    int rc = build_spec(cmp_args, spec, &error);
    if (rc != kExitOk) {
        std::fprintf(stderr, "error: %s\n", error.c_str());
        return rc;
    }
    try {
        for (const std::string& a : cmp_args.algos)
            spec.algorithms.push_back(algorithm_from_string(a));
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    std::vector<int> sizes = cmp_args.synth_sizes;
    if (sizes.empty())
        sizes = {0}; // trace input: one size bucket
    rc = cmd_compare(spec, sizes, &error);
    if (rc == kExitConfig || rc == kExitWorkload) {
        std::fprintf(stderr, "error: %s\n", error.c_str());
        return rc;
    }
    std::printf("wrote %s/comparison.csv, comparison.txt\n", spec.out_dir.c_str());
    return rc;
}

// Batch experiment driver behind the CLI: single runs with report files, and
// multi-algorithm multi-seed comparison tables. Independent runs may execute
// concurrently (GREENPLACE_THREADS caps the worker count); assembly is a
// deterministic sequential merge, so thread count never changes any output.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "greenplace/config.hpp"

namespace greenplace {

struct WorkloadSource {
    std::string swf_path; // non-empty selects trace input
    int synth_n = 0;      // >0 selects the synthesizer
};

struct ExperimentSpec {
    WorkloadSource workload;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> seeds;
    SimConfig base_config;
    std::string out_dir = "out";
    int steps = 144; // synthetic arrival horizon in steps
};

struct RunSummary {
    Algorithm algorithm = Algorithm::Hapso;
    std::uint64_t seed = 0;
    int size = 0;
    bool ok = false;
    std::string error;
    double energy_kwh = 0.0;
    double carbon_kg = 0.0;
    double cost_usd = 0.0;
    long migrations = 0;
    double sla_pct = 0.0;
};

// Exit codes shared by the CLI: 0 success, 1 partial comparison failure,
// 2 bad configuration, 3 workload error.
constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;
constexpr int kExitWorkload = 3;

// Resolves the spec's workload source; SwfParseError and missing files map
// to exit code 3 at the CLI boundary.
std::vector<Cloudlet> load_workload(const WorkloadSource& src, double horizon_s,
                                    std::uint64_t seed);

// One simulation with report files (ledger.json, steps.csv, config.json)
// under spec.out_dir. Uses the first algorithm and first seed of the spec.
int cmd_run(const ExperimentSpec& spec, std::string* error = nullptr);

struct CompareResult {
    std::vector<RunSummary> runs;
    std::string csv;
    std::string table;
    bool any_failure = false;
};

// Per-algorithm mean and stddev over seeds, for each workload size.
CompareResult compare(const ExperimentSpec& spec, const std::vector<int>& sizes);

// compare + comparison.csv / comparison.txt under spec.out_dir.
int cmd_compare(const ExperimentSpec& spec, const std::vector<int>& sizes,
                std::string* error = nullptr);

} // namespace greenplace

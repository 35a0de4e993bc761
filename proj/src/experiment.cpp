#include "greenplace/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace greenplace {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0)
        n = 1;
    if (const char* env = std::getenv("GREENPLACE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            n = static_cast<unsigned>(v);
    }
    return static_cast<int>(std::min<std::size_t>(n, jobs));
}

RunSummary summarize(Algorithm algo, std::uint64_t seed, int size,
                     const MetricsLedger& ledger) {
    RunSummary s;
    s.algorithm = algo;
    s.seed = seed;
    s.size = size;
    s.ok = true;
    SiteTotals agg = ledger.aggregate();
    s.energy_kwh = agg.energy_kwh;
    s.carbon_kg = agg.carbon_kg;
    s.cost_usd = agg.cost_usd;
    s.migrations = agg.migrations;
    s.sla_pct = agg.sla_violation_pct();
    return s;
}

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Stats {
    double mean = 0.0;
    double stddev = 0.0; // population
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty())
        return s;
    for (double x : xs)
        s.mean += x;
    s.mean /= xs.size();
    double var = 0.0;
    for (double x : xs)
        var += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(var / xs.size());
    return s;
}

} // namespace

std::vector<Cloudlet> load_workload(const WorkloadSource& src, double horizon_s,
                                    std::uint64_t seed) {
    if (!src.swf_path.empty()) {
        std::ifstream in(src.swf_path);
        if (!in)
            throw SwfParseError(0, "cannot open " + src.swf_path);
        return cloudlets_from_jobs(parse_swf(in));
    }
    if (src.synth_n > 0)
        return synthesize(src.synth_n, horizon_s, seed);
    throw std::invalid_argument("workload source is empty");
}

int cmd_run(const ExperimentSpec& spec, std::string* error) {
    SimConfig cfg = spec.base_config;
    if (!spec.algorithms.empty())
        cfg.algorithm = spec.algorithms.front();
    if (!spec.seeds.empty())
        cfg.seed = spec.seeds.front();

    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        if (error)
            *error = e.what();
        return kExitConfig;
    }

    std::vector<Cloudlet> workload;
    try {
        workload = load_workload(spec.workload, spec.steps * cfg.step_s, cfg.seed);
    } catch (const std::exception& e) {
        if (error)
            *error = e.what();
        return kExitWorkload;
    }

    RunResult result = run_simulation(cfg, workload);

    fs::create_directories(spec.out_dir);
    write_file(fs::path(spec.out_dir) / "ledger.json",
               result.ledger.to_json(cfg.sites).dump(2) + "\n");
    write_file(fs::path(spec.out_dir) / "steps.csv", result.ledger.steps_csv(cfg.sites));
    write_file(fs::path(spec.out_dir) / "config.json",
               resolved_config_json(cfg).dump(2) + "\n");
    return kExitOk;
}

CompareResult compare(const ExperimentSpec& spec, const std::vector<int>& sizes) {
    struct Task {
        int size;
        Algorithm algo;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int size : sizes)
        for (Algorithm algo : spec.algorithms)
            for (std::uint64_t seed : spec.seeds)
                tasks.push_back({size, algo, seed});

    CompareResult result;
    result.runs.resize(tasks.size());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            const Task& t = tasks[i];
            RunSummary& s = result.runs[i];
            s.algorithm = t.algo;
            s.seed = t.seed;
            s.size = t.size;
            try {
                SimConfig cfg = spec.base_config;
                cfg.algorithm = t.algo;
                cfg.seed = t.seed;
                WorkloadSource src = spec.workload;
                if (src.swf_path.empty())
                    src.synth_n = t.size;
                auto workload = load_workload(src, spec.steps * cfg.step_s, t.seed);
                RunResult run = run_simulation(cfg, workload);
                s = summarize(t.algo, t.seed, t.size, run.ledger);
            } catch (const std::exception& e) {
                s.ok = false;
                s.error = e.what();
            }
        }
    };

    const int workers = worker_count(tasks.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }

    // Deterministic assembly in (size, algorithm) order.
    std::string csv =
        "size,algorithm,energy_kwh_mean,energy_kwh_std,carbon_kg_mean,carbon_kg_std,"
        "cost_usd_mean,cost_usd_std,migrations_mean,migrations_std,sla_pct_mean,"
        "sla_pct_std,failed_seeds\n";
    std::ostringstream table;
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-9s %-22s %-22s %-22s %-18s %-16s\n", "size",
                  "algo", "energy_kwh", "carbon_kg", "cost_usd", "migrations", "sla_pct");
    table << line;

    for (int size : sizes) {
        for (Algorithm algo : spec.algorithms) {
            std::vector<double> energy, carbon, cost, migr, sla;
            int failed = 0;
            for (const RunSummary& s : result.runs) {
                if (s.size != size || s.algorithm != algo)
                    continue;
                if (!s.ok) {
                    ++failed;
                    result.any_failure = true;
                    continue;
                }
                energy.push_back(s.energy_kwh);
                carbon.push_back(s.carbon_kg);
                cost.push_back(s.cost_usd);
                migr.push_back(static_cast<double>(s.migrations));
                sla.push_back(s.sla_pct);
            }
            csv += std::to_string(size) + "," + std::string(to_string(algo));
            auto cell = [](const Stats& st) {
                return format_g(st.mean) + "±" + format_g(st.stddev);
            };
            if (energy.empty()) {
                for (int k = 0; k < 10; ++k)
                    csv += ",FAILED";
                csv += "," + std::to_string(failed) + "\n";
                std::snprintf(line, sizeof line, "%-8d %-9s %-22s %-22s %-22s %-18s %-16s\n",
                              size, std::string(to_string(algo)).c_str(), "FAILED", "FAILED",
                              "FAILED", "FAILED", "FAILED");
                table << line;
                continue;
            }
            Stats se = stats_of(energy), sc = stats_of(carbon), sco = stats_of(cost),
                  sm = stats_of(migr), ss = stats_of(sla);
            for (const Stats& st : {se, sc, sco, sm, ss})
                csv += "," + format_g(st.mean) + "," + format_g(st.stddev);
            csv += "," + std::to_string(failed) + "\n";
            std::snprintf(line, sizeof line, "%-8d %-9s %-22s %-22s %-22s %-18s %-16s\n",
                          size, std::string(to_string(algo)).c_str(), cell(se).c_str(),
                          cell(sc).c_str(), cell(sco).c_str(), cell(sm).c_str(),
                          cell(ss).c_str());
            table << line;
        }
    }
    result.csv = std::move(csv);
    result.table = table.str();
    return result;
}

int cmd_compare(const ExperimentSpec& spec, const std::vector<int>& sizes,
                std::string* error) {
    try {
        validate_config(spec.base_config);
    } catch (const ConfigError& e) {
        if (error)
            *error = e.what();
        return kExitConfig;
    }
    if (spec.algorithms.size() < 2) {
        if (error)
            *error = "compare needs at least two algorithms";
        return kExitConfig;
    }

    CompareResult result = compare(spec, sizes);

    fs::create_directories(spec.out_dir);
    write_file(fs::path(spec.out_dir) / "comparison.csv", result.csv);
    write_file(fs::path(spec.out_dir) / "comparison.txt", result.table);
    nlohmann::json prov;
    prov["config"] = resolved_config_json(spec.base_config);
    prov["seeds"] = spec.seeds;
    prov["sizes"] = sizes;
    nlohmann::json algos = nlohmann::json::array();
    for (Algorithm a : spec.algorithms)
        algos.push_back(std::string(to_string(a)));
    prov["algorithms"] = std::move(algos);
    write_file(fs::path(spec.out_dir) / "comparison_config.json", prov.dump(2) + "\n");

    return result.any_failure ? kExitPartial : kExitOk;
}

} // namespace greenplace

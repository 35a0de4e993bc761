#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "greenplace/experiment.hpp"

using namespace greenplace;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("cli_test_tmp") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("config defaults load bit-exact and survive a resolve/parse round trip") {
    SimConfig cfg = config_from_json(nlohmann::json::object());
    CHECK(cfg.pso.c1 == 2.0);
    CHECK(cfg.pso.c2 == 2.0);
    CHECK(cfg.pso.alpha == 0.6);
    CHECK(cfg.pso.beta == 0.4);
    CHECK(cfg.pso.omega_max == 0.9);
    CHECK(cfg.pso.omega_min == 0.4);
    CHECK(cfg.pso.swarm_size == 20);
    CHECK(cfg.pso.t_max == 100);
    CHECK(cfg.pso.th_under == 0.30);
    CHECK(cfg.pso.th_over == 0.90);
    CHECK(cfg.step_s == 600.0);
    CHECK(cfg.hosts_per_site == 126);
    REQUIRE(cfg.sites.size() == 4);
    CHECK(cfg.sites[2].carbon_tax_usd_per_t == 38.59);

    SimConfig back = config_from_json(resolved_config_json(cfg));
    CHECK(resolved_config_json(back) == resolved_config_json(cfg));
}

TEST_CASE("config validation rejects broken invariants") {
    nlohmann::json j;
    j["pso"]["alpha"] = 0.7; // alpha + beta != 1
    CHECK_THROWS_AS(config_from_json(j), ConfigError);

    nlohmann::json j2;
    j2["pso"]["th_under"] = 0.95; // above th_over
    CHECK_THROWS_AS(config_from_json(j2), ConfigError);

    nlohmann::json j3;
    j3["algorithm"] = "simulated_annealing";
    CHECK_THROWS_AS(config_from_json(j3), ConfigError);

    nlohmann::json j4;
    j4["aco"]["rho"] = 1.5;
    CHECK_THROWS_AS(config_from_json(j4), ConfigError);
}

TEST_CASE("config overrides merge onto defaults") {
    nlohmann::json j;
    j["algorithm"] = "bfd";
    j["seed"] = 99;
    j["pso"]["S"] = 10;
    j["aco"]["n_ants"] = 4;
    SimConfig cfg = config_from_json(j);
    CHECK(cfg.algorithm == Algorithm::Bfd);
    CHECK(cfg.seed == 99);
    CHECK(cfg.pso.swarm_size == 10);
    CHECK(cfg.aco.n_ants == 4);
    CHECK(cfg.pso.t_max == 100); // untouched default
}

TEST_CASE("steps csv column set is pinned") {
    MetricsLedger ledger;
    std::string csv = ledger.steps_csv(default_sites());
    CHECK(csv == "t,site,energy_kwh,carbon_kg,cost_usd,active_hosts,migrations,sla_pct\n");
}

TEST_CASE("cmd_run writes the three report files and is byte-deterministic") {
    TempDir dir_a("run_a");
    TempDir dir_b("run_b");
    ExperimentSpec spec;
    spec.algorithms = {Algorithm::Ffd};
    spec.seeds = {1};
    spec.workload.synth_n = 30;
    spec.steps = 4;
    spec.base_config.hosts_per_site = 6;
    spec.base_config.sites = {default_sites()[0], default_sites()[1]};

    spec.out_dir = dir_a.path.string();
    CHECK(cmd_run(spec) == kExitOk);
    CHECK(fs::exists(dir_a.path / "ledger.json"));
    CHECK(fs::exists(dir_a.path / "steps.csv"));
    CHECK(fs::exists(dir_a.path / "config.json"));

    spec.out_dir = dir_b.path.string();
    CHECK(cmd_run(spec) == kExitOk);
    CHECK(slurp(dir_a.path / "ledger.json") == slurp(dir_b.path / "ledger.json"));
    CHECK(slurp(dir_a.path / "steps.csv") == slurp(dir_b.path / "steps.csv"));

    // provenance: the resolved config embeds algorithm and seed
    nlohmann::json cfg = nlohmann::json::parse(slurp(dir_a.path / "config.json"));
    CHECK(cfg["algorithm"] == "ffd");
    CHECK(cfg["seed"] == 1);

    // the per-step csv has the pinned header
    std::string csv = slurp(dir_a.path / "steps.csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "t,site,energy_kwh,carbon_kg,cost_usd,active_hosts,migrations,sla_pct");
}

TEST_CASE("cmd_run maps workload problems to exit code 3") {
    TempDir dir("run_missing");
    ExperimentSpec spec;
    spec.algorithms = {Algorithm::Ffd};
    spec.seeds = {1};
    spec.workload.swf_path = "does_not_exist.swf";
    spec.out_dir = dir.path.string();
    std::string error;
    CHECK(cmd_run(spec, &error) == kExitWorkload);
    CHECK(!error.empty());
}

TEST_CASE("swf ingestion drives a run end to end") {
    TempDir dir("run_swf");
    fs::path trace = dir.path / "tiny.swf";
    {
        std::ofstream out(trace);
        out << "; tiny trace\n";
        out << "1 0 0 1200 2 -1 -1 2 -1 -1 1 1 1 1 1 1 -1 -1\n";
        out << "2 600 0 600 1 -1 -1 1 -1 -1 1 1 1 1 1 1 -1 -1\n";
    }
    ExperimentSpec spec;
    spec.algorithms = {Algorithm::Bfd};
    spec.seeds = {2};
    spec.workload.swf_path = trace.string();
    spec.out_dir = (dir.path / "out").string();
    spec.base_config.hosts_per_site = 6;
    spec.base_config.sites = {default_sites()[0]};
    CHECK(cmd_run(spec) == kExitOk);
    nlohmann::json ledger = nlohmann::json::parse(slurp(fs::path(spec.out_dir) / "ledger.json"));
    CHECK(ledger["aggregate"]["energy_kwh"].get<double>() > 0.0);
    CHECK(ledger["rejected_vms"] == 0);
}

TEST_CASE("compare: table shape, zero stddev for a single seed, failure markers") {
    ExperimentSpec spec;
    spec.algorithms = {Algorithm::Hapso, Algorithm::Ffd};
    spec.seeds = {1, 2};
    spec.workload.synth_n = 20;
    spec.steps = 3;
    spec.base_config.hosts_per_site = 6;
    spec.base_config.sites = {default_sites()[0], default_sites()[1]};

    CompareResult r = compare(spec, {20, 30});
    CHECK(r.runs.size() == 2 * 2 * 2);
    CHECK(!r.any_failure);
    // header + (2 sizes x 2 algorithms) rows
    CHECK(std::count(r.csv.begin(), r.csv.end(), '\n') == 1 + 4);
    CHECK(r.csv.find("hapso") != std::string::npos);
    CHECK(r.csv.find("ffd") != std::string::npos);

    SUBCASE("single seed: stddev columns are zero") {
        spec.seeds = {7};
        CompareResult one = compare(spec, {20});
        for (const RunSummary& s : one.runs)
            CHECK(s.ok);
        std::istringstream lines(one.csv);
        std::string header, row;
        std::getline(lines, header);
        while (std::getline(lines, row)) {
            std::vector<std::string> cells;
            std::istringstream cs(row);
            std::string cell;
            while (std::getline(cs, cell, ','))
                cells.push_back(cell);
            REQUIRE(cells.size() == 13);
            // std columns are 3,5,7,9,11
            for (int k = 3; k <= 11; k += 2)
                CHECK(cells[k] == "0");
        }
    }

    SUBCASE("a failing run yields markers and partial-exit semantics") {
        TempDir dir("cmp_fail");
        spec.base_config.vm_catalog.demands[0] = ResourceVector(640, 64, 1, 1);
        spec.base_config.vm_catalog.demands[1] = ResourceVector(640, 64, 1, 1);
        spec.base_config.vm_catalog.demands[2] = ResourceVector(640, 64, 1, 1);
        spec.base_config.vm_catalog.demands[3] = ResourceVector(640, 64, 1, 1);
        spec.base_config.vm_catalog.demands[4] = ResourceVector(640, 64, 1, 1);
        // every VM is unplaceable -> rejected, not failed; force failure with
        // an invalid workload source instead
        spec.workload.synth_n = 0;
        spec.workload.swf_path = "missing.swf";
        std::string error;
        int rc = cmd_compare(spec, {20}, &error);
        CHECK(rc == kExitPartial);
        CompareResult failed = compare(spec, {20});
        CHECK(failed.any_failure);
        CHECK(failed.csv.find("FAILED") != std::string::npos);
    }
}

TEST_CASE("compare output files carry provenance") {
    TempDir dir("cmp_out");
    ExperimentSpec spec;
    spec.algorithms = {Algorithm::Ffd, Algorithm::Bfd};
    spec.seeds = {1};
    spec.workload.synth_n = 15;
    spec.steps = 3;
    spec.base_config.hosts_per_site = 6;
    spec.base_config.sites = {default_sites()[0]};
    spec.out_dir = dir.path.string();

    CHECK(cmd_compare(spec, {15}) == kExitOk);
    CHECK(fs::exists(dir.path / "comparison.csv"));
    CHECK(fs::exists(dir.path / "comparison.txt"));
    nlohmann::json prov =
        nlohmann::json::parse(slurp(dir.path / "comparison_config.json"));
    CHECK(prov["seeds"] == nlohmann::json::array({1}));
    CHECK(prov["config"]["hosts_per_site"] == 6);
    CHECK(prov["algorithms"] == nlohmann::json::array({"ffd", "bfd"}));
}

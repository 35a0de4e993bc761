// Discrete-step orchestration of the two-stage workflow: batch arrivals,
// stage-1 constructive placement through the broker, threshold monitoring,
// stage-2 migration, departures, and metric accrual.
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <nlohmann/json_fwd.hpp>

#include "greenplace/aco.hpp"
#include "greenplace/baselines.hpp"
#include "greenplace/pso.hpp"
#include "greenplace/workload.hpp"

namespace greenplace {

enum class Algorithm { Hapso, AcoOnly, Ffd, Bfd };
enum class SlaMode { UnservedCpu };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s); // throws std::invalid_argument

struct DemandModel {
    double low = 0.4;  // per-step CPU draw as a fraction of reserved cores
    double high = 1.0;
};

struct SimConfig {
    Algorithm algorithm = Algorithm::Hapso;
    std::vector<SiteProfile> sites = default_sites();
    int hosts_per_site = 126;
    double step_s = 600.0;
    AcoParams aco;
    PsoParams pso;
    std::uint64_t seed = 1;
    SlaMode sla_mode = SlaMode::UnservedCpu;
    bool renewable = false; // gates per-site green_peak_kw
    DemandModel demand;
    int max_steps = 0; // 0 = run until all VMs complete
    HostCatalog host_catalog = default_host_catalog();
    VmCatalog vm_catalog = default_vm_catalog();
};

struct MigrationEvent {
    double t_s;
    VmId vm;
    PmId src;
    PmId dst;
    double duration_s;
};

struct SiteTotals {
    double energy_kwh = 0.0;
    double carbon_kg = 0.0;
    double cost_usd = 0.0;
    long migrations = 0;
    double unserved_core_s = 0.0;
    double requested_core_s = 0.0;

    double sla_violation_pct() const {
        return requested_core_s > 0.0 ? 100.0 * unserved_core_s / requested_core_s : 0.0;
    }
};

struct StepRow {
    double t_s;
    int site;
    double energy_kwh;
    double carbon_kg;
    double cost_usd;
    int active_hosts;
    long migrations;
    double sla_pct;
};

struct GbestTrace {
    double t_s;
    int site;
    std::vector<double> history;
};

struct MetricsLedger {
    std::vector<SiteTotals> per_site;
    std::vector<StepRow> steps;
    std::vector<int> active_hosts_per_step; // fleet-wide per step
    std::vector<GbestTrace> gbest_histories;
    std::vector<MigrationEvent> migration_events;
    long rejected_vms = 0;
    long stale_moves_dropped = 0;
    long steps_simulated = 0;

    SiteTotals aggregate() const;
    nlohmann::json to_json(const std::vector<SiteProfile>& sites) const;
    std::string steps_csv(const std::vector<SiteProfile>& sites) const;
};

// CPU core-seconds a step could not serve: sum over hosts of
// max(0, demand - capacity) * dt.
double sla_step_shortfall_core_s(std::span<const double> host_demand_cores,
                                 std::span<const double> host_capacity_cores,
                                 double dt_s);

struct RunResult {
    MetricsLedger ledger;
    Placement final_placement;
};

class Simulation {
public:
    // Workload must be sorted by submit time.
    Simulation(SimConfig cfg, std::vector<Cloudlet> workload);

    bool done() const;
    void advance_step();
    RunResult finish(); // advances until done, then hands over the results

    double now() const { return step_ * cfg_.step_s; }
    const Fleet& fleet() const { return fleet_; }
    const Placement& placement() const { return placement_; }
    const VmPool& pool() const { return pool_; }
    const std::vector<VmId>& active_vms() const { return active_; }
    const MetricsLedger& ledger() const { return ledger_; }

    // Applies a migration plan move by move; moves invalidated by earlier
    // moves of the same step are re-validated and dropped with a counter.
    std::vector<MigrationEvent> execute_migrations(const MigrationPlan& plan, int site,
                                                   double t_s);

private:
    void retire_finished(double t);
    void place_arrivals(double t);
    void run_stage2(double t);
    void sample_and_accrue(double t);
    std::vector<int> broker_site_order(std::span<const VmId> batch) const;
    Placement stage1_place(std::span<const VmId> batch, int site, double t);

    SimConfig cfg_;
    Fleet fleet_;
    VmPool pool_;
    Placement placement_;
    std::vector<VmId> active_; // ascending
    std::vector<Cloudlet> workload_;
    std::size_t next_arrival_ = 0;
    long step_ = 0;
    std::vector<std::unique_ptr<AcoPlacer>> placers_; // per site, metaheuristic modes only
    std::vector<std::deque<double>> util_history_;     // per host, for smoothed triggers
    std::vector<long> site_step_migrations_;
    MetricsLedger ledger_;
};

RunResult run_simulation(const SimConfig& cfg, const std::vector<Cloudlet>& workload);

} // namespace greenplace

#include "greenplace/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace greenplace {

namespace {

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
    std::uint64_t h = mix64(seed ^ 0x51C5EEDULL);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return mix64(h ^ c);
}

void append_csv_double(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out += buf;
}

} // namespace

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::Hapso: return "hapso";
    case Algorithm::AcoOnly: return "aco_only";
    case Algorithm::Ffd: return "ffd";
    case Algorithm::Bfd: return "bfd";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "hapso") return Algorithm::Hapso;
    if (s == "aco_only") return Algorithm::AcoOnly;
    if (s == "ffd") return Algorithm::Ffd;
    if (s == "bfd") return Algorithm::Bfd;
    throw std::invalid_argument("unknown algorithm: " + s);
}

SiteTotals MetricsLedger::aggregate() const {
    SiteTotals agg;
    for (const SiteTotals& s : per_site) {
        agg.energy_kwh += s.energy_kwh;
        agg.carbon_kg += s.carbon_kg;
        agg.cost_usd += s.cost_usd;
        agg.migrations += s.migrations;
        agg.unserved_core_s += s.unserved_core_s;
        agg.requested_core_s += s.requested_core_s;
    }
    return agg;
}

nlohmann::json MetricsLedger::to_json(const std::vector<SiteProfile>& sites) const {
    nlohmann::json j;
    auto totals_json = [](const SiteTotals& t) {
        return nlohmann::json{{"energy_kwh", t.energy_kwh},
                              {"carbon_kg", t.carbon_kg},
                              {"cost_usd", t.cost_usd},
                              {"migrations", t.migrations},
                              {"unserved_core_s", t.unserved_core_s},
                              {"requested_core_s", t.requested_core_s},
                              {"sla_violation_pct", t.sla_violation_pct()}};
    };
    j["aggregate"] = totals_json(aggregate());
    nlohmann::json site_arr = nlohmann::json::array();
    for (std::size_t i = 0; i < per_site.size(); ++i) {
        nlohmann::json s = totals_json(per_site[i]);
        s["name"] = i < sites.size() ? sites[i].name : std::to_string(i);
        site_arr.push_back(std::move(s));
    }
    j["sites"] = std::move(site_arr);
    j["rejected_vms"] = rejected_vms;
    j["stale_moves_dropped"] = stale_moves_dropped;
    j["steps_simulated"] = steps_simulated;
    j["active_hosts_per_step"] = active_hosts_per_step;
    nlohmann::json traces = nlohmann::json::array();
    for (const GbestTrace& g : gbest_histories)
        traces.push_back({{"t_s", g.t_s}, {"site", g.site}, {"history", g.history}});
    j["gbest_histories"] = std::move(traces);
    nlohmann::json events = nlohmann::json::array();
    for (const MigrationEvent& e : migration_events)
        events.push_back({{"t_s", e.t_s},
                          {"vm", e.vm},
                          {"src", e.src},
                          {"dst", e.dst},
                          {"duration_s", e.duration_s}});
    j["migration_events"] = std::move(events);
    return j;
}

std::string MetricsLedger::steps_csv(const std::vector<SiteProfile>& sites) const {
    std::string out = "t,site,energy_kwh,carbon_kg,cost_usd,active_hosts,migrations,sla_pct\n";
    for (const StepRow& r : steps) {
        append_csv_double(out, r.t_s);
        out += ',';
        out += r.site < static_cast<int>(sites.size()) ? sites[r.site].name
                                                       : std::to_string(r.site);
        out += ',';
        append_csv_double(out, r.energy_kwh);
        out += ',';
        append_csv_double(out, r.carbon_kg);
        out += ',';
        append_csv_double(out, r.cost_usd);
        out += ',';
        out += std::to_string(r.active_hosts);
        out += ',';
        out += std::to_string(r.migrations);
        out += ',';
        append_csv_double(out, r.sla_pct);
        out += '\n';
    }
    return out;
}

double sla_step_shortfall_core_s(std::span<const double> host_demand_cores,
                                 std::span<const double> host_capacity_cores,
                                 double dt_s) {
    double shortfall = 0.0;
    for (std::size_t i = 0; i < host_demand_cores.size(); ++i)
        shortfall += std::max(0.0, host_demand_cores[i] - host_capacity_cores[i]);
    return shortfall * dt_s;
}

Simulation::Simulation(SimConfig cfg, std::vector<Cloudlet> workload)
    : cfg_(std::move(cfg)), workload_(std::move(workload)) {
    std::vector<Datacenter> dcs;
    PmId next_id = 0;
    for (std::size_t s = 0; s < cfg_.sites.size(); ++s) {
        SiteProfile site = cfg_.sites[s];
        if (!cfg_.renewable)
            site.green_peak_kw = 0.0;
        dcs.push_back(make_datacenter(site, static_cast<int>(s), cfg_.hosts_per_site,
                                      next_id, cfg_.host_catalog));
        next_id += cfg_.hosts_per_site;
    }
    fleet_ = Fleet(std::move(dcs));
    placement_ = Placement(fleet_);
    util_history_.resize(fleet_.host_count());
    site_step_migrations_.assign(fleet_.site_count(), 0);
    ledger_.per_site.resize(fleet_.site_count());

    const bool metaheuristic =
        cfg_.algorithm == Algorithm::Hapso || cfg_.algorithm == Algorithm::AcoOnly;
    for (int s = 0; s < fleet_.site_count(); ++s)
        placers_.push_back(metaheuristic
                               ? std::make_unique<AcoPlacer>(cfg_.aco, fleet_.sites()[s],
                                                             fitness_params(cfg_.pso))
                               : nullptr);
}

bool Simulation::done() const {
    if (cfg_.max_steps > 0 && step_ >= cfg_.max_steps)
        return true;
    return next_arrival_ >= workload_.size() && active_.empty();
}

void Simulation::retire_finished(double t) {
    std::vector<VmId> still_active;
    still_active.reserve(active_.size());
    for (VmId vm : active_) {
        if (pool_.at(vm).end_s <= t) {
            placement_.remove(vm, pool_.at(vm).demand);
        } else {
            still_active.push_back(vm);
        }
    }
    active_ = std::move(still_active);
}

std::vector<int> Simulation::broker_site_order(std::span<const VmId> batch) const {
    struct Entry {
        double delta;
        double price;
        int site;
    };
    std::vector<Entry> entries;
    for (int s = 0; s < fleet_.site_count(); ++s) {
        const Datacenter& dc = fleet_.sites()[s];
        auto delta = bfd_trial_delta(batch, pool_, dc, placement_, fitness_params(cfg_.pso));
        entries.push_back({delta ? *delta : std::numeric_limits<double>::infinity(),
                           dc.site.energy_price_cents_per_kwh, s});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.delta != b.delta)
            return a.delta < b.delta;
        if (a.price != b.price)
            return a.price < b.price;
        return a.site < b.site;
    });
    std::vector<int> order;
    order.reserve(entries.size());
    for (const Entry& e : entries)
        order.push_back(e.site);
    return order;
}

Placement Simulation::stage1_place(std::span<const VmId> batch, int site, double t) {
    const Datacenter& dc = fleet_.sites()[site];
    switch (cfg_.algorithm) {
    case Algorithm::Ffd:
        return ffd_place(batch, pool_, dc, placement_);
    case Algorithm::Bfd:
        return bfd_place(batch, pool_, dc, placement_);
    case Algorithm::Hapso:
    case Algorithm::AcoOnly:
        return placers_[site]->place(batch, pool_, placement_,
                                     sub_seed(cfg_.seed, 0xAC0, step_, site));
    }
    throw std::logic_error("stage1_place: bad algorithm");
}

void Simulation::place_arrivals(double t) {
    std::vector<VmId> batch;
    while (next_arrival_ < workload_.size()) {
        const Cloudlet& c = workload_[next_arrival_];
        if (std::floor(c.job.submit_time_s / cfg_.step_s) > step_)
            break;
        VirtualMachine vm = make_vm(0, c.vm_type, t, t + c.job.run_time_s, cfg_.vm_catalog);
        batch.push_back(pool_.add(vm));
        ++next_arrival_;
    }
    if (batch.empty())
        return;

    bool placed = false;
    for (int site : broker_site_order(batch)) {
        try {
            placement_ = stage1_place(batch, site, t);
            placed = true;
            break;
        } catch (const PlacementFailure&) {
            continue; // next-best site
        }
    }
    if (!placed) {
        ledger_.rejected_vms += static_cast<long>(batch.size());
        return;
    }
    for (VmId vm : batch)
        active_.insert(std::lower_bound(active_.begin(), active_.end(), vm), vm);
}

std::vector<MigrationEvent> Simulation::execute_migrations(const MigrationPlan& plan,
                                                           int site, double t_s) {
    std::vector<MigrationEvent> events;
    for (const MigrationPlan::Move& mv : plan.moves) {
        auto current = placement_.host_of(mv.vm);
        if (!current || *current != mv.src) {
            ++ledger_.stale_moves_dropped;
            continue;
        }
        if (fleet_.site_of(mv.src) != fleet_.site_of(mv.dst))
            throw std::logic_error("execute_migrations: cross-site move in plan");
        try {
            placement_.move(mv.vm, pool_.at(mv.vm).demand, mv.dst);
        } catch (const CapacityError&) {
            ++ledger_.stale_moves_dropped;
            continue;
        }
        const VirtualMachine& vm = pool_.at(mv.vm);
        double bw = std::min(fleet_.host(mv.src).capacity.bw_mbps(),
                             fleet_.host(mv.dst).capacity.bw_mbps());
        MigrationEvent ev{t_s, mv.vm, mv.src, mv.dst, vm.demand.ram_gb() * 8000.0 / bw};
        events.push_back(ev);
        ledger_.migration_events.push_back(ev);
        ledger_.per_site[site].migrations += 1;
        site_step_migrations_[site] += 1;
    }
    return events;
}

void Simulation::run_stage2(double t) {
    if (cfg_.algorithm != Algorithm::Hapso)
        return;
    for (int s = 0; s < fleet_.site_count(); ++s) {
        const Datacenter& dc = fleet_.sites()[s];
        // Smoothed utilization: current draw averaged with up to
        // smoothing_steps-1 earlier samples (default 1 = instantaneous).
        std::vector<double> u(dc.hosts.size());
        for (std::size_t i = 0; i < dc.hosts.size(); ++i) {
            PmId id = dc.hosts[i].id;
            double acc = host_utilization(id, placement_, pool_);
            int n = 1;
            const auto& hist = util_history_[id];
            for (int k = 0; k < cfg_.pso.smoothing_steps - 1 &&
                            k < static_cast<int>(hist.size());
                 ++k) {
                acc += hist[hist.size() - 1 - k];
                ++n;
            }
            u[i] = acc / n;
        }
        TriggerReport triggers =
            detect_triggers_with(dc, placement_, u, cfg_.pso.th_over, cfg_.pso.th_under);
        if (triggers.candidates.empty())
            continue;
        MigrationPlan plan = run_pso(placement_, triggers.candidates, dc, pool_, cfg_.pso,
                                     sub_seed(cfg_.seed, 0xB50, step_, s));
        ledger_.gbest_histories.push_back({t, s, plan.gbest_history});
        execute_migrations(plan, s, t);
    }
}

void Simulation::sample_and_accrue(double t) {
    RngStream demand_rng = derive_stream(cfg_.seed, 0xDEA, static_cast<std::uint64_t>(step_));
    for (VmId vm : active_) {
        VirtualMachine& v = pool_.at(vm);
        v.current_cpu_demand =
            demand_rng.uniform(cfg_.demand.low, cfg_.demand.high) * v.demand.cpu_cores();
    }

    int fleet_active = 0;
    for (int s = 0; s < fleet_.site_count(); ++s) {
        const Datacenter& dc = fleet_.sites()[s];
        EnergySample sample = step_energy(dc, placement_, pool_, cfg_.step_s, t);

        double step_shortfall = 0.0;
        double step_requested = 0.0;
        int site_active = 0;
        for (const PhysicalMachine& pm : dc.hosts) {
            double demand = 0.0;
            for (VmId vm : placement_.hosted(pm.id))
                demand += pool_.at(vm).current_cpu_demand;
            step_requested += demand;
            step_shortfall += std::max(0.0, demand - pm.capacity.cpu_cores());
            if (placement_.active(pm.id))
                ++site_active;
            double u = pm.capacity.cpu_cores() > 0 ? demand / pm.capacity.cpu_cores() : 0.0;
            auto& hist = util_history_[pm.id];
            hist.push_back(u);
            while (static_cast<int>(hist.size()) > std::max(1, cfg_.pso.smoothing_steps))
                hist.pop_front();
        }
        step_shortfall *= cfg_.step_s;
        step_requested *= cfg_.step_s;

        SiteTotals& totals = ledger_.per_site[s];
        totals.energy_kwh += sample.total_kwh;
        totals.carbon_kg += sample.carbon_kg;
        totals.cost_usd += sample.cost_usd;
        totals.unserved_core_s += step_shortfall;
        totals.requested_core_s += step_requested;

        StepRow row;
        row.t_s = t;
        row.site = s;
        row.energy_kwh = sample.total_kwh;
        row.carbon_kg = sample.carbon_kg;
        row.cost_usd = sample.cost_usd;
        row.active_hosts = site_active;
        row.migrations = site_step_migrations_[s];
        row.sla_pct = step_requested > 0 ? 100.0 * step_shortfall / step_requested : 0.0;
        ledger_.steps.push_back(row);
        fleet_active += site_active;
    }
    ledger_.active_hosts_per_step.push_back(fleet_active);
}

void Simulation::advance_step() {
    const double t = now();
    std::fill(site_step_migrations_.begin(), site_step_migrations_.end(), 0);
    retire_finished(t);
    place_arrivals(t);
    run_stage2(t);
    sample_and_accrue(t);
    ++step_;
    ledger_.steps_simulated = step_;
}

RunResult Simulation::finish() {
    while (!done())
        advance_step();
    return RunResult{std::move(ledger_), placement_};
}

RunResult run_simulation(const SimConfig& cfg, const std::vector<Cloudlet>& workload) {
    Simulation sim(cfg, workload);
    return sim.finish();
}

} // namespace greenplace

#include "greenplace/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "greenplace/placement.hpp"

namespace greenplace {

namespace {

constexpr double kDaySeconds = 86400.0;
constexpr double kJoulesPerKwh = 3.6e6;

// Daylight half-sine between 06:00 and 18:00 local, peak 1 at noon.
double daylight_factor(const SiteProfile& site, double sim_t_s) {
    double local = std::fmod(sim_t_s + site.utc_offset_h * 3600.0, kDaySeconds);
    if (local < 0.0)
        local += kDaySeconds;
    double x = std::sin(M_PI * (local - 6.0 * 3600.0) / (12.0 * 3600.0));
    return std::max(0.0, x);
}

} // namespace

std::vector<SiteProfile> default_sites() {
    return {
        {"Dallas", 0.335, 24.0, 6.38, 0.0, -6.0},
        {"Richmond", 0.268, 17.6, 8.62, 0.0, -5.0},
        {"San Jose", 0.199, 38.59, 19.8, 0.0, -8.0},
        {"Portland", 0.287, 25.75, 7.7, 0.0, -8.0},
    };
}

double host_power_w(const PhysicalMachine& pm, double u, bool active) {
    if (!active)
        return 0.0;
    double clamped = std::min(u, 1.0);
    return pm.idle_power_w + (pm.peak_power_w - pm.idle_power_w) * clamped;
}

double pue_factor(double u_dc, double h) {
    if (u_dc <= 0.0)
        throw std::domain_error("pue_factor: undefined for utilization <= 0");
    return 1.0 + (0.2 + 0.01 * u_dc + 0.01 * u_dc * h) / u_dc;
}

double heat_index(const SiteProfile& site, double sim_t_s) {
    return daylight_factor(site, sim_t_s);
}

double green_supply_kw(const SiteProfile& site, double sim_t_s) {
    if (site.green_peak_kw <= 0.0)
        return 0.0;
    return site.green_peak_kw * daylight_factor(site, sim_t_s);
}

double carbon_for_kg(double grid_kwh, const SiteProfile& site) {
    return grid_kwh * site.carbon_intensity_t_per_mwh;
}

double cost_for_usd(double grid_kwh, double carbon_kg, const SiteProfile& site) {
    return grid_kwh * site.energy_price_cents_per_kwh / 100.0 +
           (carbon_kg / 1000.0) * site.carbon_tax_usd_per_t;
}

EnergySample step_energy(const Datacenter& dc, const Placement& placement,
                         const VmPool& vms, double dt_s, double t_s) {
    if (dt_s <= 0.0)
        throw std::invalid_argument("step_energy: dt_s must be positive");

    EnergySample s;
    s.t_s = t_s;

    double it_power_w = 0.0;
    double active_cpu_used = 0.0;
    double active_cpu_cap = 0.0;
    for (const PhysicalMachine& pm : dc.hosts) {
        bool active = placement.active(pm.id);
        if (!active)
            continue;
        double u = host_utilization(pm.id, placement, vms);
        it_power_w += host_power_w(pm, u, true);
        active_cpu_used += std::min(u, 1.0) * pm.capacity.cpu_cores();
        active_cpu_cap += pm.capacity.cpu_cores();
    }
    s.it_power_kw = it_power_w / 1000.0;
    if (it_power_w <= 0.0)
        return s; // fully idle site: zero sample, PUE skipped

    // Capacity-weighted mean utilization of active hosts; positive whenever
    // any IT power is drawn, keeping the PUE denominator well defined.
    double u_dc = active_cpu_cap > 0.0 ? active_cpu_used / active_cpu_cap : 0.0;
    s.pue = pue_factor(u_dc, heat_index(dc.site, t_s));

    s.total_kwh = it_power_w * s.pue * dt_s / kJoulesPerKwh;
    double green_avail_kwh = green_supply_kw(dc.site, t_s) * dt_s * 1000.0 / kJoulesPerKwh;
    s.green_kwh = std::min(green_avail_kwh, s.total_kwh);
    s.grid_kwh = std::max(0.0, s.total_kwh - s.green_kwh);
    s.carbon_kg = carbon_for_kg(s.grid_kwh, dc.site);
    s.cost_usd = cost_for_usd(s.grid_kwh, s.carbon_kg, dc.site);
    return s;
}

} // namespace greenplace

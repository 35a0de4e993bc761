// Power, PUE, energy, carbon and monetary accounting per site per time step.
#pragma once

#include <string>
#include <vector>

#include "greenplace/hosts.hpp"

namespace greenplace {

struct Datacenter;
class Placement;
class VmPool;

struct SiteProfile {
    std::string name;
    double carbon_intensity_t_per_mwh = 0.0; // ton CO2 per MWh of grid energy
    double carbon_tax_usd_per_t = 0.0;
    double energy_price_cents_per_kwh = 0.0;
    double green_peak_kw = 0.0; // 0 disables on-site renewables
    double utc_offset_h = 0.0;  // site local time = sim time + offset
};

// The four default US sites: Dallas, Richmond, San Jose, Portland.
std::vector<SiteProfile> default_sites();

struct EnergySample {
    double t_s = 0.0;
    double it_power_kw = 0.0;
    double pue = 0.0; // 0 when the site is fully idle (no PUE defined)
    double total_kwh = 0.0;
    double green_kwh = 0.0; // renewable energy actually used, capped at total
    double grid_kwh = 0.0;  // total - green; the only part that emits/costs
    double carbon_kg = 0.0;
    double cost_usd = 0.0;
};

// Linear idle-to-peak power draw; 0 W when the host is powered down.
// Utilization above 1 draws peak (clamped for power purposes only).
double host_power_w(const PhysicalMachine& pm, double u, bool active);

// PUE(U_t, H_t) = 1 + (0.2 + 0.01*U_t + 0.01*U_t*H_t) / U_t with U_t a
// fraction in (0, 1]. Throws std::domain_error for u_dc <= 0; a fully idle
// site draws no IT power and must skip PUE instead.
double pue_factor(double u_dc, double h);

// Normalized diurnal heat index in [0,1]: half-sine over 06:00-18:00 site
// local time, peaking at noon.
double heat_index(const SiteProfile& site, double sim_t_s);

// On-site renewable supply: green_peak_kw scaled by the same daylight
// half-sine; identically 0 when green_peak_kw is 0.
double green_supply_kw(const SiteProfile& site, double sim_t_s);

// kWh * (t CO2 / MWh) is numerically kg CO2.
double carbon_for_kg(double grid_kwh, const SiteProfile& site);

// Grid energy billed at the site price plus carbon tax on emissions.
double cost_for_usd(double grid_kwh, double carbon_kg, const SiteProfile& site);

// One accounting step for a site: IT power from per-host draw, facility
// energy through PUE, renewable offset, then carbon and cost on grid energy.
EnergySample step_energy(const Datacenter& dc, const Placement& placement,
                         const VmPool& vms, double dt_s, double t_s);

} // namespace greenplace

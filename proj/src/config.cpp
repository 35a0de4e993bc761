#include "greenplace/config.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace greenplace {

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key))
        out = j.at(key).get<T>();
}

ResourceVector resource_from_json(const nlohmann::json& j) {
    return ResourceVector(j.at("cpu_cores").get<double>(), j.at("ram_gb").get<double>(),
                          j.at("bw_mbps").get<double>(), j.at("storage_gb").get<double>());
}

nlohmann::json resource_to_json(const ResourceVector& r) {
    return {{"cpu_cores", r.cpu_cores()},
            {"ram_gb", r.ram_gb()},
            {"bw_mbps", r.bw_mbps()},
            {"storage_gb", r.storage_gb()}};
}

} // namespace

SimConfig config_from_json(const nlohmann::json& j) {
    SimConfig cfg;
    try {
        if (j.contains("algorithm"))
            cfg.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
        read_if(j, "seed", cfg.seed);
        read_if(j, "hosts_per_site", cfg.hosts_per_site);
        read_if(j, "step_s", cfg.step_s);
        read_if(j, "renewable", cfg.renewable);
        read_if(j, "max_steps", cfg.max_steps);
        if (j.contains("sla_mode")) {
            std::string mode = j.at("sla_mode").get<std::string>();
            if (mode != "unserved_cpu")
                throw ConfigError("unknown sla_mode: " + mode);
            cfg.sla_mode = SlaMode::UnservedCpu;
        }
        if (j.contains("demand")) {
            const auto& d = j.at("demand");
            read_if(d, "low", cfg.demand.low);
            read_if(d, "high", cfg.demand.high);
        }
        if (j.contains("sites")) {
            cfg.sites.clear();
            for (const auto& s : j.at("sites")) {
                SiteProfile p;
                p.name = s.at("name").get<std::string>();
                read_if(s, "carbon_intensity_t_per_mwh", p.carbon_intensity_t_per_mwh);
                read_if(s, "carbon_tax_usd_per_t", p.carbon_tax_usd_per_t);
                read_if(s, "energy_price_cents_per_kwh", p.energy_price_cents_per_kwh);
                read_if(s, "green_peak_kw", p.green_peak_kw);
                read_if(s, "utc_offset_h", p.utc_offset_h);
                cfg.sites.push_back(std::move(p));
            }
        }
        if (j.contains("aco")) {
            const auto& a = j.at("aco");
            read_if(a, "n_ants", cfg.aco.n_ants);
            read_if(a, "n_iterations", cfg.aco.n_iterations);
            read_if(a, "alpha_pher", cfg.aco.alpha_pher);
            read_if(a, "beta_heur", cfg.aco.beta_heur);
            read_if(a, "rho", cfg.aco.rho);
            read_if(a, "q0", cfg.aco.q0);
            read_if(a, "tau_min", cfg.aco.tau_min);
            read_if(a, "tau0", cfg.aco.tau0);
        }
        if (j.contains("pso")) {
            const auto& p = j.at("pso");
            read_if(p, "c1", cfg.pso.c1);
            read_if(p, "c2", cfg.pso.c2);
            read_if(p, "alpha", cfg.pso.alpha);
            read_if(p, "beta", cfg.pso.beta);
            read_if(p, "omega_max", cfg.pso.omega_max);
            read_if(p, "omega_min", cfg.pso.omega_min);
            read_if(p, "S", cfg.pso.swarm_size);
            read_if(p, "t_max", cfg.pso.t_max);
            read_if(p, "th_over", cfg.pso.th_over);
            read_if(p, "th_under", cfg.pso.th_under);
            read_if(p, "p_perturb", cfg.pso.p_perturb);
            read_if(p, "v_clamp", cfg.pso.v_clamp);
            read_if(p, "stagnation_window", cfg.pso.stagnation_window);
            read_if(p, "normalized_wastage", cfg.pso.normalized_wastage);
            read_if(p, "per_element_r", cfg.pso.per_element_r);
            read_if(p, "smoothing_steps", cfg.pso.smoothing_steps);
        }
        if (j.contains("host_catalog")) {
            const auto& arr = j.at("host_catalog");
            if (arr.size() != kServerTypeCount)
                throw ConfigError("host_catalog needs exactly 6 entries");
            for (int i = 0; i < kServerTypeCount; ++i) {
                cfg.host_catalog.specs[i].capacity = resource_from_json(arr.at(i));
                cfg.host_catalog.specs[i].idle_power_w = arr.at(i).at("idle_w").get<double>();
                cfg.host_catalog.specs[i].peak_power_w = arr.at(i).at("peak_w").get<double>();
            }
        }
        if (j.contains("vm_catalog")) {
            const auto& arr = j.at("vm_catalog");
            if (arr.size() != kVmTypeCount)
                throw ConfigError("vm_catalog needs exactly 5 entries");
            for (int i = 0; i < kVmTypeCount; ++i)
                cfg.vm_catalog.demands[i] = resource_from_json(arr.at(i));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config value: ") + e.what());
    }
    validate_config(cfg);
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse config file " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void validate_config(const SimConfig& cfg) {
    if (cfg.step_s <= 0)
        throw ConfigError("step_s must be positive");
    if (cfg.hosts_per_site < 1)
        throw ConfigError("hosts_per_site must be >= 1");
    if (cfg.sites.empty())
        throw ConfigError("at least one site is required");
    for (const SiteProfile& s : cfg.sites)
        if (s.carbon_intensity_t_per_mwh < 0 || s.carbon_tax_usd_per_t < 0 ||
            s.energy_price_cents_per_kwh < 0 || s.green_peak_kw < 0)
            throw ConfigError("site rates must be non-negative: " + s.name);
    if (std::abs(cfg.pso.alpha + cfg.pso.beta - 1.0) > 1e-12)
        throw ConfigError("pso.alpha + pso.beta must equal 1");
    if (!(cfg.pso.th_under > 0 && cfg.pso.th_over < 1 && cfg.pso.th_under < cfg.pso.th_over))
        throw ConfigError("thresholds must satisfy 0 < th_under < th_over < 1");
    if (cfg.pso.swarm_size < 1 || cfg.pso.t_max < 1)
        throw ConfigError("pso.S and pso.t_max must be >= 1");
    if (cfg.pso.omega_max < cfg.pso.omega_min)
        throw ConfigError("pso.omega_max must be >= pso.omega_min");
    if (!(cfg.pso.p_perturb >= 0 && cfg.pso.p_perturb <= 1))
        throw ConfigError("pso.p_perturb must be in [0,1]");
    if (cfg.pso.smoothing_steps < 1)
        throw ConfigError("pso.smoothing_steps must be >= 1");
    if (!(cfg.aco.rho > 0 && cfg.aco.rho < 1))
        throw ConfigError("aco.rho must be in (0,1)");
    if (!(cfg.aco.q0 >= 0 && cfg.aco.q0 <= 1))
        throw ConfigError("aco.q0 must be in [0,1]");
    if (cfg.aco.n_ants < 1 || cfg.aco.n_iterations < 1)
        throw ConfigError("aco.n_ants and aco.n_iterations must be >= 1");
    if (!(cfg.aco.tau_min > 0) || !(cfg.aco.tau0 > 0))
        throw ConfigError("aco.tau_min and aco.tau0 must be positive");
    if (!(cfg.demand.low >= 0 && cfg.demand.low <= cfg.demand.high && cfg.demand.high <= 1))
        throw ConfigError("demand model must satisfy 0 <= low <= high <= 1");
    for (const ServerSpec& s : cfg.host_catalog.specs)
        if (!(s.idle_power_w > 0 && s.idle_power_w < s.peak_power_w))
            throw ConfigError("host power envelope must satisfy 0 < idle < peak");
}

nlohmann::json resolved_config_json(const SimConfig& cfg) {
    nlohmann::json j;
    j["algorithm"] = std::string(to_string(cfg.algorithm));
    j["seed"] = cfg.seed;
    j["hosts_per_site"] = cfg.hosts_per_site;
    j["step_s"] = cfg.step_s;
    j["renewable"] = cfg.renewable;
    j["max_steps"] = cfg.max_steps;
    j["sla_mode"] = "unserved_cpu";
    j["demand"] = {{"low", cfg.demand.low}, {"high", cfg.demand.high}};
    nlohmann::json sites = nlohmann::json::array();
    for (const SiteProfile& s : cfg.sites)
        sites.push_back({{"name", s.name},
                         {"carbon_intensity_t_per_mwh", s.carbon_intensity_t_per_mwh},
                         {"carbon_tax_usd_per_t", s.carbon_tax_usd_per_t},
                         {"energy_price_cents_per_kwh", s.energy_price_cents_per_kwh},
                         {"green_peak_kw", s.green_peak_kw},
                         {"utc_offset_h", s.utc_offset_h}});
    j["sites"] = std::move(sites);
    j["aco"] = {{"n_ants", cfg.aco.n_ants},
                {"n_iterations", cfg.aco.n_iterations},
                {"alpha_pher", cfg.aco.alpha_pher},
                {"beta_heur", cfg.aco.beta_heur},
                {"rho", cfg.aco.rho},
                {"q0", cfg.aco.q0},
                {"tau_min", cfg.aco.tau_min},
                {"tau0", cfg.aco.tau0}};
    j["pso"] = {{"c1", cfg.pso.c1},
                {"c2", cfg.pso.c2},
                {"alpha", cfg.pso.alpha},
                {"beta", cfg.pso.beta},
                {"omega_max", cfg.pso.omega_max},
                {"omega_min", cfg.pso.omega_min},
                {"S", cfg.pso.swarm_size},
                {"t_max", cfg.pso.t_max},
                {"th_over", cfg.pso.th_over},
                {"th_under", cfg.pso.th_under},
                {"p_perturb", cfg.pso.p_perturb},
                {"v_clamp", cfg.pso.v_clamp},
                {"stagnation_window", cfg.pso.stagnation_window},
                {"normalized_wastage", cfg.pso.normalized_wastage},
                {"per_element_r", cfg.pso.per_element_r},
                {"smoothing_steps", cfg.pso.smoothing_steps}};
    nlohmann::json hosts = nlohmann::json::array();
    for (const ServerSpec& s : cfg.host_catalog.specs) {
        nlohmann::json h = resource_to_json(s.capacity);
        h["idle_w"] = s.idle_power_w;
        h["peak_w"] = s.peak_power_w;
        hosts.push_back(std::move(h));
    }
    j["host_catalog"] = std::move(hosts);
    nlohmann::json vms = nlohmann::json::array();
    for (const ResourceVector& d : cfg.vm_catalog.demands)
        vms.push_back(resource_to_json(d));
    j["vm_catalog"] = std::move(vms);
    return j;
}

} // namespace greenplace

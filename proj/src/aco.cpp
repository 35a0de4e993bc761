#include "greenplace/aco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "greenplace/baselines.hpp"
#include "greenplace/energy.hpp"

namespace greenplace {

namespace {

constexpr double kEtaEpsilon = 1e-6;

// pow() is the hot spot of construction; exponents are almost always the
// conventional 1 and 2.
double fast_pow(double base, double exp) {
    if (exp == 1.0)
        return base;
    if (exp == 2.0)
        return base * base;
    return std::pow(base, exp);
}

} // namespace

double marginal_power_w(const PhysicalMachine& pm, double cpu_used_before,
                        double vm_cpu, bool active_before) {
    double cap = pm.capacity.cpu_cores();
    double before = active_before
                        ? pm.idle_power_w + (pm.peak_power_w - pm.idle_power_w) *
                                                std::min(cpu_used_before / cap, 1.0)
                        : 0.0;
    double after = pm.idle_power_w + (pm.peak_power_w - pm.idle_power_w) *
                                         std::min((cpu_used_before + vm_cpu) / cap, 1.0);
    return after - before;
}

double heuristic_score(double delta_power_w, const SiteProfile& site) {
    double delta_e = delta_power_w * (1.0 + site.carbon_intensity_t_per_mwh);
    return 1.0 / (kEtaEpsilon + delta_e);
}

std::vector<CandidateScore> score_candidates(const VirtualMachine& vm,
                                             std::span<const PhysicalMachine> hosts,
                                             std::span<const ResourceVector> residuals,
                                             std::span<const int> vm_counts,
                                             const SiteProfile& site) {
    std::vector<CandidateScore> out;
    for (int i = 0; i < static_cast<int>(hosts.size()); ++i) {
        if (!can_host(residuals[i], vm.demand))
            continue;
        CandidateScore c;
        c.pm = hosts[i].id;
        c.host_pos = i;
        double used = hosts[i].capacity.cpu_cores() - residuals[i].cpu_cores();
        c.delta_power_w =
            marginal_power_w(hosts[i], used, vm.demand.cpu_cores(), vm_counts[i] > 0);
        c.eta = heuristic_score(c.delta_power_w, site);
        out.push_back(c);
    }
    return out;
}

int select_host(VmId vm, std::vector<CandidateScore>& candidates,
                std::span<const double> taus, const AcoParams& params, RngStream& rng) {
    if (candidates.empty())
        throw PlacementFailure(vm, "no feasible candidate");

    const int n = static_cast<int>(candidates.size());
    std::vector<double> w(n);
    double total = 0.0;
    int best = 0;
    for (int i = 0; i < n; ++i) {
        w[i] = fast_pow(taus[i], params.alpha_pher) * fast_pow(candidates[i].eta, params.beta_heur);
        total += w[i];
        if (w[i] > w[best]) // strict: ties keep the lowest host id
            best = i;
    }
    for (int i = 0; i < n; ++i)
        candidates[i].prob = total > 0.0 ? w[i] / total : 1.0 / n;

    if (rng.next_double() < params.q0)
        return best;

    double x = rng.next_double() * total;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += w[i];
        if (x < acc)
            return i;
    }
    return n - 1; // rounding tail
}

void update_pheromone(PheromoneMatrix& tau,
                      std::span<const std::pair<int, VmType>> used_cells,
                      double best_fitness, const AcoParams& params) {
    Eigen::ArrayXXd& m = tau.matrix();
    m *= (1.0 - params.rho);
    const double deposit = params.rho * (1.0 / (1.0 + best_fitness));
    for (const auto& [host_pos, type] : used_cells)
        m(host_pos, static_cast<int>(type)) += deposit;
    m = m.max(params.tau_min);
}

AcoPlacer::AcoPlacer(const AcoParams& params, const Datacenter& dc,
                     const FitnessParams& fitness)
    : params_(params), fitness_(fitness), dc_(&dc),
      tau_(static_cast<int>(dc.hosts.size()), params.tau0) {}

Placement AcoPlacer::place(std::span<const VmId> batch, const VmPool& vms,
                           const Placement& base, std::uint64_t seed) {
    if (batch.empty())
        throw std::invalid_argument("AcoPlacer::place: empty batch");

    const auto& hosts = dc_->hosts;
    const int m = static_cast<int>(hosts.size());
    const std::vector<VmId> order = decreasing_demand_order(batch, vms);
    const int n = static_cast<int>(order.size());

    std::vector<ResourceVector> base_residual(m);
    std::vector<int> base_counts(m);
    for (int i = 0; i < m; ++i) {
        base_residual[i] = base.residual(hosts[i].id);
        base_counts[i] = base.vm_count(hosts[i].id);
    }

    std::vector<int> best_assign; // host position per VM in `order`
    double best_fitness = std::numeric_limits<double>::infinity();
    VmId last_failed = order[0];

    std::vector<ResourceVector> residual;
    std::vector<int> counts;
    std::vector<int> assign(n);
    std::vector<double> taus;

    for (int iter = 0; iter < params_.n_iterations; ++iter) {
        std::vector<int> iter_best_assign;
        double iter_best = std::numeric_limits<double>::infinity();

        for (int ant = 0; ant < params_.n_ants; ++ant) {
            RngStream rng = derive_stream(seed, 0xAC0, iter, ant);
            residual = base_residual;
            counts = base_counts;
            bool complete = true;

            for (int k = 0; k < n; ++k) {
                const VirtualMachine& vm = vms.at(order[k]);
                auto candidates = score_candidates(vm, hosts, residual, counts, dc_->site);
                if (candidates.empty()) {
                    last_failed = vm.id;
                    complete = false;
                    break;
                }
                taus.resize(candidates.size());
                for (std::size_t c = 0; c < candidates.size(); ++c)
                    taus[c] = tau_.at(candidates[c].host_pos, vm.vm_type);
                int chosen = select_host(vm.id, candidates, taus, params_, rng);
                int pos = candidates[chosen].host_pos;
                residual[pos] = *residual[pos].checked_sub(vm.demand);
                ++counts[pos];
                assign[k] = pos;
            }
            if (!complete)
                continue;

            double f = fitness_from_state(residual, counts, hosts, fitness_);
            if (f < iter_best) {
                iter_best = f;
                iter_best_assign = assign;
            }
        }

        if (!iter_best_assign.empty()) {
            if (iter_best < best_fitness) {
                best_fitness = iter_best;
                best_assign = iter_best_assign;
            }
            std::vector<std::pair<int, VmType>> cells;
            cells.reserve(n);
            for (int k = 0; k < n; ++k)
                cells.emplace_back(iter_best_assign[k], vms.at(order[k]).vm_type);
            std::sort(cells.begin(), cells.end());
            cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
            update_pheromone(tau_, cells, iter_best, params_);
        }
    }

    if (best_assign.empty())
        throw PlacementFailure(last_failed, dc_->site.name);

    Placement out = base;
    for (int k = 0; k < n; ++k)
        out.place(order[k], vms.at(order[k]).demand, hosts[best_assign[k]].id);
    return out;
}

Placement run_aco(std::span<const VmId> batch, const VmPool& vms, const Datacenter& dc,
                  const Placement& base, const AcoParams& params, std::uint64_t seed,
                  const FitnessParams& fitness) {
    AcoPlacer placer(params, dc, fitness);
    return placer.place(batch, vms, base, seed);
}

} // namespace greenplace

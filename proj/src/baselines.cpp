#include "greenplace/baselines.hpp"

#include <algorithm>
#include <limits>

namespace greenplace {

namespace {

// Residual fraction sum over the wastage dimensions after subtracting demand.
double tightness_score(const ResourceVector& residual_after, const ResourceVector& cap) {
    double s = 0.0;
    for (Resource r : kWastageResources) {
        double c = cap[r];
        s += c > 0.0 ? residual_after[r] / c : 0.0;
    }
    return s;
}

// Shared scratch-state greedy, parameterized on host choice.
template <typename PickHost>
std::vector<std::pair<VmId, int>> greedy_assign(std::span<const VmId> batch,
                                                const VmPool& vms, const Datacenter& dc,
                                                const Placement& base, PickHost pick) {
    const int m = static_cast<int>(dc.hosts.size());
    std::vector<ResourceVector> residual(m);
    for (int i = 0; i < m; ++i)
        residual[i] = base.residual(dc.hosts[i].id);

    std::vector<std::pair<VmId, int>> out; // (vm, host position)
    out.reserve(batch.size());
    for (VmId vm : decreasing_demand_order(batch, vms)) {
        const ResourceVector& d = vms.at(vm).demand;
        int chosen = pick(residual, d);
        if (chosen < 0)
            throw PlacementFailure(vm, dc.site.name);
        residual[chosen] = *residual[chosen].checked_sub(d);
        out.emplace_back(vm, chosen);
    }
    return out;
}

int pick_first_fit(const std::vector<ResourceVector>& residual, const ResourceVector& d) {
    for (int i = 0; i < static_cast<int>(residual.size()); ++i)
        if (can_host(residual[i], d))
            return i;
    return -1;
}

} // namespace

std::vector<VmId> decreasing_demand_order(std::span<const VmId> batch, const VmPool& vms) {
    std::vector<VmId> order(batch.begin(), batch.end());
    std::sort(order.begin(), order.end(), [&](VmId a, VmId b) {
        const auto& da = vms.at(a).demand;
        const auto& db = vms.at(b).demand;
        if (da.cpu_cores() != db.cpu_cores())
            return da.cpu_cores() > db.cpu_cores();
        if (da.ram_gb() != db.ram_gb())
            return da.ram_gb() > db.ram_gb();
        return a < b;
    });
    return order;
}

Placement ffd_place(std::span<const VmId> batch, const VmPool& vms,
                    const Datacenter& dc, const Placement& base) {
    auto assigned = greedy_assign(batch, vms, dc, base, pick_first_fit);
    Placement out = base;
    for (auto [vm, pos] : assigned)
        out.place(vm, vms.at(vm).demand, dc.hosts[pos].id);
    return out;
}

Placement bfd_place(std::span<const VmId> batch, const VmPool& vms,
                    const Datacenter& dc, const Placement& base) {
    auto pick = [&](const std::vector<ResourceVector>& residual, const ResourceVector& d) {
        int best = -1;
        double best_score = std::numeric_limits<double>::infinity();
        for (int i = 0; i < static_cast<int>(residual.size()); ++i) {
            if (!can_host(residual[i], d))
                continue;
            double score = tightness_score(*residual[i].checked_sub(d), dc.hosts[i].capacity);
            if (score < best_score) {
                best_score = score;
                best = i;
            }
        }
        return best;
    };
    auto assigned = greedy_assign(batch, vms, dc, base, pick);
    Placement out = base;
    for (auto [vm, pos] : assigned)
        out.place(vm, vms.at(vm).demand, dc.hosts[pos].id);
    return out;
}

std::optional<double> bfd_trial_delta(std::span<const VmId> batch, const VmPool& vms,
                                      const Datacenter& dc, const Placement& base,
                                      const FitnessParams& params) {
    const int m = static_cast<int>(dc.hosts.size());
    std::vector<ResourceVector> residual(m);
    std::vector<int> counts(m);
    for (int i = 0; i < m; ++i) {
        residual[i] = base.residual(dc.hosts[i].id);
        counts[i] = base.vm_count(dc.hosts[i].id);
    }
    double before = fitness_from_state(residual, counts, dc.hosts, params);

    for (VmId vm : decreasing_demand_order(batch, vms)) {
        const ResourceVector& d = vms.at(vm).demand;
        int best = -1;
        double best_score = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (!can_host(residual[i], d))
                continue;
            double score = tightness_score(*residual[i].checked_sub(d), dc.hosts[i].capacity);
            if (score < best_score) {
                best_score = score;
                best = i;
            }
        }
        if (best < 0)
            return std::nullopt;
        residual[best] = *residual[best].checked_sub(d);
        ++counts[best];
    }
    return fitness_from_state(residual, counts, dc.hosts, params) - before;
}

} // namespace greenplace

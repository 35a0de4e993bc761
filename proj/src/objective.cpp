#include "greenplace/objective.hpp"

#include <stdexcept>

namespace greenplace {

double fitness_from_state(std::span<const ResourceVector> residuals,
                          std::span<const int> vm_counts,
                          std::span<const PhysicalMachine> hosts,
                          const FitnessParams& params) {
    int active = 0;
    double wastage = 0.0;
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        if (vm_counts[i] <= 0)
            continue;
        ++active;
        const ResourceVector& res = residuals[i];
        const ResourceVector& cap = hosts[i].capacity;
        for (Resource r : kWastageResources) {
            double w = res[r];
            if (params.normalized_wastage && cap[r] > 0.0)
                w /= cap[r];
            wastage += w;
        }
    }
    return params.alpha * active + params.beta * wastage;
}

double placement_fitness(const Placement& p, const Datacenter& dc,
                         const FitnessParams& params) {
    int active = 0;
    double wastage = 0.0;
    for (const PhysicalMachine& pm : dc.hosts) {
        const ResourceVector& res = p.residual(pm.id);
        if ((res.array() < -1e-9).any())
            throw std::logic_error("placement_fitness: infeasible placement");
        if (!p.active(pm.id))
            continue;
        ++active;
        for (Resource r : kWastageResources) {
            double w = res[r];
            if (params.normalized_wastage && pm.capacity[r] > 0.0)
                w /= pm.capacity[r];
            wastage += w;
        }
    }
    return params.alpha * active + params.beta * wastage;
}

} // namespace greenplace

// The consolidation objective both optimization stages minimize: a weighted
// sum of active host count and residual resource wastage over CPU, RAM and
// bandwidth. Wastage defaults to capacity-normalized fractions so the three
// dimensions are commensurate; the raw-residual variant stays available
// behind a flag.
#pragma once

#include <span>

#include "greenplace/datacenter.hpp"
#include "greenplace/placement.hpp"

namespace greenplace {

struct FitnessParams {
    double alpha = 0.6;
    double beta = 0.4;
    bool normalized_wastage = true;
};

// Scratch-state variant used inside solver loops: residuals/counts are
// aligned to hosts (one entry per host, in host order).
double fitness_from_state(std::span<const ResourceVector> residuals,
                          std::span<const int> vm_counts,
                          std::span<const PhysicalMachine> hosts,
                          const FitnessParams& params);

// Fitness of one site's slice of a placement. Checks feasibility (every
// residual non-negative) and throws std::logic_error on an infeasible
// placement rather than scoring it.
double placement_fitness(const Placement& p, const Datacenter& dc,
                         const FitnessParams& params);

} // namespace greenplace

// Classical constructive heuristics, First Fit Decreasing and Best Fit
// Decreasing, used as comparison baselines. Both are deterministic, perform
// no migrations, and extend an existing placement within one site.
#pragma once

#include <optional>
#include <span>

#include "greenplace/objective.hpp"

namespace greenplace {

// Decreasing CPU demand, ties by decreasing RAM, then ascending id.
std::vector<VmId> decreasing_demand_order(std::span<const VmId> batch, const VmPool& vms);

// Each VM goes to the first host (in fixed host order) that can take it.
// Throws PlacementFailure naming the first VM that fits nowhere.
Placement ffd_place(std::span<const VmId> batch, const VmPool& vms,
                    const Datacenter& dc, const Placement& base);

// Each VM goes to the feasible host with the smallest post-placement
// normalized residual sum (tightest fit); ties to the lowest host id.
Placement bfd_place(std::span<const VmId> batch, const VmPool& vms,
                    const Datacenter& dc, const Placement& base);

// Fitness increase a BFD trial placement of the batch would cause on this
// site; nullopt when the batch does not fit. Used by the broker to rank
// sites without committing anything.
std::optional<double> bfd_trial_delta(std::span<const VmId> batch, const VmPool& vms,
                                      const Datacenter& dc, const Placement& base,
                                      const FitnessParams& params);

} // namespace greenplace

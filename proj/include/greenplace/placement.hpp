// The VM-to-PM assignment with cached residual capacities, its feasibility
// algebra, and the validation report covering both constraint families
// (exclusive assignment, capacity in every resource dimension).
#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "greenplace/datacenter.hpp"

namespace greenplace {

// A move or placement that would overload a host in one dimension.
class CapacityError : public std::runtime_error {
public:
    CapacityError(PmId pm, Resource dim, double overflow);
    PmId pm;
    Resource dim;
    double overflow;
};

// Raised by constructive placers when some VM fits on no host.
class PlacementFailure : public std::runtime_error {
public:
    PlacementFailure(VmId vm, const std::string& context);
    VmId vm;
};

struct ValidationReport {
    struct AssignmentViolation { // exclusive-assignment constraint
        VmId vm;
    };
    struct CapacityViolation { // per-dimension capacity constraint
        PmId pm;
        Resource dim;
        double overflow;
    };
    std::vector<AssignmentViolation> unplaced;
    std::vector<CapacityViolation> overloads;
    std::vector<std::string> structural; // unknown/stale ids, distinct from constraint violations

    bool ok() const { return unplaced.empty() && overloads.empty() && structural.empty(); }
};

class Placement {
public:
    Placement() = default;
    explicit Placement(const Fleet& fleet);

    int host_count() const { return static_cast<int>(capacity_.size()); }
    int placed_count() const { return static_cast<int>(assignment_.size()); }

    std::optional<PmId> host_of(VmId vm) const;
    const ResourceVector& capacity(PmId pm) const { return capacity_.at(pm); }
    const ResourceVector& residual(PmId pm) const { return residual_.at(pm); }
    int vm_count(PmId pm) const { return vm_count_.at(pm); }
    bool active(PmId pm) const { return vm_count_.at(pm) > 0; }
    const std::vector<VmId>& hosted(PmId pm) const { return hosted_.at(pm); }
    const std::map<VmId, PmId>& assignments() const { return assignment_; }

    // Mutators keep the residual cache exact and are atomic: on a capacity
    // error the placement is untouched.
    void place(VmId vm, const ResourceVector& demand, PmId dst);
    void remove(VmId vm, const ResourceVector& demand);
    void move(VmId vm, const ResourceVector& demand, PmId dst);

    // {"assignments":[{"vm":"0","pm":"3"},...]}, ordered by numeric VM id.
    nlohmann::json to_json() const;
    static Placement from_json(const Fleet& fleet, const VmPool& vms,
                               const nlohmann::json& j);

private:
    void check_pm(PmId pm) const;

    std::map<VmId, PmId> assignment_;
    std::vector<ResourceVector> capacity_;
    std::vector<ResourceVector> residual_;
    std::vector<int> vm_count_;
    std::vector<std::vector<VmId>> hosted_; // ascending VmId per host
};

// Pure variant of Placement::move: returns the updated placement, leaves the
// original untouched. Moving a VM to its current host is the identity.
Placement apply_move(const Placement& p, VmId vm, PmId dst, const VmPool& vms);

// Recomputes every host load from scratch (independent of the residual
// cache) and reports all violations. expected_vms is the set that must be
// placed exactly once.
ValidationReport validate(const Placement& p, const VmPool& vms,
                          std::span<const VmId> expected_vms, const Fleet& fleet);

// Current CPU draw of hosted VMs over host CPU capacity; exceeds 1 only if
// demand outgrows the reservation the placement was checked against.
double host_utilization(PmId pm, const Placement& p, const VmPool& vms);

} // namespace greenplace

#include "greenplace/placement.hpp"

#include <algorithm>
#include <charconv>

#include <nlohmann/json.hpp>

namespace greenplace {

namespace {

std::string capacity_message(PmId pm, Resource dim, double overflow) {
    return "capacity exceeded on host " + std::to_string(pm) + " in " +
           std::string(to_string(dim)) + " by " + std::to_string(overflow);
}

// First overloaded dimension of demand vs residual, if any.
std::optional<std::pair<Resource, double>> first_overflow(const ResourceVector& residual,
                                                          const ResourceVector& demand) {
    for (Resource r : kAllResources) {
        double over = demand[r] - residual[r];
        if (over > 0.0)
            return std::make_pair(r, over);
    }
    return std::nullopt;
}

} // namespace

CapacityError::CapacityError(PmId pm_, Resource dim_, double overflow_)
    : std::runtime_error(capacity_message(pm_, dim_, overflow_)),
      pm(pm_), dim(dim_), overflow(overflow_) {}

PlacementFailure::PlacementFailure(VmId vm_, const std::string& context)
    : std::runtime_error("no feasible host for VM " + std::to_string(vm_) +
                         (context.empty() ? "" : " (" + context + ")")),
      vm(vm_) {}

Placement::Placement(const Fleet& fleet) {
    const int m = fleet.host_count();
    capacity_.reserve(m);
    for (PmId id = 0; id < m; ++id)
        capacity_.push_back(fleet.host(id).capacity);
    residual_ = capacity_;
    vm_count_.assign(m, 0);
    hosted_.assign(m, {});
}

std::optional<PmId> Placement::host_of(VmId vm) const {
    auto it = assignment_.find(vm);
    if (it == assignment_.end())
        return std::nullopt;
    return it->second;
}

void Placement::check_pm(PmId pm) const {
    if (pm < 0 || pm >= host_count())
        throw std::out_of_range("Placement: unknown host id " + std::to_string(pm));
}

void Placement::place(VmId vm, const ResourceVector& demand, PmId dst) {
    check_pm(dst);
    if (assignment_.count(vm))
        throw std::logic_error("Placement: VM " + std::to_string(vm) + " already placed");
    auto next = residual_[dst].checked_sub(demand);
    if (!next) {
        auto over = first_overflow(residual_[dst], demand);
        throw CapacityError(dst, over->first, over->second);
    }
    residual_[dst] = *next;
    assignment_[vm] = dst;
    ++vm_count_[dst];
    auto& lst = hosted_[dst];
    lst.insert(std::lower_bound(lst.begin(), lst.end(), vm), vm);
}

void Placement::remove(VmId vm, const ResourceVector& demand) {
    auto it = assignment_.find(vm);
    if (it == assignment_.end())
        throw std::logic_error("Placement: VM " + std::to_string(vm) + " not placed");
    PmId src = it->second;
    residual_[src] = residual_[src] + demand;
    assignment_.erase(it);
    --vm_count_[src];
    auto& lst = hosted_[src];
    lst.erase(std::lower_bound(lst.begin(), lst.end(), vm));
}

void Placement::move(VmId vm, const ResourceVector& demand, PmId dst) {
    check_pm(dst);
    auto it = assignment_.find(vm);
    if (it == assignment_.end())
        throw std::logic_error("Placement: VM " + std::to_string(vm) + " not placed");
    PmId src = it->second;
    if (src == dst)
        return;
    auto next = residual_[dst].checked_sub(demand);
    if (!next) {
        auto over = first_overflow(residual_[dst], demand);
        throw CapacityError(dst, over->first, over->second);
    }
    residual_[dst] = *next;
    residual_[src] = residual_[src] + demand;
    it->second = dst;
    --vm_count_[src];
    ++vm_count_[dst];
    auto& from = hosted_[src];
    from.erase(std::lower_bound(from.begin(), from.end(), vm));
    auto& to = hosted_[dst];
    to.insert(std::lower_bound(to.begin(), to.end(), vm), vm);
}

nlohmann::json Placement::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [vm, pm] : assignment_)
        arr.push_back({{"vm", std::to_string(vm)}, {"pm", std::to_string(pm)}});
    return nlohmann::json{{"assignments", std::move(arr)}};
}

Placement Placement::from_json(const Fleet& fleet, const VmPool& vms,
                               const nlohmann::json& j) {
    Placement p(fleet);
    for (const auto& entry : j.at("assignments")) {
        const std::string vm_s = entry.at("vm").get<std::string>();
        const std::string pm_s = entry.at("pm").get<std::string>();
        VmId vm{};
        PmId pm{};
        auto r1 = std::from_chars(vm_s.data(), vm_s.data() + vm_s.size(), vm);
        auto r2 = std::from_chars(pm_s.data(), pm_s.data() + pm_s.size(), pm);
        if (r1.ec != std::errc{} || r2.ec != std::errc{})
            throw std::invalid_argument("Placement::from_json: non-numeric id");
        if (!vms.contains(vm))
            throw std::invalid_argument("Placement::from_json: unknown VM " + vm_s);
        p.place(vm, vms.at(vm).demand, pm);
    }
    return p;
}

Placement apply_move(const Placement& p, VmId vm, PmId dst, const VmPool& vms) {
    Placement next = p;
    next.move(vm, vms.at(vm).demand, dst);
    return next;
}

ValidationReport validate(const Placement& p, const VmPool& vms,
                          std::span<const VmId> expected_vms, const Fleet& fleet) {
    ValidationReport report;
    const int m = fleet.host_count();
    std::vector<Eigen::Array4d> load(m, Eigen::Array4d::Zero());

    for (const auto& [vm, pm] : p.assignments()) {
        if (!vms.contains(vm)) {
            report.structural.push_back("assignment references unknown VM " + std::to_string(vm));
            continue;
        }
        if (pm < 0 || pm >= m) {
            report.structural.push_back("assignment references unknown PM " + std::to_string(pm));
            continue;
        }
        load[pm] += vms.at(vm).demand.array();
    }

    for (VmId vm : expected_vms) {
        if (!vms.contains(vm)) {
            report.structural.push_back("expected set references unknown VM " + std::to_string(vm));
            continue;
        }
        if (!p.host_of(vm))
            report.unplaced.push_back({vm});
    }

    constexpr double kEps = 1e-9;
    for (PmId pm = 0; pm < m; ++pm) {
        const Eigen::Array4d& cap = fleet.host(pm).capacity.array();
        for (Resource r : kAllResources) {
            const int d = static_cast<int>(r);
            double over = load[pm][d] - cap[d];
            if (over > kEps)
                report.overloads.push_back({pm, r, over});
        }
    }
    return report;
}

double host_utilization(PmId pm, const Placement& p, const VmPool& vms) {
    double current = 0.0;
    for (VmId vm : p.hosted(pm))
        current += vms.at(vm).current_cpu_demand;
    double cap = p.capacity(pm).cpu_cores();
    return cap > 0.0 ? current / cap : 0.0;
}

} // namespace greenplace

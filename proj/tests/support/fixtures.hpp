// Shared desk-instance builders for the test binaries.
#pragma once

#include <vector>

#include "greenplace/datacenter.hpp"
#include "greenplace/placement.hpp"

namespace greenplace::test {

inline PhysicalMachine custom_host(PmId id, double cpu, double ram = 1024,
                                   double bw = 100000, double storage = 100000,
                                   double idle_w = 100, double peak_w = 200) {
    return PhysicalMachine{id, ServerType::Custom,
                           ResourceVector(cpu, ram, bw, storage), idle_w, peak_w, 0};
}

// Single-site fleet of hosts whose CPU capacities are given; the other
// dimensions are loose so CPU is the binding constraint.
inline Fleet cpu_fleet(const std::vector<double>& cpu_caps) {
    std::vector<PhysicalMachine> hosts;
    for (std::size_t i = 0; i < cpu_caps.size(); ++i)
        hosts.push_back(custom_host(static_cast<PmId>(i), cpu_caps[i]));
    return Fleet::single_site(std::move(hosts));
}

inline VmId add_vm(VmPool& pool, double cpu, double ram = 1, double bw = 1,
                   double storage = 1) {
    VirtualMachine vm;
    vm.vm_type = VmType::Type1;
    vm.demand = ResourceVector(cpu, ram, bw, storage);
    vm.current_cpu_demand = cpu;
    vm.end_s = 1e18;
    return pool.add(vm);
}

} // namespace greenplace::test

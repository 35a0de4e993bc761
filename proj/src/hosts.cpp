#include "greenplace/hosts.hpp"

#include <stdexcept>

namespace greenplace {

namespace {
constexpr double kHostBwMbps = 10000.0; // 10 GbE access link per host
}

HostCatalog default_host_catalog() {
    HostCatalog c;
    // cores, RAM GB, BW Mbps, storage GB / idle W / peak W
    c.specs[0] = {ResourceVector(2, 16, kHostBwMbps, 2000), 60, 120};
    c.specs[1] = {ResourceVector(4, 32, kHostBwMbps, 6000), 85, 170};
    c.specs[2] = {ResourceVector(8, 32, kHostBwMbps, 7000), 110, 220};
    c.specs[3] = {ResourceVector(8, 64, kHostBwMbps, 7000), 120, 240};
    c.specs[4] = {ResourceVector(16, 128, kHostBwMbps, 9000), 160, 320};
    c.specs[5] = {ResourceVector(32, 128, kHostBwMbps, 12000), 210, 420};
    return c;
}

VmCatalog default_vm_catalog() {
    VmCatalog c;
    c.demands[0] = ResourceVector(1, 1, 100, 100);
    c.demands[1] = ResourceVector(2, 2, 200, 200);
    c.demands[2] = ResourceVector(4, 4, 400, 500);
    c.demands[3] = ResourceVector(8, 8, 800, 1000);
    c.demands[4] = ResourceVector(16, 64, 1600, 2000);
    return c;
}

int vm_type_pes(VmType t) {
    static constexpr int pes[kVmTypeCount] = {1, 2, 4, 8, 16};
    return pes[static_cast<int>(t)];
}

PhysicalMachine make_server(PmId id, ServerType type, int site_id,
                            const HostCatalog& catalog) {
    if (type == ServerType::Custom)
        throw std::invalid_argument("make_server: Custom has no catalog row");
    const ServerSpec& s = catalog.spec(type);
    if (!(s.idle_power_w > 0.0) || !(s.idle_power_w < s.peak_power_w))
        throw std::invalid_argument("make_server: power envelope must satisfy 0 < idle < peak");
    return PhysicalMachine{id, type, s.capacity, s.idle_power_w, s.peak_power_w, site_id};
}

VirtualMachine make_vm(VmId id, VmType type, double start_s, double end_s,
                       const VmCatalog& catalog) {
    VirtualMachine vm;
    vm.id = id;
    vm.vm_type = type;
    vm.demand = catalog.demand(type);
    vm.current_cpu_demand = vm.demand.cpu_cores();
    vm.start_s = start_s;
    vm.end_s = end_s;
    return vm;
}

} // namespace greenplace

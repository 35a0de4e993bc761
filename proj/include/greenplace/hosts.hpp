// Physical machine and virtual machine entities plus the default hardware
// catalogs (six server configurations, five instance types).
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "greenplace/resources.hpp"

namespace greenplace {

using PmId = std::int32_t;
using VmId = std::int32_t;

enum class ServerType : int { Type1 = 0, Type2, Type3, Type4, Type5, Type6, Custom };
enum class VmType : int { Type1 = 0, Type2, Type3, Type4, Type5 };

constexpr int kServerTypeCount = 6;
constexpr int kVmTypeCount = 5;

constexpr std::string_view to_string(VmType t) {
    switch (t) {
    case VmType::Type1: return "A1_Medium";
    case VmType::Type2: return "m5.large";
    case VmType::Type3: return "m5.xlarge";
    case VmType::Type4: return "m5.2xlarge";
    case VmType::Type5: return "m5.4xlarge";
    }
    return "?";
}

struct ServerSpec {
    ResourceVector capacity;
    double idle_power_w;
    double peak_power_w;
};

struct HostCatalog {
    std::array<ServerSpec, kServerTypeCount> specs;
    const ServerSpec& spec(ServerType t) const { return specs[static_cast<int>(t)]; }
};

struct VmCatalog {
    std::array<ResourceVector, kVmTypeCount> demands;
    const ResourceVector& demand(VmType t) const { return demands[static_cast<int>(t)]; }
};

// Six server configurations: cores/RAM/storage per the standard table, a
// uniform 10 GbE access link, and linear power envelopes with ~50% idle ratio
// monotone in core count. All overridable through the run config.
HostCatalog default_host_catalog();

// Five instance types (cores/RAM/storage), with per-type bandwidth demand
// 100/200/400/800/1600 Mbps proportional to PE count.
VmCatalog default_vm_catalog();

int vm_type_pes(VmType t);

struct PhysicalMachine {
    PmId id = 0;
    ServerType server_type = ServerType::Custom;
    ResourceVector capacity;
    double idle_power_w = 0.0;
    double peak_power_w = 0.0;
    int site_id = 0;
};

// Catalog-backed construction; throws std::invalid_argument on a broken power
// envelope (idle must be positive and below peak).
PhysicalMachine make_server(PmId id, ServerType type, int site_id,
                            const HostCatalog& catalog = default_host_catalog());

struct VirtualMachine {
    VmId id = 0;
    VmType vm_type = VmType::Type1;
    ResourceVector demand;
    // Time-varying CPU draw in cores, always within [0, demand.cpu_cores()].
    double current_cpu_demand = 0.0;
    double start_s = 0.0;
    double end_s = 0.0;
};

VirtualMachine make_vm(VmId id, VmType type, double start_s, double end_s,
                       const VmCatalog& catalog = default_vm_catalog());

} // namespace greenplace

// Datacenter sites and the multi-site fleet with globally dense host ids.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "greenplace/energy.hpp"
#include "greenplace/hosts.hpp"

namespace greenplace {

struct Datacenter {
    SiteProfile site;
    int site_index = 0;
    std::vector<PhysicalMachine> hosts;
};

// hosts_count servers, types assigned in equal blocks (21 of each of the six
// types at the default 126); a remainder cycles through the types.
Datacenter make_datacenter(const SiteProfile& site, int site_index, int hosts_count,
                           PmId first_id, const HostCatalog& catalog = default_host_catalog());

// An ordered collection of datacenters whose host ids are dense 0..M-1 in
// site-major order, so placements can index hosts by id directly.
class Fleet {
public:
    Fleet() = default;
    explicit Fleet(std::vector<Datacenter> dcs);

    static Fleet single_site(std::vector<PhysicalMachine> hosts,
                             SiteProfile site = SiteProfile{"test", 0, 0, 0, 0, 0});

    const std::vector<Datacenter>& sites() const { return dcs_; }
    int site_count() const { return static_cast<int>(dcs_.size()); }
    int host_count() const { return static_cast<int>(index_.size()); }

    const PhysicalMachine& host(PmId id) const {
        const auto& [s, i] = locate(id);
        return dcs_[s].hosts[i];
    }
    int site_of(PmId id) const { return locate(id).first; }

private:
    std::pair<int, int> locate(PmId id) const {
        if (id < 0 || id >= static_cast<PmId>(index_.size()))
            throw std::out_of_range("Fleet: unknown host id");
        return index_[id];
    }

    std::vector<Datacenter> dcs_;
    std::vector<std::pair<int, int>> index_; // host id -> (site, position)
};

// Pool of every VM the simulation has seen; VmId is the index into the pool.
class VmPool {
public:
    VmId add(VirtualMachine vm) {
        vm.id = static_cast<VmId>(vms_.size());
        vms_.push_back(vm);
        return vm.id;
    }
    const VirtualMachine& at(VmId id) const { return vms_.at(id); }
    VirtualMachine& at(VmId id) { return vms_.at(id); }
    bool contains(VmId id) const { return id >= 0 && id < static_cast<VmId>(vms_.size()); }
    int size() const { return static_cast<int>(vms_.size()); }

private:
    std::vector<VirtualMachine> vms_;
};

} // namespace greenplace

#include "greenplace/datacenter.hpp"

namespace greenplace {

Datacenter make_datacenter(const SiteProfile& site, int site_index, int hosts_count,
                           PmId first_id, const HostCatalog& catalog) {
    if (hosts_count <= 0)
        throw std::invalid_argument("make_datacenter: hosts_count must be positive");
    Datacenter dc;
    dc.site = site;
    dc.site_index = site_index;
    dc.hosts.reserve(hosts_count);
    const int per_type = hosts_count / kServerTypeCount;
    for (int i = 0; i < hosts_count; ++i) {
        int type_idx = per_type > 0 ? std::min(i / per_type, kServerTypeCount - 1)
                                    : i % kServerTypeCount;
        dc.hosts.push_back(make_server(first_id + i, static_cast<ServerType>(type_idx),
                                       site_index, catalog));
    }
    return dc;
}

Fleet::Fleet(std::vector<Datacenter> dcs) : dcs_(std::move(dcs)) {
    PmId expected = 0;
    for (int s = 0; s < static_cast<int>(dcs_.size()); ++s) {
        dcs_[s].site_index = s;
        for (int i = 0; i < static_cast<int>(dcs_[s].hosts.size()); ++i) {
            if (dcs_[s].hosts[i].id != expected)
                throw std::invalid_argument("Fleet: host ids must be dense in site-major order");
            index_.emplace_back(s, i);
            ++expected;
        }
    }
}

Fleet Fleet::single_site(std::vector<PhysicalMachine> hosts, SiteProfile site) {
    Datacenter dc;
    dc.site = std::move(site);
    dc.site_index = 0;
    dc.hosts = std::move(hosts);
    for (int i = 0; i < static_cast<int>(dc.hosts.size()); ++i) {
        dc.hosts[i].id = i;
        dc.hosts[i].site_id = 0;
    }
    std::vector<Datacenter> dcs;
    dcs.push_back(std::move(dc));
    return Fleet(std::move(dcs));
}

} // namespace greenplace

// Four-dimensional resource quantities (CPU cores, RAM GB, bandwidth Mbps,
// storage GB) shared by demands, capacities and residuals.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace greenplace {

enum class Resource : int { Cpu = 0, Ram = 1, Bw = 2, Storage = 3 };

constexpr std::array<Resource, 4> kAllResources{Resource::Cpu, Resource::Ram,
                                                Resource::Bw, Resource::Storage};

// The three dimensions that enter the consolidation objective; storage is a
// checked capacity dimension but not a wastage term.
constexpr std::array<Resource, 3> kWastageResources{Resource::Cpu, Resource::Ram,
                                                    Resource::Bw};

constexpr std::string_view to_string(Resource r) {
    switch (r) {
    case Resource::Cpu: return "cpu_cores";
    case Resource::Ram: return "ram_gb";
    case Resource::Bw: return "bw_mbps";
    case Resource::Storage: return "storage_gb";
    }
    return "?";
}

class ResourceVector {
public:
    ResourceVector() : v_(Eigen::Array4d::Zero()) {}

    ResourceVector(double cpu_cores, double ram_gb, double bw_mbps, double storage_gb)
        : v_(cpu_cores, ram_gb, bw_mbps, storage_gb) {
        if ((v_ < 0.0).any())
            throw std::invalid_argument("ResourceVector: negative component");
    }

    static ResourceVector zero() { return ResourceVector(); }

    double cpu_cores() const { return v_[0]; }
    double ram_gb() const { return v_[1]; }
    double bw_mbps() const { return v_[2]; }
    double storage_gb() const { return v_[3]; }
    double operator[](Resource r) const { return v_[static_cast<int>(r)]; }

    const Eigen::Array4d& array() const { return v_; }

    ResourceVector operator+(const ResourceVector& o) const {
        return ResourceVector(Eigen::Array4d(v_ + o.v_));
    }

    // Component-wise subtraction; nullopt when any component would go
    // negative (infeasibility is signalled, never clamped).
    std::optional<ResourceVector> checked_sub(const ResourceVector& o) const {
        Eigen::Array4d d = v_ - o.v_;
        if ((d < 0.0).any())
            return std::nullopt;
        return ResourceVector(d);
    }

    // true iff *this <= capacity in every dimension.
    bool fits_within(const ResourceVector& capacity) const {
        return (v_ <= capacity.v_).all();
    }

    bool operator==(const ResourceVector& o) const { return (v_ == o.v_).all(); }
    bool operator!=(const ResourceVector& o) const { return !(*this == o); }

private:
    explicit ResourceVector(const Eigen::Array4d& v) : v_(v) {}
    Eigen::Array4d v_;
};

// Eq. (2) feasibility test for one host/VM pair: demand must fit the host's
// residual capacity in all four dimensions. Total function.
inline bool can_host(const ResourceVector& pm_residual, const ResourceVector& vm_demand) {
    return vm_demand.fits_within(pm_residual);
}

} // namespace greenplace

// Exhaustive-enumeration oracle for small placement instances. Evaluates
// every host assignment of the candidate VMs from raw capacity/demand
// arrays, deliberately sharing nothing with the Placement bookkeeping or the
// solvers it is used to check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "greenplace/datacenter.hpp"
#include "greenplace/objective.hpp"

namespace greenplace::test {

struct EnumResult {
    bool feasible = false;
    double best_fitness = std::numeric_limits<double>::infinity();
    std::vector<int> best_assign; // host position per candidate
    long evaluated = 0;
};

// fixed_load/fixed_count describe VMs that are not reassigned (may be empty).
inline EnumResult enumerate_best(const Datacenter& dc,
                                 std::span<const ResourceVector> demands,
                                 std::span<const Eigen::Array4d> fixed_load,
                                 std::span<const int> fixed_count,
                                 const FitnessParams& params) {
    const int m = static_cast<int>(dc.hosts.size());
    const int n = static_cast<int>(demands.size());
    EnumResult result;

    std::vector<int> assign(n, 0);
    while (true) {
        ++result.evaluated;
        std::vector<Eigen::Array4d> load(m, Eigen::Array4d::Zero());
        std::vector<int> count(m, 0);
        for (int i = 0; i < m; ++i) {
            if (!fixed_load.empty())
                load[i] = fixed_load[i];
            if (!fixed_count.empty())
                count[i] = fixed_count[i];
        }
        for (int j = 0; j < n; ++j) {
            load[assign[j]] += demands[j].array();
            ++count[assign[j]];
        }
        bool feasible = true;
        for (int i = 0; i < m && feasible; ++i)
            if ((load[i] > dc.hosts[i].capacity.array()).any())
                feasible = false;
        if (feasible) {
            double active = 0.0;
            double wastage = 0.0;
            for (int i = 0; i < m; ++i) {
                if (count[i] <= 0)
                    continue;
                active += 1.0;
                const Eigen::Array4d& cap = dc.hosts[i].capacity.array();
                for (Resource r : kWastageResources) {
                    int d = static_cast<int>(r);
                    double w = cap[d] - load[i][d];
                    if (params.normalized_wastage && cap[d] > 0)
                        w /= cap[d];
                    wastage += w;
                }
            }
            double f = params.alpha * active + params.beta * wastage;
            if (f < result.best_fitness) {
                result.best_fitness = f;
                result.best_assign = assign;
                result.feasible = true;
            }
        }
        // odometer
        int j = n - 1;
        while (j >= 0 && assign[j] == m - 1)
            assign[j--] = 0;
        if (j < 0)
            break;
        ++assign[j];
    }
    return result;
}

} // namespace greenplace::test

#include "greenplace/pso.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "greenplace/baselines.hpp"

namespace greenplace {

namespace {

TriggerReport build_report(const Datacenter& dc, const Placement& p,
                           std::span<const double> utilization,
                           double th_over, double th_under) {
    TriggerReport report;
    for (int i = 0; i < static_cast<int>(dc.hosts.size()); ++i) {
        PmId id = dc.hosts[i].id;
        if (!p.active(id))
            continue; // powered-down hosts are never flagged
        double u = utilization[i];
        bool flagged = false;
        if (u > th_over) {
            report.over.push_back(id);
            flagged = true;
        } else if (u < th_under) {
            report.under.push_back(id);
            flagged = true;
        }
        if (flagged)
            for (VmId vm : p.hosted(id))
                report.candidates.push_back(vm);
    }
    std::sort(report.candidates.begin(), report.candidates.end());
    return report;
}

} // namespace

TriggerReport detect_triggers(const Datacenter& dc, const Placement& p, const VmPool& vms,
                              double th_over, double th_under) {
    std::vector<double> u(dc.hosts.size());
    for (int i = 0; i < static_cast<int>(dc.hosts.size()); ++i)
        u[i] = host_utilization(dc.hosts[i].id, p, vms);
    return build_report(dc, p, u, th_over, th_under);
}

TriggerReport detect_triggers_with(const Datacenter& dc, const Placement& p,
                                   std::span<const double> utilization,
                                   double th_over, double th_under) {
    return build_report(dc, p, utilization, th_over, th_under);
}

double SwarmContext::fragment_fitness(std::span<const int> fragment) const {
    std::vector<ResourceVector> residual = base_residual;
    std::vector<int> counts = base_counts;
    for (std::size_t j = 0; j < fragment.size(); ++j) {
        residual[fragment[j]] = *residual[fragment[j]].checked_sub(demand[j]);
        ++counts[fragment[j]];
    }
    return fitness_from_state(residual, counts, dc->hosts, fitness);
}

Eigen::MatrixXd Particle::position_matrix() const {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(velocity.rows(), velocity.cols());
    for (int j = 0; j < static_cast<int>(decoded.size()); ++j)
        x(decoded[j], j) = 1.0;
    return x;
}

Swarm init_swarm(const Placement& current, std::span<const VmId> candidates,
                 const Datacenter& dc, const VmPool& vms, const PsoParams& params,
                 std::uint64_t seed) {
    if (candidates.empty())
        throw std::invalid_argument("init_swarm: no candidate VMs");

    const int m = static_cast<int>(dc.hosts.size());
    std::unordered_map<PmId, int> pos_of;
    pos_of.reserve(m);
    for (int i = 0; i < m; ++i)
        pos_of[dc.hosts[i].id] = i;

    Swarm swarm;
    SwarmContext& ctx = swarm.ctx;
    ctx.dc = &dc;
    ctx.fitness = fitness_params(params);
    ctx.candidates = decreasing_demand_order(candidates, vms);

    const int n = static_cast<int>(ctx.candidates.size());
    ctx.demand.reserve(n);
    ctx.current_pos.reserve(n);
    ctx.base_residual.resize(m);
    ctx.base_counts.resize(m);
    for (int i = 0; i < m; ++i) {
        ctx.base_residual[i] = current.residual(dc.hosts[i].id);
        ctx.base_counts[i] = current.vm_count(dc.hosts[i].id);
    }
    for (VmId vm : ctx.candidates) {
        auto host = current.host_of(vm);
        if (!host)
            throw std::invalid_argument("init_swarm: candidate VM is not placed");
        int pos = pos_of.at(*host);
        ctx.demand.push_back(vms.at(vm).demand);
        ctx.current_pos.push_back(pos);
        // strip candidate load out of the base state
        ctx.base_residual[pos] = ctx.base_residual[pos] + vms.at(vm).demand;
        --ctx.base_counts[pos];
    }

    swarm.particles.resize(params.swarm_size);
    for (int pi = 0; pi < params.swarm_size; ++pi) {
        Particle& p = swarm.particles[pi];
        p.id = pi;
        p.velocity = Eigen::MatrixXd::Zero(m, n);
        p.decoded = ctx.current_pos;

        if (pi > 0 && params.p_perturb > 0.0) {
            // Feasible random moves applied sequentially to the live state:
            // the particle stays feasible at every intermediate step.
            RngStream rng = derive_stream(seed, 0x1517, pi);
            std::vector<ResourceVector> residual = ctx.base_residual;
            std::vector<int> counts = ctx.base_counts;
            for (int j = 0; j < n; ++j) {
                residual[p.decoded[j]] = *residual[p.decoded[j]].checked_sub(ctx.demand[j]);
                ++counts[p.decoded[j]];
            }
            for (int j = 0; j < n; ++j) {
                if (!rng.bernoulli(params.p_perturb))
                    continue;
                std::vector<int> alternatives;
                for (int i = 0; i < m; ++i)
                    if (i != p.decoded[j] && can_host(residual[i], ctx.demand[j]))
                        alternatives.push_back(i);
                if (alternatives.empty())
                    continue;
                int dst = alternatives[rng.next_below(alternatives.size())];
                int src = p.decoded[j];
                residual[src] = residual[src] + ctx.demand[j];
                --counts[src];
                residual[dst] = *residual[dst].checked_sub(ctx.demand[j]);
                ++counts[dst];
                p.decoded[j] = dst;
            }
        }

        p.fitness = ctx.fragment_fitness(p.decoded);
        p.pbest = p.decoded;
        p.pbest_fitness = p.fitness;
    }

    swarm.gbest = swarm.particles[0].pbest;
    swarm.gbest_fitness = swarm.particles[0].pbest_fitness;
    for (const Particle& p : swarm.particles)
        if (p.pbest_fitness < swarm.gbest_fitness) {
            swarm.gbest_fitness = p.pbest_fitness;
            swarm.gbest = p.pbest;
        }
    return swarm;
}

double inertia_at(int t, const PsoParams& params) {
    return params.omega_max -
           (params.omega_max - params.omega_min) / params.t_max * t;
}

void update_velocity(Particle& p, const std::vector<int>& gbest, double omega,
                     const PsoParams& params, RngStream& rng) {
    if (params.per_element_r) {
        Eigen::MatrixXd& v = p.velocity;
        const int m = static_cast<int>(v.rows());
        const int n = static_cast<int>(v.cols());
        Eigen::MatrixXd x = p.position_matrix();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                double r1 = rng.next_double();
                double r2 = rng.next_double();
                double pb = p.pbest[j] == i ? 1.0 : 0.0;
                double gb = gbest[j] == i ? 1.0 : 0.0;
                v(i, j) = omega * v(i, j) + params.c1 * r1 * (pb - x(i, j)) +
                          params.c2 * r2 * (gb - x(i, j));
            }
        v = v.cwiseMax(-params.v_clamp).cwiseMin(params.v_clamp);
        return;
    }
    const double r1 = rng.next_double();
    const double r2 = rng.next_double();
    update_velocity_with(p, gbest, omega, params, r1, r2);
}

void update_velocity_with(Particle& p, const std::vector<int>& gbest, double omega,
                          const PsoParams& params, double r1, double r2) {
    Eigen::MatrixXd& v = p.velocity;
    const int n = static_cast<int>(v.cols());
    v *= omega;
    // pbest/x/gbest are one-hot per column; only three rows move.
    for (int j = 0; j < n; ++j) {
        v(p.pbest[j], j) += params.c1 * r1;
        v(gbest[j], j) += params.c2 * r2;
        v(p.decoded[j], j) -= params.c1 * r1 + params.c2 * r2;
    }
    v = v.cwiseMax(-params.v_clamp).cwiseMin(params.v_clamp);
}

void step_position(Particle& p, const SwarmContext& ctx) {
    const int m = static_cast<int>(p.velocity.rows());
    const int n = static_cast<int>(ctx.candidates.size());

    std::vector<ResourceVector> residual = ctx.base_residual;
    std::vector<int> counts = ctx.base_counts;
    std::vector<int> next(n);
    bool reset = false;

    for (int j = 0; j < n && !reset; ++j) {
        const ResourceVector& d = ctx.demand[j];
        const int prev = p.decoded[j];
        int chosen = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (!can_host(residual[i], d))
                continue;
            double score = p.velocity(i, j);
            // ties keep the current host, then the lowest host id
            if (score > best_score || (score == best_score && i == prev && chosen != prev)) {
                best_score = score;
                chosen = i;
            }
        }
        if (chosen < 0) {
            if (can_host(residual[prev], d)) {
                chosen = prev;
            } else {
                reset = true; // rebuild as the live fragment below
                break;
            }
        }
        residual[chosen] = *residual[chosen].checked_sub(d);
        ++counts[chosen];
        next[j] = chosen;
    }

    if (reset)
        next = ctx.current_pos;

    p.decoded = std::move(next);
    p.fitness = ctx.fragment_fitness(p.decoded);
    if (p.fitness < p.pbest_fitness) {
        p.pbest_fitness = p.fitness;
        p.pbest = p.decoded;
    }
}

double fitness(const Placement& p, const Datacenter& dc, const PsoParams& params) {
    return placement_fitness(p, dc, fitness_params(params));
}

MigrationPlan run_pso(const Placement& current, std::span<const VmId> candidates,
                      const Datacenter& dc, const VmPool& vms, const PsoParams& params,
                      std::uint64_t seed) {
    Swarm swarm = init_swarm(current, candidates, dc, vms, params, seed);
    SwarmContext& ctx = swarm.ctx;

    MigrationPlan plan;
    plan.gbest_history.push_back(swarm.gbest_fitness);

    int stagnant = 0;
    for (int t = 0; t < params.t_max; ++t) {
        double omega = inertia_at(t, params);
        for (Particle& p : swarm.particles) {
            RngStream rng = derive_stream(seed, 0xB50, t, p.id);
            update_velocity(p, swarm.gbest, omega, params, rng);
            step_position(p, ctx);
        }
        // gbest reduction is a barrier: particles within an iteration see the
        // previous iteration's gbest.
        bool improved = false;
        for (const Particle& p : swarm.particles)
            if (p.pbest_fitness < swarm.gbest_fitness) {
                swarm.gbest_fitness = p.pbest_fitness;
                swarm.gbest = p.pbest;
                improved = true;
            }
        plan.gbest_history.push_back(swarm.gbest_fitness);
        stagnant = improved ? 0 : stagnant + 1;
        if (stagnant >= params.stagnation_window)
            break;
    }

    plan.expected_fitness = swarm.gbest_fitness;
    for (int j = 0; j < static_cast<int>(ctx.candidates.size()); ++j) {
        if (swarm.gbest[j] == ctx.current_pos[j])
            continue;
        plan.moves.push_back({ctx.candidates[j], dc.hosts[ctx.current_pos[j]].id,
                              dc.hosts[swarm.gbest[j]].id});
    }
    return plan;
}

} // namespace greenplace

// Stage-2 runtime refinement: threshold-triggered discrete particle swarm
// search over the VMs of overloaded/underloaded hosts. Particles encode
// binary host-assignment matrices, velocities evolve by the standard update
// with linearly decreasing inertia, and every decoded position is feasible by
// construction.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "greenplace/objective.hpp"
#include "greenplace/rng.hpp"

namespace greenplace {

struct PsoParams {
    double c1 = 2.0;
    double c2 = 2.0;
    double omega_max = 0.9;
    double omega_min = 0.4;
    int swarm_size = 20;
    int t_max = 100;
    double alpha = 0.6; // active-host weight; alpha + beta = 1
    double beta = 0.4;  // wastage weight
    double th_over = 0.90;
    double th_under = 0.30;
    double p_perturb = 0.2;      // seed-diversity perturbation probability
    double v_clamp = 4.0;        // per-element velocity bound
    int stagnation_window = 20;  // early stop after this many flat iterations
    bool normalized_wastage = true;
    bool per_element_r = false;  // draw r1,r2 per matrix element instead of per particle
    int smoothing_steps = 1;     // trigger utilization window (1 = instantaneous)
};

inline FitnessParams fitness_params(const PsoParams& p) {
    return FitnessParams{p.alpha, p.beta, p.normalized_wastage};
}

struct TriggerReport {
    std::vector<PmId> over;
    std::vector<PmId> under;
    std::vector<VmId> candidates; // every VM hosted on a flagged host, ascending
    bool any() const { return !over.empty() || !under.empty(); }
};

// Hosts above th_over or active below th_under; empty hosts are powered down
// and never flagged. Utilization is current CPU draw over capacity.
TriggerReport detect_triggers(const Datacenter& dc, const Placement& p, const VmPool& vms,
                              double th_over, double th_under);

// Same rule over caller-provided utilizations (one per host position), used
// for smoothed monitoring.
TriggerReport detect_triggers_with(const Datacenter& dc, const Placement& p,
                                   std::span<const double> utilization,
                                   double th_over, double th_under);

// Shared read-only search state: candidate VMs in decode order (decreasing
// CPU demand), their live hosts, and the site state with candidate load
// stripped out.
struct SwarmContext {
    const Datacenter* dc = nullptr;
    std::vector<VmId> candidates;        // decode order
    std::vector<ResourceVector> demand;  // aligned with candidates
    std::vector<int> current_pos;        // live host position per candidate
    std::vector<ResourceVector> base_residual; // non-candidate load only
    std::vector<int> base_counts;
    FitnessParams fitness;

    double fragment_fitness(std::span<const int> fragment) const;
};

struct Particle {
    int id = 0;
    Eigen::MatrixXd velocity;  // hosts x candidates
    std::vector<int> decoded;  // host position per candidate column
    double fitness = 0.0;
    std::vector<int> pbest;
    double pbest_fitness = 0.0;

    // The binary position matrix (one-hot columns of `decoded`).
    Eigen::MatrixXd position_matrix() const;
};

struct Swarm {
    SwarmContext ctx;
    std::vector<Particle> particles;
    std::vector<int> gbest;
    double gbest_fitness = 0.0;
};

// Particle 0 is exactly the live assignment; the rest perturb it by feasible
// random moves with probability p_perturb per VM. All velocities start at 0.
Swarm init_swarm(const Placement& current, std::span<const VmId> candidates,
                 const Datacenter& dc, const VmPool& vms, const PsoParams& params,
                 std::uint64_t seed);

// Linearly decreasing inertia between omega_max (t=0) and omega_min (t=t_max).
double inertia_at(int t, const PsoParams& params);

// v' = w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x) on the binary encodings,
// clamped to +-v_clamp. One (r1, r2) pair per call by default; per-element
// draws in row-major order when per_element_r is set.
void update_velocity(Particle& p, const std::vector<int>& gbest, double omega,
                     const PsoParams& params, RngStream& rng);

// Same update with the random pair pinned (scalar mode only).
void update_velocity_with(Particle& p, const std::vector<int>& gbest, double omega,
                          const PsoParams& params, double r1, double r2);

// Decode after a velocity update: columns are processed in decreasing-demand
// order, each VM going to the feasible host ranked highest by velocity score
// (ties keep the current host, then the lowest host id; ranking is therefore
// invariant under positive scaling of the velocities). A VM with no feasible
// host keeps its previous host; if even that cannot fit, the whole particle
// resets to the live fragment, which is feasible by definition. Updates
// pbest on improvement.
void step_position(Particle& p, const SwarmContext& ctx);

// Eq. (3): alpha * active hosts + beta * residual wastage over CPU/RAM/BW.
double fitness(const Placement& p, const Datacenter& dc, const PsoParams& params);

struct MigrationPlan {
    struct Move {
        VmId vm;
        PmId src;
        PmId dst;
    };
    std::vector<Move> moves;
    double expected_fitness = 0.0;
    std::vector<double> gbest_history;
};

// Full swarm run; the plan never worsens the live fitness (particle 0 floors
// gbest at the current assignment) and contains only candidate VMs whose
// host changed.
MigrationPlan run_pso(const Placement& current, std::span<const VmId> candidates,
                      const Datacenter& dc, const VmPool& vms, const PsoParams& params,
                      std::uint64_t seed);

} // namespace greenplace

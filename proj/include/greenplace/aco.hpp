// Stage-1 constructive placement: pheromone-guided probabilistic assignment
// of an arrival batch to hosts. Ants build feasible extensions of the live
// placement (candidates pre-filtered by can_host), score them with the same
// consolidation objective the migration stage uses, and reinforce the
// iteration-best assignment on (host, VM type) pheromone cells so learning
// carries across batches.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "greenplace/objective.hpp"
#include "greenplace/rng.hpp"

namespace greenplace {

struct AcoParams {
    int n_ants = 10;
    int n_iterations = 50;
    double alpha_pher = 1.0; // pheromone exponent
    double beta_heur = 2.0;  // heuristic exponent
    double rho = 0.1;        // evaporation rate in (0,1)
    double q0 = 0.9;         // exploitation probability
    double tau_min = 0.01;
    double tau0 = 1.0;
};

// Pheromone indexed by (host position within site, VM type); entries stay in
// [tau_min, inf).
class PheromoneMatrix {
public:
    PheromoneMatrix(int n_hosts, double tau0)
        : tau_(Eigen::ArrayXXd::Constant(n_hosts, kVmTypeCount, tau0)) {}

    double at(int host_pos, VmType t) const { return tau_(host_pos, static_cast<int>(t)); }
    const Eigen::ArrayXXd& matrix() const { return tau_; }
    Eigen::ArrayXXd& matrix() { return tau_; }

private:
    Eigen::ArrayXXd tau_;
};

struct CandidateScore {
    PmId pm = 0;
    int host_pos = 0;          // row in the site's host list
    double delta_power_w = 0.0; // marginal power of placing the VM here
    double eta = 0.0;           // heuristic desirability
    double prob = 0.0;          // roulette probability over feasible candidates
};

// Power increase of adding vm_cpu reserved cores to a host currently using
// cpu_used_before cores; powering up an inactive host counts its idle draw.
double marginal_power_w(const PhysicalMachine& pm, double cpu_used_before,
                        double vm_cpu, bool active_before);

// eta = 1 / (eps + delta_power * (1 + carbon intensity)); carbon-heavy sites
// make the same watts look worse.
double heuristic_score(double delta_power_w, const SiteProfile& site);

// Feasible hosts only, with marginal power and heuristic filled in.
std::vector<CandidateScore> score_candidates(const VirtualMachine& vm,
                                             std::span<const PhysicalMachine> hosts,
                                             std::span<const ResourceVector> residuals,
                                             std::span<const int> vm_counts,
                                             const SiteProfile& site);

// Pseudo-random-proportional rule: with probability q0 the argmax of
// tau^alpha * eta^beta (ties to the lowest host id), otherwise roulette
// sampling on the same weights. Fills each candidate's prob. Throws
// PlacementFailure(vm) on an empty candidate list.
int select_host(VmId vm, std::vector<CandidateScore>& candidates,
                std::span<const double> taus, const AcoParams& params, RngStream& rng);

// Global update: evaporate everywhere, deposit 1/(1+fitness) on the cells the
// iteration-best solution used, then floor at tau_min.
void update_pheromone(PheromoneMatrix& tau,
                      std::span<const std::pair<int, VmType>> used_cells,
                      double best_fitness, const AcoParams& params);

// Holds pheromone state so consecutive batches on the same site keep what
// earlier batches learned.
class AcoPlacer {
public:
    AcoPlacer(const AcoParams& params, const Datacenter& dc, const FitnessParams& fitness);

    // Best feasible extension of base covering the whole batch; deterministic
    // for a fixed seed. Throws PlacementFailure when some VM fits nowhere in
    // any ant of any iteration.
    Placement place(std::span<const VmId> batch, const VmPool& vms,
                    const Placement& base, std::uint64_t seed);

    const PheromoneMatrix& pheromone() const { return tau_; }

private:
    AcoParams params_;
    FitnessParams fitness_;
    const Datacenter* dc_;
    PheromoneMatrix tau_;
};

// One-shot run starting from a fresh tau0 matrix.
Placement run_aco(std::span<const VmId> batch, const VmPool& vms, const Datacenter& dc,
                  const Placement& base, const AcoParams& params, std::uint64_t seed,
                  const FitnessParams& fitness = FitnessParams{});

} // namespace greenplace

#pragma once

#include "gridforge/fock.hpp"
#include "gridforge/protocols.hpp"

#include <vector>

namespace gridforge {

struct LossChannel {
    double gamma = 0.0;
    int ell = 1;
    FockDim dim{1};
    double defect = 0.0;  // completeness defect on the interior subspace
};

// N_k = sqrt(gamma^k / k!) (1-gamma)^{n̂/2} a^k, k = 0..ell-1
std::vector<OperatorMatrix> loss_kraus(double gamma, int ell, FockDim dim);
// throws a tail error reporting the defect when ell cannot reach `tol`
// completeness on the interior subspace
LossChannel make_loss_channel(double gamma, int ell, FockDim dim, double tol = 1e-10);

// matrix-free N_k |psi>
Vec apply_loss_kraus(double gamma, int k, const Vec& psi);

// completeness defect max_n<=n_int |1 - P(Bin(n,gamma) < ell)|
double kraus_completeness_defect(double gamma, int ell, int n_interior);
// smallest ell with defect < tol on levels up to n_interior; capped
int auto_kraus_count(double gamma, int n_interior, double tol = 1e-10, int cap = 20);

// Kraus-map application: rho -> sum_k N_k rho N_k†
DensityMatrix apply_loss_channel(const DensityMatrix& rho, double gamma, int ell);

// d rho/d tau = -i[n̂², rho] + koc (a rho a† - ½{a†a, rho}), tau in [0, pi/2].
// Adaptive Dormand–Prince 5(4) in the Kerr interaction picture, rtol 1e-8.
// kerr_on=false drops the commutator (pure-loss limit, same integrator).
DensityMatrix evolve_kerr_lossy(const DensityMatrix& rho, double kappa_over_chi,
                                bool kerr_on = true, double rtol = 1e-8);

struct SweepStats {
    double knob = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    int n_realizations = 1;
    std::uint64_t seed = 0;
};

struct NoiseSweepConfig {
    std::vector<double> knob_values;  // delta_chi_max or kappa_over_chi values
    int n_realizations = 100;
    std::uint64_t seed = 0;
    bool correlated = false;  // one delta-chi per run instead of per gate
    int jobs = 1;
};

// Fig 2(b): per-realization protocol with chi' = pi/2 + dchi per Kerr gate,
// I_mu = 1 - |<ideal|perturbed>|^2; mean/std over realizations.
SweepStats infidelity_chi_point(const ProtocolConfig& protocol, double delta_chi_max,
                                int n_realizations, std::uint64_t seed,
                                bool correlated = false, int jobs = 1);
std::vector<SweepStats> infidelity_sweep_chi(const NoiseSweepConfig& cfg,
                                             const ProtocolConfig& protocol);

// Fig 2(c): Kerr steps replaced by the lossy evolution; deterministic.
double infidelity_loss_point(const ProtocolConfig& protocol, double kappa_over_chi);
std::vector<SweepStats> infidelity_sweep_loss(const NoiseSweepConfig& cfg,
                                              const ProtocolConfig& protocol);

// counter-based stream: value depends only on (seed, realization, draw)
double uniform_from_counter(std::uint64_t seed, std::uint64_t realization,
                            std::uint64_t draw);  // in [0,1)

}  // namespace gridforge

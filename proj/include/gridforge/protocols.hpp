#pragma once

#include "gridforge/fock.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace gridforge {

struct ProtocolConfig {
    int mu = 0;           // 0|1
    int n_cycles = 0;     // loop iterations after the init block
    double r_db = 0.0;
    FockDim dim{1};
    bool correction = true;
    std::pair<double, double> beta_bracket{-0.1, 1.0};
    double beta_tol = 1e-6;

    void validate() const;
};

struct ProtocolTrace {
    std::vector<double> beta;      // one entry per correction (init + each cycle)
    std::vector<double> q_mu;      // <Q> after each correction / cycle
    std::vector<double> leakage;   // per protocol step
    bool failed = false;
    std::vector<StateVector> states;  // populated when record_states is set
};

struct ProtocolResult {
    StateVector state;
    ProtocolTrace trace;
};

// Algorithm: |Psi> <- U_K(pi/2) U_D(sqrt(pi/2)) U_S(r)|0>, correction on Q_1;
// per cycle j: U_K(pi/2) U_D(2^{j-1+mu} sqrt(pi/2)), correction on Q_mu.
ProtocolResult run_symmetry_enforced(const ProtocolConfig& cfg, bool record_states = false);

// Same loop without corrections; matches the leg-tracking oracle.
ProtocolResult run_phased_comb(const ProtocolConfig& cfg, bool record_states = false);

// Correction-free run with per-Kerr phases chi_t = pi/2 + dchi[k]
// (k indexes Kerr applications: init first). Used by the noise sweeps.
StateVector run_phased_comb_perturbed(const ProtocolConfig& cfg,
                                      const std::vector<double>& kerr_phases);

// 1-D minimization of <Q_mu> over U_D(i beta)|state>; Brent (golden section
// + parabolic steps). Throws bracket_error when the minimum sits at an edge.
std::pair<double, double> optimize_beta(const StateVector& state, int mu,
                                        std::pair<double, double> bracket = {-0.1, 1.0},
                                        double tol = 1e-6);

// Generic scalar Brent minimizer on [lo, hi].
double brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                      double tol, int max_iter = 200);

}  // namespace gridforge

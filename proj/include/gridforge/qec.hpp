#pragma once

#include "gridforge/fock.hpp"

#include <string>
#include <vector>

namespace gridforge {

enum class CodeFamily { phased_comb, comb, gaussian_gkp, trivial };

std::string to_string(CodeFamily f);
CodeFamily code_family_from_string(const std::string& s);

struct CodePair {
    StateVector zero;
    StateVector one;
    CodeFamily family = CodeFamily::trivial;
    int legs = 0;      // leg count of the zero codeword
    double r_db = 0.0;
    double overlap_sq = 0.0;  // |<zero|one>|², recorded, not assumed zero
};

struct FidelityResult {
    double f_e = 0.0;
    double gamma = 0.0;
    int ell = 0;
    double conditioning = 0.0;  // min eigenvalue of G
};

// Codes matched in leg count: mu=0 from `cycles` protocol cycles
// (2^cycles+1 legs), mu=1 from cycles-1 (2^cycles legs).
// comb: moduli of the phased-comb coefficients (phases stripped);
// gaussian_gkp: envelope e^{-Delta n̂} on the uniform comb, Delta = exp(-5 r);
// trivial: Fock {|0>, |1>}.
CodePair build_code_pair(CodeFamily family, int cycles, double r_db, FockDim dim,
                         bool delta_db_reading = false);

// M_{mu l, nu k} = <mu| N_l† N_k |nu>, index layout (mu*ell + l, nu*ell + k)
Mat qec_matrix(const CodePair& code, const std::vector<OperatorMatrix>& kraus);
Mat qec_matrix(const CodePair& code, double gamma, int ell);  // matrix-free Kraus

// F_e = (1/4) || Tr_L[ sqrt(G~^{-1} M) ] ||_F², G~^{-1} = G^{-1} ⊗ I_ell
FidelityResult channel_fidelity(const CodePair& code, double gamma, int ell);
// ell chosen from the code-weighted completeness defect (<1e-10, capped at 20)
FidelityResult channel_fidelity_auto(const CodePair& code, double gamma);

struct SweepRow {
    std::string family;
    double gamma = 0.0;
    int legs = 0;
    double r_db = 0.0;
    int n_r = 0;  // truncation used
    int ell = 0;
    double f_e = 0.0;
    double i_e = 0.0;
    double conditioning = 0.0;
};

// Fig 3(a): infidelity vs gamma at fixed cycles.
std::vector<SweepRow> qec_gamma_sweep(const std::vector<CodeFamily>& families,
                                      const std::vector<double>& gammas, int cycles,
                                      double r_db, int n_r_start, int jobs = 1);

// Fig 3(b): infidelity vs legs at fixed gamma; N_R doubled until
// |dF_e| < 1e-6 before a point is accepted.
std::vector<SweepRow> qec_legs_sweep(const std::vector<CodeFamily>& families,
                                     const std::vector<int>& cycles_list, double gamma,
                                     double r_db, int n_r_start, int jobs = 1);

SweepRow converged_point(CodeFamily family, int cycles, double gamma, double r_db,
                         int n_r_start);

}  // namespace gridforge

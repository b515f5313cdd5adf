#pragma once

#include "gridforge/fock.hpp"

#include <functional>

namespace gridforge {

struct GateParams {
    cxd alpha = 0.0;    // displacement amplitude
    double r = 0.0;     // squeezing, natural units
    double chi_t = 0.0; // Kerr phase (radians)
};

// squeezing dB convention: r_db = 10*log10(e^{2r})  =>  r = r_db*ln(10)/20
double db_to_natural(double r_db);
double natural_to_db(double r);

// U_D(alpha) = exp(alpha a† - alpha* a)
OperatorMatrix displacement(cxd alpha, FockDim dim);
// U_S(r) = exp((r/2)(a² - a†²))
OperatorMatrix squeezing(double r, FockDim dim);
// U_K(chi_t) = exp(-i chi_t (a†a)²), exactly diagonal
OperatorMatrix kerr(double chi_t, FockDim dim);

// State-path applications; identical to multiplying by the gate matrix.
StateVector apply_displacement(cxd alpha, const StateVector& psi);
StateVector apply_squeezing(double r, const StateVector& psi);
StateVector apply_kerr(double chi_t, const StateVector& psi);

// Displacement conjugation on a density matrix: D rho D†.
DensityMatrix apply_displacement(cxd alpha, const DensityMatrix& rho);

StateVector squeezed_vacuum(double r, FockDim dim);

struct StabilizerOps {
    OperatorMatrix s_x;       // exp(-2i sqrt(pi) p)
    OperatorMatrix s_p;       // exp(-2i sqrt(pi) x)
    OperatorMatrix sqrt_s_p;  // exp(-i sqrt(pi) x)
};
StabilizerOps stabilizer_ops(FockDim dim);

// exp(i c x̂) and exp(i c p̂) gates/appliers used across modules.
OperatorMatrix exp_i_x(double c, FockDim dim);
OperatorMatrix exp_i_p(double c, FockDim dim);
StateVector apply_exp_i_x(double c, const StateVector& psi);

// Diagonal phase operator f(x̂) = V diag(e^{i phi(lam_k)}) V^T for a
// phase profile evaluated on the x̂ eigenvalues.
Mat phase_of_x(const std::function<double(double)>& phi, FockDim dim);

// Leakage guard used by gate preconditions.
void check_displacement_guard(cxd alpha, FockDim dim);
void check_squeezing_guard(double r, FockDim dim);

}  // namespace gridforge

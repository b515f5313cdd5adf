#pragma once

#include "gridforge/fock.hpp"

#include <vector>

namespace gridforge {

struct WignerGrid {
    std::vector<double> x_axis;
    std::vector<double> p_axis;
    Eigen::MatrixXd values;  // values(i,j) = W(x_axis[i], p_axis[j])

    double integral() const;  // trapezoid over both axes
};

// Q̂_{1(0)} = (1/2)(4 +(-) sqrt(S_p) +(-) sqrt(S_p)† - S_x - S_x†)
OperatorMatrix q_operator(int mu, FockDim dim);
double q_db(double value);

// <Q_mu> evaluated through gate applications (no dense Q build):
// <Q> = 2 +(-) Re<sqrt(S_p)> - Re<S_x>
double q_expectation(int mu, const StateVector& psi);

// Displaced-parity Wigner: W(x,p) = (1/pi) Tr[rho D(b) P D†(b)], b=(x+ip)/sqrt2
WignerGrid wigner(const StateVector& psi, const std::vector<double>& x_axis,
                  const std::vector<double>& p_axis, int jobs = 1);
WignerGrid wigner(const DensityMatrix& rho, const std::vector<double>& x_axis,
                  const std::vector<double>& p_axis, int jobs = 1);

// |<x|psi>|^2 via the renormalized Hermite-function recurrence.
std::vector<double> x_marginal(const StateVector& psi, const std::vector<double>& x_axis);
std::vector<double> p_marginal(const StateVector& psi, const std::vector<double>& p_axis);
// wavefunction values <x|psi>
std::vector<cxd> x_wavefunction(const StateVector& psi, const std::vector<double>& x_axis);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace gridforge

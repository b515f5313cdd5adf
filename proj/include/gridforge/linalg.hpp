#pragma once

#include "gridforge/fock.hpp"

namespace gridforge {

// Matrix exponential. Scaling-and-squaring Pade for general matrices;
// tagged hermitian inputs go through an eigendecomposition instead.
OperatorMatrix expm(const OperatorMatrix& a);
Mat expm_general(const Mat& a);
// exp(i*H) for Hermitian H, via eigendecomposition; exactly unitary to roundoff.
Mat expm_i_hermitian(const Mat& h);

// Principal matrix square root via complex Schur + triangular recurrence.
// Rejects inputs with an eigenvalue within `axis_tol` of the closed
// negative real axis (branch ambiguity).
Mat sqrtm_principal(const Mat& a, double axis_tol = 1e-12);

// mode (slow index) ⊗ qubit (fast index); composite index = mode*2 + qubit.
Mat tensor_mode_qubit(const Mat& mode_op, const Eigen::Matrix2cd& qubit_op);
Vec tensor_mode_qubit(const Vec& mode, const Eigen::Vector2cd& qubit);

// Trace out the qubit of a composite (2*(n_max+1))-dim density matrix.
DensityMatrix partial_trace_qubit(const Mat& composite, FockDim mode_dim);

}  // namespace gridforge

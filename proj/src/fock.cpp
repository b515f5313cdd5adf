#include "gridforge/fock.hpp"

#include <cmath>

namespace gridforge {

OperatorMatrix annihilation(FockDim dim) {
    Mat a = Mat::Zero(dim.size(), dim.size());
    for (int n = 1; n <= dim.n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return {dim, std::move(a), OpTag::general};
}

OperatorMatrix creation(FockDim dim) {
    Mat ad = annihilation(dim).mat.adjoint();
    return {dim, std::move(ad), OpTag::general};
}

OperatorMatrix number_op(FockDim dim) {
    Mat n = Mat::Zero(dim.size(), dim.size());
    for (int k = 0; k <= dim.n_max; ++k) n(k, k) = double(k);
    return {dim, std::move(n), OpTag::hermitian};
}

OperatorMatrix identity_op(FockDim dim) {
    return {dim, Mat::Identity(dim.size(), dim.size()), OpTag::unitary};
}

std::pair<OperatorMatrix, OperatorMatrix> quadratures(FockDim dim) {
    const double s = 1.0 / std::sqrt(2.0);
    Mat a = annihilation(dim).mat;
    Mat x = s * (a + a.adjoint());
    Mat p = cxd(0, 1) * s * (a.adjoint() - a);
    return {OperatorMatrix{dim, std::move(x), OpTag::hermitian},
            OperatorMatrix{dim, std::move(p), OpTag::hermitian}};
}

cxd overlap(const StateVector& a, const StateVector& b) {
    require_same_dim(a.dim, b.dim, "overlap");
    return a.amps.dot(b.amps);  // Eigen dot conjugates the left argument
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(overlap(a, b));
}

double expectation(const OperatorMatrix& op, const StateVector& psi) {
    require_same_dim(op.dim, psi.dim, "expectation");
    return psi.amps.dot(op.mat * psi.amps).real();
}

double expectation(const OperatorMatrix& op, const DensityMatrix& rho) {
    require_same_dim(op.dim, rho.dim, "expectation");
    return (op.mat * rho.mat).trace().real();
}

double unitarity_defect_interior(const OperatorMatrix& u) {
    const int m = u.dim.interior();
    Mat d = u.mat.adjoint() * u.mat - Mat::Identity(u.dim.size(), u.dim.size());
    return d.topLeftCorner(m, m).cwiseAbs().maxCoeff();
}

}  // namespace gridforge

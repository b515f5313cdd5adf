#include "gridforge/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/Eigenvalues>
#include <cmath>

namespace gridforge {

Mat expm_general(const Mat& a) {
    if (!a.allFinite()) throw numeric_error("expm: non-finite entries");
    return a.exp();
}

Mat expm_i_hermitian(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) throw numeric_error("expm: eigensolver failed");
    Vec phases(h.rows());
    for (int k = 0; k < h.rows(); ++k)
        phases[k] = std::polar(1.0, es.eigenvalues()[k]);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

OperatorMatrix expm(const OperatorMatrix& a) {
    if (!a.mat.allFinite()) throw numeric_error("expm: non-finite entries");
    if (a.tag == OpTag::hermitian) {
        // exp(H) = V e^{λ} V†
        Eigen::SelfAdjointEigenSolver<Mat> es(a.mat);
        if (es.info() != Eigen::Success) throw numeric_error("expm: eigensolver failed");
        Mat r = es.eigenvectors() *
                es.eigenvalues().array().exp().matrix().asDiagonal() *
                es.eigenvectors().adjoint();
        return {a.dim, std::move(r), OpTag::hermitian};
    }
    // anti-Hermitian generators (A = iH) are the common gate case
    double ah = (a.mat + a.mat.adjoint()).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, a.mat.cwiseAbs().maxCoeff());
    if (ah <= 1e-13 * scale) {
        Mat h = (a.mat / cxd(0, 1) + (a.mat / cxd(0, 1)).adjoint()) * 0.5;
        return {a.dim, expm_i_hermitian(h), OpTag::unitary};
    }
    return {a.dim, expm_general(a.mat), OpTag::general};
}

Mat sqrtm_principal(const Mat& a, double axis_tol) {
    if (a.rows() != a.cols()) throw dim_mismatch_error("sqrtm: square input required");
    if (!a.allFinite()) throw numeric_error("sqrtm: non-finite entries");
    const int n = int(a.rows());

    Eigen::ComplexSchur<Mat> schur(a);
    if (schur.info() != Eigen::Success) throw numeric_error("sqrtm: Schur failed");
    const Mat& t = schur.matrixT();
    const Mat& q = schur.matrixU();

    double anorm = a.norm();
    for (int i = 0; i < n; ++i) {
        cxd lam = t(i, i);
        if (lam.real() < 0.0 && std::abs(lam.imag()) <= axis_tol * std::max(1.0, anorm))
            throw numeric_error("sqrtm: eigenvalue on the negative real axis (branch ambiguity)");
    }

    // upper-triangular square root, principal branch
    Mat s = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) s(i, i) = std::sqrt(t(i, i));
    for (int d = 1; d < n; ++d) {
        for (int i = 0; i + d < n; ++i) {
            int j = i + d;
            cxd acc = t(i, j);
            for (int k = i + 1; k < j; ++k) acc -= s(i, k) * s(k, j);
            cxd denom = s(i, i) + s(j, j);
            if (std::abs(denom) <= axis_tol * std::max(1.0, anorm)) {
                if (std::abs(acc) <= axis_tol * std::max(1.0, anorm)) {
                    s(i, j) = 0.0;
                    continue;
                }
                throw numeric_error("sqrtm: singular recurrence (repeated zero eigenvalues)");
            }
            s(i, j) = acc / denom;
        }
    }
    return q * s * q.adjoint();
}

Mat tensor_mode_qubit(const Mat& mode_op, const Eigen::Matrix2cd& qubit_op) {
    const long n = mode_op.rows();
    if (n * 2 > 1'000'000L) throw dim_mismatch_error("tensor: composite dimension overflow");
    Mat out(2 * n, 2 * mode_op.cols());
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < mode_op.cols(); ++j)
            out.block<2, 2>(2 * i, 2 * j) = mode_op(i, j) * qubit_op;
    return out;
}

Vec tensor_mode_qubit(const Vec& mode, const Eigen::Vector2cd& qubit) {
    Vec out(2 * mode.size());
    for (long i = 0; i < mode.size(); ++i) {
        out[2 * i] = mode[i] * qubit[0];
        out[2 * i + 1] = mode[i] * qubit[1];
    }
    return out;
}

DensityMatrix partial_trace_qubit(const Mat& composite, FockDim mode_dim) {
    const int n = mode_dim.size();
    if (composite.rows() != 2 * n || composite.cols() != 2 * n)
        throw dim_mismatch_error("partial_trace_qubit: composite dimension != 2*(n_max+1)");
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = composite(2 * i, 2 * j) + composite(2 * i + 1, 2 * j + 1);
    return {mode_dim, std::move(out)};
}

}  // namespace gridforge

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace gridforge {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Error hierarchy; the CLI maps these onto exit codes.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct config_error : error {            // exit 2
    using error::error;
};
struct truncation_error : error {        // exit 3
    using error::error;
};
struct numeric_error : error {           // exit 4
    using error::error;
};
struct bracket_error : numeric_error {   // optimizer minimum at bracket edge
    using numeric_error::numeric_error;
};
struct dim_mismatch_error : error {
    using error::error;
};

// Truncated Fock basis {|0>,...,|n_max>}, dimension n_max+1.
struct FockDim {
    int n_max = 0;

    explicit FockDim(int n) : n_max(n) {
        if (n < 1) throw config_error("FockDim: n_max must be >= 1");
    }
    int size() const { return n_max + 1; }
    // guard band for leakage monitoring: top ceil(0.1*n_max) levels
    int n_guard() const { return (n_max + 9) / 10; }
    int interior() const { return size() - n_guard(); }
    bool operator==(const FockDim& o) const { return n_max == o.n_max; }
    bool operator!=(const FockDim& o) const { return n_max != o.n_max; }
};

inline void require_same_dim(const FockDim& a, const FockDim& b, const char* where) {
    if (a != b)
        throw dim_mismatch_error(std::string(where) + ": FockDim mismatch (" +
                                 std::to_string(a.n_max) + " vs " + std::to_string(b.n_max) + ")");
}

struct StateVector {
    FockDim dim;
    Vec amps;

    StateVector(FockDim d, Vec a) : dim(d), amps(std::move(a)) {
        if (amps.size() != dim.size())
            throw dim_mismatch_error("StateVector: amplitude length != dim");
    }
    static StateVector fock(FockDim d, int n) {
        if (n < 0 || n > d.n_max) throw config_error("fock: level outside basis");
        Vec v = Vec::Zero(d.size());
        v[n] = 1.0;
        return {d, std::move(v)};
    }
    static StateVector vacuum(FockDim d) { return fock(d, 0); }

    double norm() const { return amps.norm(); }
    void normalize() {
        double n = norm();
        if (n == 0.0) throw numeric_error("StateVector: cannot normalize zero vector");
        amps /= n;
    }
    // probability weight in the guard band (top levels)
    double leakage() const {
        return amps.tail(dim.n_guard()).squaredNorm();
    }
};

struct DensityMatrix {
    FockDim dim;
    Mat mat;

    DensityMatrix(FockDim d, Mat m) : dim(d), mat(std::move(m)) {
        if (mat.rows() != dim.size() || mat.cols() != dim.size())
            throw dim_mismatch_error("DensityMatrix: shape != dim");
    }
    static DensityMatrix pure(const StateVector& psi) {
        return {psi.dim, psi.amps * psi.amps.adjoint()};
    }
    double trace() const { return mat.trace().real(); }
    double hermiticity_defect() const {
        return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
    }
    double leakage() const {
        int g = dim.n_guard();
        return mat.diagonal().tail(g).real().sum();
    }
};

enum class OpTag { unitary, hermitian, general };

struct OperatorMatrix {
    FockDim dim;
    Mat mat;
    OpTag tag = OpTag::general;

    OperatorMatrix(FockDim d, Mat m, OpTag t = OpTag::general)
        : dim(d), mat(std::move(m)), tag(t) {
        if (mat.rows() != mat.cols() || mat.rows() != dim.size())
            throw dim_mismatch_error("OperatorMatrix: shape != dim");
    }
    OperatorMatrix dagger() const { return {dim, mat.adjoint(), tag}; }
};

// <n-1| a |n> = sqrt(n)
OperatorMatrix annihilation(FockDim dim);
OperatorMatrix creation(FockDim dim);
OperatorMatrix number_op(FockDim dim);
OperatorMatrix identity_op(FockDim dim);

// x = (a + a†)/sqrt(2), p = i(a† - a)/sqrt(2); [x,p] = i on the interior.
std::pair<OperatorMatrix, OperatorMatrix> quadratures(FockDim dim);

double fidelity(const StateVector& a, const StateVector& b);
cxd overlap(const StateVector& a, const StateVector& b);
double expectation(const OperatorMatrix& op, const StateVector& psi);
double expectation(const OperatorMatrix& op, const DensityMatrix& rho);

// max-norm of (U†U - I) restricted to the interior block
double unitarity_defect_interior(const OperatorMatrix& u);

}  // namespace gridforge

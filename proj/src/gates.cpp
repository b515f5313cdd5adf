#include "gridforge/gates.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace gridforge {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-dimension eigensystems backing all displacement-type and squeezing
// gates. x̂ is real symmetric tridiagonal; the squeezing generator
// -(i/2)(a²-a†²) becomes real symmetric tridiagonal per parity block after
// the diagonal rotation t_n = i^{floor(n/2)}.
struct Kernel {
    int size = 0;
    Eigen::VectorXd x_lam;
    Eigen::MatrixXd x_vec;
    // squeeze blocks: even levels (2m), odd levels (2m+1)
    Eigen::VectorXd sq_lam[2];
    Eigen::MatrixXd sq_vec[2];

    explicit Kernel(int n) : size(n) {
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd off(n - 1);
        for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, off);
        if (es.info() != Eigen::Success) throw numeric_error("gate kernel: x eigensolver failed");
        x_lam = es.eigenvalues();
        x_vec = es.eigenvectors();

        for (int p = 0; p < 2; ++p) {
            int m = (n - p + 1) / 2;  // count of levels 2k+p < n
            if (m < 1) continue;
            Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
            Eigen::VectorXd o(std::max(m - 1, 0));
            for (int k = 0; k + 1 < m; ++k) {
                int lvl = 2 * k + p;
                o[k] = -0.5 * std::sqrt(double(lvl + 1) * double(lvl + 2));
            }
            if (m == 1) {
                sq_lam[p] = d;
                sq_vec[p] = Eigen::MatrixXd::Identity(1, 1);
                continue;
            }
            es.computeFromTridiagonal(d, o);
            if (es.info() != Eigen::Success)
                throw numeric_error("gate kernel: squeeze eigensolver failed");
            sq_lam[p] = es.eigenvalues();
            sq_vec[p] = es.eigenvectors();
        }
    }
};

const Kernel& kernel(FockDim dim) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<Kernel>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[dim.size()];
    if (!slot) slot = std::make_unique<Kernel>(dim.size());
    return *slot;
}

// D(alpha) = R_theta exp(i sqrt2 |alpha| x̂) R_theta† with
// theta = atan2(-Re alpha, Im alpha); R_theta = diag(e^{i theta n}).
struct DispFactors {
    double m = 0, theta = 0;
};
DispFactors disp_factors(cxd alpha) {
    DispFactors f;
    f.m = std::abs(alpha);
    f.theta = (f.m == 0.0) ? 0.0 : std::atan2(-alpha.real(), alpha.imag());
    return f;
}

Vec phase_vec(double theta, int n) {
    Vec v(n);
    for (int k = 0; k < n; ++k) v[k] = std::polar(1.0, theta * k);
    return v;
}

// Kerr phase -chi_t n^2 with extended-precision reduction; n^2 grows past
// the point where a double product keeps enough phase accuracy.
cxd kerr_phase(double chi_t, long n) {
    long double ph = -(long double)chi_t * (long double)n * (long double)n;
    ph = std::fmod(ph, 2.0L * std::numbers::pi_v<long double>);
    return std::polar(1.0, double(ph));
}

}  // namespace

double db_to_natural(double r_db) {
    if (!std::isfinite(r_db)) throw config_error("db_to_natural: non-finite input");
    return r_db * std::log(10.0) / 20.0;
}

double natural_to_db(double r) { return 20.0 * r / std::log(10.0); }

void check_displacement_guard(cxd alpha, FockDim dim) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw config_error("displacement: non-finite alpha");
    // mean photon number |alpha|^2 must sit well inside the interior
    if (std::norm(alpha) > 0.8 * dim.interior())
        throw truncation_error("displacement: |alpha|^2 too large for truncation");
}

void check_squeezing_guard(double r, FockDim dim) {
    if (!std::isfinite(r)) throw config_error("squeezing: non-finite r");
    if (std::exp(2.0 * std::abs(r)) > 0.5 * dim.interior())
        throw truncation_error("squeezing: e^{2r} too large for truncation");
}

OperatorMatrix displacement(cxd alpha, FockDim dim) {
    check_displacement_guard(alpha, dim);
    const auto& k = kernel(dim);
    const int n = dim.size();
    if (std::abs(alpha) == 0.0) return identity_op(dim);
    auto f = disp_factors(alpha);
    Vec core_phases(n);
    for (int i = 0; i < n; ++i)
        core_phases[i] = std::polar(1.0, std::sqrt(2.0) * f.m * k.x_lam[i]);
    Mat core = k.x_vec * core_phases.asDiagonal() * k.x_vec.transpose();
    if (f.theta != 0.0) {
        Vec rp = phase_vec(f.theta, n);
        core = rp.asDiagonal() * core * rp.conjugate().asDiagonal();
    }
    return {dim, std::move(core), OpTag::unitary};
}

StateVector apply_displacement(cxd alpha, const StateVector& psi) {
    check_displacement_guard(alpha, psi.dim);
    if (std::abs(alpha) == 0.0) return psi;
    const auto& k = kernel(psi.dim);
    const int n = psi.dim.size();
    auto f = disp_factors(alpha);
    Vec w = psi.amps;
    if (f.theta != 0.0) w = phase_vec(-f.theta, n).asDiagonal() * w;
    w = k.x_vec.transpose() * w;
    for (int i = 0; i < n; ++i)
        w[i] *= std::polar(1.0, std::sqrt(2.0) * f.m * k.x_lam[i]);
    w = k.x_vec * w;
    if (f.theta != 0.0) w = phase_vec(f.theta, n).asDiagonal() * w;
    return {psi.dim, std::move(w)};
}

DensityMatrix apply_displacement(cxd alpha, const DensityMatrix& rho) {
    if (std::abs(alpha) == 0.0) return rho;
    Mat d = displacement(alpha, rho.dim).mat;
    return {rho.dim, d * rho.mat * d.adjoint()};
}

// block-basis rotation t_k = i^k (level 2k+p), making the squeeze
// generator real tridiagonal per parity block
inline cxd tphase(int k) { return std::polar(1.0, kPi / 2.0 * (k % 4)); }

OperatorMatrix squeezing(double r, FockDim dim) {
    check_squeezing_guard(r, dim);
    const auto& k = kernel(dim);
    const int n = dim.size();
    if (r == 0.0) return identity_op(dim);
    // U_S(r) = T† blockdiag(V_p e^{i r Λ_p} V_p^T) T
    Mat u = Mat::Zero(n, n);
    for (int p = 0; p < 2; ++p) {
        const int m = int(k.sq_lam[p].size());
        if (m == 0) continue;
        Vec ph(m);
        for (int i = 0; i < m; ++i) ph[i] = std::polar(1.0, r * k.sq_lam[p][i]);
        Mat blk = k.sq_vec[p] * ph.asDiagonal() * k.sq_vec[p].transpose();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                u(2 * i + p, 2 * j + p) = std::conj(tphase(i)) * blk(i, j) * tphase(j);
    }
    return {dim, std::move(u), OpTag::unitary};
}

StateVector apply_squeezing(double r, const StateVector& psi) {
    check_squeezing_guard(r, psi.dim);
    if (r == 0.0) return psi;
    const auto& k = kernel(psi.dim);
    const int n = psi.dim.size();
    Vec out = Vec::Zero(n);
    for (int p = 0; p < 2; ++p) {
        const int m = int(k.sq_lam[p].size());
        if (m == 0) continue;
        Vec w(m);
        for (int i = 0; i < m; ++i) w[i] = tphase(i) * psi.amps[2 * i + p];
        w = k.sq_vec[p].transpose() * w;
        for (int i = 0; i < m; ++i) w[i] *= std::polar(1.0, r * k.sq_lam[p][i]);
        w = k.sq_vec[p] * w;
        for (int i = 0; i < m; ++i) out[2 * i + p] = std::conj(tphase(i)) * w[i];
    }
    return {psi.dim, std::move(out)};
}

StateVector squeezed_vacuum(double r, FockDim dim) {
    auto psi = apply_squeezing(r, StateVector::vacuum(dim));
    psi.normalize();
    return psi;
}

OperatorMatrix kerr(double chi_t, FockDim dim) {
    if (!std::isfinite(chi_t)) throw config_error("kerr: non-finite chi_t");
    Mat m = Mat::Zero(dim.size(), dim.size());
    for (int n = 0; n <= dim.n_max; ++n) m(n, n) = kerr_phase(chi_t, n);
    return {dim, std::move(m), OpTag::unitary};
}

StateVector apply_kerr(double chi_t, const StateVector& psi) {
    Vec out = psi.amps;
    for (int n = 0; n <= psi.dim.n_max; ++n) out[n] *= kerr_phase(chi_t, n);
    return {psi.dim, std::move(out)};
}

OperatorMatrix exp_i_x(double c, FockDim dim) {
    // exp(i c x̂) = U_D(i c / sqrt2)
    return displacement(cxd(0.0, c / std::sqrt(2.0)), dim);
}

OperatorMatrix exp_i_p(double c, FockDim dim) {
    // exp(i c p̂) = U_D(-c / sqrt2)
    return displacement(cxd(-c / std::sqrt(2.0), 0.0), dim);
}

StateVector apply_exp_i_x(double c, const StateVector& psi) {
    return apply_displacement(cxd(0.0, c / std::sqrt(2.0)), psi);
}

StabilizerOps stabilizer_ops(FockDim dim) {
    const double sp = std::sqrt(kPi);
    return {exp_i_p(-2.0 * sp, dim), exp_i_x(-2.0 * sp, dim), exp_i_x(-sp, dim)};
}

Mat phase_of_x(const std::function<double(double)>& phi, FockDim dim) {
    const auto& k = kernel(dim);
    const int n = dim.size();
    Vec ph(n);
    for (int i = 0; i < n; ++i) ph[i] = std::polar(1.0, phi(k.x_lam[i]));
    return k.x_vec * ph.asDiagonal() * k.x_vec.transpose();
}

}  // namespace gridforge

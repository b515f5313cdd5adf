#include "gridforge/qec.hpp"

#include "gridforge/gates.hpp"
#include "gridforge/gridstates.hpp"
#include "gridforge/linalg.hpp"
#include "gridforge/noise.hpp"
#include "gridforge/protocols.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

namespace gridforge {

std::string to_string(CodeFamily f) {
    switch (f) {
        case CodeFamily::phased_comb: return "phased_comb";
        case CodeFamily::comb: return "comb";
        case CodeFamily::gaussian_gkp: return "gaussian_gkp";
        case CodeFamily::trivial: return "trivial";
    }
    return "?";
}

CodeFamily code_family_from_string(const std::string& s) {
    if (s == "phased_comb") return CodeFamily::phased_comb;
    if (s == "comb") return CodeFamily::comb;
    if (s == "gaussian_gkp") return CodeFamily::gaussian_gkp;
    if (s == "trivial") return CodeFamily::trivial;
    throw config_error("unknown code family: " + s);
}

namespace {

CombDescription strip_phases(const CombDescription& c) {
    CombDescription out = c;
    for (auto& l : out.legs) l.coeff = std::abs(l.coeff);
    out.normalize_coeffs();
    return out;
}

StateVector envelope(const StateVector& psi, double delta) {
    Vec v = psi.amps;
    for (int n = 0; n <= psi.dim.n_max; ++n) v[n] *= std::exp(-delta * n);
    StateVector out{psi.dim, std::move(v)};
    out.normalize();
    return out;
}

}  // namespace

CodePair build_code_pair(CodeFamily family, int cycles, double r_db, FockDim dim,
                         bool delta_db_reading) {
    if (cycles < 1) throw config_error("build_code_pair: cycles must be >= 1");
    const double r = db_to_natural(r_db);
    CodePair cp{StateVector::fock(dim, 0), StateVector::fock(dim, 1), family,
                (1 << cycles) + 1, r_db, 0.0};
    if (family == CodeFamily::trivial) {
        cp.legs = 1;
        cp.overlap_sq = 0.0;
        return cp;
    }
    CombDescription c0 = phased_comb_oracle(0, cycles);
    CombDescription c1 = phased_comb_oracle(1, cycles - 1);
    c0.r = r;
    c1.r = r;
    switch (family) {
        case CodeFamily::phased_comb:
            cp.zero = realize(c0, dim);
            cp.one = realize(c1, dim);
            break;
        case CodeFamily::comb:
            cp.zero = realize(strip_phases(c0), dim);
            cp.one = realize(strip_phases(c1), dim);
            break;
        case CodeFamily::gaussian_gkp: {
            // uniform comb + envelope e^{-Delta n}, Delta = exp(-5r)
            double delta = std::exp(-5.0 * (delta_db_reading ? r_db : r));
            CombDescription u0 = c0, u1 = c1;
            for (auto& l : u0.legs) l.coeff = 1.0;
            for (auto& l : u1.legs) l.coeff = 1.0;
            u0.normalize_coeffs();
            u1.normalize_coeffs();
            cp.zero = envelope(realize(u0, dim), delta);
            cp.one = envelope(realize(u1, dim), delta);
            break;
        }
        case CodeFamily::trivial: break;
    }
    cp.overlap_sq = fidelity(cp.zero, cp.one);
    return cp;
}

Mat qec_matrix(const CodePair& code, const std::vector<OperatorMatrix>& kraus) {
    const int ell = int(kraus.size());
    if (ell < 1) throw config_error("qec_matrix: empty Kraus list");
    require_same_dim(code.zero.dim, kraus[0].dim, "qec_matrix");
    std::vector<Vec> cols(size_t(2 * ell));
    for (int mu = 0; mu < 2; ++mu) {
        const Vec& psi = (mu == 0) ? code.zero.amps : code.one.amps;
        for (int k = 0; k < ell; ++k) cols[size_t(mu * ell + k)] = kraus[size_t(k)].mat * psi;
    }
    Mat m(2 * ell, 2 * ell);
    for (int a = 0; a < 2 * ell; ++a)
        for (int b = 0; b < 2 * ell; ++b) m(a, b) = cols[size_t(a)].dot(cols[size_t(b)]);
    return m;
}

Mat qec_matrix(const CodePair& code, double gamma, int ell) {
    if (ell < 1) throw config_error("qec_matrix: ell must be >= 1");
    std::vector<Vec> cols(size_t(2 * ell));
    for (int mu = 0; mu < 2; ++mu) {
        const Vec& psi = (mu == 0) ? code.zero.amps : code.one.amps;
        for (int k = 0; k < ell; ++k)
            cols[size_t(mu * ell + k)] = apply_loss_kraus(gamma, k, psi);
    }
    Mat m(2 * ell, 2 * ell);
    for (int a = 0; a < 2 * ell; ++a)
        for (int b = 0; b < 2 * ell; ++b) m(a, b) = cols[size_t(a)].dot(cols[size_t(b)]);
    return m;
}

namespace {

FidelityResult fidelity_from_m(const Mat& m, const CodePair& code, double gamma, int ell) {
    // G and its inverse square root (2x2 Hermitian)
    Eigen::Matrix2cd g;
    g(0, 0) = code.zero.amps.dot(code.zero.amps);
    g(0, 1) = code.zero.amps.dot(code.one.amps);
    g(1, 0) = std::conj(g(0, 1));
    g(1, 1) = code.one.amps.dot(code.one.amps);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> ges(g);
    double gmin = ges.eigenvalues().minCoeff();
    if (gmin < 1e-10)
        throw numeric_error("channel_fidelity: codeword Gram matrix ill-conditioned");
    Eigen::Matrix2cd gis = ges.eigenvectors() *
                           ges.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                           ges.eigenvectors().adjoint();

    // sqrt(G~^{-1} M) = S sqrt(S M S) S^{-1}, S = G^{-1/2} ⊗ I  (S Hermitian)
    Mat s = Mat::Zero(2 * ell, 2 * ell);
    Mat sinv = Mat::Zero(2 * ell, 2 * ell);
    Eigen::Matrix2cd gs = gis.inverse();
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            for (int k = 0; k < ell; ++k) {
                s(mu * ell + k, nu * ell + k) = gis(mu, nu);
                sinv(mu * ell + k, nu * ell + k) = gs(mu, nu);
            }
    Mat w = s * m * s;
    w = 0.5 * (w + Mat(w.adjoint()));
    Eigen::SelfAdjointEigenSolver<Mat> wes(w);
    if (wes.info() != Eigen::Success) throw numeric_error("channel_fidelity: eig failed");
    Vec sqv(2 * ell);
    for (int i = 0; i < 2 * ell; ++i)
        sqv[i] = std::sqrt(std::max(0.0, wes.eigenvalues()[i]));
    Mat sq = wes.eigenvectors() * sqv.asDiagonal() * wes.eigenvectors().adjoint();
    Mat x = s * sq * sinv;

    // partial trace over the logical index: (Tr_L X)_{l,k} = sum_mu X_{mu l, mu k}
    Mat tr_l = x.topLeftCorner(ell, ell) + x.bottomRightCorner(ell, ell);
    double f = tr_l.squaredNorm() / 4.0;
    if (f > 1.0 + 1e-9)
        throw numeric_error("channel_fidelity: F_e exceeds 1 beyond tolerance");
    return {f, gamma, ell, gmin};
}

// code-weighted completeness defect: smallest ell whose loss tail on the
// codeword Fock support is below tol
int ell_for_code(const CodePair& code, double gamma, double tol = 1e-10, int cap = 20) {
    if (gamma == 0.0) return 1;
    const int nmax = code.zero.dim.n_max;
    std::vector<double> w(size_t(nmax) + 1);
    for (int n = 0; n <= nmax; ++n)
        w[size_t(n)] = 0.5 * (std::norm(code.zero.amps[n]) + std::norm(code.one.amps[n]));
    for (int ell = 1; ell <= cap; ++ell) {
        double defect = 0.0;
        for (int n = 0; n <= nmax; ++n) {
            if (w[size_t(n)] < 1e-16) continue;
            double tail = 0.0;
            for (int k = ell; k <= n; ++k) {
                double lt = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(n - k + 1.0) + k * std::log(gamma) +
                            (n - k) * std::log1p(-gamma);
                tail += std::exp(lt);
            }
            defect += w[size_t(n)] * tail;
        }
        if (defect < tol) return ell;
    }
    return cap;
}

}  // namespace

FidelityResult channel_fidelity(const CodePair& code, double gamma, int ell) {
    if (gamma < 0.0 || gamma >= 1.0) throw config_error("channel_fidelity: gamma in [0,1)");
    Mat m = qec_matrix(code, gamma, ell);
    return fidelity_from_m(m, code, gamma, ell);
}

FidelityResult channel_fidelity_auto(const CodePair& code, double gamma) {
    return channel_fidelity(code, gamma, ell_for_code(code, gamma));
}

SweepRow converged_point(CodeFamily family, int cycles, double gamma, double r_db,
                         int n_r_start) {
    int n_r = n_r_start;
    double prev = -1.0;
    FidelityResult res;
    std::optional<CodePair> code;
    for (int attempt = 0; attempt < 6; ++attempt) {
        for (;;) {
            try {
                code.emplace(build_code_pair(family, cycles, r_db, FockDim(n_r)));
                break;
            } catch (const truncation_error&) {
                n_r *= 2;
                if (n_r > 4096) throw;
            }
        }
        res = channel_fidelity_auto(*code, gamma);
        if (prev >= 0.0 && std::abs(res.f_e - prev) < 1e-6) break;
        prev = res.f_e;
        if (n_r >= 4096) break;
        n_r *= 2;
    }
    SweepRow row;
    row.family = to_string(family);
    row.gamma = gamma;
    row.legs = code->legs;
    row.r_db = r_db;
    row.n_r = code->zero.dim.n_max;
    row.ell = res.ell;
    row.f_e = res.f_e;
    row.i_e = 1.0 - res.f_e;
    row.conditioning = res.conditioning;
    return row;
}

namespace {

std::vector<SweepRow> run_points(const std::vector<std::function<SweepRow()>>& tasks,
                                 int jobs) {
    std::vector<SweepRow> rows(tasks.size());
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mtx;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                rows[i] = tasks[i]();
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!err) err = std::current_exception();
            }
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
    return rows;
}

}  // namespace

std::vector<SweepRow> qec_gamma_sweep(const std::vector<CodeFamily>& families,
                                      const std::vector<double>& gammas, int cycles,
                                      double r_db, int n_r_start, int jobs) {
    std::vector<std::function<SweepRow()>> tasks;
    for (auto fam : families)
        for (double g : gammas)
            tasks.push_back([=] { return converged_point(fam, cycles, g, r_db, n_r_start); });
    return run_points(tasks, jobs);
}

std::vector<SweepRow> qec_legs_sweep(const std::vector<CodeFamily>& families,
                                     const std::vector<int>& cycles_list, double gamma,
                                     double r_db, int n_r_start, int jobs) {
    std::vector<std::function<SweepRow()>> tasks;
    for (auto fam : families)
        for (int cyc : cycles_list)
            tasks.push_back([=] { return converged_point(fam, cyc, gamma, r_db, n_r_start); });
    return run_points(tasks, jobs);
}

}  // namespace gridforge

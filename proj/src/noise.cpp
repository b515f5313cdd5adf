#include "gridforge/noise.hpp"

#include "gridforge/gates.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace gridforge {

namespace {
constexpr double kPi = std::numbers::pi;
}

double uniform_from_counter(std::uint64_t seed, std::uint64_t realization,
                            std::uint64_t draw) {
    // splitmix64 over a mixed counter
    std::uint64_t z = seed;
    z ^= realization * 0x9e3779b97f4a7c15ull + 0x3c6ef372fe94f82aull;
    z ^= draw * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull;
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return double(z >> 11) * 0x1.0p-53;
}

Vec apply_loss_kraus(double gamma, int k, const Vec& psi) {
    if (gamma < 0.0 || gamma >= 1.0) throw config_error("loss: gamma must be in [0,1)");
    if (k < 0) throw config_error("loss: k must be >= 0");
    const long n = psi.size();
    Vec out = psi;
    for (int j = 0; j < k; ++j) {  // a^k
        for (long m = 0; m + 1 < n; ++m) out[m] = std::sqrt(double(m + 1)) * out[m + 1];
        out[n - 1] = 0.0;
    }
    double log_pref = 0.5 * (k * std::log(gamma > 0 ? gamma : 1.0) - std::lgamma(k + 1.0));
    double pref = (gamma > 0 || k == 0) ? std::exp(log_pref) : 0.0;
    const double lg = 0.5 * std::log1p(-gamma);
    for (long m = 0; m < n; ++m) out[m] *= pref * std::exp(lg * double(m));
    return out;
}

std::vector<OperatorMatrix> loss_kraus(double gamma, int ell, FockDim dim) {
    if (gamma < 0.0 || gamma >= 1.0) throw config_error("loss_kraus: gamma must be in [0,1)");
    if (ell < 1) throw config_error("loss_kraus: ell must be >= 1");
    std::vector<OperatorMatrix> out;
    out.reserve(ell);
    const int n = dim.size();
    for (int k = 0; k < ell; ++k) {
        Mat m = Mat::Zero(n, n);
        // entries on the k-th superdiagonal
        for (int col = k; col < n; ++col) {
            Vec basis = Vec::Zero(n);
            basis[col] = 1.0;
            Vec v = apply_loss_kraus(gamma, k, basis);
            m(col - k, col) = v[col - k];
        }
        out.emplace_back(dim, std::move(m), OpTag::general);
    }
    return out;
}

double kraus_completeness_defect(double gamma, int ell, int n_interior) {
    // defect(n) = P(Bin(n, gamma) >= ell); increasing in n, so check the edge
    if (gamma == 0.0) return 0.0;
    double worst = 0.0;
    for (int n : {n_interior, n_interior / 2}) {
        // complement of the CDF, summed in log space for stability
        double tail = 0.0;
        for (int k = ell; k <= n; ++k) {
            double lt = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                        k * std::log(gamma) + (n - k) * std::log1p(-gamma);
            tail += std::exp(lt);
        }
        worst = std::max(worst, tail);
    }
    return worst;
}

int auto_kraus_count(double gamma, int n_interior, double tol, int cap) {
    for (int ell = 1; ell <= cap; ++ell)
        if (kraus_completeness_defect(gamma, ell, n_interior) < tol) return ell;
    return cap;
}

LossChannel make_loss_channel(double gamma, int ell, FockDim dim, double tol) {
    LossChannel ch{gamma, ell, dim, kraus_completeness_defect(gamma, ell, dim.interior() - 1)};
    if (ch.defect >= tol)
        throw truncation_error("loss channel: ell=" + std::to_string(ell) +
                               " leaves completeness defect " + std::to_string(ch.defect) +
                               " above tolerance on the interior subspace");
    return ch;
}

DensityMatrix apply_loss_channel(const DensityMatrix& rho, double gamma, int ell) {
    const long n = rho.mat.rows();
    Mat out = Mat::Zero(n, n);
    for (int k = 0; k < ell; ++k) {
        // N_k is real, so N_k† = N_k^T; apply column- then row-wise
        Mat nk_rho(n, n);
        for (long c = 0; c < n; ++c) nk_rho.col(c) = apply_loss_kraus(gamma, k, rho.mat.col(c));
        Mat tmp(n, n);
        for (long r = 0; r < n; ++r)
            tmp.row(r) = apply_loss_kraus(gamma, k, nk_rho.row(r).transpose()).transpose();
        out += tmp;
    }
    return {rho.dim, std::move(out)};
}

namespace {

// interaction-picture RHS:
// out(m,n) = koc sqrt((m+1)(n+1)) e^{-2i(m-n)t} rho(m+1,n+1) - koc/2 (m+n) rho(m,n)
void lindblad_rhs(const Mat& rho, double t, double koc, bool kerr_on, Mat& out) {
    const long n = rho.rows();
    out.resize(n, n);
    for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) {
            cxd gain = 0.0;
            if (a + 1 < n && b + 1 < n) {
                gain = std::sqrt(double((a + 1) * (b + 1))) * rho(a + 1, b + 1);
                if (kerr_on && a != b) gain *= std::polar(1.0, -2.0 * t * double(a - b));
            }
            out(a, b) = koc * gain - 0.5 * koc * double(a + b) * rho(a, b);
        }
    }
}

}  // namespace

DensityMatrix evolve_kerr_lossy(const DensityMatrix& rho_in, double koc, bool kerr_on,
                                double rtol) {
    if (koc < 0.0) throw config_error("evolve_kerr_lossy: kappa/chi must be >= 0");
    if (rho_in.hermiticity_defect() > 1e-8)
        throw config_error("evolve_kerr_lossy: input not Hermitian");
    const long n = rho_in.mat.rows();
    const double t_end = kPi / 2.0;
    const double tr0 = rho_in.trace();

    // Dormand–Prince 5(4) coefficients
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Mat y = rho_in.mat;
    Mat k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;
    double t = 0.0;
    double h = (koc > 0) ? std::min(0.05, t_end) : t_end;
    const double atol = 1e-12;
    int steps = 0;

    lindblad_rhs(y, t, koc, kerr_on, k1);
    while (t < t_end) {
        if (t + h > t_end) h = t_end - t;
        ytmp = y + h * a21 * k1;
        lindblad_rhs(ytmp, t + c2 * h, koc, kerr_on, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        lindblad_rhs(ytmp, t + c3 * h, koc, kerr_on, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        lindblad_rhs(ytmp, t + c4 * h, koc, kerr_on, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        lindblad_rhs(ytmp, t + c5 * h, koc, kerr_on, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        lindblad_rhs(ytmp, t + h, koc, kerr_on, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        lindblad_rhs(ynew, t + h, koc, kerr_on, k7);
        yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double sc = atol + rtol * std::max(y.norm(), ynew.norm());
        double err = yerr.norm() / sc;
        if (err <= 1.0 || h <= 1e-10) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            if (++steps > 2'000'000) throw numeric_error("evolve_kerr_lossy: step overflow");
        } else {
            lindblad_rhs(y, t, koc, kerr_on, k1);  // refresh after reject
        }
        double fac = (err > 0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (h < 1e-12 && t < t_end) throw numeric_error("evolve_kerr_lossy: step underflow");
    }

    if (kerr_on) {
        // back to the Schrödinger picture: rho = e^{-i n² t} rho~ e^{+i n² t}
        Vec ph(n);
        for (long m = 0; m < n; ++m) {
            long double a = -(long double)(m * m) * (long double)t_end;
            ph[m] = std::polar(1.0, double(std::fmod(a, 2.0L * std::numbers::pi_v<long double>)));
        }
        y = ph.asDiagonal() * y * ph.conjugate().asDiagonal();
    }
    DensityMatrix out{rho_in.dim, std::move(y)};
    if (std::abs(out.trace() - tr0) > 1e-8)
        throw numeric_error("evolve_kerr_lossy: trace drift above 1e-8");
    return out;
}

namespace {

std::vector<double> perturbed_phases(int n_kerr, double dmax, std::uint64_t seed,
                                     std::uint64_t realization, bool correlated) {
    std::vector<double> ph(n_kerr);
    for (int k = 0; k < n_kerr; ++k) {
        double u = uniform_from_counter(seed, realization, correlated ? 0 : std::uint64_t(k));
        ph[size_t(k)] = kPi / 2.0 + (2.0 * u - 1.0) * dmax;
    }
    return ph;
}

}  // namespace

SweepStats infidelity_chi_point(const ProtocolConfig& protocol, double delta_chi_max,
                                int n_realizations, std::uint64_t seed, bool correlated,
                                int jobs) {
    if (delta_chi_max < 0) throw config_error("chi sweep: delta_chi_max must be >= 0");
    if (n_realizations < 1) throw config_error("chi sweep: n_realizations must be >= 1");
    ProtocolConfig cfg = protocol;
    cfg.correction = false;
    StateVector ideal = run_phased_comb(cfg).state;
    const int n_kerr = cfg.n_cycles + 1;

    std::vector<double> infid(static_cast<std::size_t>(n_realizations));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_realizations) return;
            auto ph = perturbed_phases(n_kerr, delta_chi_max, seed, std::uint64_t(i), correlated);
            StateVector st = run_phased_comb_perturbed(cfg, ph);
            infid[size_t(i)] = 1.0 - fidelity(ideal, st);
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

    double mean = 0.0;
    for (double v : infid) mean += v;
    mean /= n_realizations;
    double var = 0.0;
    for (double v : infid) var += (v - mean) * (v - mean);
    double sd = (n_realizations > 1) ? std::sqrt(var / (n_realizations - 1)) : 0.0;
    return {delta_chi_max, mean, sd, n_realizations, seed};
}

std::vector<SweepStats> infidelity_sweep_chi(const NoiseSweepConfig& cfg,
                                             const ProtocolConfig& protocol) {
    std::vector<SweepStats> out;
    for (double knob : cfg.knob_values)
        out.push_back(infidelity_chi_point(protocol, knob, cfg.n_realizations, cfg.seed,
                                           cfg.correlated, cfg.jobs));
    return out;
}

double infidelity_loss_point(const ProtocolConfig& protocol, double koc) {
    ProtocolConfig cfg = protocol;
    cfg.correction = false;
    StateVector ideal = run_phased_comb(cfg).state;

    DensityMatrix rho = DensityMatrix::pure(squeezed_vacuum(db_to_natural(cfg.r_db), cfg.dim));
    rho = apply_displacement(std::sqrt(kPi / 2.0), rho);
    rho = evolve_kerr_lossy(rho, koc);
    for (int j = 1; j <= cfg.n_cycles; ++j) {
        rho = apply_displacement(std::pow(2.0, j - 1 + cfg.mu) * std::sqrt(kPi / 2.0), rho);
        rho = evolve_kerr_lossy(rho, koc);
    }
    double tr = rho.trace();
    return 1.0 - ideal.amps.dot(rho.mat * ideal.amps).real() / tr;
}

std::vector<SweepStats> infidelity_sweep_loss(const NoiseSweepConfig& cfg,
                                              const ProtocolConfig& protocol) {
    std::vector<SweepStats> out(cfg.knob_values.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cfg.knob_values.size()) return;
            double knob = cfg.knob_values[i];
            out[i] = {knob, infidelity_loss_point(protocol, knob), 0.0, 1, cfg.seed};
        }
    };
    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace gridforge

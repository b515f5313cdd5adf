#include "gridforge/metrics.hpp"

#include "gridforge/gates.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

namespace gridforge {

namespace {
constexpr double kPi = std::numbers::pi;
}

OperatorMatrix q_operator(int mu, FockDim dim) {
    if (mu != 0 && mu != 1) throw config_error("q_operator: mu must be 0 or 1");
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::shared_ptr<const Mat>> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({mu, dim.size()});
        if (it != cache.end()) return {dim, *it->second, OpTag::hermitian};
    }
    auto st = stabilizer_ops(dim);
    const double sgn = (mu == 1) ? 1.0 : -1.0;
    Mat q = 0.5 * (4.0 * Mat::Identity(dim.size(), dim.size()) +
                   sgn * (st.sqrt_s_p.mat + st.sqrt_s_p.mat.adjoint()) -
                   st.s_x.mat - st.s_x.mat.adjoint());
    q = 0.5 * (q + Mat(q.adjoint()));  // clean roundoff asymmetry
    {
        std::lock_guard<std::mutex> lock(mtx);
        cache[{mu, dim.size()}] = std::make_shared<const Mat>(q);
    }
    return {dim, std::move(q), OpTag::hermitian};
}

double q_db(double value) {
    if (!(value > 0.0)) throw config_error("q_db: value must be positive");
    return 10.0 * std::log10(value);
}

double q_expectation(int mu, const StateVector& psi) {
    if (mu != 0 && mu != 1) throw config_error("q_expectation: mu must be 0 or 1");
    const double sp = std::sqrt(kPi);
    cxd sqrt_sp = psi.amps.dot(apply_exp_i_x(-sp, psi).amps);
    StateVector sx = apply_displacement(cxd(std::sqrt(2.0 * kPi), 0.0), psi);
    cxd s_x = psi.amps.dot(sx.amps);
    const double sgn = (mu == 1) ? 1.0 : -1.0;
    return 2.0 + sgn * sqrt_sp.real() - s_x.real();
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw config_error("linspace: need n >= 2 and hi > lo");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

namespace {

double wigner_point_pure(const StateVector& psi, double x, double p) {
    cxd beta(x / std::sqrt(2.0), p / std::sqrt(2.0));
    StateVector phi = apply_displacement(-beta, psi);
    double w = 0.0;
    for (int n = 0; n <= psi.dim.n_max; ++n) {
        double t = std::norm(phi.amps[n]);
        w += (n % 2 == 0) ? t : -t;
    }
    return w / kPi;
}

template <typename PointFn>
WignerGrid wigner_impl(const std::vector<double>& xs, const std::vector<double>& ps,
                       int jobs, PointFn point) {
    WignerGrid g;
    g.x_axis = xs;
    g.p_axis = ps;
    g.values.resize(long(xs.size()), long(ps.size()));
    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= xs.size()) return;
            for (size_t j = 0; j < ps.size(); ++j)
                g.values(long(i), long(j)) = point(xs[i], ps[j]);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return g;
}

void check_axes(const std::vector<double>& xs, const std::vector<double>& ps) {
    auto mono = [](const std::vector<double>& v) {
        for (size_t i = 1; i < v.size(); ++i)
            if (!(v[i] > v[i - 1]) || !std::isfinite(v[i])) return false;
        return !v.empty() && std::isfinite(v[0]);
    };
    if (!mono(xs) || !mono(ps)) throw config_error("wigner: axes must be finite and increasing");
}

}  // namespace

namespace {

// non-fatal: a state reaching past the grid yields a valid but clipped map
void warn_if_support_exceeds(const StateVector& psi, const std::vector<double>& xs,
                             const std::vector<double>& ps) {
    double n_mean = 0.0;
    for (int n = 0; n <= psi.dim.n_max; ++n) n_mean += n * std::norm(psi.amps[n]);
    double reach = std::sqrt(2.0 * n_mean + 1.0) + 2.0;
    double ext = std::min(std::max(std::abs(xs.front()), std::abs(xs.back())),
                          std::max(std::abs(ps.front()), std::abs(ps.back())));
    if (reach > ext)
        std::cerr << "wigner: state support (|x| ~ " << reach
                  << ") exceeds the grid extent " << ext << "\n";
}

}  // namespace

WignerGrid wigner(const StateVector& psi, const std::vector<double>& xs,
                  const std::vector<double>& ps, int jobs) {
    check_axes(xs, ps);
    warn_if_support_exceeds(psi, xs, ps);
    return wigner_impl(xs, ps, jobs,
                       [&](double x, double p) { return wigner_point_pure(psi, x, p); });
}

WignerGrid wigner(const DensityMatrix& rho, const std::vector<double>& xs,
                  const std::vector<double>& ps, int jobs) {
    check_axes(xs, ps);
    // spectral split: W_rho = sum_k w_k W_{psi_k}, small weights dropped
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat);
    if (es.info() != Eigen::Success) throw numeric_error("wigner: eigensolver failed");
    std::vector<std::pair<double, StateVector>> comps;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        double w = es.eigenvalues()[k];
        if (w > 1e-12)
            comps.emplace_back(w, StateVector{rho.dim, es.eigenvectors().col(k)});
    }
    return wigner_impl(xs, ps, jobs, [&](double x, double p) {
        double acc = 0.0;
        for (const auto& [w, psi] : comps) acc += w * wigner_point_pure(psi, x, p);
        return acc;
    });
}

double WignerGrid::integral() const {
    // trapezoid in both directions
    double acc = 0.0;
    for (size_t i = 0; i + 1 < x_axis.size(); ++i)
        for (size_t j = 0; j + 1 < p_axis.size(); ++j) {
            double cell = values(long(i), long(j)) + values(long(i + 1), long(j)) +
                          values(long(i), long(j + 1)) + values(long(i + 1), long(j + 1));
            acc += 0.25 * cell * (x_axis[i + 1] - x_axis[i]) * (p_axis[j + 1] - p_axis[j]);
        }
    return acc;
}

namespace {

// Hermite functions h_n(x) = (pi^-1/4 / sqrt(2^n n!)) H_n(x) e^{-x^2/2},
// upward recurrence with exponent tracking so large |x| does not underflow.
struct ScaledHermite {
    double x;
    double f_prev = 0.0, f_cur;  // mantissas
    int e_prev = 0, e_cur = 0;   // base-2 exponents
    int n = 0;

    explicit ScaledHermite(double xx) : x(xx) {
        // h_0 = pi^-1/4 exp(-x^2/2), stored as mantissa*2^e
        double log2h0 = (-0.25 * std::log(kPi) - 0.5 * x * x) / std::log(2.0);
        int e = int(std::floor(log2h0));
        f_cur = std::exp2(log2h0 - e);
        e_cur = e;
    }
    double value_scaled(int* exponent) const {
        *exponent = e_cur;
        return f_cur;
    }
    void advance() {  // to h_{n+1}
        ++n;
        // h_n = x sqrt(2/n) h_{n-1} - sqrt((n-1)/n) h_{n-2}
        double a = x * std::sqrt(2.0 / n);
        double b = (n >= 2) ? std::sqrt((n - 1.0) / n) : 0.0;
        double nf = a * f_cur - b * f_prev * std::exp2(double(e_prev - e_cur));
        int ne = e_cur;
        f_prev = f_cur;
        e_prev = e_cur;
        if (nf == 0.0) {  // exact zero (e.g. odd n at x = 0): keep the scale
            f_cur = 0.0;
            e_cur = ne;
            return;
        }
        int adj;
        f_cur = std::frexp(nf, &adj);
        e_cur = ne + adj;
    }
};

}  // namespace

std::vector<cxd> x_wavefunction(const StateVector& psi, const std::vector<double>& xs) {
    std::vector<cxd> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        ScaledHermite h(xs[i]);
        cxd acc = 0.0;
        for (int n = 0; n <= psi.dim.n_max; ++n) {
            if (n > 0) h.advance();
            int e;
            double f = h.value_scaled(&e);
            if (e > -1060) acc += psi.amps[n] * std::ldexp(f, e);
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> x_marginal(const StateVector& psi, const std::vector<double>& xs) {
    auto wf = x_wavefunction(psi, xs);
    std::vector<double> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = std::norm(wf[i]);
    return out;
}

std::vector<double> p_marginal(const StateVector& psi, const std::vector<double>& ps) {
    // <p|psi> = sum_n amps_n (-i)^n h_n(p)
    StateVector rotated = psi;
    for (int n = 0; n <= psi.dim.n_max; ++n)
        rotated.amps[n] *= std::polar(1.0, -kPi / 2.0 * (n % 4));
    return x_marginal(rotated, ps);
}

}  // namespace gridforge

#include "gridforge/protocols.hpp"

#include "gridforge/gates.hpp"
#include "gridforge/metrics.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace gridforge {

namespace {
constexpr double kPi = std::numbers::pi;
const double kLeakTol = 1e-6;

void check_leak(const StateVector& psi, ProtocolTrace& trace) {
    double l = psi.leakage();
    trace.leakage.push_back(l);
    if (l > kLeakTol) {
        trace.failed = true;
        throw truncation_error("protocol: leakage " + std::to_string(l) + " above 1e-6");
    }
}
}  // namespace

void ProtocolConfig::validate() const {
    if (mu != 0 && mu != 1) throw config_error("ProtocolConfig: mu must be 0 or 1");
    if (n_cycles < 0) throw config_error("ProtocolConfig: n_cycles must be >= 0");
    if (!(beta_bracket.second > beta_bracket.first))
        throw config_error("ProtocolConfig: beta bracket must be ordered");
    if (!(beta_tol > 0)) throw config_error("ProtocolConfig: beta_tol must be > 0");
    if (!std::isfinite(r_db)) throw config_error("ProtocolConfig: r_db must be finite");
}

double brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                      double tol, int max_iter) {
    const double golden = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + golden * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        double m = 0.5 * (a + b);
        double tol1 = tol * std::abs(x) + 1e-12;
        double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
        double p = 0.0, q = 0.0, r = 0.0;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0) p = -p;
            q = std::abs(q);
            if (std::abs(p) < std::abs(0.5 * q * e) && p > q * (a - x) && p < q * (b - x)) {
                e = d;
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0) ? tol1 : -tol1);
        double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return x;
}

std::pair<double, double> optimize_beta(const StateVector& state, int mu,
                                        std::pair<double, double> bracket, double tol) {
    if (mu != 0 && mu != 1) throw config_error("optimize_beta: mu must be 0 or 1");
    auto objective = [&](double beta) {
        StateVector shifted = apply_displacement(cxd(0.0, beta), state);
        return q_expectation(mu, shifted);
    };
    double beta = brent_minimize(objective, bracket.first, bracket.second, tol);
    double width = bracket.second - bracket.first;
    if (beta - bracket.first < 1e-3 * width || bracket.second - beta < 1e-3 * width)
        throw bracket_error("optimize_beta: minimum at bracket edge; widen bracket");
    return {beta, objective(beta)};
}

namespace {

ProtocolResult run_impl(const ProtocolConfig& cfg, bool record_states,
                        const std::vector<double>* kerr_phases) {
    cfg.validate();
    if (kerr_phases && cfg.correction)
        throw config_error("protocol: perturbed Kerr runs are correction-free");
    ProtocolTrace trace;
    auto kerr_phase = [&](int k) {
        if (!kerr_phases) return kPi / 2.0;
        if (k >= int(kerr_phases->size()))
            throw config_error("protocol: not enough Kerr phases supplied");
        return (*kerr_phases)[size_t(k)];
    };

    StateVector psi = squeezed_vacuum(db_to_natural(cfg.r_db), cfg.dim);
    check_leak(psi, trace);
    int kerr_count = 0;

    auto record = [&](const StateVector& s) {
        if (record_states) trace.states.push_back(s);
    };

    auto correction = [&](int mu_target) {
        auto [beta, qv] = optimize_beta(psi, mu_target, cfg.beta_bracket, cfg.beta_tol);
        psi = apply_displacement(cxd(0.0, beta), psi);
        trace.beta.push_back(beta);
        trace.q_mu.push_back(qv);
        check_leak(psi, trace);
        record(psi);
    };

    // init block
    psi = apply_displacement(std::sqrt(kPi / 2.0), psi);
    check_leak(psi, trace);
    psi = apply_kerr(kerr_phase(kerr_count++), psi);
    check_leak(psi, trace);
    record(psi);
    if (cfg.correction) {
        correction(1);  // post-init state is the 1-logical state
    } else {
        trace.q_mu.push_back(q_expectation(1, psi));
    }

    for (int j = 1; j <= cfg.n_cycles; ++j) {
        psi = apply_displacement(std::pow(2.0, j - 1 + cfg.mu) * std::sqrt(kPi / 2.0), psi);
        check_leak(psi, trace);
        psi = apply_kerr(kerr_phase(kerr_count++), psi);
        check_leak(psi, trace);
        record(psi);
        if (cfg.correction) {
            correction(cfg.mu);
        } else {
            trace.q_mu.push_back(q_expectation(cfg.mu, psi));
        }
    }
    psi.normalize();
    return {std::move(psi), std::move(trace)};
}

}  // namespace

ProtocolResult run_symmetry_enforced(const ProtocolConfig& cfg, bool record_states) {
    if (!cfg.correction)
        throw config_error("run_symmetry_enforced: cfg.correction must be true");
    return run_impl(cfg, record_states, nullptr);
}

ProtocolResult run_phased_comb(const ProtocolConfig& cfg, bool record_states) {
    if (cfg.correction)
        throw config_error("run_phased_comb: cfg.correction must be false");
    return run_impl(cfg, record_states, nullptr);
}

StateVector run_phased_comb_perturbed(const ProtocolConfig& cfg,
                                      const std::vector<double>& kerr_phases) {
    if (cfg.correction)
        throw config_error("run_phased_comb_perturbed: correction must be false");
    return run_impl(cfg, false, &kerr_phases).state;
}

}  // namespace gridforge

#include "gridforge/gridstates.hpp"

#include "gridforge/gates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace gridforge {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);
// coincident-leg merge tolerance (protocol arithmetic is exact in theory)
const double kMergeTol = 1e-9 * kSqrtPi;
}  // namespace

void CombDescription::normalize_coeffs() {
    double w = std::sqrt(total_weight());
    if (w == 0.0) throw numeric_error("CombDescription: zero total weight");
    for (auto& l : legs) l.coeff /= w;
}

double CombDescription::total_weight() const {
    double w = 0.0;
    for (const auto& l : legs) w += std::norm(l.coeff);
    return w;
}

double PhaseProfile::at(double x) const {
    if (values.empty()) return 0.0;
    size_t i = 0;
    while (i < breakpoints.size() && x >= breakpoints[i]) ++i;
    return values[i];
}

CombDescription ideal_gkp_comb(int mu, int s_max) {
    if (mu != 0 && mu != 1) throw config_error("ideal_gkp_comb: mu must be 0 or 1");
    if (s_max < 0) throw config_error("ideal_gkp_comb: s_max must be >= 0");
    CombDescription c;
    c.mu = mu;
    const int lo = (mu == 0) ? -s_max : -s_max - 1;
    for (int s = lo; s <= s_max; ++s)
        c.legs.push_back({(2.0 * s + mu) * kSqrtPi, 1.0});
    c.normalize_coeffs();
    return c;
}

StateVector comb_state(int mu, int s_max, double r, FockDim dim) {
    CombDescription c = ideal_gkp_comb(mu, s_max);
    c.r = r;
    return realize(c, dim);
}

CombDescription gaussian_gkp_comb(int mu, double delta) {
    if (delta <= 0.0) throw config_error("gaussian_gkp_state: Delta must be > 0");
    CombDescription c;
    c.mu = mu;
    // grow the window until the first discarded term is < 1e-12 relative
    int s_max = 0;
    auto weight = [&](int s) { return std::exp(-2.0 * kPi * delta * delta *
                                               (s + 0.5 * mu) * (s + 0.5 * mu)); };
    while (weight(s_max + 1) > 1e-12 && s_max < 100000) ++s_max;
    const int lo = (mu == 0) ? -s_max : -s_max - 1;
    for (int s = lo; s <= s_max; ++s)
        c.legs.push_back({(2.0 * s + mu) * kSqrtPi, weight(s)});
    c.normalize_coeffs();
    return c;
}

StateVector gaussian_gkp_state(int mu, double delta, double r, FockDim dim) {
    CombDescription c = gaussian_gkp_comb(mu, delta);
    c.r = r;
    return realize(c, dim);
}

namespace {

using LegMap = std::map<long long, cxd>;  // key: round(x / merge-quantum)

long long leg_key(double x) { return llround(x / kMergeTol); }

void merge_leg(LegMap& m, double x, cxd c) {
    m[leg_key(x)] += c;
}

LegMap kerr_step(const LegMap& in) {
    LegMap out;
    const cxd minus = std::polar(1.0 / std::sqrt(2.0), -kPi / 4.0);
    const cxd plus = std::polar(1.0 / std::sqrt(2.0), kPi / 4.0);
    for (const auto& [key, c] : in) {
        double x = double(key) * kMergeTol;
        if (key == 0) {
            merge_leg(out, 0.0, c);
        } else {
            merge_leg(out, x, minus * c);
            merge_leg(out, -x, plus * c);
        }
    }
    return out;
}

LegMap shift_step(const LegMap& in, double dx) {
    LegMap out;
    for (const auto& [key, c] : in) merge_leg(out, double(key) * kMergeTol + dx, c);
    return out;
}

}  // namespace

CombDescription phased_comb_oracle(int mu, int n_cycles) {
    if (mu != 0 && mu != 1) throw config_error("phased_comb_oracle: mu must be 0 or 1");
    if (n_cycles < 0) throw config_error("phased_comb_oracle: n_cycles must be >= 0");
    LegMap legs;
    legs[0] = 1.0;
    legs = shift_step(legs, kSqrtPi);  // init displacement sqrt(pi/2) -> x-shift sqrt(pi)
    legs = kerr_step(legs);
    for (int j = 1; j <= n_cycles; ++j) {
        legs = shift_step(legs, std::pow(2.0, j - 1 + mu) * kSqrtPi);
        legs = kerr_step(legs);
    }
    CombDescription c;
    c.mu = mu;
    for (const auto& [key, coeff] : legs)
        if (std::abs(coeff) > 1e-14) c.legs.push_back({double(key) * kMergeTol, coeff});
    std::sort(c.legs.begin(), c.legs.end(),
              [](const CombLeg& a, const CombLeg& b) { return a.x < b.x; });
    c.normalize_coeffs();
    return c;
}

PhaseProfile closed_form_phase(int mu, int n_cycles) {
    if (n_cycles < 0) throw config_error("closed_form_phase: n_cycles must be >= 0");
    PhaseProfile p;
    // Phi(x) = sum_{k=1..n} (pi/2) Theta(2^{k-(1-mu)} - x/(2 sqrt(pi))),
    // strict Theta: zero at the threshold itself.
    std::vector<double> th;
    for (int k = 1; k <= n_cycles; ++k)
        th.push_back(std::pow(2.0, k - (1 - mu)) * 2.0 * kSqrtPi);
    std::sort(th.begin(), th.end());
    p.breakpoints = th;
    for (size_t i = 0; i <= th.size(); ++i) {
        // at x in segment i, the terms with threshold >= x still count;
        // breakpoints are crossed left to right
        p.values.push_back(kPi / 2.0 * double(th.size() - i));
    }
    if (!th.empty()) {
        p.window_min = -th.back();
        p.window_max = th.back();
    }
    return p;
}

cxd delta_s_factor(int mu, bool boundary) {
    if (mu == 1) return 1.0;
    return boundary ? cxd(1.0, 0.0) : cxd(1.0, 1.0);
}

PhaseProfile comb_phase_profile(const CombDescription& comb) {
    PhaseProfile p;
    if (comb.legs.empty()) return p;
    double xmax = std::max(std::abs(comb.legs.front().x), std::abs(comb.legs.back().x));
    for (size_t i = 0; i < comb.legs.size(); ++i) {
        const auto& l = comb.legs[i];
        bool boundary = std::abs(std::abs(l.x) - xmax) < kMergeTol;
        cxd d = delta_s_factor(comb.mu, boundary);
        p.values.push_back(std::arg(l.coeff / d));
        if (i + 1 < comb.legs.size())
            p.breakpoints.push_back(0.5 * (l.x + comb.legs[i + 1].x));
    }
    p.window_min = comb.legs.front().x;
    p.window_max = comb.legs.back().x;
    return p;
}

StateVector realize(const CombDescription& comb, FockDim dim) {
    if (comb.legs.empty()) throw config_error("realize: empty comb");
    StateVector sv = squeezed_vacuum(comb.r, dim);
    Vec acc = Vec::Zero(dim.size());
    for (const auto& leg : comb.legs) {
        StateVector shifted = apply_displacement(leg.x / std::sqrt(2.0), sv);
        acc += leg.coeff * shifted.amps;
    }
    StateVector out{dim, std::move(acc)};
    out.normalize();
    if (out.leakage() > 1e-6)
        throw truncation_error("realize: truncation leakage above 1e-6");
    return out;
}

double leg_overlap(double xa, double xb, double r) {
    double d = xb - xa;
    return std::exp(-d * d * std::exp(2.0 * r) / 4.0);
}

cxd comb_inner(const CombDescription& a, const CombDescription& b) {
    if (std::abs(a.r - b.r) > 1e-12)
        throw config_error("comb_inner: analytic Gram requires equal r");
    // normalization from the exact Gram of non-orthogonal legs
    auto self = [&](const CombDescription& c) {
        double s = 0.0;
        for (const auto& li : c.legs)
            for (const auto& lj : c.legs)
                s += (std::conj(li.coeff) * lj.coeff).real() * leg_overlap(li.x, lj.x, c.r);
        return std::sqrt(s);
    };
    cxd acc = 0.0;
    for (const auto& li : a.legs)
        for (const auto& lj : b.legs)
            acc += std::conj(li.coeff) * lj.coeff * leg_overlap(li.x, lj.x, a.r);
    return acc / (self(a) * self(b));
}

}  // namespace gridforge

#include "gridforge/logical.hpp"

#include "gridforge/gates.hpp"
#include "gridforge/linalg.hpp"
#include "gridforge/noise.hpp"

#include <cmath>
#include <numbers>

namespace gridforge {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);
}  // namespace

double PhaseFrame::total_shift() const {
    double s = 0.0;
    for (double v : shift_history) s += v;
    return s;
}

double PhaseFrame::phi_at(double x) const { return phi.at(x - total_shift()); }

std::pair<StateVector, PhaseFrame> apply_logical(LogicalOp op, const StateVector& state,
                                                 const PhaseFrame& frame) {
    PhaseFrame out_frame = frame;
    StateVector out = state;
    switch (op) {
        case LogicalOp::Z:
            out = apply_exp_i_x(kSqrtPi, state);
            break;
        case LogicalOp::S_p_stab:
            out = apply_exp_i_x(-2.0 * kSqrtPi, state);
            break;
        case LogicalOp::X:
            // position shift by +sqrt(pi); frame picks up the shift
            out = apply_displacement(kSqrtPi / std::sqrt(2.0), state);
            out_frame.shift_history.push_back(kSqrtPi);
            break;
        case LogicalOp::S_x_stab:
            out = apply_displacement(2.0 * kSqrtPi / std::sqrt(2.0), state);
            out_frame.shift_history.push_back(2.0 * kSqrtPi);
            break;
    }
    if (out.leakage() > 1e-6)
        throw truncation_error("apply_logical: truncation leakage above 1e-6");
    return {std::move(out), std::move(out_frame)};
}

Mat cz_gate(FockDim dim) {
    // e^{i x̂ ⊗ σz}: q=0 branch e^{+i x̂}, q=1 branch e^{-i x̂}
    Mat plus = exp_i_x(1.0, dim).mat;
    Mat minus = exp_i_x(-1.0, dim).mat;
    const int n = dim.size();
    Mat out = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out(2 * i, 2 * j) = plus(i, j);
            out(2 * i + 1, 2 * j + 1) = minus(i, j);
        }
    return out;
}

Mat cnot_gate(FockDim dim) {
    Mat plus = exp_i_p(1.0, dim).mat;
    Mat minus = exp_i_p(-1.0, dim).mat;
    const int n = dim.size();
    Mat out = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out(2 * i, 2 * j) = plus(i, j);
            out(2 * i + 1, 2 * j + 1) = minus(i, j);
        }
    return out;
}

namespace {

struct Branches {
    Vec b0, b1;  // unnormalized mode branches for ancilla outcomes 0/1
};

// |+>_A ancilla; q=1 branch gets Z_L = e^{i sqrt(pi) x̂} then X_L (shift
// +sqrt(pi)); Hadamard on the ancilla mixes the branches.
Branches hadamard_branches(const StateVector& psi) {
    Vec b0 = psi.amps / std::sqrt(2.0);
    StateVector w = apply_exp_i_x(kSqrtPi, psi);
    w = apply_displacement(kSqrtPi / std::sqrt(2.0), w);
    Vec b1 = w.amps / std::sqrt(2.0);
    Branches out;
    out.b0 = (b0 + b1) / std::sqrt(2.0);
    out.b1 = (b0 - b1) / std::sqrt(2.0);
    return out;
}

AncillaOutcome finish_branch(const StateVector& psi, const Vec& branch, int bit) {
    double p = branch.squaredNorm();
    if (p < 1e-12) throw numeric_error("teleported_hadamard: zero-probability branch");
    StateVector st{psi.dim, branch / std::sqrt(p)};
    // Pauli correction: outcome 0 -> X_L; outcome 1 -> e^{-i sqrt(pi) x̂}
    // (logical Z; this sign avoids a second momentum kick)
    if (bit == 0)
        st = apply_displacement(kSqrtPi / std::sqrt(2.0), st);
    else
        st = apply_exp_i_x(-kSqrtPi, st);
    return {bit, p, std::move(st)};
}

}  // namespace

std::pair<AncillaOutcome, AncillaOutcome> teleported_hadamard_branches(const StateVector& psi) {
    Branches br = hadamard_branches(psi);
    return {finish_branch(psi, br.b0, 0), finish_branch(psi, br.b1, 1)};
}

AncillaOutcome teleported_hadamard(const StateVector& psi, std::optional<int> outcome,
                                   std::uint64_t seed) {
    Branches br = hadamard_branches(psi);
    int bit;
    if (outcome) {
        bit = *outcome;
        if (bit != 0 && bit != 1) throw config_error("teleported_hadamard: outcome must be 0|1");
    } else {
        double p0 = br.b0.squaredNorm();
        bit = (uniform_from_counter(seed, 0, 0) < p0) ? 0 : 1;
    }
    return finish_branch(psi, (bit == 0) ? br.b0 : br.b1, bit);
}

std::vector<cxd> momentum_profile(const PhaseProfile& phi, const std::vector<double>& p_axis) {
    if (!(phi.window_max > phi.window_min))
        throw config_error("momentum_profile: phase profile needs a finite window");
    const long s_min = lround(std::ceil(phi.window_min / kSqrtPi - 1e-9));
    const long s_max = lround(std::floor(phi.window_max / kSqrtPi + 1e-9));
    std::vector<cxd> out(p_axis.size(), 0.0);
    for (long s = s_min; s <= s_max; ++s) {
        double x = double(s) * kSqrtPi;
        cxd a = std::polar(1.0, phi.at(x));
        for (size_t i = 0; i < p_axis.size(); ++i)
            out[i] += a * std::polar(1.0, -x * p_axis[i]);
    }
    double norm = std::sqrt(double(s_max - s_min + 1));
    for (auto& v : out) v /= norm;
    return out;
}

}  // namespace gridforge

#pragma once

#include "gridforge/fock.hpp"
#include "gridforge/gridstates.hpp"

#include <optional>
#include <vector>

namespace gridforge {

// Frame bookkeeping for the position-dependent phase e^{i Phi(x̂)}:
// momentum-type logical operations shift Phi instead of undoing it.
struct PhaseFrame {
    PhaseProfile phi;
    std::vector<double> shift_history;

    double total_shift() const;
    // the frame's phase evaluated with all recorded shifts applied
    double phi_at(double x) const;
};

enum class LogicalOp { Z, S_p_stab, X, S_x_stab };

// Z: exp(i sqrt(pi) x̂); S_p: exp(-2i sqrt(pi) x̂) — frame unchanged.
// X: x-shift by sqrt(pi) (exp(-i sqrt(pi) p̂)); S_x: x-shift by 2 sqrt(pi);
// both record the shift in the frame.
std::pair<StateVector, PhaseFrame> apply_logical(LogicalOp op, const StateVector& state,
                                                 const PhaseFrame& frame);

struct AncillaOutcome {
    int bit = 0;
    double probability = 0.0;
    StateVector post_state;  // mode only, after the Pauli correction
};

// Teleported Hadamard (ancilla |+>, CZ = e^{i x̂ σz}, CNOT = e^{i p̂ σz},
// H on the ancilla, Z measurement, Pauli correction X/Z by outcome).
// outcome: 0 or 1 selects the branch; nullopt samples with `seed`.
AncillaOutcome teleported_hadamard(const StateVector& state,
                                   std::optional<int> outcome = std::nullopt,
                                   std::uint64_t seed = 0);
// both branches (probabilities sum to 1)
std::pair<AncillaOutcome, AncillaOutcome> teleported_hadamard_branches(const StateVector& state);

// Composite-space entangling gates (mode slow, qubit fast).
Mat cz_gate(FockDim dim);     // e^{i x̂ σz}
Mat cnot_gate(FockDim dim);   // e^{i p̂ σz}

// Windowed Fourier sum of the phase profile over legs s*sqrt(pi):
// f(p) = sum_s e^{i Phi(s sqrt(pi))} e^{-i s sqrt(pi) p}
std::vector<cxd> momentum_profile(const PhaseProfile& phi, const std::vector<double>& p_axis);

}  // namespace gridforge

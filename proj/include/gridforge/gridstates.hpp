#pragma once

#include "gridforge/fock.hpp"

#include <vector>

namespace gridforge {

// One displaced-squeezed component of a grid superposition. Centers are
// stored in x̂ units; realization converts with alpha = x/sqrt(2).
struct CombLeg {
    double x = 0.0;
    cxd coeff = 0.0;
};

struct CombDescription {
    int mu = 0;
    double r = 0.0;  // per-leg squeezing, natural units
    std::vector<CombLeg> legs;  // sorted by x, centers distinct

    void normalize_coeffs();  // Σ|c|² = 1 (leg-orthogonal normalization)
    double total_weight() const;
};

struct PhaseProfile {
    // piecewise-constant: values[i] on [breakpoints[i-1], breakpoints[i]),
    // values[0] left of breakpoints[0], values.back() from the last on.
    std::vector<double> breakpoints;
    std::vector<double> values;
    double window_min = 0.0, window_max = 0.0;  // finite support for Fourier sums

    double at(double x) const;
};

// Hard-cutoff uniform comb. mu=0: legs 2s*sqrt(pi), |s| <= s_max.
// mu=1: legs (2s+1)*sqrt(pi), s = -s_max-1 .. s_max (symmetric window).
CombDescription ideal_gkp_comb(int mu, int s_max);

StateVector comb_state(int mu, int s_max, double r, FockDim dim);

// Gaussian-envelope comb, weights exp(-2 pi Delta^2 (s+mu/2)^2); window grown
// until the discarded relative weight is below 1e-12.
StateVector gaussian_gkp_state(int mu, double delta, double r, FockDim dim);
CombDescription gaussian_gkp_comb(int mu, double delta);

// Symbolic protocol simulation on leg lists (Kerr split + shifts + merges).
CombDescription phased_comb_oracle(int mu, int n_cycles);

// Closed-form product of Heaviside phases, evaluated as a step profile.
// Thresholds 2^{k-(1-mu)} with x in units of 2 sqrt(pi).
PhaseProfile closed_form_phase(int mu, int n_cycles);

// Boundary amplitude factor of the phased comb: mu=1 -> 1, mu=0 -> (1+i)
// in the interior and 1 on the outermost legs.
cxd delta_s_factor(int mu, bool boundary);

// Phase profile read off a comb's coefficients with delta_s divided out.
PhaseProfile comb_phase_profile(const CombDescription& comb);

StateVector realize(const CombDescription& comb, FockDim dim);

// Analytic overlap of two displaced squeezed legs at equal r (real centers):
// <x_a,r|x_b,r> = exp(-(xb-xa)^2 e^{2r} / 4)
double leg_overlap(double xa, double xb, double r);
// Inner product of two combs at equal r from the analytic Gram matrix.
cxd comb_inner(const CombDescription& a, const CombDescription& b);

}  // namespace gridforge

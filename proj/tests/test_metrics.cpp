#include <doctest.h>

#include "gridforge/gates.hpp"
#include "gridforge/gridstates.hpp"
#include "gridforge/metrics.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <numbers>

using namespace gridforge;
using namespace gftest;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);
}

TEST_CASE("q_operator hermiticity, signs, and vacuum pin") {
    FockDim dim(200);
    auto q0 = q_operator(0, dim);
    auto q1 = q_operator(1, dim);
    CHECK(max_abs(q0.mat - q0.mat.adjoint()) <= 1e-10);
    CHECK(max_abs(q1.mat - q1.mat.adjoint()) <= 1e-10);

    // vacuum value, regression-pinned; matches the Gaussian characteristic
    // function 2 - e^{-pi/4} - e^{-pi}
    double qv = expectation(q0, StateVector::vacuum(dim));
    CHECK(qv == doctest::Approx(1.5008479539702316).epsilon(1e-10));
    CHECK(qv == doctest::Approx(2.0 - std::exp(-kPi / 4.0) - std::exp(-kPi)).epsilon(1e-10));

    // high-quality comb: <Q0> approaches 0 from above (0.083 at 17 legs)
    double q = q_expectation(0, comb_state(0, 8, db_to_natural(15.0), FockDim(650)));
    CHECK(q > 0.0);
    CHECK(q < 0.1);
}

TEST_CASE("q_expectation agrees with the dense operator") {
    FockDim dim(240);
    auto psi = comb_state(0, 2, db_to_natural(9.0), dim);
    CHECK(q_expectation(0, psi) ==
          doctest::Approx(expectation(q_operator(0, dim), psi)).epsilon(1e-11));
    CHECK(q_expectation(1, psi) ==
          doctest::Approx(expectation(q_operator(1, dim), psi)).epsilon(1e-11));
}

TEST_CASE("q_db") {
    CHECK(q_db(1.0) == 0.0);
    CHECK(q_db(0.1) == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(q_db(2.0) == doctest::Approx(3.0102999566).epsilon(1e-9));
    CHECK_THROWS_AS((void)q_db(0.0), config_error);
    CHECK_THROWS_AS((void)q_db(-1.0), config_error);
}

TEST_CASE("wigner of the vacuum and parity identity") {
    FockDim dim(60);
    auto vac = StateVector::vacuum(dim);
    auto ax = linspace(-4.0, 4.0, 81);
    auto g = wigner(vac, ax, ax);
    // W(0,0) = 1/pi
    int mid = 40;
    CHECK(g.values(mid, mid) == doctest::Approx(1.0 / kPi).epsilon(1e-6));
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-3));

    // parity identity for a generic state
    auto psi = apply_displacement(cxd(0.4, 0.2), squeezed_vacuum(0.5, dim));
    auto g2 = wigner(psi, {0.0}, {0.0});
    double parity = 0.0;
    for (int n = 0; n <= dim.n_max; ++n)
        parity += ((n % 2) ? -1.0 : 1.0) * std::norm(psi.amps[n]);
    CHECK(g2.values(0, 0) * kPi == doctest::Approx(parity).epsilon(1e-8));
}

TEST_CASE("wigner of the squeezed vacuum has the e^{4r} section ratio") {
    FockDim dim(80);
    double r = 0.6;
    auto sv = squeezed_vacuum(r, dim);
    auto xs = linspace(-2.0, 2.0, 81);
    auto ps = linspace(-5.5, 5.5, 221);
    auto g = wigner(sv, xs, ps, 2);
    double sx = 0, sp = 0, norm = 0;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ps.size(); ++j) {
            double w = g.values(long(i), long(j));
            norm += w;
            sx += w * xs[i] * xs[i];
            sp += w * ps[j] * ps[j];
        }
    sx /= norm;
    sp /= norm;
    CHECK(sp / sx == doctest::Approx(std::exp(4.0 * r)).epsilon(0.01));
}

TEST_CASE("wigner of a kerr cat shows two lobes and interference fringes") {
    FockDim dim(140);
    double alpha = std::sqrt(kPi / 2.0);
    auto cat = apply_kerr(kPi / 2.0,
                          apply_displacement(alpha, squeezed_vacuum(db_to_natural(6.0), dim)));
    auto xs = linspace(-4.0, 4.0, 161);
    auto ps = linspace(-4.0, 4.0, 161);
    auto g = wigner(cat, xs, ps, 2);
    // lobes at x = ±sqrt(2) alpha
    auto value_at = [&](double x, double p) {
        size_t i = size_t((x - xs.front()) / (xs[1] - xs[0]) + 0.5);
        size_t j = size_t((p - ps.front()) / (ps[1] - ps[0]) + 0.5);
        return g.values(long(i), long(j));
    };
    CHECK(value_at(std::sqrt(2.0) * alpha, 0.0) > 0.1);
    CHECK(value_at(-std::sqrt(2.0) * alpha, 0.0) > 0.1);
    // fringes: negative Wigner values between the lobes
    double min_mid = 1e9;
    for (double p = -2.0; p <= 2.0; p += 0.05) min_mid = std::min(min_mid, value_at(0.0, p));
    CHECK(min_mid < -0.05);
}

TEST_CASE("x_marginal: vacuum, comb peaks, normalization") {
    FockDim dim(120);
    auto vac = StateVector::vacuum(dim);
    auto ax = linspace(-8.0, 8.0, 1601);
    auto m = x_marginal(vac, ax);
    // Gaussian with variance 1/2, peaked at 0
    size_t imax = 0;
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i] > m[imax]) imax = i;
    CHECK(std::abs(ax[imax]) < 1e-6);
    CHECK(m[imax] == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-6));

    double dx = ax[1] - ax[0];
    double integral = 0.0;
    for (double v : m) integral += v * dx;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));

    // comb peaks at (2s+mu) sqrt(pi)
    auto comb = comb_state(1, 1, db_to_natural(10.0), FockDim(300));
    auto ax2 = linspace(-5.0 * kSqrtPi, 5.0 * kSqrtPi, 2001);
    auto m2 = x_marginal(comb, ax2);
    for (int s : {-2, -1, 0, 1}) {
        double xc = (2.0 * s + 1.0) * kSqrtPi;
        size_t i = size_t((xc - ax2.front()) / (ax2[1] - ax2[0]) + 0.5);
        CHECK(m2[i] > 0.1);
    }
}

TEST_CASE("wigner x-marginal reproduces x_marginal pointwise") {
    FockDim dim(70);
    auto psi = apply_displacement(0.7, squeezed_vacuum(0.4, dim));
    auto xs = linspace(-4.0, 4.0, 81);
    auto ps = linspace(-7.0, 7.0, 281);  // wide p-range for the integral
    auto g = wigner(psi, xs, ps, 2);
    auto direct = x_marginal(psi, xs);
    double dp = ps[1] - ps[0];
    for (size_t i = 0; i < xs.size(); ++i) {
        double marg = 0.0;
        for (size_t j = 0; j < ps.size(); ++j) marg += g.values(long(i), long(j)) * dp;
        CHECK(std::abs(marg - direct[i]) < 1e-4);
    }
}

TEST_CASE("x_wavefunction survives large displacements (no underflow)") {
    FockDim dim(1000);
    // leg at x ~ 37: h_0 underflows but the renormalized recurrence must not
    auto leg = apply_displacement(37.0 / std::sqrt(2.0), squeezed_vacuum(0.9, dim));
    auto m = x_marginal(leg, {37.0});
    CHECK(m[0] > 0.1);
}

TEST_CASE("p_marginal of the squeezed vacuum is anti-squeezed") {
    FockDim dim(100);
    double r = db_to_natural(8.0);
    auto sv = squeezed_vacuum(r, dim);
    auto ax = linspace(-10.0, 10.0, 2001);
    auto mp = p_marginal(sv, ax);
    double dx = ax[1] - ax[0];
    double var = 0.0;
    for (size_t i = 0; i < ax.size(); ++i) var += ax[i] * ax[i] * mp[i] * dx;
    CHECK(var == doctest::Approx(std::exp(2.0 * r) / 2.0).epsilon(1e-3));
}

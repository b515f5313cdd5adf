#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridforge/gates.hpp"
#include "gridforge/gridstates.hpp"
#include "gridforge/linalg.hpp"
#include "gridforge/logical.hpp"
#include "gridforge/metrics.hpp"
#include "gridforge/noise.hpp"
#include "gridforge/protocols.hpp"
#include "gridforge/qec.hpp"

namespace py = pybind11;
using namespace gridforge;

namespace {

StateVector state_from_array(const Vec& amps) {
    return {FockDim(int(amps.size()) - 1), amps};
}

}  // namespace

PYBIND11_MODULE(_gridforge, m) {
    m.doc() = "Truncated-Fock-space grid-state generation and QEC benchmarks";

    py::register_exception<truncation_error>(m, "TruncationError");
    py::register_exception<numeric_error>(m, "NumericError");
    py::register_exception<config_error>(m, "ConfigError");

    m.def("db_to_natural", &db_to_natural, py::arg("r_db"));
    m.def("natural_to_db", &natural_to_db, py::arg("r"));

    m.def("annihilation",
          [](int n_max) { return annihilation(FockDim(n_max)).mat; }, py::arg("n_max"));
    m.def("quadratures", [](int n_max) {
        auto [x, p] = quadratures(FockDim(n_max));
        return py::make_tuple(x.mat, p.mat);
    });
    m.def("displacement",
          [](cxd alpha, int n_max) { return displacement(alpha, FockDim(n_max)).mat; });
    m.def("squeezing", [](double r, int n_max) { return squeezing(r, FockDim(n_max)).mat; });
    m.def("kerr", [](double chi_t, int n_max) { return kerr(chi_t, FockDim(n_max)).mat; });
    m.def("expm", [](const Mat& a) { return expm({FockDim(int(a.rows()) - 1), a}).mat; });
    m.def("sqrtm_principal", [](const Mat& a) { return sqrtm_principal(a); });
    m.def("squeezed_vacuum",
          [](double r, int n_max) { return squeezed_vacuum(r, FockDim(n_max)).amps; });

    m.def("comb_state", [](int mu, int s_max, double r, int n_max) {
        return comb_state(mu, s_max, r, FockDim(n_max)).amps;
    });
    m.def("gaussian_gkp_state", [](int mu, double delta, double r, int n_max) {
        return gaussian_gkp_state(mu, delta, r, FockDim(n_max)).amps;
    });
    m.def("phased_comb_oracle_legs", [](int mu, int n_cycles) {
        auto c = phased_comb_oracle(mu, n_cycles);
        std::vector<std::pair<double, cxd>> legs;
        for (const auto& l : c.legs) legs.emplace_back(l.x, l.coeff);
        return legs;
    });
    m.def("realize_phased_comb", [](int mu, int n_cycles, double r, int n_max) {
        auto c = phased_comb_oracle(mu, n_cycles);
        c.r = r;
        return realize(c, FockDim(n_max)).amps;
    });

    m.def("q_operator", [](int mu, int n_max) { return q_operator(mu, FockDim(n_max)).mat; });
    m.def("q_db", &q_db);
    m.def("q_expectation",
          [](int mu, const Vec& amps) { return q_expectation(mu, state_from_array(amps)); });
    m.def("fidelity", [](const Vec& a, const Vec& b) {
        return fidelity(state_from_array(a), state_from_array(b));
    });

    m.def(
        "run_protocol",
        [](int mu, int n_cycles, double r_db, int n_max, bool correction) {
            ProtocolConfig cfg{mu, n_cycles, r_db, FockDim(n_max), correction};
            auto res = correction ? run_symmetry_enforced(cfg) : run_phased_comb(cfg);
            py::dict trace;
            trace["beta"] = res.trace.beta;
            trace["q_mu"] = res.trace.q_mu;
            trace["leakage"] = res.trace.leakage;
            return py::make_tuple(res.state.amps, trace);
        },
        py::arg("mu"), py::arg("n_cycles"), py::arg("r_db"), py::arg("n_max"),
        py::arg("correction") = true);

    m.def("optimize_beta", [](const Vec& amps, int mu, double lo, double hi, double tol) {
        auto [b, q] = optimize_beta(state_from_array(amps), mu, {lo, hi}, tol);
        return py::make_tuple(b, q);
    }, py::arg("amps"), py::arg("mu"), py::arg("lo") = -0.1, py::arg("hi") = 1.0,
       py::arg("tol") = 1e-6);

    m.def("wigner", [](const Vec& amps, const std::vector<double>& xs,
                       const std::vector<double>& ps, int jobs) {
        auto g = wigner(state_from_array(amps), xs, ps, jobs);
        return g.values;
    }, py::arg("amps"), py::arg("x_axis"), py::arg("p_axis"), py::arg("jobs") = 1);
    m.def("x_marginal", [](const Vec& amps, const std::vector<double>& xs) {
        return x_marginal(state_from_array(amps), xs);
    });

    m.def("loss_kraus", [](double gamma, int ell, int n_max) {
        std::vector<Mat> out;
        for (auto& k : loss_kraus(gamma, ell, FockDim(n_max))) out.push_back(k.mat);
        return out;
    });
    m.def("evolve_kerr_lossy", [](const Mat& rho, double koc, bool kerr_on) {
        DensityMatrix r{FockDim(int(rho.rows()) - 1), rho};
        return evolve_kerr_lossy(r, koc, kerr_on).mat;
    }, py::arg("rho"), py::arg("kappa_over_chi"), py::arg("kerr_on") = true);

    m.def("channel_fidelity", [](const std::string& family, int cycles, double r_db,
                                 int n_max, double gamma) {
        auto code = build_code_pair(code_family_from_string(family), cycles, r_db,
                                    FockDim(n_max));
        auto res = channel_fidelity_auto(code, gamma);
        py::dict d;
        d["f_e"] = res.f_e;
        d["ell"] = res.ell;
        d["conditioning"] = res.conditioning;
        return d;
    });

    m.def("teleported_hadamard_branches", [](const Vec& amps) {
        auto [o0, o1] = teleported_hadamard_branches(state_from_array(amps));
        py::dict d0, d1;
        d0["bit"] = o0.bit; d0["probability"] = o0.probability; d0["state"] = o0.post_state.amps;
        d1["bit"] = o1.bit; d1["probability"] = o1.probability; d1["state"] = o1.post_state.amps;
        return py::make_tuple(d0, d1);
    });

    m.attr("__version__") = "0.1.0";
}

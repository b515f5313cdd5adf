// gridforge CLI: reproduces the protocol, robustness, and QEC data sets.
//
// Subcommands: generate, sweep-q, noise, qec, hadamard, wigner.
// Exit codes: 0 ok, 2 invalid config, 3 truncation/convergence, 4 numerical.

#include <CLI11.hpp>

#include "gridforge/gates.hpp"
#include "gridforge/gridstates.hpp"
#include "gridforge/io.hpp"
#include "gridforge/linalg.hpp"
#include "gridforge/logical.hpp"
#include "gridforge/metrics.hpp"
#include "gridforge/noise.hpp"
#include "gridforge/protocols.hpp"
#include "gridforge/qec.hpp"

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace gf = gridforge;

namespace {

// flat key=value files by default; files starting with '{' are parsed as JSON
// (top-level keys, one nesting level for subcommand sections)
class ConfigFlatOrJson : public CLI::ConfigINI {
  public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto pos = input.tellg();
        char first = 0;
        input >> std::ws;
        input.get(first);
        input.seekg(pos);
        if (first != '{') return CLI::ConfigINI::from_config(input);
        nlohmann::json j = nlohmann::json::parse(input);
        std::vector<CLI::ConfigItem> out;
        std::function<void(const nlohmann::json&, std::vector<std::string>)> walk =
            [&](const nlohmann::json& node, std::vector<std::string> parents) {
                for (auto it = node.begin(); it != node.end(); ++it) {
                    if (it.value().is_object()) {
                        auto p = parents;
                        p.push_back(it.key());
                        walk(it.value(), p);
                        continue;
                    }
                    CLI::ConfigItem item;
                    item.parents = parents;
                    item.name = it.key();
                    if (it.value().is_array()) {
                        for (const auto& v : it.value())
                            item.inputs.push_back(v.is_string() ? v.get<std::string>()
                                                                : v.dump());
                    } else if (it.value().is_string()) {
                        item.inputs.push_back(it.value().get<std::string>());
                    } else {
                        item.inputs.push_back(it.value().dump());
                    }
                    out.push_back(item);
                }
            };
        walk(j, {});
        return out;
    }
};

int default_jobs() {
    if (const char* env = std::getenv("GRIDFORGE_JOBS")) {
        int j = std::atoi(env);
        if (j >= 1) return j;
    }
    return 1;
}

std::string vec_to_str(const std::vector<double>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << gf::fmt17(v[i]);
    return os.str();
}

gf::Metadata make_meta(const CLI::App& app, std::uint64_t seed) {
    return {gf::fnv1a64(app.config_to_str(true, false)), seed};
}

struct GenerateArgs {
    int mu = 0, cycles = 0, n_max = 300;
    double r_db = 7.8;
    bool correction = false;
    std::string output_dir = "out";
    bool wigner = false;
    int grid = 301;
    int jobs = default_jobs();
};

int cmd_generate(const CLI::App& app, const GenerateArgs& a) {
    gf::ProtocolConfig cfg{a.mu, a.cycles, a.r_db, gf::FockDim(a.n_max), a.correction};
    gf::ProtocolResult res =
        a.correction ? gf::run_symmetry_enforced(cfg) : gf::run_phased_comb(cfg);
    auto meta = make_meta(app, 0);
    std::filesystem::path dir(a.output_dir);
    gf::write_state_csv(dir / "state.csv", res.state, a.r_db, meta);

    std::vector<std::pair<std::string, double>> extras;
    // fidelity to the equal-leg comb state (comparison used throughout)
    int legs = (a.mu == 0) ? (1 << a.cycles) + 1 : (1 << (a.cycles + 1));
    int s_max = (a.mu == 0) ? (legs - 1) / 2 : legs / 2 - 1;
    try {
        gf::StateVector comb =
            gf::comb_state(a.mu, s_max, gf::db_to_natural(a.r_db), cfg.dim);
        extras.emplace_back("f_comb", gf::fidelity(comb, res.state));
    } catch (const gf::truncation_error&) {
        // comb comparison unavailable at this truncation; omit the field
    }
    gf::write_trace_json(dir / "trace.json", cfg, res.trace, meta, extras);

    if (a.wigner) {
        double w = 6.0 * std::sqrt(std::numbers::pi);
        auto ax = gf::linspace(-w, w, a.grid);
        gf::write_wigner(dir / "wigner.csv", gf::wigner(res.state, ax, ax, a.jobs), meta);
    }
    std::cout << "generate: wrote " << (dir / "state.csv").string() << "\n";
    return 0;
}

struct SweepQArgs {
    int cycles_max = 4, n_max = 650;
    std::vector<double> r_db{6.0, 10.0, 15.0};
    double comb_r_db = 15.0;
    std::string output = "sweep_q.csv";
};

int cmd_sweep_q(const CLI::App& app, const SweepQArgs& a) {
    auto meta = make_meta(app, 0);
    std::vector<std::vector<std::string>> rows;
    gf::FockDim dim(a.n_max);
    for (double rdb : a.r_db) {
        for (int nc = 0; nc <= a.cycles_max; ++nc) {
            gf::ProtocolConfig cfg{0, nc, rdb, dim, true};
            auto res = gf::run_symmetry_enforced(cfg);
            int mu_q = (nc == 0) ? 1 : 0;  // Q1 is reported at cycle 0
            double q = gf::q_expectation(mu_q, res.state);
            rows.push_back({std::to_string(nc), gf::fmt17(rdb), "symmetry_enforced",
                            gf::fmt17(gf::q_db(q))});
        }
    }
    // comb baseline at fixed r, same number of legs 2^{nc+mu}+(1-mu)
    for (int nc = 0; nc <= a.cycles_max; ++nc) {
        int mu_q = (nc == 0) ? 1 : 0;
        gf::StateVector comb =
            (nc == 0) ? gf::comb_state(1, 0, gf::db_to_natural(a.comb_r_db), dim)
                      : gf::comb_state(0, (1 << (nc - 1)), gf::db_to_natural(a.comb_r_db), dim);
        double q = gf::q_expectation(mu_q, comb);
        rows.push_back({std::to_string(nc), gf::fmt17(a.comb_r_db), "comb",
                        gf::fmt17(gf::q_db(q))});
    }
    gf::write_table_csv(a.output, "n_cycles,r_db,family,Q_db", rows, meta);
    std::cout << "sweep-q: wrote " << a.output << "\n";
    return 0;
}

struct NoiseArgs {
    std::string kind = "chi";  // chi | loss
    int mu = 0, cycles = 3, n_max = 280, realizations = 100;
    double r_db = 7.8;
    std::vector<double> knobs;
    std::uint64_t seed = 1234;
    bool correlated = false;
    int jobs = default_jobs();
    std::string output = "noise.csv";
};

int cmd_noise(const CLI::App& app, const NoiseArgs& a) {
    if (a.kind != "chi" && a.kind != "loss")
        throw gf::config_error("noise: --kind must be chi or loss");
    gf::NoiseSweepConfig ncfg;
    ncfg.knob_values = a.knobs;
    if (ncfg.knob_values.empty())
        ncfg.knob_values = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    ncfg.n_realizations = a.realizations;
    ncfg.seed = a.seed;
    ncfg.correlated = a.correlated;
    ncfg.jobs = a.jobs;
    gf::ProtocolConfig pcfg{a.mu, a.cycles, a.r_db, gf::FockDim(a.n_max), false};
    auto stats = (a.kind == "chi") ? gf::infidelity_sweep_chi(ncfg, pcfg)
                                   : gf::infidelity_sweep_loss(ncfg, pcfg);
    auto meta = make_meta(app, a.seed);
    std::vector<std::vector<double>> rows;
    for (const auto& s : stats)
        rows.push_back({s.knob, s.mean, s.stddev, double(s.n_realizations), double(s.seed)});
    gf::write_sweep_csv(a.output, "knob,mean_infidelity,std,n_realizations,seed", rows, meta);
    std::cout << "noise(" << a.kind << "): wrote " << a.output << "\n";
    return 0;
}

struct QecArgs {
    std::string sweep = "gamma";  // gamma | legs
    std::vector<std::string> families{"phased_comb", "comb", "gaussian_gkp", "trivial"};
    std::vector<double> gammas{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    double gamma = 1e-2;
    std::vector<int> cycles_list{1, 2, 3, 4};
    int cycles = 3;
    double r_db = 7.8;
    int n_r = 500;
    int jobs = default_jobs();
    std::string output = "qec.csv";
};

int cmd_qec(const CLI::App& app, const QecArgs& a) {
    std::vector<gf::CodeFamily> fams;
    for (const auto& f : a.families) fams.push_back(gf::code_family_from_string(f));
    std::vector<gf::SweepRow> rows;
    if (a.sweep == "gamma") {
        rows = gf::qec_gamma_sweep(fams, a.gammas, a.cycles, a.r_db, a.n_r, a.jobs);
    } else if (a.sweep == "legs") {
        rows = gf::qec_legs_sweep(fams, a.cycles_list, a.gamma, a.r_db, a.n_r, a.jobs);
    } else {
        throw gf::config_error("qec: --sweep must be gamma or legs");
    }
    gf::write_qec_csv(a.output, rows, make_meta(app, 0));
    std::cout << "qec(" << a.sweep << "): wrote " << a.output << "\n";
    return 0;
}

struct HadamardArgs {
    int cycles = 2, n_max = 320;
    double r_db = 10.0;
    std::string input = "zero";  // zero | one | plus
    int outcome = -1;            // -1: both branches; else project
    std::uint64_t seed = 0;
    bool sample = false;
    std::string output = "hadamard.json";
};

int cmd_hadamard(const CLI::App& app, const HadamardArgs& a) {
    gf::FockDim dim(a.n_max);
    double r = gf::db_to_natural(a.r_db);
    auto c0 = gf::phased_comb_oracle(0, a.cycles);
    auto c1 = gf::phased_comb_oracle(1, a.cycles - 1);
    c0.r = r;
    c1.r = r;
    gf::StateVector zero = gf::realize(c0, dim);
    gf::StateVector one = gf::realize(c1, dim);
    gf::StateVector psi = zero;
    if (a.input == "one") psi = one;
    else if (a.input == "plus") {
        gf::Vec v = (zero.amps + one.amps);
        psi = gf::StateVector{dim, v / v.norm()};
    } else if (a.input != "zero") {
        throw gf::config_error("hadamard: --input must be zero|one|plus");
    }
    auto meta = make_meta(app, a.seed);
    std::ostringstream os;
    os << "{\n  \"version\": \"" << gf::kVersion << "\",\n  \"outcomes\": [\n";
    auto emit = [&](const gf::AncillaOutcome& o, bool last) {
        os << "    {\"bit\": " << o.bit << ", \"probability\": " << gf::fmt17(o.probability)
           << "}" << (last ? "\n" : ",\n");
    };
    if (a.sample) {
        auto o = gf::teleported_hadamard(psi, std::nullopt, a.seed);
        emit(o, true);
    } else if (a.outcome >= 0) {
        auto o = gf::teleported_hadamard(psi, a.outcome);
        emit(o, true);
    } else {
        auto [o0, o1] = gf::teleported_hadamard_branches(psi);
        emit(o0, false);
        emit(o1, true);
    }
    os << "  ]\n}\n";
    std::filesystem::path p(a.output);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    f << os.str();
    std::cout << "hadamard: wrote " << a.output << " (config " << std::hex << meta.config_hash
              << std::dec << ")\n";
    return 0;
}

struct WignerArgs {
    std::string state_csv;
    std::string output = "wigner.csv";
    double extent = 0.0;  // 0: auto 6 sqrt(pi)
    int grid = 301;
    int jobs = default_jobs();
};

int cmd_wigner(const CLI::App& app, const WignerArgs& a) {
    gf::StateVector psi = gf::read_state_csv(a.state_csv);
    double w = (a.extent > 0) ? a.extent : 6.0 * std::sqrt(std::numbers::pi);
    auto ax = gf::linspace(-w, w, a.grid);
    gf::write_wigner(a.output, gf::wigner(psi, ax, ax, a.jobs), make_meta(app, 0));
    std::cout << "wigner: wrote " << a.output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridforge: deterministic bosonic grid-state generation and QEC benchmarks"};
    app.set_config("--config", "", "flat key=value or JSON config file");
    app.config_formatter(std::make_shared<ConfigFlatOrJson>());

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "run a generation protocol, export state+trace");
    gen->add_option("--mu", ga.mu, "logical state (0|1)");
    gen->add_option("--cycles", ga.cycles, "protocol cycles");
    gen->add_option("--r-db", ga.r_db, "initial squeezing [dB]");
    gen->add_option("--n-max", ga.n_max, "Fock truncation n_max");
    gen->add_flag("--correction,!--no-correction", ga.correction,
                  "apply the symmetry-enforcing correction");
    gen->add_option("--output-dir", ga.output_dir, "output directory");
    gen->add_flag("--wigner", ga.wigner, "also export a Wigner grid");
    gen->add_option("--grid", ga.grid, "Wigner grid points per axis");
    gen->add_option("--jobs", ga.jobs, "worker threads");

    SweepQArgs sa;
    auto* swq = app.add_subcommand("sweep-q", "GKP squeezing vs cycles (Q in dB)");
    swq->add_option("--cycles-max", sa.cycles_max);
    swq->add_option("--n-max", sa.n_max);
    swq->add_option("--r-db", sa.r_db, "squeezing list [dB]");
    swq->add_option("--comb-r-db", sa.comb_r_db, "comb baseline squeezing [dB]");
    swq->add_option("--output", sa.output);

    NoiseArgs na;
    auto* noi = app.add_subcommand("noise", "robustness sweeps (Kerr control / boson loss)");
    noi->add_option("--kind", na.kind, "chi | loss");
    noi->add_option("--mu", na.mu);
    noi->add_option("--cycles", na.cycles);
    noi->add_option("--r-db", na.r_db);
    noi->add_option("--n-max", na.n_max);
    noi->add_option("--knobs", na.knobs, "knob values (delta-chi-max or kappa/chi)");
    noi->add_option("--realizations", na.realizations);
    noi->add_option("--seed", na.seed);
    noi->add_flag("--correlated", na.correlated, "one delta-chi per run instead of per gate");
    noi->add_option("--jobs", na.jobs);
    noi->add_option("--output", na.output);

    QecArgs qa;
    auto* qec = app.add_subcommand("qec", "near-optimal channel fidelity benchmarks");
    qec->add_option("--sweep", qa.sweep, "gamma | legs");
    qec->add_option("--families", qa.families);
    qec->add_option("--gammas", qa.gammas, "loss probabilities (gamma sweep)");
    qec->add_option("--gamma", qa.gamma, "loss probability (legs sweep)");
    qec->add_option("--cycles-list", qa.cycles_list, "cycle counts (legs sweep)");
    qec->add_option("--cycles", qa.cycles, "cycles (gamma sweep)");
    qec->add_option("--r-db", qa.r_db);
    qec->add_option("--n-r", qa.n_r, "starting truncation N_R");
    qec->add_option("--jobs", qa.jobs);
    qec->add_option("--output", qa.output);

    HadamardArgs ha;
    auto* had = app.add_subcommand("hadamard", "teleported Hadamard branches");
    had->add_option("--cycles", ha.cycles);
    had->add_option("--r-db", ha.r_db);
    had->add_option("--n-max", ha.n_max);
    had->add_option("--input", ha.input, "zero | one | plus");
    had->add_option("--outcome", ha.outcome, "project onto 0|1 (default: both)");
    had->add_flag("--sample", ha.sample, "sample the outcome with --seed");
    had->add_option("--seed", ha.seed);
    had->add_option("--output", ha.output);

    WignerArgs wa;
    auto* wig = app.add_subcommand("wigner", "Wigner grid of an exported state");
    wig->add_option("state", wa.state_csv, "state CSV path")->required();
    wig->add_option("--output", wa.output);
    wig->add_option("--extent", wa.extent, "half-width of the grid");
    wig->add_option("--grid", wa.grid);
    wig->add_option("--jobs", wa.jobs);

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
        if (*gen) return cmd_generate(app, ga);
        if (*swq) return cmd_sweep_q(app, sa);
        if (*noi) return cmd_noise(app, na);
        if (*qec) return cmd_qec(app, qa);
        if (*had) return cmd_hadamard(app, ha);
        if (*wig) return cmd_wigner(app, wa);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return (code == 0) ? 0 : 2;
    } catch (const gf::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gf::truncation_error& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return 3;
    } catch (const gf::numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const gf::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

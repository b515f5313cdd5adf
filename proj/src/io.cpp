#include "gridforge/io.hpp"

#include "gridforge/gates.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gridforge {

const char* kVersion = "0.1.0";

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw config_error("cannot open output file: " + p.string());
    return f;
}

void meta_lines(std::ofstream& f, const Metadata& m) {
    f << "# gridforge " << kVersion << " config=" << std::hex << m.config_hash << std::dec
      << " seed=" << m.seed << "\n";
}

}  // namespace

void write_state_csv(const std::filesystem::path& p, const StateVector& psi, double r_db,
                     const Metadata& meta) {
    auto f = open_out(p);
    meta_lines(f, meta);
    f << "# n_max=" << psi.dim.n_max << " r_db=" << fmt17(r_db) << "\n";
    f << "re,im\n";
    for (int n = 0; n <= psi.dim.n_max; ++n)
        f << fmt17(psi.amps[n].real()) << "," << fmt17(psi.amps[n].imag()) << "\n";
}

StateVector read_state_csv(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw config_error("cannot open state file: " + p.string());
    std::string line;
    std::vector<cxd> amps;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'r') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw config_error("state csv: malformed row");
        amps.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    if (amps.size() < 2) throw config_error("state csv: too few rows");
    Vec v(long(amps.size()));
    for (size_t i = 0; i < amps.size(); ++i) v[long(i)] = amps[i];
    return {FockDim(int(amps.size()) - 1), std::move(v)};
}

void write_trace_json(const std::filesystem::path& p, const ProtocolConfig& cfg,
                      const ProtocolTrace& trace, const Metadata& meta,
                      const std::vector<std::pair<std::string, double>>& extras) {
    json j;
    j["version"] = kVersion;
    j["config_hash"] = meta.config_hash;
    j["seed"] = meta.seed;
    j["mu"] = cfg.mu;
    j["n_cycles"] = cfg.n_cycles;
    j["r_db"] = cfg.r_db;
    j["n_max"] = cfg.dim.n_max;
    j["correction"] = cfg.correction;
    j["beta"] = trace.beta;
    j["q_mu"] = trace.q_mu;
    j["leakage"] = trace.leakage;
    j["failed"] = trace.failed;
    for (const auto& [k, v] : extras) j[k] = v;
    auto f = open_out(p);
    f << j.dump(2) << "\n";
}

std::string comb_to_json(const CombDescription& comb) {
    json j;
    j["mu"] = comb.mu;
    j["r_db"] = natural_to_db(comb.r);
    j["legs"] = json::array();
    for (const auto& l : comb.legs)
        j["legs"].push_back({{"x", l.x}, {"re", l.coeff.real()}, {"im", l.coeff.imag()}});
    return j.dump(2);
}

CombDescription comb_from_json(const std::string& text) {
    json j = json::parse(text);
    CombDescription c;
    c.mu = j.at("mu").get<int>();
    c.r = db_to_natural(j.at("r_db").get<double>());
    for (const auto& l : j.at("legs"))
        c.legs.push_back({l.at("x").get<double>(),
                          cxd(l.at("re").get<double>(), l.at("im").get<double>())});
    return c;
}

void write_wigner(const std::filesystem::path& csv_path, const WignerGrid& grid,
                  const Metadata& meta) {
    auto f = open_out(csv_path);
    meta_lines(f, meta);
    f << "# rows: x index, cols: p index\n";
    for (long i = 0; i < grid.values.rows(); ++i) {
        for (long j = 0; j < grid.values.cols(); ++j) {
            if (j) f << ",";
            f << fmt17(grid.values(i, j));
        }
        f << "\n";
    }
    json ax;
    ax["version"] = kVersion;
    ax["x_axis"] = grid.x_axis;
    ax["p_axis"] = grid.p_axis;
    auto sidecar = csv_path;
    sidecar.replace_extension(".axes.json");
    auto g = open_out(sidecar);
    g << ax.dump(2) << "\n";
}

void write_sweep_csv(const std::filesystem::path& p, const std::string& header,
                     const std::vector<std::vector<double>>& rows, const Metadata& meta) {
    auto f = open_out(p);
    meta_lines(f, meta);
    f << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) f << ",";
            f << fmt17(row[i]);
        }
        f << "\n";
    }
}

void write_table_csv(const std::filesystem::path& p, const std::string& header,
                     const std::vector<std::vector<std::string>>& rows, const Metadata& meta) {
    auto f = open_out(p);
    meta_lines(f, meta);
    f << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) f << ",";
            f << row[i];
        }
        f << "\n";
    }
}

void write_qec_csv(const std::filesystem::path& p, const std::vector<SweepRow>& rows,
                   const Metadata& meta) {
    auto f = open_out(p);
    meta_lines(f, meta);
    f << "family,gamma,legs,r_db,N_R,ell,F_e,I_e,conditioning\n";
    for (const auto& r : rows)
        f << r.family << "," << fmt17(r.gamma) << "," << r.legs << "," << fmt17(r.r_db) << ","
          << r.n_r << "," << r.ell << "," << fmt17(r.f_e) << "," << fmt17(r.i_e) << ","
          << fmt17(r.conditioning) << "\n";
}

void write_marginal_csv(const std::filesystem::path& p, const std::vector<double>& axis,
                        const std::vector<double>& values, const Metadata& meta) {
    auto f = open_out(p);
    meta_lines(f, meta);
    f << "x,value\n";
    for (size_t i = 0; i < axis.size(); ++i)
        f << fmt17(axis[i]) << "," << fmt17(values[i]) << "\n";
}

}  // namespace gridforge

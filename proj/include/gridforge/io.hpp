#pragma once

#include "gridforge/fock.hpp"
#include "gridforge/gridstates.hpp"
#include "gridforge/metrics.hpp"
#include "gridforge/noise.hpp"
#include "gridforge/protocols.hpp"
#include "gridforge/qec.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gridforge {

extern const char* kVersion;

struct Metadata {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

std::uint64_t fnv1a64(const std::string& s);
std::string fmt17(double v);

// Two-column CSV (re, im) with '#' metadata lines carrying dim and r_db.
void write_state_csv(const std::filesystem::path& p, const StateVector& psi, double r_db,
                     const Metadata& meta);
StateVector read_state_csv(const std::filesystem::path& p);

void write_trace_json(const std::filesystem::path& p, const ProtocolConfig& cfg,
                      const ProtocolTrace& trace, const Metadata& meta,
                      const std::vector<std::pair<std::string, double>>& extras = {});

std::string comb_to_json(const CombDescription& comb);
CombDescription comb_from_json(const std::string& text);

// Wigner matrix CSV plus sidecar JSON for the axes.
void write_wigner(const std::filesystem::path& csv_path, const WignerGrid& grid,
                  const Metadata& meta);

// Generic sweep CSV: '#' metadata, then a header row and data rows.
void write_sweep_csv(const std::filesystem::path& p, const std::string& header,
                     const std::vector<std::vector<double>>& rows, const Metadata& meta);
void write_table_csv(const std::filesystem::path& p, const std::string& header,
                     const std::vector<std::vector<std::string>>& rows, const Metadata& meta);

void write_qec_csv(const std::filesystem::path& p, const std::vector<SweepRow>& rows,
                   const Metadata& meta);

void write_marginal_csv(const std::filesystem::path& p, const std::vector<double>& axis,
                        const std::vector<double>& values, const Metadata& meta);

}  // namespace gridforge

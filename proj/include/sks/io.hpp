#pragma once

// CSV and JSON serialization of trajectories, reports and ledgers.

#include "sks/config.hpp"
#include "sks/constants.hpp"
#include "sks/estimates.hpp"
#include "sks/mild_solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace sks::io {

/// Column header of the per-path norm series.
inline constexpr const char* norm_csv_header = "t,norm_H,norm_V,norm_L4,wa_norm_H,wa_norm_L4,bound_H,bound_V";

/// 17 significant digits ("%.17g"); round-trips every double.
std::string format_number(double v);

void write_norm_csv(std::ostream& out, const Trajectory& traj, const DomainSpec& dom, const EnergyBounds& bounds);

/// t followed by the N sine coefficients of u.
void write_snapshot_csv(std::ostream& out, const Trajectory& traj);

nlohmann::json to_json(const CheckReport& r);
nlohmann::json to_json(const ConstantsLedger& ledger);
ConstantsLedger ledger_from_json(const nlohmann::json& j);

/// Writes text to `path`, throwing std::runtime_error when it cannot be opened.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sks::io

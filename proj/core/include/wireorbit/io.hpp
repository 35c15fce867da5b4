#pragma once
#include "wireorbit/integrate.hpp"
#include "wireorbit/melnikov.hpp"
#include "wireorbit/model.hpp"
#include "wireorbit/orbitfinder.hpp"
#include "wireorbit/periodmap.hpp"
#include "wireorbit/potential.hpp"
#include "wireorbit/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>

namespace wireorbit::io {

/// Lossless float formatting (17 significant digits).
std::string format_float(double v);

/// Writes via a temp file + rename so readers never see partial output.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

std::string period_table_csv(const PeriodMapTable& table);
std::string potential_grid_csv(std::span<const PotentialSample> samples);
std::string trajectory_csv(const OrbitSample& orbit);
std::string full_motion_csv(std::span<const FullMotionSample> samples);
std::string catalogue_summary_csv(std::span<const ResonanceScan> scans);

nlohmann::json melnikov_json(const MelnikovResult& result);
nlohmann::json orbit_record_json(const OrbitRecord& record);
nlohmann::json catalogue_json(std::span<const ResonanceScan> scans);
nlohmann::json sign_reports_json(std::span<const SignReport> reports);

}  // namespace wireorbit::io

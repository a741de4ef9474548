#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qnls/diagnostics.hpp"
#include "qnls/oracle.hpp"
#include "qnls/solver.hpp"

namespace qnls {

/// Bumped whenever a field of report.json changes meaning.
inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const PohozaevResidual& r);
nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const CondPoho& c);
nlohmann::json to_json(const DecayFit& f);
nlohmann::json to_json(const CoercivityConstant& c);

/// "# r u" header, then one "r u" pair per line at full precision.
std::string profile_text(const Field& u);
/// "iteration,energy,J,weak_residual,tangent_residual".
std::string history_csv(const SolveReport& r);

void write_text(const std::filesystem::path& path, const std::string& text);
/// Pretty-printed with sorted keys, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace qnls

#pragma once

#include "sdt/harness/scenario.hpp"

namespace sdt::harness {

enum class ReportFormat { Csv, Json };

/// CSV: one metrics row per trial under the header
///   scenario_id,method,sdf_kind,s_grad,mj,rfc,vm,dtwd,d_min,t_step_ms,t_flow_ms,t_jac_ms
/// JSON: lossless serialization including trajectories and the event log.
void export_report(const ScenarioReport& report, const std::filesystem::path& path, ReportFormat format);

ScenarioReport import_report(const std::filesystem::path& path);  // JSON only

nlohmann::json report_to_json(const ScenarioReport& report);
ScenarioReport report_from_json(const nlohmann::json& j);

std::string report_csv(const ScenarioReport& report);

/// Structural validation against the subset of JSON Schema shipped in
/// schemas/report.schema.json (type / required / properties / items).
bool validate_json(const nlohmann::json& value, const nlohmann::json& schema, std::string* error = nullptr);

}  // namespace sdt::harness

#include "sdt/harness/report.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sdt::harness {

namespace {

nlohmann::json num_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double num_of(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    row.push_back(traj.times[i]);
    for (Eigen::Index k = 0; k < traj.states[i].size(); ++k) row.push_back(traj.states[i][k]);
    rows.push_back(std::move(row));
  }
  return rows;
}

Trajectory trajectory_of(const nlohmann::json& rows) {
  Trajectory traj;
  for (const auto& row : rows) {
    StateVec x(static_cast<Eigen::Index>(row.size()) - 1);
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = row.at(static_cast<std::size_t>(k) + 1).get<double>();
    traj.push_back(row.at(0).get<double>(), std::move(x));
  }
  return traj;
}

}  // namespace

nlohmann::json report_to_json(const ScenarioReport& report) {
  nlohmann::json j;
  j["schema_version"] = report.schema_version;
  j["scenario_id"] = report.scenario_id;
  j["method"] = report.method;
  j["sdf_kind"] = report.sdf_kind;
  j["s_grad"] = report.s_grad;
  j["trials"] = nlohmann::json::array();
  for (const auto& tr : report.trials) {
    nlohmann::json tj;
    tj["trial"] = tr.trial;
    tj["failed"] = tr.failed;
    tj["events"] = tr.events;
    tj["metrics"] = {{"mj", num_or_null(tr.metrics.mj)},   {"rfc", num_or_null(tr.metrics.rfc)},
                     {"vm", num_or_null(tr.metrics.vm)},   {"dtwd", num_or_null(tr.metrics.dtwd)},
                     {"d_min", num_or_null(tr.metrics.d_min)}};
    tj["timing_ms"] = {{"t_step", tr.t_step_ms}, {"t_flow", tr.t_flow_ms}, {"t_jac", tr.t_jac_ms}};
    tj["obstacle"] = tr.obstacle;
    tj["base_trajectory"] = trajectory_json(tr.base);
    tj["modulated_trajectory"] = trajectory_json(tr.modulated);
    j["trials"].push_back(std::move(tj));
  }
  return j;
}

ScenarioReport report_from_json(const nlohmann::json& j) {
  ScenarioReport report;
  report.schema_version = j.at("schema_version").get<int>();
  report.scenario_id = j.at("scenario_id").get<std::string>();
  report.method = j.at("method").get<std::string>();
  report.sdf_kind = j.at("sdf_kind").get<std::string>();
  report.s_grad = j.at("s_grad").get<double>();
  for (const auto& tj : j.at("trials")) {
    TrialResult tr;
    tr.trial = tj.at("trial").get<int>();
    tr.failed = tj.at("failed").get<bool>();
    tr.events = tj.at("events").get<std::vector<std::string>>();
    const auto& m = tj.at("metrics");
    tr.metrics.mj = num_of(m.at("mj"));
    tr.metrics.rfc = num_of(m.at("rfc"));
    tr.metrics.vm = num_of(m.at("vm"));
    tr.metrics.dtwd = num_of(m.at("dtwd"));
    tr.metrics.d_min = num_of(m.at("d_min"));
    const auto& t = tj.at("timing_ms");
    tr.t_step_ms = t.at("t_step").get<double>();
    tr.t_flow_ms = t.at("t_flow").get<double>();
    tr.t_jac_ms = t.at("t_jac").get<double>();
    tr.obstacle = tj.at("obstacle");
    tr.base = trajectory_of(tj.at("base_trajectory"));
    tr.modulated = trajectory_of(tj.at("modulated_trajectory"));
    report.trials.push_back(std::move(tr));
  }
  return report;
}

std::string report_csv(const ScenarioReport& report) {
  std::ostringstream os;
  os << "scenario_id,method,sdf_kind,s_grad,mj,rfc,vm,dtwd,d_min,t_step_ms,t_flow_ms,t_jac_ms\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  for (const auto& tr : report.trials) {
    os << report.scenario_id << "," << report.method << "," << report.sdf_kind << ",";
    put(report.s_grad);
    for (double v : {tr.metrics.mj, tr.metrics.rfc, tr.metrics.vm, tr.metrics.dtwd, tr.metrics.d_min,
                     tr.t_step_ms, tr.t_flow_ms, tr.t_jac_ms}) {
      os << ",";
      put(v);
    }
    os << "\n";
  }
  return os.str();
}

void export_report(const ScenarioReport& report, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  if (format == ReportFormat::Csv) {
    os << report_csv(report);
  } else {
    os << report_to_json(report).dump(2);
  }
}

ScenarioReport import_report(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  nlohmann::json j;
  is >> j;
  return report_from_json(j);
}

bool validate_json(const nlohmann::json& value, const nlohmann::json& schema, std::string* error) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };

  if (schema.contains("type")) {
    const auto type = schema.at("type").get<std::string>();
    const bool ok = (type == "object" && value.is_object()) || (type == "array" && value.is_array()) ||
                    (type == "string" && value.is_string()) ||
                    (type == "number" && (value.is_number() || value.is_null())) ||
                    (type == "integer" && value.is_number_integer()) ||
                    (type == "boolean" && value.is_boolean());
    if (!ok) return fail("expected type " + type + ", got " + std::string(value.type_name()));
  }
  if (schema.contains("required")) {
    for (const auto& key : schema.at("required")) {
      if (!value.contains(key.get<std::string>())) return fail("missing required key " + key.get<std::string>());
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema.at("properties").items()) {
      if (!value.contains(key)) continue;
      std::string suberr;
      if (!validate_json(value.at(key), sub, &suberr)) return fail(key + ": " + suberr);
    }
  }
  if (schema.contains("items") && value.is_array()) {
    for (const auto& item : value) {
      std::string suberr;
      if (!validate_json(item, schema.at("items"), &suberr)) return fail("item: " + suberr);
    }
  }
  return true;
}

}  // namespace sdt::harness

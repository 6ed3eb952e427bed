#pragma once

#include "sdt/sdf/field.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>

namespace sdt::sdf {

/// JSON representation of analytic primitives, unions, and trained fields
/// (MLP checkpoint or Bernstein coefficient tensor with degree and bounds).
nlohmann::json field_to_json(const SdfField& field);
FieldPtr field_from_json(const nlohmann::json& j);

void save_field(const SdfField& field, const std::filesystem::path& path);
FieldPtr load_field(const std::filesystem::path& path);

}  // namespace sdt::sdf

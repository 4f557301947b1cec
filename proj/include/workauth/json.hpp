#pragma once

#include <json.hpp>

#include "workauth/model.hpp"
#include "workauth/taxonomy.hpp"
#include "workauth/validate.hpp"

namespace workauth {

/// JSON view of a record served by the API and written by `convert --to json`.
nlohmann::json to_json(const WorkRecord& record);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const SubjectNode& node);

}  // namespace workauth

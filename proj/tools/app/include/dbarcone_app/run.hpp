#pragma once

#include <string>

#include "dbarcone_app/config.hpp"
#include "json.hpp"

namespace dbarcone::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::json report;
};

/// Executes the job. Operation errors become an "error" record in the report
/// and exit code 2. Under `reproducible` the report carries no timestamp or
/// timing fields, so equal configs give byte-identical output.
RunOutcome run(const RunConfig& config, bool reproducible);

/// Report text in "json" or "csv" (the tabular "rows" section).
std::string render(const nlohmann::json& report, const std::string& format);

/// Config as a JSON object, for report provenance.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace dbarcone::app

#pragma once

// File formats: dataset CSV with a schema JSON sidecar, WorkflowReport JSON,
// and the workflow configuration.

#include <string>
#include <vector>

#include "json.hpp"
#include "rhet/datagen.hpp"
#include "rhet/workflow.hpp"

namespace rhet::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to the same double; "nan" / "inf"
/// for non-finite values.
std::string format_double(double v);
double parse_double(const std::string& text, const std::string& what);

std::string read_file(const std::string& path);
/// Writes through a temporary file and renames it into place.
void write_file(const std::string& path, const std::string& content);
Json parse_json(const std::string& text, const std::string& what);

/// Header X1..Xp,Z,Y,Region; binary and categorical covariates as level labels.
std::string dataset_csv(const datagen::TrialDataset& dataset);
Json schema_to_json(const datagen::TrialDataset& dataset);

struct SchemaFile {
  datagen::CovariateSchema schema;
  std::vector<std::string> analysis_mask;
};
SchemaFile schema_from_json(const Json& j);

/// Columns are matched by header name; the schema fixes each column's type.
datagen::TrialDataset parse_dataset_csv(const std::string& text, const SchemaFile& schema);

void write_dataset(const datagen::TrialDataset& dataset, const std::string& csv_path, const std::string& schema_path);
datagen::TrialDataset read_dataset(const std::string& csv_path, const std::string& schema_path);

Json config_to_json(const workflow::WorkflowConfig& config);
/// Fields present in `j` override `base`; unknown keys are a ConfigError.
workflow::WorkflowConfig config_from_json(const Json& j, workflow::WorkflowConfig base = {});

Json ranking_to_json(const forest::ImportanceRanking& r);
forest::ImportanceRanking ranking_from_json(const Json& j);
Json display_to_json(const workflow::Q4Display& d);
workflow::Q4Display display_from_json(const Json& j);

Json report_to_json(const workflow::WorkflowReport& report);
/// Reads back everything except the fitted pseudo-outcome plan details.
workflow::WorkflowReport report_from_json(const Json& j);

}  // namespace rhet::io

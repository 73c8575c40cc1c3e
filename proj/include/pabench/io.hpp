#pragma once

#include "pabench/bench.hpp"
#include "pabench/datagen.hpp"
#include "pabench/hcluster.hpp"
#include "pabench/mcluster.hpp"
#include "pabench/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace pabench {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

// Dataset: `species_id,true_cluster,cell_1..cell_m`, plus the area sidecar
// `cell_id,area_cluster`.
void write_dataset_csv(std::ostream& out, const GeneratedDataset& dataset);
void write_cell_areas_csv(std::ostream& out, const GeneratedDataset& dataset);

void write_distance_csv(std::ostream& out, const DistanceMatrix& D);
/// `point_id,x1..xp`
void write_embedding_csv(std::ostream& out, const Embedding<double>& embedding);
/// `step,left,right,height`
void write_dendrogram_csv(std::ostream& out, const Dendrogram& dendrogram);

/// `scenario,replicate,method,ari,n_clusters_found,runtime_ms,seed,error`.
/// With `with_runtime` false the runtime column is written as 0 so that
/// identical runs give identical bytes.
void write_results_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records, bool with_runtime);
std::vector<BenchmarkRecord> read_results_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const std::vector<GroupKey>& keys, const std::vector<SummaryRow>& rows);

nlohmann::json to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HarnessOptions& options);
/// Missing fields keep their defaults.
HarnessOptions harness_options_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LcaModel& model);
nlohmann::json to_json(const GmmModel<double>& model);

/// Harness config file: {"scenarios": [...], "options": {...}}; both
/// members optional.
struct ConfigFile {
  std::vector<ScenarioConfig> scenarios;
  HarnessOptions options;
};
ConfigFile read_config_file(const std::string& path);

}  // namespace pabench

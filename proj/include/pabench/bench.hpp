#pragma once

#include "pabench/datagen.hpp"
#include "pabench/hcluster.hpp"
#include "pabench/mcluster.hpp"
#include "pabench/mds.hpp"
#include "pabench/pcluster.hpp"
#include "pabench/rng.hpp"
#include "pabench/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pabench {

enum class Method {
  single, complete, average, pam, kmodes, lca,
  kc2, ks2, kc3, ks3,
  gc2, gs2, gc3, gs3,
  pdfc2, pdfs2, pdfc3, pdfs3,
};

inline constexpr std::array<Method, 18> kAllMethods{
    Method::single, Method::complete, Method::average, Method::pam,   Method::kmodes, Method::lca,
    Method::kc2,    Method::ks2,      Method::kc3,     Method::ks3,   Method::gc2,    Method::gs2,
    Method::gc3,    Method::gs3,      Method::pdfc2,   Method::pdfs2, Method::pdfc3,  Method::pdfs3};

std::string_view method_name(Method method);
/// Throws std::invalid_argument for an unknown id.
Method parse_method(std::string_view name);

enum class MdsKind { classical, ratio };

/// How an MDS-based id decomposes: clusterer letter, MDS kind, dimension.
struct MdsPipeline {
  char clusterer;  // 'k', 'g' or 'p'
  MdsKind kind;
  Index dim;
};
std::optional<MdsPipeline> mds_pipeline(Method method);

/// Tuning knobs shared by all runs of a benchmark.
struct HarnessOptions {
  KMeansOptions kmeans{100, 100};
  Index kmodes_starts = 10;
  LcaOptions lca{};
  GmmOptions gmm{};
  SmacofOptions smacof{};
  double bandwidth_scale = 1.0;
};

/// Per-dataset cache: the Jaccard matrix and the four embeddings are built
/// on first use and shared by every method that needs them.
class DatasetContext {
 public:
  explicit DatasetContext(const GeneratedDataset& dataset, const HarnessOptions& options = {})
      : dataset_(dataset), options_(options) {}

  const GeneratedDataset& dataset() const { return dataset_; }
  const DistanceMatrix& jaccard();
  const Embedding<double>& embedding(MdsKind kind, Index dim);

 private:
  const GeneratedDataset& dataset_;
  HarnessOptions options_;
  std::optional<DistanceMatrix> jaccard_;
  std::optional<Embedding<double>> classical3_;
  std::array<std::optional<Embedding<double>>, 4> embeddings_;  // c2, c3, s2, s3
};

struct MethodOutcome {
  Labels labels;
  Index n_clusters_found = 0;
};

/// Routes a method id to its pipeline. K is passed to every clusterer
/// except the density ones, which report how many clusters they found.
MethodOutcome run_method(Method method, DatasetContext& context, Index k, Rng& rng,
                         const HarnessOptions& options = {});
MethodOutcome run_method(Method method, const GeneratedDataset& dataset, Index k, Rng& rng,
                         const HarnessOptions& options = {});

struct BenchmarkRecord {
  int scenario_id = 0;
  int replicate = 0;
  Method method = Method::single;
  double ari = 0.0;  // NaN when the method failed
  Index n_clusters_found = 0;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success
};

struct BenchmarkPlan {
  std::vector<ScenarioConfig> scenarios;
  int replicates = 1;
  std::vector<Method> methods;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  HarnessOptions options{};
};

/// Stream seed of the dataset for (scenario, replicate).
std::uint64_t dataset_seed(std::uint64_t master_seed, int scenario_id, int replicate);
/// Stream seed of one method run on that dataset.
std::uint64_t method_seed(std::uint64_t master_seed, int scenario_id, int replicate, Method method);

/// Runs every method on every (scenario, replicate) dataset. Records come
/// back sorted by (scenario, replicate, method) regardless of threading.
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkPlan& plan);

enum class GroupKey { method, omega, us_presence, sizes, areas };
GroupKey parse_group_key(std::string_view name);
std::string_view group_key_name(GroupKey key);

struct SummaryRow {
  std::vector<std::string> group;  // one value per key
  double mean_ari = 0.0;
  double sd_ari = 0.0;  // sample standard deviation, 0 for a single record
  Index count = 0;      // records with a finite ARI
  Index n_failed = 0;
};

/// Mean and SD of ARI per group. Scenario properties are looked up in
/// `scenarios` (the canonical table by default).
std::vector<SummaryRow> summarize(const std::vector<BenchmarkRecord>& records, const std::vector<GroupKey>& keys,
                                  const std::vector<ScenarioConfig>& scenarios = scenario_table());

struct CutAnalysisRow {
  Linkage linkage;
  Index true_k;
  double ari_at_true_k;
  double best_ari;
  Index best_k;
};

/// ARI at the true K and at the best possible cut, per linkage, for the
/// dataset of (scenario, replicate).
std::vector<CutAnalysisRow> cut_analysis(const ScenarioConfig& config, std::uint64_t master_seed, int replicate = 1);

std::string_view linkage_name(Linkage linkage);

}  // namespace pabench

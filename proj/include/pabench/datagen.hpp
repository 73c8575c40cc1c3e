#pragma once

#include "pabench/rng.hpp"
#include "pabench/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace pabench {

/// One cell of the simulation design.
struct ScenarioConfig {
  int scenario_id = 0;
  double omega = 0.05;  // p_out / p_in
  int n_proper_clusters = 3;
  bool has_universal_spreaders = false;
  // One entry per proper cluster, then one for the universal spreaders.
  std::vector<Index> cluster_sizes;
  // One entry per proper cluster.
  std::vector<Index> area_sizes;
  Index m = 60;

  Index n() const;
  /// Number of true clusters, counting the universal spreaders.
  int n_clusters() const { return n_proper_clusters + (has_universal_spreaders ? 1 : 0); }
  bool equal_sizes() const;
  bool equal_areas() const;

  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

struct GeneratedDataset {
  BinaryMatrix data;
  Labels species_labels;  // universal spreaders carry label n_proper_clusters + 1
  Labels cell_labels;     // area cluster per cell, 0 for cells outside every area
  Eigen::VectorXi ranges;
};

struct StepProbabilities {
  double inside;
  double outside;
};

/// Per-cell draw probabilities for one step of the proper-species walk:
/// outside = omega * inside and the free cells carry unit mass. When one
/// region has no free cells the other one gets all the mass uniformly and
/// the empty side is reported as zero.
StepProbabilities solve_step_probabilities(double omega, Index n_in_free, Index n_out_free);

/// Draws a 0-based category index from probability vector p.
Index draw_categorical(const Eigen::Ref<const Eigen::VectorXd>& p, Rng& rng);

/// One species of proper cluster `cluster_id`. Its range is uniform on
/// 1..|area| and cells are drawn one at a time without replacement.
BinaryVector generate_proper_species(int cluster_id, const Labels& cell_labels, double omega, Rng& rng);

/// One universal spreader: range uniform on max_area..m, cells a uniformly
/// random subset of that size.
BinaryVector generate_universal_spreader(Index m, Index max_area, Rng& rng);

/// Contiguous area blocks: cells 1..a1 belong to cluster 1 and so on.
Labels area_layout(const std::vector<Index>& area_sizes, Index m);

GeneratedDataset generate_dataset(const ScenarioConfig& config, Rng& rng);

/// The 24 canonical scenarios, ids 1..24.
const std::vector<ScenarioConfig>& scenario_table();

/// Canonical scenario by id; throws std::out_of_range.
const ScenarioConfig& scenario(int id);

}  // namespace pabench

#include "pabench/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pabench {

Index ScenarioConfig::n() const {
  return std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), Index{0});
}

bool ScenarioConfig::equal_sizes() const {
  return std::adjacent_find(cluster_sizes.begin(), cluster_sizes.end(), std::not_equal_to<>()) ==
         cluster_sizes.end();
}

bool ScenarioConfig::equal_areas() const {
  return std::adjacent_find(area_sizes.begin(), area_sizes.end(), std::not_equal_to<>()) ==
         area_sizes.end();
}

void ScenarioConfig::validate() const {
  if (!(omega > 0.0 && omega <= 1.0))
    throw std::invalid_argument("scenario: omega must lie in (0, 1]");
  if (n_proper_clusters < 1) throw std::invalid_argument("scenario: need at least one proper cluster");
  if (m < 1) throw std::invalid_argument("scenario: m must be positive");
  if (static_cast<int>(cluster_sizes.size()) != n_clusters())
    throw std::invalid_argument("scenario: cluster_sizes must have one entry per cluster");
  if (static_cast<int>(area_sizes.size()) != n_proper_clusters)
    throw std::invalid_argument("scenario: area_sizes must have one entry per proper cluster");
  for (auto s : cluster_sizes)
    if (s < 1) throw std::invalid_argument("scenario: cluster sizes must be positive");
  for (auto a : area_sizes)
    if (a < 1) throw std::invalid_argument("scenario: area sizes must be positive");
  if (std::accumulate(area_sizes.begin(), area_sizes.end(), Index{0}) > m)
    throw std::invalid_argument("scenario: areas exceed the number of cells");
}

StepProbabilities solve_step_probabilities(double omega, Index n_in_free, Index n_out_free) {
  if (!(omega > 0.0 && omega <= 1.0)) throw std::invalid_argument("omega must lie in (0, 1]");
  if (n_in_free < 0 || n_out_free < 0) throw std::invalid_argument("negative free-cell count");
  if (n_in_free + n_out_free == 0) throw std::domain_error("no cells remaining");
  if (n_in_free == 0) return {0.0, 1.0 / static_cast<double>(n_out_free)};
  if (n_out_free == 0) return {1.0 / static_cast<double>(n_in_free), 0.0};
  const double inside = 1.0 / (static_cast<double>(n_in_free) + omega * static_cast<double>(n_out_free));
  return {inside, omega * inside};
}

Index draw_categorical(const Eigen::Ref<const Eigen::VectorXd>& p, Rng& rng) {
  if (p.size() == 0) throw std::invalid_argument("draw_categorical: empty probability vector");
  if ((p.array() < 0.0).any() || !p.allFinite())
    throw std::invalid_argument("draw_categorical: negative or non-finite probability");
  const double total = p.sum();
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("draw_categorical: probabilities do not sum to one");

  const double u = rng.uniform() * total;
  double acc = 0.0;
  Index last_positive = -1;
  for (Index j = 0; j < p.size(); ++j) {
    if (p[j] <= 0.0) continue;
    acc += p[j];
    last_positive = j;
    if (u < acc) return j;
  }
  // Only reachable through round-off in the running sum.
  return last_positive;
}

BinaryVector generate_proper_species(int cluster_id, const Labels& cell_labels, double omega, Rng& rng) {
  const Index m = cell_labels.size();
  const Index area = (cell_labels.array() == cluster_id).count();
  if (area == 0) throw std::invalid_argument("cluster " + std::to_string(cluster_id) + " has an empty area");

  const auto range = rng.uniform_int(1, area);
  BinaryVector x = BinaryVector::Zero(m);
  Eigen::VectorXd p(m);
  Index in_free = area;
  Index out_free = m - area;
  for (std::int64_t t = 0; t < range; ++t) {
    const auto step = solve_step_probabilities(omega, in_free, out_free);
    for (Index j = 0; j < m; ++j)
      p[j] = x[j] ? 0.0 : (cell_labels[j] == cluster_id ? step.inside : step.outside);
    const Index j = draw_categorical(p, rng);
    x[j] = 1;
    if (cell_labels[j] == cluster_id)
      --in_free;
    else
      --out_free;
  }
  return x;
}

BinaryVector generate_universal_spreader(Index m, Index max_area, Rng& rng) {
  if (max_area < 1 || max_area > m)
    throw std::invalid_argument("universal spreader: need 1 <= max_area <= m");
  const auto range = rng.uniform_int(max_area, m);
  // Sequential uniform draws among the still-empty cells.
  std::vector<Index> free(static_cast<std::size_t>(m));
  std::iota(free.begin(), free.end(), Index{0});
  BinaryVector x = BinaryVector::Zero(m);
  for (std::int64_t t = 0; t < range; ++t) {
    const auto k = rng.below(free.size());
    x[free[k]] = 1;
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return x;
}

Labels area_layout(const std::vector<Index>& area_sizes, Index m) {
  Labels d = Labels::Zero(m);
  Index j = 0;
  for (std::size_t k = 0; k < area_sizes.size(); ++k) {
    if (j + area_sizes[k] > m) throw std::invalid_argument("areas exceed the number of cells");
    d.segment(j, area_sizes[k]).setConstant(static_cast<int>(k) + 1);
    j += area_sizes[k];
  }
  return d;
}

GeneratedDataset generate_dataset(const ScenarioConfig& config, Rng& rng) {
  config.validate();
  GeneratedDataset out;
  const Index n = config.n();
  out.cell_labels = area_layout(config.area_sizes, config.m);
  out.data.resize(n, config.m);
  out.species_labels.resize(n);
  out.ranges.resize(n);

  const Index widest = *std::max_element(config.area_sizes.begin(), config.area_sizes.end());
  Index row = 0;
  for (int k = 0; k < config.n_clusters(); ++k) {
    const bool spreader = config.has_universal_spreaders && k == config.n_proper_clusters;
    for (Index s = 0; s < config.cluster_sizes[static_cast<std::size_t>(k)]; ++s, ++row) {
      BinaryVector x = spreader ? generate_universal_spreader(config.m, widest, rng)
                                : generate_proper_species(k + 1, out.cell_labels, config.omega, rng);
      out.data.row(row) = x.transpose();
      out.species_labels[row] = k + 1;
      out.ranges[row] = static_cast<int>(x.cast<int>().sum());
    }
  }
  return out;
}

namespace {

std::vector<ScenarioConfig> build_table() {
  // Ids 1..12 use equal areas, 13..24 unequal; within each half the
  // pattern cycles omega fastest, then spreaders, then sizes.
  const double omegas[] = {0.05, 0.20, 0.40};
  std::vector<ScenarioConfig> table;
  int id = 1;
  for (bool equal_areas : {true, false}) {
    for (bool equal_sizes : {true, false}) {
      for (bool spreaders : {false, true}) {
        for (double omega : omegas) {
          ScenarioConfig c;
          c.scenario_id = id++;
          c.omega = omega;
          c.n_proper_clusters = 3;
          c.has_universal_spreaders = spreaders;
          c.cluster_sizes = equal_sizes ? std::vector<Index>{100, 100, 100} : std::vector<Index>{50, 100, 150};
          if (spreaders) c.cluster_sizes.push_back(100);
          c.area_sizes = equal_areas ? std::vector<Index>{20, 20, 20} : std::vector<Index>{10, 20, 30};
          c.m = 60;
          table.push_back(std::move(c));
        }
      }
    }
  }
  return table;
}

}  // namespace

const std::vector<ScenarioConfig>& scenario_table() {
  static const std::vector<ScenarioConfig> table = build_table();
  return table;
}

const ScenarioConfig& scenario(int id) {
  const auto& t = scenario_table();
  if (id < 1 || id > static_cast<int>(t.size()))
    throw std::out_of_range("scenario id must be in 1.." + std::to_string(t.size()));
  return t[static_cast<std::size_t>(id - 1)];
}

}  // namespace pabench

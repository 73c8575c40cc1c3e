#include "pabench/bench.hpp"

#include "pabench/dcluster.hpp"
#include "pabench/dist.hpp"
#include "pabench/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace pabench {

namespace {

constexpr std::array<std::string_view, 18> kMethodNames{
    "single", "complete", "average", "pam", "kmodes", "lca", "kc2",   "ks2",   "kc3",
    "ks3",    "gc2",      "gs2",     "gc3", "gs3",    "pdfc2", "pdfs2", "pdfc3", "pdfs3"};

std::size_t embedding_slot(MdsKind kind, Index dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("embedding dimension must be 2 or 3");
  return (kind == MdsKind::classical ? 0 : 2) + static_cast<std::size_t>(dim - 2);
}

}  // namespace

std::string_view method_name(Method method) { return kMethodNames[static_cast<std::size_t>(method)]; }

Method parse_method(std::string_view name) {
  for (std::size_t i = 0; i < kMethodNames.size(); ++i)
    if (kMethodNames[i] == name) return static_cast<Method>(i);
  throw std::invalid_argument("unknown method id: " + std::string(name));
}

std::optional<MdsPipeline> mds_pipeline(Method method) {
  const auto name = method_name(method);
  char clusterer;
  std::string_view rest;
  if (name.starts_with("pdf")) {
    clusterer = 'p';
    rest = name.substr(3);
  } else if (name.size() == 3 && (name[0] == 'k' || name[0] == 'g')) {
    clusterer = name[0];
    rest = name.substr(1);
  } else {
    return std::nullopt;
  }
  return MdsPipeline{clusterer, rest[0] == 'c' ? MdsKind::classical : MdsKind::ratio, rest[1] - '0'};
}

const DistanceMatrix& DatasetContext::jaccard() {
  if (!jaccard_) jaccard_ = distance_matrix(dataset_.data, Measure::jaccard);
  return *jaccard_;
}

const Embedding<double>& DatasetContext::embedding(MdsKind kind, Index dim) {
  auto& slot = embeddings_[embedding_slot(kind, dim)];
  if (slot) return *slot;
  if (kind == MdsKind::classical) {
    // Classical axes are nested, so one decomposition serves both dimensions.
    if (!classical3_) classical3_ = classical_mds(jaccard(), 3);
    slot = Embedding<double>{classical3_->coords.leftCols(dim), std::nullopt};
  } else {
    slot = ratio_smacof(jaccard(), embedding(MdsKind::classical, dim), options_.smacof).embedding;
  }
  return *slot;
}

MethodOutcome run_method(Method method, DatasetContext& context, Index k, Rng& rng, const HarnessOptions& options) {
  const auto& data = context.dataset().data;
  MethodOutcome out;
  switch (method) {
    case Method::single: out.labels = cut(linkage(context.jaccard(), Linkage::single), k); break;
    case Method::complete: out.labels = cut(linkage(context.jaccard(), Linkage::complete), k); break;
    case Method::average: out.labels = cut(linkage(context.jaccard(), Linkage::average), k); break;
    case Method::pam: out.labels = pam(context.jaccard(), k).labels; break;
    case Method::kmodes: out.labels = kmodes(data, k, rng, options.kmodes_starts).labels; break;
    case Method::lca: out.labels = fit_lca(data, k, rng, options.lca).labels; break;
    default: {
      const auto pipe = *mds_pipeline(method);
      const auto& X = context.embedding(pipe.kind, pipe.dim).coords;
      if (pipe.clusterer == 'k') {
        out.labels = kmeans(X, k, rng, options.kmeans).labels;
      } else if (pipe.clusterer == 'g') {
        out.labels = fit_gmm(X, k, rng, options.gmm).labels;
      } else {
        const auto profile = density_profile(X, options.bandwidth_scale);
        out.labels = level_set_cluster(X, profile).labels;
      }
    }
  }
  out.n_clusters_found = count_clusters(out.labels);
  return out;
}

MethodOutcome run_method(Method method, const GeneratedDataset& dataset, Index k, Rng& rng,
                         const HarnessOptions& options) {
  DatasetContext context(dataset, options);
  return run_method(method, context, k, rng, options);
}

std::uint64_t dataset_seed(std::uint64_t master_seed, int scenario_id, int replicate) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(scenario_id), static_cast<std::uint64_t>(replicate)});
}

std::uint64_t method_seed(std::uint64_t master_seed, int scenario_id, int replicate, Method method) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(scenario_id), static_cast<std::uint64_t>(replicate),
                                   0x100 + static_cast<std::uint64_t>(method)});
}

namespace {

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ' ';
  return s;
}

std::vector<BenchmarkRecord> run_unit(const BenchmarkPlan& plan, const ScenarioConfig& config, int replicate) {
  Rng data_rng(dataset_seed(plan.master_seed, config.scenario_id, replicate));
  const auto dataset = generate_dataset(config, data_rng);
  DatasetContext context(dataset, plan.options);

  std::vector<BenchmarkRecord> out;
  for (Method method : plan.methods) {
    BenchmarkRecord rec;
    rec.scenario_id = config.scenario_id;
    rec.replicate = replicate;
    rec.method = method;
    rec.seed = plan.master_seed;
    Rng rng(method_seed(plan.master_seed, config.scenario_id, replicate, method));
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto result = run_method(method, context, config.n_clusters(), rng, plan.options);
      rec.ari = adjusted_rand_index(result.labels, dataset.species_labels);
      rec.n_clusters_found = result.n_clusters_found;
    } catch (const std::exception& e) {
      rec.ari = std::numeric_limits<double>::quiet_NaN();
      rec.n_clusters_found = 0;
      rec.error = sanitize(e.what());
      if (rec.error.empty()) rec.error = "error";
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkPlan& plan) {
  if (plan.scenarios.empty()) throw std::invalid_argument("run_benchmark: no scenarios");
  if (plan.methods.empty()) throw std::invalid_argument("run_benchmark: no methods");
  if (plan.replicates < 1) throw std::invalid_argument("run_benchmark: need at least one replicate");
  for (const auto& s : plan.scenarios) s.validate();

  struct Unit {
    std::size_t scenario;
    int replicate;
  };
  std::vector<Unit> units;
  for (std::size_t s = 0; s < plan.scenarios.size(); ++s)
    for (int r = 1; r <= plan.replicates; ++r) units.push_back({s, r});

  std::vector<std::vector<BenchmarkRecord>> results(units.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t u; (u = next.fetch_add(1)) < units.size();)
      results[u] = run_unit(plan, plan.scenarios[units[u].scenario], units[u].replicate);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(plan.threads, static_cast<unsigned>(units.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<BenchmarkRecord> records;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(records));
  std::stable_sort(records.begin(), records.end(), [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
    return std::tie(a.scenario_id, a.replicate, a.method) < std::tie(b.scenario_id, b.replicate, b.method);
  });
  return records;
}

namespace {

constexpr std::array<std::string_view, 5> kGroupKeyNames{"method", "omega", "us_presence", "sizes", "areas"};

}  // namespace

GroupKey parse_group_key(std::string_view name) {
  for (std::size_t i = 0; i < kGroupKeyNames.size(); ++i)
    if (kGroupKeyNames[i] == name) return static_cast<GroupKey>(i);
  throw std::invalid_argument("unknown grouping key: " + std::string(name));
}

std::string_view group_key_name(GroupKey key) { return kGroupKeyNames[static_cast<std::size_t>(key)]; }

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRecord>& records, const std::vector<GroupKey>& keys,
                                  const std::vector<ScenarioConfig>& scenarios) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::map<int, const ScenarioConfig*> by_id;
  for (const auto& s : scenarios) by_id[s.scenario_id] = &s;

  struct Acc {
    std::vector<std::string> labels;
    std::vector<double> values;
    Index failed = 0;
  };
  // Sort groups numerically: method catalog order, omega, then flags.
  std::map<std::vector<double>, Acc> groups;
  for (const auto& rec : records) {
    const auto it = by_id.find(rec.scenario_id);
    if (it == by_id.end()) throw std::invalid_argument("summarize: unknown scenario " + std::to_string(rec.scenario_id));
    const ScenarioConfig& sc = *it->second;
    std::vector<double> order;
    std::vector<std::string> labels;
    for (GroupKey key : keys) {
      switch (key) {
        case GroupKey::method:
          order.push_back(static_cast<double>(rec.method));
          labels.emplace_back(method_name(rec.method));
          break;
        case GroupKey::omega: {
          order.push_back(sc.omega);
          char buf[32];
          std::snprintf(buf, sizeof buf, "%g", sc.omega);
          labels.emplace_back(buf);
          break;
        }
        case GroupKey::us_presence:
          order.push_back(sc.has_universal_spreaders);
          labels.emplace_back(sc.has_universal_spreaders ? "yes" : "no");
          break;
        case GroupKey::sizes:
          order.push_back(!sc.equal_sizes());
          labels.emplace_back(sc.equal_sizes() ? "equal" : "unequal");
          break;
        case GroupKey::areas:
          order.push_back(!sc.equal_areas());
          labels.emplace_back(sc.equal_areas() ? "equal" : "unequal");
          break;
      }
    }
    auto& acc = groups[order];
    acc.labels = std::move(labels);
    if (std::isfinite(rec.ari))
      acc.values.push_back(rec.ari);
    else
      ++acc.failed;
  }

  std::vector<SummaryRow> rows;
  for (auto& [order, acc] : groups) {
    SummaryRow row;
    row.group = acc.labels;
    row.count = static_cast<Index>(acc.values.size());
    row.n_failed = acc.failed;
    if (row.count > 0) {
      const Eigen::Map<const Eigen::VectorXd> v(acc.values.data(), row.count);
      row.mean_ari = v.mean();
      row.sd_ari = row.count > 1 ? std::sqrt((v.array() - row.mean_ari).square().sum() / double(row.count - 1)) : 0.0;
    } else {
      row.mean_ari = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view linkage_name(Linkage linkage) {
  switch (linkage) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "unknown";
}

std::vector<CutAnalysisRow> cut_analysis(const ScenarioConfig& config, std::uint64_t master_seed, int replicate) {
  Rng rng(dataset_seed(master_seed, config.scenario_id, replicate));
  const auto dataset = generate_dataset(config, rng);
  const auto D = distance_matrix(dataset.data, Measure::jaccard);
  std::vector<CutAnalysisRow> rows;
  for (Linkage l : {Linkage::single, Linkage::complete, Linkage::average}) {
    const auto dend = linkage(D, l);
    const Index k = config.n_clusters();
    const auto best = best_cut_ari(dend, dataset.species_labels);
    rows.push_back({l, k, adjusted_rand_index(cut(dend, k), dataset.species_labels), best.ari, best.k});
  }
  return rows;
}

}  // namespace pabench

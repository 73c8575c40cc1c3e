// Command-line front end: dataset generation, benchmark runs, summaries,
// dendrogram cut analysis and intermediate-result dumps.

#include "pabench/bench.hpp"
#include "pabench/dist.hpp"
#include "pabench/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace pabench;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Canonical scenarios, overridden or extended by those in a config file.
std::map<int, ScenarioConfig> known_scenarios(const ConfigFile& cfg) {
  std::map<int, ScenarioConfig> known;
  for (const auto& s : scenario_table()) known[s.scenario_id] = s;
  for (const auto& s : cfg.scenarios) known[s.scenario_id] = s;
  return known;
}

// "all", "3", "1-24", "1,4,7-9"
std::vector<ScenarioConfig> select_scenarios(const std::string& list, const std::map<int, ScenarioConfig>& known) {
  std::vector<ScenarioConfig> out;
  if (list == "all") {
    for (const auto& [id, s] : known) out.push_back(s);
    return out;
  }
  for (const auto& part : split(list, ',')) {
    int lo, hi;
    if (const auto dash = part.find('-'); dash != std::string::npos) {
      lo = std::stoi(part.substr(0, dash));
      hi = std::stoi(part.substr(dash + 1));
    } else {
      lo = hi = std::stoi(part);
    }
    for (int id = lo; id <= hi; ++id) {
      const auto it = known.find(id);
      if (it == known.end()) throw std::invalid_argument("unknown scenario id " + std::to_string(id));
      out.push_back(it->second);
    }
  }
  if (out.empty()) throw std::invalid_argument("no scenarios selected");
  return out;
}

std::vector<Method> select_methods(const std::string& list) {
  if (list == "all") return {kAllMethods.begin(), kAllMethods.end()};
  std::vector<Method> out;
  for (const auto& name : split(list, ',')) out.push_back(parse_method(name));
  if (out.empty()) throw std::invalid_argument("no methods selected");
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering benchmark for presence-absence data"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with custom scenarios and harness options");

  // generate
  auto* gen = app.add_subcommand("generate", "Write simulated datasets and their ground truth");
  std::string gen_scenario = "all";
  std::uint64_t gen_seed = 0;
  int gen_replicate = 1;
  std::string gen_out;
  gen->add_option("--scenario", gen_scenario, "Scenario id, range or 'all'")->required();
  gen->add_option("--seed", gen_seed, "Master seed")->required();
  gen->add_option("--replicate", gen_replicate, "Replicate number")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "Run the scenario x replicate x method grid");
  std::string run_scenarios, run_methods = "all", run_out;
  int run_reps = 10;
  std::uint64_t run_seed = 0;
  unsigned run_threads = 1;
  bool run_timing = false;
  run->add_option("--scenarios", run_scenarios, "Ids and ranges, e.g. 1-24 or 1,13,22")->required();
  run->add_option("--reps", run_reps, "Replicates per scenario")->check(CLI::PositiveNumber);
  run->add_option("--methods", run_methods, "Comma-separated method ids or 'all'");
  run->add_option("--seed", run_seed, "Master seed")->required();
  run->add_option("--out", run_out, "Results CSV")->required();
  run->add_option("--threads", run_threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--timing", run_timing, "Write measured runtimes instead of 0 (output no longer reproducible)");

  // summarize
  auto* sum = app.add_subcommand("summarize", "Mean and SD of ARI per group");
  std::string sum_in, sum_by = "method", sum_out;
  sum->add_option("results", sum_in, "Results CSV")->required();
  sum->add_option("--by", sum_by, "Comma-separated keys: method,omega,us_presence,sizes,areas");
  sum->add_option("--out", sum_out, "Output CSV (default stdout)");

  // cut-analysis
  auto* cuts = app.add_subcommand("cut-analysis", "ARI at the true K versus the best dendrogram cut");
  int cut_scenario = 22, cut_replicate = 1;
  std::uint64_t cut_seed = 0;
  cuts->add_option("--scenario", cut_scenario, "Scenario id")->required();
  cuts->add_option("--seed", cut_seed, "Master seed")->required();
  cuts->add_option("--replicate", cut_replicate, "Replicate number")->check(CLI::PositiveNumber);

  // inspect
  auto* insp = app.add_subcommand("inspect", "Dump distances, embeddings, dendrograms and fitted models");
  int insp_scenario = 1, insp_replicate = 1;
  std::uint64_t insp_seed = 0;
  std::string insp_out;
  insp->add_option("--scenario", insp_scenario, "Scenario id")->required();
  insp->add_option("--seed", insp_seed, "Master seed")->required();
  insp->add_option("--replicate", insp_replicate, "Replicate number")->check(CLI::PositiveNumber);
  insp->add_option("--out", insp_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const ConfigFile cfg = config_path.empty() ? ConfigFile{} : read_config_file(config_path);
    const auto known = known_scenarios(cfg);

    if (*gen) {
      fs::create_directories(gen_out);
      for (const auto& sc : select_scenarios(gen_scenario, known)) {
        Rng rng(dataset_seed(gen_seed, sc.scenario_id, gen_replicate));
        const auto ds = generate_dataset(sc, rng);
        const std::string stem = "scenario_" + std::to_string(sc.scenario_id) + "_rep_" + std::to_string(gen_replicate);
        auto data = open_out(fs::path(gen_out) / (stem + "_data.csv"));
        write_dataset_csv(data, ds);
        auto cells = open_out(fs::path(gen_out) / (stem + "_cells.csv"));
        write_cell_areas_csv(cells, ds);
        auto conf = open_out(fs::path(gen_out) / (stem + "_config.json"));
        conf << to_json(sc).dump(2) << '\n';
      }
    } else if (*run) {
      BenchmarkPlan plan;
      plan.scenarios = select_scenarios(run_scenarios, known);
      plan.replicates = run_reps;
      plan.methods = select_methods(run_methods);
      plan.master_seed = run_seed;
      plan.threads = run_threads;
      plan.options = cfg.options;
      const auto records = run_benchmark(plan);
      auto out = open_out(run_out);
      write_results_csv(out, records, run_timing);
      std::size_t failed = 0;
      for (const auto& r : records) failed += !r.error.empty();
      std::cerr << records.size() << " records written to " << run_out;
      if (failed) std::cerr << " (" << failed << " failed runs)";
      std::cerr << '\n';
    } else if (*sum) {
      std::ifstream in(sum_in);
      if (!in) throw std::runtime_error("cannot open " + sum_in);
      const auto records = read_results_csv(in);
      std::vector<GroupKey> keys;
      for (const auto& k : split(sum_by, ',')) keys.push_back(parse_group_key(k));
      std::vector<ScenarioConfig> scenarios;
      for (const auto& [id, s] : known) scenarios.push_back(s);
      const auto rows = summarize(records, keys, scenarios);
      if (sum_out.empty()) {
        write_summary_csv(std::cout, keys, rows);
      } else {
        auto out = open_out(sum_out);
        write_summary_csv(out, keys, rows);
      }
    } else if (*cuts) {
      const auto it = known.find(cut_scenario);
      if (it == known.end()) throw std::invalid_argument("unknown scenario id");
      std::cout << "linkage,true_k,ari_at_true_k,best_ari,best_k\n";
      for (const auto& row : cut_analysis(it->second, cut_seed, cut_replicate))
        std::cout << linkage_name(row.linkage) << ',' << row.true_k << ',' << format_double(row.ari_at_true_k) << ','
                  << format_double(row.best_ari) << ',' << row.best_k << '\n';
    } else if (*insp) {
      const auto it = known.find(insp_scenario);
      if (it == known.end()) throw std::invalid_argument("unknown scenario id");
      const auto& sc = it->second;
      fs::create_directories(insp_out);
      const fs::path dir(insp_out);
      Rng rng(dataset_seed(insp_seed, sc.scenario_id, insp_replicate));
      const auto ds = generate_dataset(sc, rng);
      DatasetContext ctx(ds, cfg.options);
      {
        auto out = open_out(dir / "jaccard.csv");
        write_distance_csv(out, ctx.jaccard());
      }
      for (auto kind : {MdsKind::classical, MdsKind::ratio})
        for (Index dim : {2, 3}) {
          auto out = open_out(dir / ("mds_" + std::string(kind == MdsKind::classical ? "c" : "s") +
                                     std::to_string(dim) + ".csv"));
          write_embedding_csv(out, ctx.embedding(kind, dim));
        }
      for (Linkage l : {Linkage::single, Linkage::complete, Linkage::average}) {
        auto out = open_out(dir / ("dendrogram_" + std::string(linkage_name(l)) + ".csv"));
        write_dendrogram_csv(out, linkage(ctx.jaccard(), l));
      }
      Rng fit_rng(method_seed(insp_seed, sc.scenario_id, insp_replicate, Method::lca));
      {
        auto out = open_out(dir / "lca_model.json");
        out << to_json(fit_lca(ds.data, sc.n_clusters(), fit_rng, cfg.options.lca).model).dump(2) << '\n';
      }
      {
        auto out = open_out(dir / "gmm_c2_model.json");
        const auto fit = fit_gmm(ctx.embedding(MdsKind::classical, 2).coords, sc.n_clusters(), fit_rng, cfg.options.gmm);
        out << to_json(fit.model).dump(2) << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

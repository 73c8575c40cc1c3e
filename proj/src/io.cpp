#include "pabench/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pabench {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  if (s == "NaN" || s == "nan" || s == "NA") return std::numeric_limits<double>::quiet_NaN();
  if (s == "Inf") return std::numeric_limits<double>::infinity();
  if (s == "-Inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

const char* kResultsHeader = "scenario,replicate,method,ari,n_clusters_found,runtime_ms,seed,error";

}  // namespace

void write_dataset_csv(std::ostream& out, const GeneratedDataset& dataset) {
  out << "species_id,true_cluster";
  for (Index j = 0; j < dataset.data.cols(); ++j) out << ",cell_" << j + 1;
  out << '\n';
  for (Index i = 0; i < dataset.data.rows(); ++i) {
    out << i + 1 << ',' << dataset.species_labels[i];
    for (Index j = 0; j < dataset.data.cols(); ++j) out << ',' << int(dataset.data(i, j));
    out << '\n';
  }
}

void write_cell_areas_csv(std::ostream& out, const GeneratedDataset& dataset) {
  out << "cell_id,area_cluster\n";
  for (Index j = 0; j < dataset.cell_labels.size(); ++j) out << j + 1 << ',' << dataset.cell_labels[j] << '\n';
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& D) {
  for (Index i = 0; i < D.rows(); ++i) {
    for (Index j = 0; j < D.cols(); ++j) out << (j ? "," : "") << format_double(D(i, j));
    out << '\n';
  }
}

void write_embedding_csv(std::ostream& out, const Embedding<double>& embedding) {
  out << "point_id";
  for (Index d = 0; d < embedding.dim(); ++d) out << ",x" << d + 1;
  out << '\n';
  for (Index i = 0; i < embedding.size(); ++i) {
    out << i + 1;
    for (Index d = 0; d < embedding.dim(); ++d) out << ',' << format_double(embedding.coords(i, d));
    out << '\n';
  }
}

void write_dendrogram_csv(std::ostream& out, const Dendrogram& dendrogram) {
  out << "step,left,right,height\n";
  for (std::size_t s = 0; s < dendrogram.merges.size(); ++s) {
    const auto& m = dendrogram.merges[s];
    out << s + 1 << ',' << m.left << ',' << m.right << ',' << format_double(m.height) << '\n';
  }
}

void write_results_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records, bool with_runtime) {
  out << kResultsHeader << '\n';
  for (const auto& r : records) {
    out << r.scenario_id << ',' << r.replicate << ',' << method_name(r.method) << ',' << format_double(r.ari) << ','
        << r.n_clusters_found << ',' << (with_runtime ? format_double(r.runtime_ms) : "0") << ',' << r.seed << ','
        << r.error << '\n';
  }
}

std::vector<BenchmarkRecord> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("results file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw std::invalid_argument("unexpected results header: " + line);
  std::vector<BenchmarkRecord> records;
  for (Index lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw std::invalid_argument("results line " + std::to_string(lineno) + ": expected 8 fields");
    BenchmarkRecord r;
    r.scenario_id = parse_int<int>(f[0]);
    r.replicate = parse_int<int>(f[1]);
    r.method = parse_method(f[2]);
    r.ari = parse_double(f[3]);
    r.n_clusters_found = parse_int<Index>(f[4]);
    r.runtime_ms = parse_double(f[5]);
    r.seed = parse_int<std::uint64_t>(f[6]);
    r.error = f[7];
    records.push_back(std::move(r));
  }
  return records;
}

void write_summary_csv(std::ostream& out, const std::vector<GroupKey>& keys, const std::vector<SummaryRow>& rows) {
  for (GroupKey k : keys) out << group_key_name(k) << ',';
  out << "mean_ari,sd_ari,count,n_failed\n";
  for (const auto& row : rows) {
    for (const auto& g : row.group) out << g << ',';
    out << format_double(row.mean_ari) << ',' << format_double(row.sd_ari) << ',' << row.count << ',' << row.n_failed
        << '\n';
  }
}

json to_json(const ScenarioConfig& c) {
  return json{{"scenario_id", c.scenario_id},
              {"omega", c.omega},
              {"n_proper_clusters", c.n_proper_clusters},
              {"has_universal_spreaders", c.has_universal_spreaders},
              {"cluster_sizes", c.cluster_sizes},
              {"area_sizes", c.area_sizes},
              {"m", c.m}};
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig c;
  c.scenario_id = j.at("scenario_id").get<int>();
  c.omega = j.at("omega").get<double>();
  c.n_proper_clusters = j.value("n_proper_clusters", 3);
  c.has_universal_spreaders = j.value("has_universal_spreaders", false);
  c.cluster_sizes = j.at("cluster_sizes").get<std::vector<Index>>();
  c.area_sizes = j.at("area_sizes").get<std::vector<Index>>();
  c.m = j.value("m", Index{60});
  c.validate();
  return c;
}

json to_json(const HarnessOptions& o) {
  return json{{"kmeans_starts", o.kmeans.n_starts},
              {"kmeans_iter_max", o.kmeans.iter_max},
              {"kmodes_starts", o.kmodes_starts},
              {"lca_starts", o.lca.n_starts},
              {"lca_tol", o.lca.tol},
              {"lca_max_iter", o.lca.max_iter},
              {"gmm_starts", o.gmm.n_starts},
              {"gmm_tol", o.gmm.tol},
              {"gmm_max_iter", o.gmm.max_iter},
              {"gmm_reg_scale", o.gmm.reg_scale},
              {"smacof_eps", o.smacof.eps},
              {"smacof_max_iter", o.smacof.max_iter},
              {"bandwidth_scale", o.bandwidth_scale}};
}

HarnessOptions harness_options_from_json(const json& j) {
  HarnessOptions o;
  o.kmeans.n_starts = j.value("kmeans_starts", o.kmeans.n_starts);
  o.kmeans.iter_max = j.value("kmeans_iter_max", o.kmeans.iter_max);
  o.kmodes_starts = j.value("kmodes_starts", o.kmodes_starts);
  o.lca.n_starts = j.value("lca_starts", o.lca.n_starts);
  o.lca.tol = j.value("lca_tol", o.lca.tol);
  o.lca.max_iter = j.value("lca_max_iter", o.lca.max_iter);
  o.gmm.n_starts = j.value("gmm_starts", o.gmm.n_starts);
  o.gmm.tol = j.value("gmm_tol", o.gmm.tol);
  o.gmm.max_iter = j.value("gmm_max_iter", o.gmm.max_iter);
  o.gmm.reg_scale = j.value("gmm_reg_scale", o.gmm.reg_scale);
  o.smacof.eps = j.value("smacof_eps", o.smacof.eps);
  o.smacof.max_iter = j.value("smacof_max_iter", o.smacof.max_iter);
  o.bandwidth_scale = j.value("bandwidth_scale", o.bandwidth_scale);
  return o;
}

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

json to_json(const LcaModel& model) {
  return json{{"model", "lca"},
              {"weights", vector_json(model.weights)},
              {"theta", matrix_json(model.theta)},
              {"loglik", model.loglik},
              {"iterations", model.iterations}};
}

json to_json(const GmmModel<double>& model) {
  json covs = json::array();
  for (const auto& c : model.covariances) covs.push_back(matrix_json(c));
  return json{{"model", "gmm"},
              {"family", std::string(family_name(model.family))},
              {"weights", vector_json(model.weights)},
              {"means", matrix_json(model.means)},
              {"covariances", std::move(covs)},
              {"loglik", model.loglik},
              {"bic", model.bic},
              {"iterations", model.iterations}};
}

ConfigFile read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  const json j = json::parse(in);
  ConfigFile cfg;
  if (j.contains("scenarios"))
    for (const auto& s : j.at("scenarios")) cfg.scenarios.push_back(scenario_from_json(s));
  if (j.contains("options")) cfg.options = harness_options_from_json(j.at("options"));
  return cfg;
}

}  // namespace pabench

#include "msmm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "msmm/csv.hpp"
#include "msmm/design.hpp"
#include "msmm/diagnostics.hpp"
#include "msmm/dp_mixture.hpp"
#include "msmm/fay_herriot.hpp"
#include "msmm/hash.hpp"
#include "msmm/moran_basis.hpp"
#include "msmm/msm.hpp"
#include "msmm/posterior.hpp"
#include "msmm/random.hpp"
#include "msmm/simulation.hpp"
#include "msmm/spatial_graph.hpp"
#include "msmm/synthetic.hpp"
#include "msmm/tabulation.hpp"

namespace msmm::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Config: return kConfigExit;
    case ErrorCategory::Data: return kDataExit;
    case ErrorCategory::Numerical: return kNumericalExit;
  }
  return kInternal;
}

namespace {

const char* category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Numerical: return "numerical";
  }
  return "internal";
}

std::vector<std::pair<std::string, std::string>> entries(const RunConfig& c) {
  auto num = [](double v) { return csv::format(v); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  std::string draws;
  for (const auto& d : c.draws) draws += (draws.empty() ? "" : ";") + d.string();
  std::vector<std::pair<std::string, std::string>> e = {
      {"tabulation", c.tabulation.string()},
      {"adjacency", c.adjacency.string()},
      {"population", c.population.string()},
      {"out", c.out.string()},
      {"draws", draws},
      {"basis_cache", c.basis_cache.string()},
      {"state_column", c.state_column},
      {"county_column", c.county_column},
      {"order_column", c.order_column},
      {"count_column", c.count_column},
      {"se_column", c.se_column},
      {"sample_size_column", c.sample_size_column},
      {"model", c.model},
      {"algorithm", c.algorithm},
      {"init", c.init},
      {"truth", c.truth},
      {"basis_fraction", num(c.basis_fraction)},
      {"basis_rank", std::to_string(c.basis_rank)},
      {"intercept", flag(c.intercept)},
      {"log_population", flag(c.log_population)},
      {"cell_dummies", flag(c.cell_dummies)},
      {"sigma2_beta", num(c.sigma2_beta)},
      {"a_eta", num(c.a_eta)},
      {"b_eta", num(c.b_eta)},
      {"a_alpha", num(c.a_alpha)},
      {"b_alpha", num(c.b_alpha)},
      {"a_sigma2", num(c.a_sigma2)},
      {"b_sigma2", num(c.b_sigma2)},
      {"alpha_init", num(c.alpha_init)},
      {"truncation", std::to_string(c.truncation)},
      {"gvf_span", num(c.gvf_span)},
      {"variance_floor", num(c.variance_floor)},
      {"iterations", std::to_string(c.iterations)},
      {"burn_in", std::to_string(c.burn_in)},
      {"thin", std::to_string(c.thin)},
      {"chains", std::to_string(c.chains)},
      {"seed", std::to_string(c.seed)},
      {"gelman_rubin", flag(c.gelman_rubin)},
      {"write_draws", flag(c.write_draws)},
      {"draws_latent", flag(c.draws_latent)},
      {"replicates", std::to_string(c.replicates)},
      {"threads", std::to_string(c.threads)},
  };
  std::sort(e.begin(), e.end());
  return e;
}

void require_file(const fs::path& path, const std::string& key) {
  if (path.empty()) throw ConfigError(key + " path is required");
  if (!fs::is_regular_file(path)) throw ConfigError(key + " not found: " + path.string());
}

template <typename T>
void require_one_of(const std::string& value, const std::string& key, const T& allowed) {
  if (std::find(std::begin(allowed), std::end(allowed), value) == std::end(allowed))
    throw ConfigError("unknown " + key + " '" + value + "'");
}

std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return hex64(fnv1a(bytes));
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

ColumnSchema schema_of(const RunConfig& c) {
  ColumnSchema s;
  s.state = c.state_column;
  s.county = c.county_column;
  s.order = c.order_column;
  s.count = c.count_column;
  s.std_err = c.se_column;
  s.sample_size = c.sample_size_column;
  return s;
}

BasisSize basis_size_of(const RunConfig& c) {
  return c.basis_rank > 0 ? BasisSize::count(c.basis_rank) : BasisSize::fraction(c.basis_fraction);
}

McmcConfig mcmc_of(const RunConfig& c) {
  McmcConfig m;
  m.iterations = c.iterations;
  m.burn_in = c.burn_in;
  m.thin = c.thin;
  m.seed = c.seed;
  return m;
}

MixtureConfig mixture_of(const RunConfig& c) {
  MixtureConfig m;
  m.sigma2_beta = c.sigma2_beta;
  m.a_eta = c.a_eta;
  m.b_eta = c.b_eta;
  m.a_alpha = c.a_alpha;
  m.b_alpha = c.b_alpha;
  m.alpha_init = c.alpha_init;
  m.truncation = c.truncation;
  m.algorithm = c.algorithm == "truncated" ? MixtureAlgorithm::Truncated : MixtureAlgorithm::Dp;
  m.init = c.init == "single"       ? InitialPartition::Single
           : c.init == "singletons" ? InitialPartition::Singletons
                                    : InitialPartition::ByCell;
  m.mcmc = mcmc_of(c);
  return m;
}

MsmConfig msm_of(const RunConfig& c) {
  MsmConfig m;
  m.sigma2_beta = c.sigma2_beta;
  m.a_eta = c.a_eta;
  m.b_eta = c.b_eta;
  m.mcmc = mcmc_of(c);
  return m;
}

FhConfig fh_of(const RunConfig& c) {
  FhConfig f;
  f.sigma2_beta = c.sigma2_beta;
  f.a = c.a_sigma2;
  f.b = c.b_sigma2;
  f.mcmc = mcmc_of(c);
  return f;
}

/// Inputs read from disk plus everything derived from them.
struct Inputs {
  explicit Inputs(TabulationTable t) : table(std::move(t)) {}

  TabulationTable table;
  LogTable log;
  SpatialStructure spatial;
  Eigen::MatrixXd x;
  json hashes = json::object();
  std::vector<std::string> warnings;
};

Inputs load_inputs(const RunConfig& c, std::ostream& log) {
  Inputs in(load_tabulation(c.tabulation, schema_of(c)));
  in.hashes["tabulation"] = {{"path", c.tabulation.string()}, {"fnv1a", file_hash(c.tabulation)}};
  in.hashes["adjacency"] = {{"path", c.adjacency.string()}, {"fnv1a", file_hash(c.adjacency)}};

  in.log = log_transform(in.table);
  if (!in.log.complete()) {
    const auto missing = std::count(in.log.imputed.begin(), in.log.imputed.end(), true);
    in.log = gvf_impute(in.log, gvf_predictor(in.table), c.gvf_span, c.variance_floor);
    log << "imputed " << missing << " sampling variances by GVF\n";
  }

  in.spatial = build_spatial_structure(load_edge_list(c.adjacency), in.table.areas(),
                                       in.table.cells());
  in.warnings = in.spatial.warnings;

  std::map<std::string, double> population;
  if (c.log_population) {
    population = load_population(c.population);
    in.hashes["population"] = {{"path", c.population.string()},
                               {"fnv1a", file_hash(c.population)}};
  }
  DesignOptions design;
  design.intercept = c.intercept;
  design.log_population = c.log_population;
  design.cell_dummies = c.cell_dummies;
  in.x = build_design(in.table.areas(), in.table.cells(), population, design);
  for (const auto& w : in.warnings) log << "warning: " << w << '\n';
  return in;
}

/// Loads the basis from the cache when its key matches, otherwise builds and
/// stores it.
MoranBasis obtain_basis(const RunConfig& c, const Inputs& in, const fs::path& cache,
                        std::ostream& log, std::uint64_t* key_out = nullptr) {
  const BasisSize size = basis_size_of(c);
  const std::uint64_t key = basis_cache_key(in.x, in.spatial.a, size);
  if (key_out) *key_out = key;
  if (!cache.empty()) {
    if (auto cached = load_basis(cache, key)) {
      log << "basis loaded from " << cache.string() << '\n';
      return *std::move(cached);
    }
  }
  auto basis = build_moran_basis(in.x, in.spatial, size);
  if (!cache.empty()) save_basis(cache, basis, key);
  return basis;
}

std::vector<PosteriorDraws> run_chains(const RunConfig& c, const Inputs& in,
                                       const MoranBasis& basis) {
  std::vector<PosteriorDraws> chains(static_cast<std::size_t>(c.chains));
  std::vector<std::exception_ptr> failures(chains.size());
  auto work = [&](std::size_t k) {
    try {
      RunConfig local = c;
      local.seed = derive_seed(c.seed, k);
      if (c.model == "msm")
        chains[k] = fit_msm(in.log, in.x, basis, msm_of(local));
      else if (c.model == "fh")
        chains[k] = fit_fh(in.log, in.x, fh_of(local));
      else
        chains[k] = fit_msmm(in.log, in.x, basis, mixture_of(local));
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < chains.size(); ++k) pool.emplace_back(work, k);
  work(0);
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return chains;
}

json number_or_null(bool defined, double value) {
  return defined && std::isfinite(value) ? json(value) : json(nullptr);
}

json diagnostics_entry(const ParameterDiagnostics& d) {
  return {{"name", d.name},
          {"mean", number_or_null(true, d.mean)},
          {"mcse", number_or_null(true, d.mcse)},
          {"ess", number_or_null(true, d.ess)},
          {"geweke_z", number_or_null(d.geweke_defined, d.geweke_z)},
          {"psrf", number_or_null(d.psrf_defined, d.psrf)}};
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

/// Five prediction entries picked from a stream derived from the seed.
std::vector<Eigen::Index> monitored_entries(Eigen::Index n, std::uint64_t seed) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) all[i] = i;
  Rng rng(derive_seed(seed, 0xd1a9));
  const std::size_t take = std::min<std::size_t>(5, all.size());
  for (std::size_t k = 0; k < take; ++k) {
    const auto j = k + static_cast<std::size_t>(rng.uniform() * static_cast<double>(all.size() - k));
    std::swap(all[k], all[std::min(j, all.size() - 1)]);
  }
  all.resize(take);
  std::sort(all.begin(), all.end());
  return all;
}

json fit_diagnostics(const RunConfig& c, const std::vector<PosteriorDraws>& chains) {
  std::vector<std::string> scalars;
  for (const auto& [name, trace] : chains.front().scalars) scalars.push_back(name);
  json params = json::array();
  for (const auto& name : scalars) {
    std::vector<std::vector<double>> traces;
    for (const auto& ch : chains) traces.push_back(to_vector(ch.scalars.at(name)));
    params.push_back(diagnostics_entry(diagnose_parameter(name, traces)));
  }
  for (const auto i : monitored_entries(chains.front().y.cols(), c.seed)) {
    std::vector<std::vector<double>> traces;
    for (const auto& ch : chains) traces.push_back(to_vector(ch.y.col(i)));
    params.push_back(
        diagnostics_entry(diagnose_parameter("y[" + std::to_string(i) + "]", traces)));
  }
  json warnings = json::array();
  for (std::size_t k = 0; k < chains.size(); ++k)
    for (const auto& w : chains[k].warnings)
      warnings.push_back("chain " + std::to_string(k + 1) + ": " + w);
  return {{"model", chains.front().model},
          {"chains", chains.size()},
          {"draws_per_chain", chains.front().draws()},
          {"parameters", params},
          {"warnings", warnings}};
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

void write_manifest(const RunConfig& c, const std::string& command, json inputs, json outputs,
                    json extra = json::object()) {
  json config = json::object();
  for (const auto& [k, v] : entries(c)) config[k] = v;
  json m = {{"artifact", "msmm"},
            {"version", kVersion},
            {"command", command},
            {"config_hash", hex64(fnv1a(c.canonical()))},
            {"seed", c.seed},
            {"config", config},
            {"inputs", std::move(inputs)},
            {"outputs", std::move(outputs)}};
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_json(c.out / "manifest.json", m);
}

void prepare_out(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec || !fs::is_directory(c.out))
    throw ConfigError("cannot create output directory " + c.out.string());
}

}  // namespace

void RunConfig::validate(const std::string& command) const {
  static const char* models[] = {"msm", "msmm", "fh"};
  static const char* algorithms[] = {"dp", "truncated"};
  static const char* inits[] = {"single", "by_cell", "singletons"};
  static const char* truths[] = {"table", "two_field"};
  require_one_of(model, "model", models);
  require_one_of(algorithm, "algorithm", algorithms);
  require_one_of(init, "init", inits);
  require_one_of(truth, "truth", truths);
  if (out.empty()) throw ConfigError("out directory is required");
  if (command == "diagnose") {
    if (draws.empty()) throw ConfigError("diagnose needs at least one draws file");
    for (const auto& d : draws) require_file(d, "draws");
    return;
  }
  const bool needs_table = command != "simulate" || truth == "table";
  if (needs_table) {
    require_file(tabulation, "tabulation");
    require_file(adjacency, "adjacency");
    if (log_population) require_file(population, "population");
  }
  if (!(basis_fraction > 0.0 && basis_fraction <= 1.0))
    throw ConfigError("basis_fraction must lie in (0, 1]");
  if (basis_rank < 0) throw ConfigError("basis_rank must be >= 0");
  if (!(gvf_span > 0.0 && gvf_span <= 1.0)) throw ConfigError("gvf_span must lie in (0, 1]");
  if (!(variance_floor > 0.0)) throw ConfigError("variance_floor must be positive");
  if (command == "basis") return;
  if (chains < 1) throw ConfigError("chains must be >= 1");
  if (gelman_rubin && chains < 2) throw ConfigError("gelman_rubin requires chains >= 2");
  if (command == "simulate" && replicates < 1) throw ConfigError("replicates must be >= 1");
  if (command == "simulate" && model == "msm")
    throw ConfigError("simulate compares msmm with fh; model msm is not supported");
  mcmc_of(*this).validate();
  if (command == "simulate" || model == "msmm") mixture_of(*this).validate();
  if (command == "simulate" || model == "fh") fh_of(*this).validate();
  if (model == "msm") msm_of(*this).validate();
}

std::string RunConfig::canonical() const {
  std::string s;
  for (const auto& [k, v] : entries(*this)) s += k + " = " + v + "\n";
  return s;
}

int cmd_fit(const RunConfig& c, std::ostream& log) {
  c.validate("fit");
  prepare_out(c);
  const Inputs in = load_inputs(c, log);
  MoranBasis basis;
  if (c.model != "fh") {
    basis = obtain_basis(c, in, c.basis_cache, log);
    log << "basis rank " << basis.rank() << " of " << basis.positive_count
        << " positive eigenvalues\n";
  }
  const auto chains = run_chains(c, in, basis);

  json outputs = json::array();
  const auto summary = predict_summaries(merge_chains(chains));
  {
    auto out = open_output(c.out / "predictions.csv");
    write_predictions(out, in.table, summary.log, summary.count);
  }
  outputs.push_back("predictions.csv");
  write_json(c.out / "diagnostics.json", fit_diagnostics(c, chains));
  outputs.push_back("diagnostics.json");
  if (c.write_draws) {
    for (std::size_t k = 0; k < chains.size(); ++k) {
      const std::string name = "draws_chain" + std::to_string(k + 1) + ".csv";
      auto out = open_output(c.out / name);
      write_draws(out, chains[k], c.draws_latent);
      outputs.push_back(name);
    }
  }
  json seeds = json::array();
  for (int k = 0; k < c.chains; ++k) seeds.push_back(derive_seed(c.seed, k));
  write_manifest(c, "fit", in.hashes, outputs, {{"chain_seeds", seeds}});
  for (std::size_t k = 0; k < chains.size(); ++k)
    for (const auto& w : chains[k].warnings)
      log << "warning: chain " << k + 1 << ": " << w << '\n';
  log << "wrote " << in.table.size() << " predictions to " << (c.out / "predictions.csv").string()
      << '\n';
  return kOk;
}

int cmd_basis(const RunConfig& c, std::ostream& log) {
  c.validate("basis");
  prepare_out(c);
  const Inputs in = load_inputs(c, log);
  const fs::path cache = c.basis_cache.empty() ? c.out / "basis.bin" : c.basis_cache;
  std::uint64_t key = 0;
  const auto basis = obtain_basis(c, in, cache, log, &key);
  const double confounding =
      basis.rank() > 0 && in.x.cols() > 0 ? (basis.psi.transpose() * in.x).cwiseAbs().maxCoeff()
                                          : 0.0;
  json report = {{"rank", basis.rank()},
                 {"positive_count", basis.positive_count},
                 {"basis_fraction", c.basis_fraction},
                 {"basis_rank_requested", c.basis_rank},
                 {"max_abs_psi_t_x", confounding},
                 {"cache", cache.string()},
                 {"cache_key", hex64(key)},
                 {"cache_fnv1a", file_hash(cache)},
                 {"selected_eigenvalues", to_vector(basis.eigenvalues)},
                 {"spectrum", to_vector(basis.spectrum)}};
  write_json(c.out / "basis_report.json", report);
  write_manifest(c, "basis", in.hashes, json::array({"basis_report.json", cache.string()}));
  log << "basis rank " << basis.rank() << " of " << basis.positive_count
      << " positive eigenvalues; cache " << cache.string() << '\n';
  return kOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& log) {
  c.validate("simulate");
  prepare_out(c);
  StudyConfig study;
  study.replicates = c.replicates;
  study.seed = c.seed;
  study.msmm = mixture_of(c);
  study.fh = fh_of(c);
  study.threads = c.threads;
  json inputs = json::object();
  if (c.truth == "table") {
    Inputs in = load_inputs(c, log);
    study.basis = obtain_basis(c, in, c.basis_cache, log);
    study.truth = std::move(in.log);
    study.x = std::move(in.x);
    inputs = std::move(in.hashes);
  } else {
    auto fixture = make_two_field_fixture();
    study.truth = std::move(fixture.truth);
    study.x = std::move(fixture.x);
    study.basis = std::move(fixture.basis);
    study.truth_partition = std::move(fixture.partition);
    inputs["truth"] = "two_field";
  }
  const auto result = run_study(study);
  {
    auto out = open_output(c.out / "study.csv");
    write_study(out, result);
  }
  {
    auto out = open_output(c.out / "study_summary.csv");
    write_study_summary(out, result);
  }
  write_manifest(c, "simulate", inputs, json::array({"study.csv", "study_summary.csv"}));
  for (const auto& s : result.summaries)
    log << s.model << ": median AMSE " << csv::format(s.amse_median) << ", median MAB "
        << csv::format(s.mab_median) << " (" << s.succeeded << " ok, " << s.failed
        << " failed)\n";
  return kOk;
}

int cmd_diagnose(const RunConfig& c, std::ostream& log) {
  c.validate("diagnose");
  prepare_out(c);
  std::vector<std::map<std::string, std::vector<double>>> dumps;
  json inputs = json::array();
  for (const auto& path : c.draws) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    dumps.push_back(read_draws(in));
    inputs.push_back({{"path", path.string()}, {"fnv1a", file_hash(path)}});
  }
  json params = json::array();
  for (const auto& [name, first] : dumps.front()) {
    std::vector<std::vector<double>> traces;
    for (const auto& d : dumps) {
      const auto it = d.find(name);
      if (it == d.end()) throw SchemaError("parameter " + name + " missing from a draws file");
      traces.push_back(it->second);
    }
    params.push_back(diagnostics_entry(diagnose_parameter(name, traces)));
  }
  write_json(c.out / "diagnostics.json",
             {{"chains", dumps.size()}, {"parameters", params}, {"warnings", json::array()}});
  write_manifest(c, "diagnose", {{"draws", inputs}}, json::array({"diagnostics.json"}));
  log << "diagnosed " << params.size() << " parameters over " << dumps.size() << " chain(s)\n";
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Multivariate spatial mixture models for small-area estimation", "msmm"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Flat key = value run configuration");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--tabulation", c.tabulation, "Direct-estimate CSV");
  app.add_option("--adjacency", c.adjacency, "Edge list of neighbouring areas");
  app.add_option("--population", c.population, "area_id,population CSV");
  app.add_option("-o,--out", c.out, "Output directory");
  app.add_option("--draws", c.draws, "Draw dumps to diagnose (one per chain)");
  app.add_option("--basis_cache", c.basis_cache, "Basis cache file");
  app.add_option("--state_column", c.state_column);
  app.add_option("--county_column", c.county_column);
  app.add_option("--order_column", c.order_column);
  app.add_option("--count_column", c.count_column);
  app.add_option("--se_column", c.se_column);
  app.add_option("--sample_size_column", c.sample_size_column);
  app.add_option("--model", c.model, "msm | msmm | fh");
  app.add_option("--algorithm", c.algorithm, "dp | truncated");
  app.add_option("--init", c.init, "single | by_cell | singletons");
  app.add_option("--truth", c.truth, "table | two_field");
  app.add_option("--basis_fraction", c.basis_fraction);
  app.add_option("--basis_rank", c.basis_rank);
  app.add_option("--intercept", c.intercept);
  app.add_option("--log_population", c.log_population);
  app.add_option("--cell_dummies", c.cell_dummies);
  app.add_option("--sigma2_beta", c.sigma2_beta);
  app.add_option("--a_eta", c.a_eta);
  app.add_option("--b_eta", c.b_eta);
  app.add_option("--a_alpha", c.a_alpha);
  app.add_option("--b_alpha", c.b_alpha);
  app.add_option("--a_sigma2", c.a_sigma2);
  app.add_option("--b_sigma2", c.b_sigma2);
  app.add_option("--alpha_init", c.alpha_init);
  app.add_option("--truncation", c.truncation);
  app.add_option("--gvf_span", c.gvf_span);
  app.add_option("--variance_floor", c.variance_floor);
  auto* iterations = app.add_option("--iterations", c.iterations);
  auto* burn_in = app.add_option("--burn_in", c.burn_in);
  app.add_option("--thin", c.thin);
  app.add_option("--chains", c.chains);
  app.add_option("--seed", c.seed);
  app.add_option("--gelman_rubin", c.gelman_rubin);
  app.add_option("--write_draws", c.write_draws);
  app.add_option("--draws_latent", c.draws_latent);
  app.add_option("--replicates", c.replicates);
  app.add_option("--threads", c.threads);

  auto* fit = app.add_subcommand("fit", "Fit a model and write predictions");
  auto* basis = app.add_subcommand("basis", "Build the spatial basis and report it");
  auto* simulate = app.add_subcommand("simulate", "Run the perturbation study");
  auto* diagnose = app.add_subcommand("diagnose", "Diagnostics from draw dumps");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigExit;
  }
  try {
    if (*simulate) {
      if (iterations->count() == 0) c.iterations = 5000;
      if (burn_in->count() == 0) c.burn_in = 1000;
      return cmd_simulate(c, out);
    }
    if (*fit) return cmd_fit(c, out);
    if (*basis) return cmd_basis(c, out);
    if (*diagnose) return cmd_diagnose(c, out);
  } catch (const Error& e) {
    err << category_name(e.category()) << " error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace msmm::cli

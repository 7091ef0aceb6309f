#include "msmm/posterior.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "msmm/csv.hpp"
#include "msmm/errors.hpp"

namespace msmm {

void McmcConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) throw ConfigError("burn_in must lie in [0, iterations)");
  if (thin < 1) throw ConfigError("thin must be >= 1");
}

int McmcConfig::retained() const { return (iterations - burn_in) / thin; }

PredictionSummary predict_summaries(const PosteriorDraws& draws) {
  const auto t = draws.y.rows();
  if (t == 0) throw EmptyInputError("no retained draws to summarize");
  PredictionSummary s;
  s.log.mean = draws.y.colwise().mean();
  s.log.sd = Eigen::VectorXd::Zero(draws.y.cols());
  if (t > 1) {
    const Eigen::MatrixXd centred = draws.y.rowwise() - s.log.mean.transpose();
    s.log.sd = (centred.colwise().squaredNorm() / static_cast<double>(t - 1)).cwiseSqrt();
  }
  s.count = back_transform(draws.y);
  return s;
}

namespace {

Eigen::MatrixXd stack(const std::vector<PosteriorDraws>& chains,
                      const Eigen::MatrixXd PosteriorDraws::*field) {
  Eigen::Index rows = 0;
  for (const auto& c : chains) rows += (c.*field).rows();
  Eigen::MatrixXd out(rows, (chains.front().*field).cols());
  Eigen::Index at = 0;
  for (const auto& c : chains) {
    const auto& m = c.*field;
    if (m.cols() != out.cols()) throw ShapeError("chains have different dimensions");
    out.middleRows(at, m.rows()) = m;
    at += m.rows();
  }
  return out;
}

}  // namespace

PosteriorDraws merge_chains(const std::vector<PosteriorDraws>& chains) {
  if (chains.empty()) throw EmptyInputError("no chains to merge");
  if (chains.size() == 1) return chains.front();
  PosteriorDraws out;
  out.model = chains.front().model;
  out.mcmc = chains.front().mcmc;
  out.y = stack(chains, &PosteriorDraws::y);
  out.beta = stack(chains, &PosteriorDraws::beta);
  out.eta = stack(chains, &PosteriorDraws::eta);
  for (const auto& [name, first] : chains.front().scalars) {
    Eigen::Index rows = 0;
    for (const auto& c : chains) rows += c.scalars.at(name).size();
    Eigen::VectorXd v(rows);
    Eigen::Index at = 0;
    for (const auto& c : chains) {
      const auto& s = c.scalars.at(name);
      v.segment(at, s.size()) = s;
      at += s.size();
    }
    out.scalars.emplace(name, std::move(v));
  }
  if (chains.front().assignments.size() > 0) {
    Eigen::Index rows = 0;
    for (const auto& c : chains) rows += c.assignments.rows();
    out.assignments.resize(rows, chains.front().assignments.cols());
    Eigen::Index at = 0;
    for (const auto& c : chains) {
      out.assignments.middleRows(at, c.assignments.rows()) = c.assignments;
      at += c.assignments.rows();
    }
  }
  for (const auto& c : chains)
    out.warnings.insert(out.warnings.end(), c.warnings.begin(), c.warnings.end());
  return out;
}

void write_draws(std::ostream& out, const PosteriorDraws& draws, bool include_latent) {
  out << "iteration,parameter,value\n";
  const auto& m = draws.mcmc;
  auto iteration_of = [&](Eigen::Index k) { return m.burn_in + (k + 1) * m.thin; };
  const auto t = std::max<Eigen::Index>(draws.y.rows(), draws.beta.rows());
  for (Eigen::Index k = 0; k < t; ++k) {
    const auto it = iteration_of(k);
    for (const auto& [name, v] : draws.scalars)
      if (k < v.size()) out << it << ',' << name << ',' << csv::format(v(k)) << '\n';
    for (Eigen::Index j = 0; j < draws.beta.cols() && k < draws.beta.rows(); ++j)
      out << it << ",beta[" << j << "]," << csv::format(draws.beta(k, j)) << '\n';
    for (Eigen::Index j = 0; j < draws.eta.cols() && k < draws.eta.rows(); ++j)
      out << it << ",eta[" << j << "]," << csv::format(draws.eta(k, j)) << '\n';
    if (include_latent)
      for (Eigen::Index i = 0; i < draws.y.cols(); ++i)
        out << it << ",y[" << i << "]," << csv::format(draws.y(k, i)) << '\n';
  }
}

std::map<std::string, std::vector<double>> read_draws(std::istream& in) {
  const auto records = csv::read(in);
  if (records.empty() || records.front().size() != 3 || records.front()[0] != "iteration")
    throw SchemaError("draw dump must start with header iteration,parameter,value");
  std::map<std::string, std::vector<std::pair<long, double>>> raw;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& rec = records[k];
    if (rec.size() != 3) throw SchemaError("draw dump line " + std::to_string(k + 1));
    raw[rec[1]].emplace_back(csv::parse_long(rec[0], "iteration"),
                             csv::parse_double(rec[2], "value"));
  }
  std::map<std::string, std::vector<double>> out;
  for (auto& [name, pairs] : raw) {
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& v = out[name];
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(p.second);
  }
  return out;
}

}  // namespace msmm

#include "msmm/tabulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "msmm/csv.hpp"
#include "msmm/errors.hpp"
#include "msmm/loess.hpp"

namespace msmm {

TabulationTable::TabulationTable(std::vector<TabulationRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw SchemaError("tabulation has no rows");
  std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.area_id, a.cell_index) < std::tie(b.area_id, b.cell_index);
  });
  std::size_t with_sizes = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (i > 0 && r.area_id == rows_[i - 1].area_id && r.cell_index == rows_[i - 1].cell_index)
      throw DuplicateKeyError("duplicate entry for area " + r.area_id + ", cell " +
                              std::to_string(r.cell_index));
    if (r.cell_index < 1)
      throw DomainError("cell index must be >= 1 (area " + r.area_id + ")");
    if (!(r.estimate >= 0.0) || !std::isfinite(r.estimate))
      throw DomainError("negative or non-finite estimate for area " + r.area_id);
    if (!(r.std_err >= 0.0) || !std::isfinite(r.std_err))
      throw DomainError("negative or non-finite std_err for area " + r.area_id);
    if (r.sample_size) {
      if (*r.sample_size <= 0)
        throw DomainError("sample size must be positive (area " + r.area_id + ")");
      ++with_sizes;
    }
    cells_ = std::max(cells_, r.cell_index);
    if (areas_.empty() || areas_.back() != r.area_id) areas_.push_back(r.area_id);
  }
  if (with_sizes != 0 && with_sizes != rows_.size())
    throw SchemaError("sample sizes must be given for every row or for none");
  has_sample_sizes_ = with_sizes != 0;
  if (rows_.size() != areas_.size() * static_cast<std::size_t>(cells_))
    throw SchemaError("incomplete table: expected " +
                      std::to_string(areas_.size() * static_cast<std::size_t>(cells_)) +
                      " rows (areas x cells), found " + std::to_string(rows_.size()));
}

TabulationTable parse_tabulation(std::istream& in, const ColumnSchema& schema) {
  const auto records = csv::read(in);
  if (records.empty()) throw SchemaError("tabulation file is empty");
  const auto& header = records.front();
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto state = column(schema.state);
  const auto county = column(schema.county);
  const auto order = column(schema.order);
  const auto count = column(schema.count);
  const auto se = column(schema.std_err);
  const auto size = column(schema.sample_size);
  if (!county || !order || !count || !se)
    throw SchemaError("county, order, count and std_err columns are required");

  std::vector<TabulationRow> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& rec = records[k];
    if (rec.size() != header.size())
      throw SchemaError("line " + std::to_string(k + 1) + ": expected " +
                        std::to_string(header.size()) + " fields");
    const std::string where = "line " + std::to_string(k + 1);
    TabulationRow row;
    row.area_id = (state ? rec[*state] : std::string()) + rec[*county];
    row.cell_index = static_cast<int>(csv::parse_long(rec[*order], where));
    row.estimate = csv::parse_double(rec[*count], where);
    row.std_err = csv::parse_double(rec[*se], where);
    if (size && !rec[*size].empty() && rec[*size] != "NA")
      row.sample_size = csv::parse_long(rec[*size], where);
    rows.push_back(std::move(row));
  }
  return TabulationTable(std::move(rows));
}

TabulationTable load_tabulation(const std::filesystem::path& path, const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tabulation file " + path.string());
  return parse_tabulation(in, schema);
}

LogTable::LogTable(Eigen::VectorXd z_in, Eigen::VectorXd d_in, int cells_in)
    : z(std::move(z_in)), d(std::move(d_in)), cells(cells_in) {
  if (z.size() != d.size()) throw ShapeError("z and d lengths differ");
  if (cells < 1 || z.size() % cells != 0) throw ShapeError("length is not a multiple of cells");
  imputed.assign(static_cast<std::size_t>(z.size()), false);
  for (Eigen::Index i = 0; i < d.size(); ++i) imputed[i] = !(d(i) > 0.0);
  for (Eigen::Index a = 0; a < z.size() / cells; ++a) areas.push_back(std::to_string(a));
}

std::size_t LogTable::position(const std::string& area_id, int cell_index) const {
  auto it = std::find(areas.begin(), areas.end(), area_id);
  if (it == areas.end()) throw ReferenceError("unknown area " + area_id);
  if (cell_index < 1 || cell_index > cells) throw DomainError("cell index out of range");
  return static_cast<std::size_t>(it - areas.begin()) * cells + (cell_index - 1);
}

bool LogTable::complete() const { return (d.array() > 0.0).all() && d.allFinite(); }

double delta_method_variance(double estimate, double std_err) {
  const double denom = estimate + 1.0;
  return std_err * std_err / (denom * denom);
}

LogTable log_transform(const TabulationTable& table) {
  LogTable out;
  const auto n = static_cast<Eigen::Index>(table.size());
  out.z.resize(n);
  out.d.resize(n);
  out.imputed.assign(table.size(), false);
  out.areas = table.areas();
  out.cells = table.cells();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = table.rows()[i];
    out.z(i) = std::log1p(r.estimate);
    const double v = delta_method_variance(r.estimate, r.std_err);
    // A zero estimate or zero SE would make the observation exact; leave it
    // for the GVF.
    if (r.estimate > 0.0 && v > 0.0) {
      out.d(i) = v;
    } else {
      out.d(i) = std::numeric_limits<double>::quiet_NaN();
      out.imputed[i] = true;
    }
  }
  return out;
}

Eigen::VectorXd gvf_predictor(const TabulationTable& table) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(table.size()));
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.rows()[i];
    x(i) = table.has_sample_sizes() ? std::log(static_cast<double>(*r.sample_size))
                                    : std::log1p(r.estimate);
  }
  return x;
}

LogTable gvf_impute(const LogTable& table, const Eigen::VectorXd& predictor, double span,
                    double floor) {
  if (predictor.size() != table.size()) throw ShapeError("gvf predictor length mismatch");
  std::vector<Eigen::Index> defined, missing;
  for (Eigen::Index i = 0; i < table.size(); ++i) {
    if (std::isfinite(table.d(i)) && table.d(i) > 0.0)
      defined.push_back(i);
    else
      missing.push_back(i);
  }
  LogTable out = table;
  if (missing.empty()) return out;
  if (defined.size() < static_cast<std::size_t>(Loess::kMinPoints))
    throw InsufficientDataError("gvf: need at least 5 defined variances, got " +
                                std::to_string(defined.size()));
  Eigen::VectorXd x(static_cast<Eigen::Index>(defined.size()));
  Eigen::VectorXd y(x.size());
  for (std::size_t k = 0; k < defined.size(); ++k) {
    x(k) = predictor(defined[k]);
    y(k) = table.d(defined[k]);
  }
  const Loess smoother(std::move(x), std::move(y), span);
  for (auto i : missing) {
    out.d(i) = std::max(smoother(predictor(i)), floor);
    out.imputed[i] = true;
  }
  return out;
}

CountSummary back_transform(const Eigen::MatrixXd& draws) {
  CountSummary s;
  const auto n = draws.cols();
  const auto t = draws.rows();
  s.mean = Eigen::VectorXd::Zero(n);
  s.sd = Eigen::VectorXd::Zero(n);
  s.cv.assign(static_cast<std::size_t>(n), std::nullopt);
  if (t == 0) return s;
  const Eigen::MatrixXd counts = draws.unaryExpr([](double y) { return std::expm1(y); });
  s.mean = counts.colwise().mean();
  if (t > 1) {
    const Eigen::MatrixXd centred = counts.rowwise() - s.mean.transpose();
    s.sd = (centred.colwise().squaredNorm() / static_cast<double>(t - 1)).cwiseSqrt();
  }
  for (Eigen::Index i = 0; i < n; ++i)
    if (s.mean(i) != 0.0) s.cv[i] = s.sd(i) / s.mean(i);
  return s;
}

void write_predictions(std::ostream& out, const TabulationTable& table,
                       const LogSummary& log_summary, const CountSummary& counts) {
  const auto n = static_cast<Eigen::Index>(table.size());
  if (log_summary.mean.size() != n || counts.mean.size() != n)
    throw ShapeError("prediction summaries do not match the table");
  out << "area_id,cell_index,pred_log_mean,pred_log_sd,pred_count_mean,pred_count_sd,cv,"
         "direct_count,direct_se\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = table.rows()[i];
    out << r.area_id << ',' << r.cell_index << ',' << csv::format(log_summary.mean(i)) << ','
        << csv::format(log_summary.sd(i)) << ',' << csv::format(counts.mean(i)) << ','
        << csv::format(counts.sd(i)) << ',';
    if (r.estimate > 0.0 && counts.cv[i]) out << csv::format(*counts.cv[i]);
    out << ',' << csv::format(r.estimate) << ',' << csv::format(r.std_err) << '\n';
  }
}

}  // namespace msmm

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace msmm {

/// Column names used when reading a tabulation CSV. The area id is the
/// concatenation of the state and county fields; leave `state` empty when the
/// county column already carries a full geography code.
struct ColumnSchema {
  std::string state = "state";
  std::string county = "county";
  std::string order = "order";
  std::string count = "count";
  std::string std_err = "std_err";
  std::string sample_size;  // empty: column absent
};

struct TabulationRow {
  std::string area_id;
  int cell_index = 0;  // 1..L
  double estimate = 0.0;
  double std_err = 0.0;
  std::optional<long> sample_size;
};

/// Direct estimates for every (area, cell) pair, ordered by area then cell.
class TabulationTable {
 public:
  /// Validates and sorts; throws DuplicateKeyError, DomainError or SchemaError.
  explicit TabulationTable(std::vector<TabulationRow> rows);

  const std::vector<TabulationRow>& rows() const { return rows_; }
  const std::vector<std::string>& areas() const { return areas_; }
  int cells() const { return cells_; }
  std::size_t size() const { return rows_.size(); }
  bool has_sample_sizes() const { return has_sample_sizes_; }

 private:
  std::vector<TabulationRow> rows_;
  std::vector<std::string> areas_;
  int cells_ = 0;
  bool has_sample_sizes_ = false;
};

TabulationTable load_tabulation(const std::filesystem::path& path,
                                const ColumnSchema& schema = {});
TabulationTable parse_tabulation(std::istream& in, const ColumnSchema& schema = {});

/// Log-scale estimates z = log(estimate + 1) and their variances d.
///
/// Entry i corresponds to area i / cells and cell (i % cells) + 1. Variances
/// that could not be derived are NaN and flagged in `imputed`.
struct LogTable {
  Eigen::VectorXd z;
  Eigen::VectorXd d;
  std::vector<bool> imputed;
  std::vector<std::string> areas;
  int cells = 1;

  LogTable() = default;
  /// Builds a table over synthetic area ids "0", "1", ...; z.size() must be a
  /// multiple of `cells`.
  LogTable(Eigen::VectorXd z, Eigen::VectorXd d, int cells = 1);

  Eigen::Index size() const { return z.size(); }
  std::size_t position(const std::string& area_id, int cell_index) const;
  bool complete() const;
};

double delta_method_variance(double estimate, double std_err);

LogTable log_transform(const TabulationTable& table);

/// GVF predictor: log sample size when available, otherwise log(estimate + 1).
Eigen::VectorXd gvf_predictor(const TabulationTable& table);

/// Fills undefined variances with a LOESS fit of the defined variances on
/// `predictor`. Imputed values are floored at `floor`.
LogTable gvf_impute(const LogTable& table, const Eigen::VectorXd& predictor,
                    double span = 0.75, double floor = 1e-6);

/// Count-scale posterior summary of log-scale draws (rows = draws).
struct CountSummary {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  std::vector<std::optional<double>> cv;
};

CountSummary back_transform(const Eigen::MatrixXd& draws);

/// Log-scale posterior mean and sd per entry (rows = draws, sd with n - 1).
struct LogSummary {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
};

/// Writes the prediction CSV. CV is left blank when the direct estimate or
/// the predicted mean is zero.
void write_predictions(std::ostream& out, const TabulationTable& table,
                       const LogSummary& log_summary, const CountSummary& counts);

}  // namespace msmm

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace stackboost {

enum class ErrorKind {
  kDimensionMismatch,
  kNonFinite,
  kEmpty,
  kConstantTarget,
  kTooFewColumns,
  kUnsupportedM,
  kUnknownColumn,
  kInvalidArgument,
  kParse,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// n x p matrix of base-model predictions. Column j holds the predictions of
/// the model identified by column_ids()[j]. Construction checks the id list;
/// numeric content is checked by validate_pair().
class PredictionMatrix {
 public:
  PredictionMatrix(Eigen::MatrixXd values, std::vector<std::string> column_ids);

  const Eigen::MatrixXd& values() const { return values_; }
  const std::vector<std::string>& column_ids() const { return ids_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  auto column(Eigen::Index j) const { return values_.col(j); }
  const std::string& id(Eigen::Index j) const { return ids_[static_cast<std::size_t>(j)]; }

  std::optional<Eigen::Index> find(const std::string& id) const;

  /// Columns in the given order, ids carried along.
  PredictionMatrix select_columns(const std::vector<Eigen::Index>& columns) const;
  PredictionMatrix select_rows(const std::vector<Eigen::Index>& rows) const;

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

/// Regression target (or a stagewise residual).
class TargetVector {
 public:
  explicit TargetVector(Eigen::VectorXd values) : values_(std::move(values)) {}

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double mean() const { return values_.mean(); }
  /// Total sum of squares about the mean.
  double sst() const;

  TargetVector select_rows(const std::vector<Eigen::Index>& rows) const;

 private:
  Eigen::VectorXd values_;
};

/// Throws Error{kEmpty | kDimensionMismatch | kNonFinite} on the first violated
/// invariant. Row count is checked before finiteness.
void validate_pair(const PredictionMatrix& X, const TargetVector& y);

struct ColumnStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd sigma;  // population standard deviation (divisor n)
};

ColumnStats column_stats(const PredictionMatrix& X);

/// Population mean and standard deviation by two passes.
std::pair<double, double> mean_and_sigma(const Eigen::Ref<const Eigen::VectorXd>& v);

// A column is treated as constant when its spread is below rounding noise of
// its level. Constant columns fit slope 0.
inline constexpr double kDegenerateSigmaRel = 1e-12;
bool is_degenerate(double sigma, double mean);

struct SquaredLoss {
  static double evaluate(const Eigen::Ref<const Eigen::VectorXd>& pred,
                         const Eigen::Ref<const Eigen::VectorXd>& actual);
};

double sum_of_squares_about_mean(const Eigen::Ref<const Eigen::VectorXd>& v);

struct StageRecord {
  int stage = 0;
  std::string selected;
  Eigen::Index column = -1;
  double alpha = 0.0;          // raw OLS slope
  double applied_alpha = 0.0;  // after stage weighting
  double beta = 0.0;
  double loss = 0.0;           // training L2 loss of the ensemble after this stage
  double magnitude = 0.0;      // |alpha| * sigma of the original column
  bool accepted = true;
};

enum class StopReason {
  kNone,            // non-iterative fit
  kCriterion,       // the configured stop criterion fired
  kConverged,       // no column can reduce the residual any further
  kMaxStages,       // safety cap reached
  kNoUsableColumn,  // every column is constant; bias-only model
  kExhausted,       // forward selection ran out of rounds / patience
};

std::string_view to_string(StopReason reason);
std::optional<StopReason> parse_stop_reason(std::string_view text);

/// Sparse linear combiner f(x) = sum_i w_i x_i + bias.
struct EnsembleModel {
  std::map<std::string, double> weights;
  double bias = 0.0;
  std::vector<StageRecord> trace;
  StopReason stop_reason = StopReason::kNone;

  bool truncated() const { return stop_reason == StopReason::kMaxStages; }
  bool no_usable_column() const { return stop_reason == StopReason::kNoUsableColumn; }

  /// Number of accepted stages in the trace.
  std::size_t accepted_stages() const;
  /// Number of weights that are nonzero.
  std::size_t nonzero_weights() const;

  /// Throws Error{kUnknownColumn} if a weighted id is absent from X.
  Eigen::VectorXd predict(const PredictionMatrix& X) const;
};

}  // namespace stackboost

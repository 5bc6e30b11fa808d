#include "stackboost/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stackboost {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kEmpty: return "Empty";
    case ErrorKind::kConstantTarget: return "ConstantTarget";
    case ErrorKind::kTooFewColumns: return "TooFewColumns";
    case ErrorKind::kUnsupportedM: return "UnsupportedM";
    case ErrorKind::kUnknownColumn: return "UnknownColumn";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kParse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

PredictionMatrix::PredictionMatrix(Eigen::MatrixXd values, std::vector<std::string> column_ids)
    : values_(std::move(values)), ids_(std::move(column_ids)) {
  if (static_cast<Eigen::Index>(ids_.size()) != values_.cols()) {
    std::ostringstream msg;
    msg << "matrix has " << values_.cols() << " columns but " << ids_.size() << " ids";
    throw Error(ErrorKind::kDimensionMismatch, msg.str());
  }
  for (std::size_t j = 0; j < ids_.size(); ++j) {
    auto [it, inserted] = index_.emplace(ids_[j], static_cast<Eigen::Index>(j));
    if (!inserted) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate column id '" + ids_[j] + "'");
    }
  }
}

std::optional<Eigen::Index> PredictionMatrix::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PredictionMatrix PredictionMatrix::select_columns(const std::vector<Eigen::Index>& columns) const {
  Eigen::MatrixXd sub(values_.rows(), static_cast<Eigen::Index>(columns.size()));
  std::vector<std::string> ids;
  ids.reserve(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    sub.col(static_cast<Eigen::Index>(j)) = values_.col(columns[j]);
    ids.push_back(ids_[static_cast<std::size_t>(columns[j])]);
  }
  return PredictionMatrix(std::move(sub), std::move(ids));
}

PredictionMatrix PredictionMatrix::select_rows(const std::vector<Eigen::Index>& rows) const {
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), values_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sub.row(static_cast<Eigen::Index>(i)) = values_.row(rows[i]);
  }
  return PredictionMatrix(std::move(sub), ids_);
}

double TargetVector::sst() const { return sum_of_squares_about_mean(values_); }

TargetVector TargetVector::select_rows(const std::vector<Eigen::Index>& rows) const {
  Eigen::VectorXd sub(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) sub(static_cast<Eigen::Index>(i)) = values_(rows[i]);
  return TargetVector(std::move(sub));
}

void validate_pair(const PredictionMatrix& X, const TargetVector& y) {
  if (X.rows() < 2 || X.cols() < 1) {
    std::ostringstream msg;
    msg << "need at least 2 rows and 1 column, got " << X.rows() << "x" << X.cols();
    throw Error(ErrorKind::kEmpty, msg.str());
  }
  if (X.rows() != y.size()) {
    std::ostringstream msg;
    msg << "matrix has " << X.rows() << " rows but target has length " << y.size();
    throw Error(ErrorKind::kDimensionMismatch, msg.str());
  }
  if (!X.values().allFinite()) {
    throw Error(ErrorKind::kNonFinite, "prediction matrix contains NaN or infinite entries");
  }
  if (!y.values().allFinite()) {
    throw Error(ErrorKind::kNonFinite, "target contains NaN or infinite entries");
  }
}

std::pair<double, double> mean_and_sigma(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = v.sum() / n;
  const double ss = (v.array() - mean).square().sum();
  return {mean, std::sqrt(ss / n)};
}

ColumnStats column_stats(const PredictionMatrix& X) {
  ColumnStats stats{Eigen::VectorXd(X.cols()), Eigen::VectorXd(X.cols())};
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    auto [mean, sigma] = mean_and_sigma(X.column(j));
    stats.mean(j) = mean;
    stats.sigma(j) = sigma;
  }
  return stats;
}

bool is_degenerate(double sigma, double mean) {
  return sigma <= kDegenerateSigmaRel * std::max(1.0, std::abs(mean));
}

double SquaredLoss::evaluate(const Eigen::Ref<const Eigen::VectorXd>& pred,
                             const Eigen::Ref<const Eigen::VectorXd>& actual) {
  return (pred - actual).squaredNorm();
}

double sum_of_squares_about_mean(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double mean = v.sum() / static_cast<double>(v.size());
  return (v.array() - mean).square().sum();
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kNone: return "none";
    case StopReason::kCriterion: return "criterion";
    case StopReason::kConverged: return "converged";
    case StopReason::kMaxStages: return "max_stages";
    case StopReason::kNoUsableColumn: return "no_usable_column";
    case StopReason::kExhausted: return "exhausted";
  }
  return "none";
}

std::optional<StopReason> parse_stop_reason(std::string_view text) {
  for (auto r : {StopReason::kNone, StopReason::kCriterion, StopReason::kConverged,
                 StopReason::kMaxStages, StopReason::kNoUsableColumn, StopReason::kExhausted}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

std::size_t EnsembleModel::accepted_stages() const {
  return static_cast<std::size_t>(
      std::count_if(trace.begin(), trace.end(), [](const StageRecord& s) { return s.accepted; }));
}

std::size_t EnsembleModel::nonzero_weights() const {
  return static_cast<std::size_t>(std::count_if(
      weights.begin(), weights.end(), [](const auto& kv) { return kv.second != 0.0; }));
}

Eigen::VectorXd EnsembleModel::predict(const PredictionMatrix& X) const {
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), bias);
  for (const auto& [id, w] : weights) {
    auto col = X.find(id);
    if (!col) throw Error(ErrorKind::kUnknownColumn, "model weight for '" + id + "' has no column");
    out += w * X.column(*col);
  }
  return out;
}

}  // namespace stackboost

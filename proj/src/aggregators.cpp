#include "stackboost/aggregators.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace stackboost {

namespace {

void check_losses(const PredictionMatrix& X, const std::vector<double>& losses) {
  if (static_cast<Eigen::Index>(losses.size()) != X.cols()) {
    std::ostringstream msg;
    msg << "expected " << X.cols() << " per-model losses, got " << losses.size();
    throw Error(ErrorKind::kDimensionMismatch, msg.str());
  }
  for (double e : losses) {
    if (!std::isfinite(e)) throw Error(ErrorKind::kNonFinite, "per-model loss is not finite");
  }
}

}  // namespace

EnsembleModel fit_best(const PredictionMatrix& X, const TargetVector& y,
                       const std::vector<double>& per_model_loss) {
  validate_pair(X, y);
  check_losses(X, per_model_loss);
  std::size_t best = 0;
  for (std::size_t j = 1; j < per_model_loss.size(); ++j) {
    if (per_model_loss[j] < per_model_loss[best]) best = j;
  }
  EnsembleModel model;
  model.weights[X.id(static_cast<Eigen::Index>(best))] = 1.0;
  return model;
}

EnsembleModel fit_bem(const PredictionMatrix& X, const TargetVector& y) {
  validate_pair(X, y);
  EnsembleModel model;
  const double w = 1.0 / static_cast<double>(X.cols());
  for (const auto& id : X.column_ids()) model.weights[id] = w;
  return model;
}

EnsembleModel fit_iew(const PredictionMatrix& X, const TargetVector& y,
                      const std::vector<double>& per_model_loss) {
  validate_pair(X, y);
  check_losses(X, per_model_loss);
  for (double e : per_model_loss) {
    if (e < 0.0) throw Error(ErrorKind::kInvalidArgument, "expected errors must be >= 0");
  }

  const Eigen::Index p = X.cols();
  Eigen::VectorXd raw(p);
  std::size_t zeros = 0;
  for (double e : per_model_loss) zeros += (e == 0.0);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double e = per_model_loss[static_cast<std::size_t>(j)];
    raw(j) = zeros > 0 ? (e == 0.0 ? 1.0 : 0.0) : 1.0 / e;
  }
  raw /= raw.sum();

  EnsembleModel model;
  for (Eigen::Index j = 0; j < p; ++j) model.weights[X.id(j)] = raw(j);
  return model;
}

EnsembleModel fit_caruana(const PredictionMatrix& X, const TargetVector& y,
                          const CaruanaConfig& cfg) {
  validate_pair(X, y);
  if (cfg.max_rounds < 1 || cfg.patience < 1 || cfg.patience > cfg.max_rounds) {
    throw Error(ErrorKind::kInvalidArgument, "caruana needs 1 <= patience <= max_rounds");
  }
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const Eigen::VectorXd& target = y.values();

  Eigen::VectorXd bag_sum = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Index> bag;
  std::vector<StageRecord> rounds;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t best_size = 0;
  int stale = 0;

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const double size = static_cast<double>(bag.size() + 1);
    Eigen::Index pick = -1;
    double pick_loss = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double loss = ((bag_sum + X.column(j)) / size - target).squaredNorm();
      if (pick < 0 || loss < pick_loss) {
        pick = j;
        pick_loss = loss;
      }
    }
    bag.push_back(pick);
    bag_sum += X.column(pick);

    StageRecord rec;
    rec.stage = round;
    rec.column = pick;
    rec.selected = X.id(pick);
    rec.alpha = rec.applied_alpha = 1.0;
    rec.loss = pick_loss;
    rounds.push_back(std::move(rec));

    if (pick_loss < best_loss) {
      best_loss = pick_loss;
      best_size = bag.size();
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }

  EnsembleModel model;
  const double size = static_cast<double>(best_size);
  std::map<std::string, int> counts;
  for (std::size_t r = 0; r < best_size; ++r) ++counts[X.id(bag[r])];
  for (const auto& [id, count] : counts) model.weights[id] = static_cast<double>(count) / size;
  for (std::size_t r = best_size; r < rounds.size(); ++r) rounds[r].accepted = false;
  model.trace = std::move(rounds);
  model.stop_reason = StopReason::kExhausted;
  return model;
}

std::vector<double> column_mse(const PredictionMatrix& X, const TargetVector& y) {
  validate_pair(X, y);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    out.push_back(SquaredLoss::evaluate(X.column(j), y.values()) / static_cast<double>(X.rows()));
  }
  return out;
}

}  // namespace stackboost

#include "stackboost/boosting.hpp"

#include <optional>
#include <set>

#include "stackboost/least_squares.hpp"

namespace stackboost {

namespace {

// A candidate whose loss reduction is below this fraction of SST(y) cannot be
// told apart from rounding; the run has converged.
constexpr double kConvergedGainRel = 1e-15;

}  // namespace

double laplace_weight(int stage) {
  if (stage < 1) throw Error(ErrorKind::kInvalidArgument, "stage index starts at 1");
  return static_cast<double>(stage) / static_cast<double>(stage + 1);
}

namespace detail {

EnsembleModel fit_stagewise(const PredictionMatrix& X, const TargetVector& y,
                            const BoostConfig& cfg, const StageWeight& stage_weight) {
  validate_pair(X, y);
  if (cfg.max_stages < 1) throw Error(ErrorKind::kInvalidArgument, "max_stages must be >= 1");
  const double sst = y.sst();
  if (!(sst > 0.0)) throw Error(ErrorKind::kConstantTarget, "boosting needs a non-constant target");

  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const ColumnStats stats = column_stats(X);

  std::vector<Eigen::Index> usable;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!is_degenerate(stats.sigma(j), stats.mean(j))) usable.push_back(j);
  }

  EnsembleModel model;
  if (usable.empty()) {
    model.bias = y.mean();
    model.stop_reason = StopReason::kNoUsableColumn;
    return model;
  }

  const auto criterion = to_criterion(cfg.stop);
  Eigen::VectorXd residual = y.values();
  std::set<Eigen::Index> selected;
  std::vector<StageSummary> history;
  std::optional<std::size_t> previous;  // index of the last accepted stage

  for (int stage = 1;; ++stage) {
    if (stage > cfg.max_stages) {
      model.stop_reason = StopReason::kMaxStages;
      break;
    }

    Eigen::Index best = -1;
    SimpleFit best_fit;
    for (Eigen::Index j : usable) {
      const SimpleFit fit = fit_simple(X.column(j), residual);
      if (best < 0 || fit.ssr < best_fit.ssr) {
        best = j;
        best_fit = fit;
      }
    }

    StageRecord rec;
    rec.stage = stage;
    rec.column = best;
    rec.selected = X.id(best);
    rec.alpha = best_fit.alpha;
    rec.applied_alpha = stage_weight(stage) * best_fit.alpha;
    rec.beta = best_fit.beta;
    // Training loss of the ensemble once this stage is applied with its
    // weighted slope; equals best_fit.ssr when the weight is 1.
    Eigen::VectorXd next = residual;
    next.array() -= rec.applied_alpha * X.column(best).array() + rec.beta;
    rec.loss = next.squaredNorm();
    rec.magnitude = std::abs(best_fit.alpha) * stats.sigma(best);

    bool stop = false;
    StopReason reason = StopReason::kCriterion;
    if (stage > 1) {
      const double gain = residual.squaredNorm() - best_fit.ssr;
      if (gain <= kConvergedGainRel * sst) {
        stop = true;
        reason = StopReason::kConverged;
      } else if (criterion) {
        const int k = static_cast<int>(selected.size() + (selected.count(best) ? 0 : 1));
        history.push_back({static_cast<int>(n), k, rec.loss});
        stop = classical_should_stop(*criterion, history, sst);
        history.pop_back();
      } else {
        stop = icm_should_stop(rec, &model.trace[*previous]);
      }
    }

    if (stop) {
      rec.accepted = false;
      // Undo the damping of the last accepted stage; the bias stays.
      const StageRecord& last = model.trace[*previous];
      // Re-summed in stage order so the result equals the sum it would have
      // been had that stage applied its full slope.
      if (last.applied_alpha != last.alpha) {
        double w = 0.0;
        for (const StageRecord& r : model.trace) {
          if (r.column == last.column) w += (&r == &last) ? r.alpha : r.applied_alpha;
        }
        model.weights[last.selected] = w;
      }
      model.trace.push_back(std::move(rec));
      model.stop_reason = reason;
      break;
    }

    residual = std::move(next);
    model.weights[rec.selected] += rec.applied_alpha;
    model.bias += rec.beta;
    selected.insert(best);
    history.push_back({static_cast<int>(n), static_cast<int>(selected.size()), rec.loss});
    model.trace.push_back(std::move(rec));
    previous = model.trace.size() - 1;
  }
  return model;
}

}  // namespace detail

EnsembleModel fit_boost(const PredictionMatrix& X, const TargetVector& y, const BoostConfig& cfg) {
  return detail::fit_stagewise(X, y, cfg, [](int) { return 1.0; });
}

EnsembleModel fit_rboost(const PredictionMatrix& X, const TargetVector& y, const BoostConfig& cfg) {
  return detail::fit_stagewise(X, y, cfg, laplace_weight);
}

}  // namespace stackboost

#pragma once

#include <functional>

#include "stackboost/core.hpp"
#include "stackboost/stop_criteria.hpp"

namespace stackboost {

struct BoostConfig {
  StopKind stop = StopKind::ICM;
  int max_stages = 10000;
};

/// Laplace rule-of-succession weight j / (j + 1) for stage j >= 1.
double laplace_weight(int stage);

/// Componentwise L2 boosting over the prediction columns.
///
/// Each stage fits every column alone against the current residual and picks
/// the lowest loss (lowest column index on ties, constant columns only when
/// nothing else exists). The stop rule is evaluated on the candidate before it
/// is applied, so the stage that triggers it is recorded in the trace with
/// accepted == false and contributes nothing. Columns picked several times
/// accumulate their coefficients into one weight.
///
/// Requires SST(y) > 0. If every column is constant the result is the
/// bias-only model mean(y) with stop_reason == kNoUsableColumn.
EnsembleModel fit_boost(const PredictionMatrix& X, const TargetVector& y, const BoostConfig& cfg);

/// Boosting with each stage's slope damped by laplace_weight(j) in both the
/// residual update and the accumulated weight. When the stop rule fires at
/// stage j, the damping of stage j - 1 is undone in the weights (the bias is
/// left as is), so a run that accepts one stage ends with the full slope.
EnsembleModel fit_rboost(const PredictionMatrix& X, const TargetVector& y, const BoostConfig& cfg);

namespace detail {

using StageWeight = std::function<double(int)>;

/// Shared stagewise loop; fit_boost uses a weight of 1 for every stage and
/// fit_rboost uses laplace_weight.
EnsembleModel fit_stagewise(const PredictionMatrix& X, const TargetVector& y,
                            const BoostConfig& cfg, const StageWeight& stage_weight);

}  // namespace detail

}  // namespace stackboost

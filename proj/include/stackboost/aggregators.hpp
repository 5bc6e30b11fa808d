#pragma once

#include <vector>

#include "stackboost/core.hpp"

namespace stackboost {

/// Weight 1 on the column with the lowest loss (lowest index on ties).
EnsembleModel fit_best(const PredictionMatrix& X, const TargetVector& y,
                       const std::vector<double>& per_model_loss);

/// Uniform average of all columns.
EnsembleModel fit_bem(const PredictionMatrix& X, const TargetVector& y);

/// Weights proportional to 1 / expected error. Zero-error models, if any,
/// share the whole weight equally.
EnsembleModel fit_iew(const PredictionMatrix& X, const TargetVector& y,
                      const std::vector<double>& per_model_loss);

struct CaruanaConfig {
  int max_rounds = 50;
  int patience = 10;  // rounds without strict improvement before halting
};

/// Forward ensemble selection with replacement from an empty bag. Every round
/// adds the column whose inclusion gives the bag average with the lowest L2
/// loss. The returned bag is the prefix with the best loss; weights are
/// selection counts over its size.
///
/// The trace holds one record per round (alpha = 1 selection, loss = bag
/// loss after the round); rounds past the returned prefix are marked
/// accepted == false.
EnsembleModel fit_caruana(const PredictionMatrix& X, const TargetVector& y,
                          const CaruanaConfig& cfg = {});

/// Mean squared error of every column against y.
std::vector<double> column_mse(const PredictionMatrix& X, const TargetVector& y);

}  // namespace stackboost

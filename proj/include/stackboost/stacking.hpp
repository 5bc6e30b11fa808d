#pragma once

#include <vector>

#include "stackboost/core.hpp"
#include "stackboost/stop_criteria.hpp"

namespace stackboost {

/// Outcome of a criterion sweep over the number of features / components.
struct SweepResult {
  int chosen_k = 1;
  /// scores[k-1] scores the k-feature fit; +inf where k is out of range.
  std::vector<CriterionScore> scores;
  EnsembleModel model;
  /// Training SSR of the k-feature fit, k = 1..available.
  std::vector<double> path_ssr;
  /// FSR: column indices in the order they were added.
  std::vector<Eigen::Index> path;
  /// PCR: eigenvalues of the column covariance (divisor n), descending.
  Eigen::VectorXd eigenvalues;
  /// PCR: principal directions; PLS: weight vectors. One column per component.
  Eigen::MatrixXd directions;
};

/// Unconstrained OLS over all columns with intercept (minimum norm when
/// rank deficient).
EnsembleModel fit_ols_meta(const PredictionMatrix& X, const TargetVector& y);

struct GemOptions {
  double rel_tolerance = 1e-10;
  int max_iterations = 100000;
};

/// Least squares over the probability simplex (w >= 0, sum w = 1, no bias),
/// solved by accelerated projected gradient.
EnsembleModel fit_gem(const PredictionMatrix& X, const TargetVector& y, const GemOptions& opts = {});

/// Euclidean projection onto the probability simplex (sort and threshold).
Eigen::VectorXd project_to_simplex(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Forward stepwise regression without replacement, sized by the global
/// criterion argmin over k = 1..p (smallest k on ties).
SweepResult fit_fsr(const PredictionMatrix& X, const TargetVector& y, CriterionKind kind);

// Components with eigenvalue below this fraction of the largest are dropped.
inline constexpr double kEigenCutoffRel = 1e-12;

/// Principal component regression sized by the criterion sweep. The model is
/// composed back into weights on the original columns.
SweepResult fit_pcr(const PredictionMatrix& X, const TargetVector& y, CriterionKind kind);

/// PLS1 (NIPALS) sized by the criterion sweep, composed back into weights on
/// the original columns.
SweepResult fit_pls(const PredictionMatrix& X, const TargetVector& y, CriterionKind kind);

}  // namespace stackboost

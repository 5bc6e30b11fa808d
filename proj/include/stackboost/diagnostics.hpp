#pragma once

#include <vector>

#include "stackboost/core.hpp"

namespace stackboost {

/// Variance inflation factors with a bucket histogram.
struct VifReport {
  std::vector<double> vif;  // one per column, >= 1 or +inf
  /// Bucket edges; bucket b covers [edge[b-1], edge[b]) with implicit 1 and
  /// +inf at the ends (+inf itself falls in the top bucket).
  std::vector<double> thresholds;
  std::vector<std::size_t> bucket_counts;

  double bucket_fraction(std::size_t bucket) const;
  /// Fraction of columns with VIF strictly greater than the threshold.
  double fraction_above(double threshold) const;
};

inline const std::vector<double> kDefaultVifThresholds = {5.0, 10.0, 1000.0};

/// VIF_i = 1 / (1 - R^2_i), R^2_i from regressing column i on all the others
/// with intercept (minimum norm). R^2 is clamped to [0, 1]; R^2 above
/// 1 - 1e-12 and constant columns report +inf. Throws kTooFewColumns for p < 2.
VifReport vif(const PredictionMatrix& X, const std::vector<double>& thresholds = kDefaultVifThresholds);

/// SSR(pred, actual) / SST(actual). Throws kConstantTarget when SST == 0.
double relative_mse(const Eigen::Ref<const Eigen::VectorXd>& pred,
                    const Eigen::Ref<const Eigen::VectorXd>& actual);

enum class Confidence { k90, k95 };

/// Rank table for m methods (rows) over N datasets (columns).
struct RankTable {
  Eigen::MatrixXd errors;
  Eigen::MatrixXd ranks;      // 1 = lowest error, ties averaged
  Eigen::VectorXd mean_ranks;
  double friedman_statistic = 0.0;
  double nemenyi_cd = 0.0;    // NaN when m is outside the bundled table
  Confidence confidence = Confidence::k95;
};

/// Ascending per-dataset ranks with tie averaging and the Friedman chi-square
/// 12N/(m(m+1)) [sum_j Rbar_j^2 - m(m+1)^2/4].
RankTable friedman_ranks(const Eigen::Ref<const Eigen::MatrixXd>& errors,
                         Confidence confidence = Confidence::k95);

/// Studentized-range quantile q_alpha / sqrt(2) for m groups and infinite
/// degrees of freedom. Throws kUnsupportedM outside m = 2..20.
double nemenyi_q(int m, Confidence confidence);

/// Nemenyi critical difference q_alpha * sqrt(m(m+1) / (6N)).
double nemenyi_cd(int m, int datasets, Confidence confidence);

}  // namespace stackboost

#pragma once

#include <Eigen/Dense>

namespace stackboost {

/// Single-feature OLS r ~ alpha * f + beta.
struct SimpleFit {
  double alpha = 0.0;
  double beta = 0.0;
  double ssr = 0.0;
  double r2 = 0.0;  // 0 when the target is constant
};

/// Closed-form single-feature OLS. A constant f yields alpha = 0,
/// beta = mean(r), ssr = SST(r).
///
/// The residual sum of squares is taken from the ANOVA split
/// ssr = SST(r) - alpha * S_fr, so |alpha| * sigma_f == sqrt((SST - ssr) / n)
/// holds up to rounding.
SimpleFit fit_simple(const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& r);

struct MultiFit {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double ssr = 0.0;
  Eigen::Index rank = 0;
};

// Relative pivot threshold below which a direction is treated as null.
inline constexpr double kRankTolerance = 1e-10;

/// Least squares over k columns. Rank-deficient systems get the minimum-norm
/// solution. With an intercept, columns and target are centered first.
MultiFit fit_multi(const Eigen::Ref<const Eigen::MatrixXd>& X,
                   const Eigen::Ref<const Eigen::VectorXd>& y, bool with_intercept);

/// Minimum-norm least-squares solution of A x ~ b (no centering).
Eigen::VectorXd solve_min_norm(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::VectorXd>& b,
                               Eigen::Index* rank = nullptr);

}  // namespace stackboost

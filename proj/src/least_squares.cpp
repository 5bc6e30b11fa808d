#include "stackboost/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "stackboost/core.hpp"

namespace stackboost {

SimpleFit fit_simple(const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& r) {
  const double n = static_cast<double>(f.size());
  const double mean_f = f.sum() / n;
  const double mean_r = r.sum() / n;

  double sff = 0.0, sfr = 0.0, srr = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double df = f(i) - mean_f;
    const double dr = r(i) - mean_r;
    sff += df * df;
    sfr += df * dr;
    srr += dr * dr;
  }

  SimpleFit fit;
  if (is_degenerate(std::sqrt(sff / n), mean_f)) {
    fit.alpha = 0.0;
    fit.beta = mean_r;
    fit.ssr = srr;
    fit.r2 = 0.0;
    return fit;
  }
  fit.alpha = sfr / sff;
  fit.beta = mean_r - fit.alpha * mean_f;
  fit.ssr = std::max(0.0, srr - fit.alpha * sfr);
  fit.r2 = srr > 0.0 ? std::clamp(1.0 - fit.ssr / srr, 0.0, 1.0) : 0.0;
  return fit;
}

Eigen::VectorXd solve_min_norm(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::VectorXd>& b, Eigen::Index* rank) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(kRankTolerance);
  cod.compute(A);
  if (rank) *rank = cod.rank();
  if (cod.rank() == 0) return Eigen::VectorXd::Zero(A.cols());
  return cod.solve(b);
}

MultiFit fit_multi(const Eigen::Ref<const Eigen::MatrixXd>& X,
                   const Eigen::Ref<const Eigen::VectorXd>& y, bool with_intercept) {
  MultiFit fit;
  if (with_intercept) {
    const Eigen::RowVectorXd x_mean = X.colwise().mean();
    const double y_mean = y.mean();
    const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
    const Eigen::VectorXd yc = y.array() - y_mean;
    fit.coefficients = solve_min_norm(Xc, yc, &fit.rank);
    fit.intercept = y_mean - x_mean.dot(fit.coefficients);
  } else {
    fit.coefficients = solve_min_norm(X, y, &fit.rank);
    fit.intercept = 0.0;
  }
  const Eigen::VectorXd residual =
      (y - X * fit.coefficients).array() - fit.intercept;
  fit.ssr = residual.squaredNorm();
  return fit;
}

}  // namespace stackboost

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stackboost/core.hpp"
#include "stackboost/harness.hpp"

namespace testsupport {

using stackboost::PredictionMatrix;
using stackboost::TargetVector;
using Engine = stackboost::rng::Engine;

inline double uniform(Engine& g, double lo, double hi) {
  return lo + (hi - lo) * stackboost::rng::uniform01(g);
}

inline int uniform_int(Engine& g, int lo, int hi) {
  return lo + static_cast<int>(stackboost::rng::bounded(g, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline Eigen::MatrixXd normal_matrix(Engine& g, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = stackboost::rng::normal(g);
  return m;
}

inline Eigen::VectorXd normal_vector(Engine& g, Eigen::Index n) { return normal_matrix(g, n, 1); }

inline std::vector<std::string> make_ids(Eigen::Index p, const std::string& prefix = "m") {
  std::vector<std::string> ids;
  for (Eigen::Index j = 0; j < p; ++j) ids.push_back(prefix + std::to_string(j));
  return ids;
}

inline PredictionMatrix matrix(Eigen::MatrixXd values) {
  const Eigen::Index p = values.cols();
  return PredictionMatrix(std::move(values), make_ids(p));
}

struct Instance {
  PredictionMatrix X;
  TargetVector y;
};

/// Independent normal columns and target with random offsets and scales.
inline Instance random_instance(Engine& g, Eigen::Index n, Eigen::Index p) {
  Eigen::MatrixXd values = normal_matrix(g, n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    values.col(j) = values.col(j) * uniform(g, 0.2, 3.0) + Eigen::VectorXd::Constant(n, uniform(g, -2.0, 2.0));
  }
  Eigen::VectorXd y = values * normal_vector(g, p) + normal_vector(g, n);
  y.array() += uniform(g, -3.0, 3.0);
  return {matrix(std::move(values)), TargetVector(std::move(y))};
}

/// Zero-mean columns and target (every column centered exactly by construction).
inline Instance centered_instance(Engine& g, Eigen::Index n, Eigen::Index p) {
  Eigen::MatrixXd values = normal_matrix(g, n, p);
  Eigen::VectorXd y = values * normal_vector(g, p) + normal_vector(g, n);
  values.rowwise() -= values.colwise().mean();
  y.array() -= y.mean();
  return {matrix(std::move(values)), TargetVector(std::move(y))};
}

/// Columns look like base-model predictions: the target plus model-specific
/// bias, scale error and noise, so they are strongly correlated with y and
/// with each other.
inline Instance ensemble_instance(Engine& g, Eigen::Index n, Eigen::Index p) {
  Eigen::VectorXd y = normal_vector(g, n) * uniform(g, 0.5, 4.0);
  y.array() += uniform(g, -5.0, 5.0);
  Eigen::MatrixXd values(n, p);
  const Eigen::VectorXd shared = normal_vector(g, n);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double scale = uniform(g, 0.7, 1.3);
    const double shift = uniform(g, -0.5, 0.5);
    const double noise = uniform(g, 0.05, 0.6);
    values.col(j) = scale * y + 0.3 * shared + noise * normal_vector(g, n);
    values.col(j).array() += shift;
  }
  return {matrix(std::move(values)), TargetVector(std::move(y))};
}

/// Three columns built so damped boosting with ICM accepts column 0 at
/// stage 1 and stops at stage 2 on column 1.
///
/// With centered orthogonal u (fit) and e (residual), ||u||^2 = n and
/// ||e||^2 = s n: y = u + e, f0 = u, f1 = e - t u, f2 = small noise. Column 0
/// explains n of y, column 1 explains (s - t)^2 n / (s + t^2) < n, but after
/// half of u is removed column 1 explains (s - t/2)^2 n / (s + t^2) > n.
inline Instance stop_at_stage_two_instance(Engine& g, Eigen::Index n) {
  const double s = uniform(g, 1.5, 3.0);
  const double lo = (s - 1.0) / 2.0;
  const double hi = (-s + std::sqrt(s * s + 3.0 * (s * s - s))) / 1.5;
  const double t = lo + (hi - lo) * uniform(g, 0.3, 0.7);

  Eigen::VectorXd u = normal_vector(g, n);
  u.array() -= u.mean();
  Eigen::VectorXd e = normal_vector(g, n);
  e.array() -= e.mean();
  e -= (e.dot(u) / u.dot(u)) * u;
  u *= std::sqrt(static_cast<double>(n) / u.squaredNorm());
  e *= std::sqrt(s * static_cast<double>(n) / e.squaredNorm());

  Eigen::MatrixXd values(n, 3);
  values.col(0) = u.array() + uniform(g, -3, 3);
  values.col(1) = (e - t * u).array() + uniform(g, -3, 3);
  values.col(2) = 0.01 * normal_vector(g, n);
  Eigen::VectorXd y = u + e;
  y.array() += uniform(g, -5, 5);
  return {matrix(std::move(values)), TargetVector(std::move(y))};
}

}  // namespace testsupport

#include "stackboost/stacking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stackboost/least_squares.hpp"

namespace stackboost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
  return out;
}

double require_sst(const TargetVector& y) {
  const double sst = y.sst();
  if (!(sst > 0.0)) throw Error(ErrorKind::kConstantTarget, "criterion sweep needs a non-constant target");
  return sst;
}

// Scores every k in 1..p; ks beyond the available path score +inf.
void score_sweep(SweepResult& result, CriterionKind kind, int n, int p, double sst) {
  result.scores.clear();
  result.scores.reserve(static_cast<std::size_t>(p));
  for (int k = 1; k <= p; ++k) {
    if (static_cast<std::size_t>(k) <= result.path_ssr.size()) {
      result.scores.push_back(score(kind, n, k, result.path_ssr[static_cast<std::size_t>(k - 1)], sst));
    } else {
      result.scores.push_back(CriterionScore{kInf, kind, k, n});
    }
  }
  result.chosen_k = 1;
  for (int k = 2; k <= p; ++k) {
    if (result.scores[static_cast<std::size_t>(k - 1)].value <
        result.scores[static_cast<std::size_t>(result.chosen_k - 1)].value) {
      result.chosen_k = k;
    }
  }
}

EnsembleModel compose_model(const PredictionMatrix& X, const Eigen::VectorXd& weights,
                            const Eigen::RowVectorXd& x_mean, double y_mean) {
  EnsembleModel model;
  for (Eigen::Index j = 0; j < X.cols(); ++j) model.weights[X.id(j)] = weights(j);
  model.bias = y_mean - x_mean.dot(weights);
  return model;
}

}  // namespace

EnsembleModel fit_ols_meta(const PredictionMatrix& X, const TargetVector& y) {
  validate_pair(X, y);
  const MultiFit fit = fit_multi(X.values(), y.values(), true);
  EnsembleModel model;
  for (Eigen::Index j = 0; j < X.cols(); ++j) model.weights[X.id(j)] = fit.coefficients(j);
  model.bias = fit.intercept;
  return model;
}

Eigen::VectorXd project_to_simplex(const Eigen::Ref<const Eigen::VectorXd>& v) {
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

EnsembleModel fit_gem(const PredictionMatrix& X, const TargetVector& y, const GemOptions& opts) {
  validate_pair(X, y);
  const Eigen::MatrixXd& A = X.values();
  const Eigen::VectorXd& b = y.values();
  const Eigen::Index p = A.cols();

  const Eigen::MatrixXd gram = A.transpose() * A;
  const Eigen::VectorXd atb = A.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lipschitz = 2.0 * eig.eigenvalues().maxCoeff();

  auto objective = [&](const Eigen::VectorXd& w) { return (b - A * w).squaredNorm(); };

  Eigen::VectorXd w = Eigen::VectorXd::Constant(p, 1.0 / static_cast<double>(p));
  if (lipschitz > 0.0) {
    Eigen::VectorXd z = w;
    double t = 1.0;
    double f_prev = objective(w);
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Eigen::VectorXd grad = 2.0 * (gram * z - atb);
      Eigen::VectorXd w_next = project_to_simplex(z - grad / lipschitz);
      const double f_next = objective(w_next);
      if (f_next > f_prev) {
        // Momentum overshot; restart from the last iterate.
        z = w;
        t = 1.0;
        continue;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      z = w_next + ((t - 1.0) / t_next) * (w_next - w);
      const double change = f_prev - f_next;
      w = std::move(w_next);
      t = t_next;
      if (change <= opts.rel_tolerance * f_prev) break;
      f_prev = f_next;
    }
  }

  EnsembleModel model;
  for (Eigen::Index j = 0; j < p; ++j) model.weights[X.id(j)] = w(j);
  model.bias = 0.0;
  return model;
}

SweepResult fit_fsr(const PredictionMatrix& X, const TargetVector& y, CriterionKind kind) {
  validate_pair(X, y);
  const double sst = require_sst(y);
  const Eigen::Index p = X.cols();

  SweepResult result;
  std::vector<bool> used(static_cast<std::size_t>(p), false);
  for (Eigen::Index step = 0; step < p; ++step) {
    Eigen::Index best = -1;
    double best_ssr = kInf;
    std::vector<Eigen::Index> trial = result.path;
    trial.push_back(0);
    for (Eigen::Index c = 0; c < p; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      trial.back() = c;
      const double ssr = fit_multi(gather_columns(X.values(), trial), y.values(), true).ssr;
      if (best < 0 || ssr < best_ssr) {
        best = c;
        best_ssr = ssr;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    result.path.push_back(best);
    result.path_ssr.push_back(best_ssr);
  }

  score_sweep(result, kind, static_cast<int>(X.rows()), static_cast<int>(p), sst);

  const std::vector<Eigen::Index> chosen(result.path.begin(), result.path.begin() + result.chosen_k);
  const MultiFit fit = fit_multi(gather_columns(X.values(), chosen), y.values(), true);
  for (std::size_t j = 0; j < chosen.size(); ++j) {
    result.model.weights[X.id(chosen[j])] = fit.coefficients(static_cast<Eigen::Index>(j));
  }
  result.model.bias = fit.intercept;
  return result;
}

SweepResult fit_pcr(const PredictionMatrix& X, const TargetVector& y, CriterionKind kind) {
  validate_pair(X, y);
  const double sst = require_sst(y);
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();

  const Eigen::RowVectorXd x_mean = X.values().colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd Xc = X.values().rowwise() - x_mean;
  const Eigen::VectorXd yc = y.values().array() - y_mean;

  const Eigen::MatrixXd cov = (Xc.transpose() * Xc) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);

  SweepResult result;
  result.eigenvalues = eig.eigenvalues().reverse().cwiseMax(0.0);
  Eigen::MatrixXd vecs = eig.eigenvectors().rowwise().reverse();
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (std::abs(vecs(i, a)) > 1e-12) {
        if (vecs(i, a) < 0.0) vecs.col(a) *= -1.0;
        break;
      }
    }
  }

  const double largest = result.eigenvalues(0);
  Eigen::Index kept = 0;
  if (largest > 0.0) {
    while (kept < p && result.eigenvalues(kept) >= kEigenCutoffRel * largest) ++kept;
  }
  result.directions = vecs.leftCols(kept);

  const Eigen::MatrixXd scores = Xc * result.directions;
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(kept);
  Eigen::VectorXd residual = yc;
  for (Eigen::Index a = 0; a < kept; ++a) {
    const double tt = scores.col(a).squaredNorm();
    gamma(a) = scores.col(a).dot(yc) / tt;
    residual -= gamma(a) * scores.col(a);
    result.path_ssr.push_back(residual.squaredNorm());
  }
  if (kept == 0) result.path_ssr.push_back(sst);

  score_sweep(result, kind, static_cast<int>(n), static_cast<int>(p), sst);

  const Eigen::Index k = std::min<Eigen::Index>(result.chosen_k, kept);
  const Eigen::VectorXd weights =
      kept == 0 ? Eigen::VectorXd::Zero(p)
                : Eigen::VectorXd(result.directions.leftCols(k) * gamma.head(k));
  result.model = compose_model(X, weights, x_mean, y_mean);
  return result;
}

SweepResult fit_pls(const PredictionMatrix& X, const TargetVector& y, CriterionKind kind) {
  validate_pair(X, y);
  const double sst = require_sst(y);
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();

  const Eigen::RowVectorXd x_mean = X.values().colwise().mean();
  const double y_mean = y.mean();
  Eigen::MatrixXd Xa = X.values().rowwise() - x_mean;
  Eigen::VectorXd ya = y.values().array() - y_mean;
  const double cov_scale = Xa.norm() * ya.norm();

  Eigen::MatrixXd W(p, p), P(p, p);
  Eigen::VectorXd q(p);
  Eigen::Index comps = 0;
  double first_tt = 0.0;

  SweepResult result;
  for (Eigen::Index a = 0; a < p; ++a) {
    Eigen::VectorXd w = Xa.transpose() * ya;
    const double norm_w = w.norm();
    if (!(norm_w > 1e-12 * cov_scale)) break;
    w /= norm_w;
    const Eigen::VectorXd t = Xa * w;
    const double tt = t.squaredNorm();
    if (a == 0) first_tt = tt;
    if (!(tt > kEigenCutoffRel * first_tt)) break;
    W.col(a) = w;
    P.col(a) = Xa.transpose() * t / tt;
    q(a) = ya.dot(t) / tt;
    Xa -= t * P.col(a).transpose();
    ya -= q(a) * t;
    result.path_ssr.push_back(ya.squaredNorm());
    ++comps;
  }
  if (comps == 0) result.path_ssr.push_back(sst);
  result.directions = W.leftCols(comps);

  score_sweep(result, kind, static_cast<int>(n), static_cast<int>(p), sst);

  Eigen::VectorXd weights = Eigen::VectorXd::Zero(p);
  const Eigen::Index k = std::min<Eigen::Index>(result.chosen_k, comps);
  if (k > 0) {
    const Eigen::MatrixXd ptw = P.leftCols(k).transpose() * W.leftCols(k);
    weights = W.leftCols(k) * ptw.partialPivLu().solve(q.head(k));
  }
  result.model = compose_model(X, weights, x_mean, y_mean);
  return result;
}

}  // namespace stackboost

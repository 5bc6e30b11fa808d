#include "stackboost/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stackboost/csv.hpp"
#include "stackboost/diagnostics.hpp"
#include "stackboost/least_squares.hpp"

namespace stackboost {

Dataset Dataset::select_rows(const std::vector<Eigen::Index>& rows) const {
  Dataset out{Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), features.cols()),
              Eigen::VectorXd(static_cast<Eigen::Index>(rows.size())), name};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
    out.target(static_cast<Eigen::Index>(i)) = target(rows[i]);
  }
  return out;
}

void validate_dataset(const Dataset& ds) {
  if (ds.features.rows() != ds.target.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "dataset '" + ds.name + "': feature rows and target length differ");
  }
  if (ds.features.rows() < 6 || ds.features.cols() < 1) {
    throw Error(ErrorKind::kEmpty, "dataset '" + ds.name + "' needs at least 6 rows and 1 feature");
  }
  if (!ds.features.allFinite() || !ds.target.allFinite()) {
    throw Error(ErrorKind::kNonFinite, "dataset '" + ds.name + "' contains NaN or infinite values");
  }
}

namespace rng {

double uniform01(Engine& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

std::uint64_t bounded(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = Engine::max() - Engine::max() % bound;
  std::uint64_t draw;
  do {
    draw = engine();
  } while (draw >= limit);
  return draw % bound;
}

double normal(Engine& engine) {
  const double u1 = 1.0 - uniform01(engine);  // (0, 1]
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<Eigen::Index> permutation(Eigen::Index n, Engine& engine) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[bounded(engine, i)]);
  }
  return perm;
}

}  // namespace rng

Eigen::VectorXd RidgeModel::predict(const Eigen::Ref<const Eigen::MatrixXd>& features) const {
  return (features * weights).array() + intercept;
}

RidgeModel fit_ridge(const Eigen::Ref<const Eigen::MatrixXd>& features,
                     const Eigen::Ref<const Eigen::VectorXd>& target, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kInvalidArgument, "ridge alpha must be finite and >= 0");
  }
  if (features.rows() != target.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "ridge features and target lengths differ");
  }
  const Eigen::RowVectorXd x_mean = features.colwise().mean();
  const double y_mean = target.mean();
  const Eigen::MatrixXd Xc = features.rowwise() - x_mean;
  const Eigen::VectorXd yc = target.array() - y_mean;

  RidgeModel model;
  if (alpha == 0.0) {
    model.weights = solve_min_norm(Xc, yc);
  } else {
    Eigen::MatrixXd gram = Xc.transpose() * Xc;
    gram.diagonal().array() += alpha;
    model.weights = gram.llt().solve(Xc.transpose() * yc);
  }
  model.intercept = y_mean - x_mean.dot(model.weights);
  return model;
}

std::string_view to_string(Sampler sampler) { return sampler == Sampler::GS ? "gs" : "rs"; }

std::optional<Sampler> parse_sampler(std::string_view name) {
  if (name == "gs") return Sampler::GS;
  if (name == "rs") return Sampler::RS;
  return std::nullopt;
}

std::vector<HyperparameterTrial> sample_trials(Sampler sampler, int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::kInvalidArgument, "trial count must be >= 1");
  std::vector<HyperparameterTrial> trials;
  trials.reserve(static_cast<std::size_t>(count));
  rng::Engine engine(seed);
  const std::size_t grid = kRidgeAlphaGrid.size();
  const std::size_t solvers = kRidgeSolvers.size();
  for (int i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    HyperparameterTrial trial;
    std::string solver;
    if (sampler == Sampler::GS) {
      trial.alpha = kRidgeAlphaGrid[idx % grid];
      solver = kRidgeSolvers[(idx / grid) % solvers];
    } else {
      trial.alpha = rng::uniform01(engine);
      solver = kRidgeSolvers[rng::bounded(engine, solvers)];
    }
    trial.id = "ridge:alpha=" + format_double(trial.alpha) + ",solver=" + solver;
    if (sampler == Sampler::RS) {
      trial.id += ",trial=" + std::to_string(i);
    } else if (idx >= grid * solvers) {
      trial.id += ",rep=" + std::to_string(idx / (grid * solvers));
    }
    trials.push_back(std::move(trial));
  }
  return trials;
}

std::vector<Eigen::Index> CvPlan::training_rows(int fold) const {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
    if (fold_of_row[i] != fold) rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

std::vector<Eigen::Index> CvPlan::held_out_rows(int fold) const {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
    if (fold_of_row[i] == fold) rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

CvPlan make_cv_plan(Eigen::Index n, int folds, std::uint64_t seed) {
  if (folds < 2 || n < 2 * folds) {
    std::ostringstream msg;
    msg << "cannot split " << n << " rows into " << folds << " folds of at least 2 rows";
    throw Error(ErrorKind::kInvalidArgument, msg.str());
  }
  CvPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.fold_of_row.assign(static_cast<std::size_t>(n), 0);
  rng::Engine engine(seed);
  const auto perm = rng::permutation(n, engine);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    plan.fold_of_row[static_cast<std::size_t>(perm[i])] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }
  return plan;
}

std::pair<PredictionMatrix, TargetVector> build_prediction_matrix(
    const Dataset& ds, const std::vector<HyperparameterTrial>& trials, const CvPlan& plan) {
  validate_dataset(ds);
  if (static_cast<Eigen::Index>(plan.fold_of_row.size()) != ds.rows()) {
    throw Error(ErrorKind::kDimensionMismatch, "CV plan does not match the dataset row count");
  }
  if (trials.empty()) throw Error(ErrorKind::kEmpty, "no hyperparameter trials");

  const Eigen::Index n = ds.rows();
  Eigen::MatrixXd preds(n, static_cast<Eigen::Index>(trials.size()));
  std::vector<std::string> ids;
  for (int fold = 0; fold < plan.folds; ++fold) {
    const auto train_rows = plan.training_rows(fold);
    const auto test_rows = plan.held_out_rows(fold);
    if (train_rows.empty() || test_rows.empty()) {
      throw Error(ErrorKind::kEmpty, "fold " + std::to_string(fold) + " is empty");
    }
    const Dataset train = ds.select_rows(train_rows);
    const Dataset test = ds.select_rows(test_rows);
    for (std::size_t t = 0; t < trials.size(); ++t) {
      try {
        const RidgeModel model = fit_ridge(train.features, train.target, trials[t].alpha);
        const Eigen::VectorXd out = model.predict(test.features);
        for (std::size_t i = 0; i < test_rows.size(); ++i) {
          preds(test_rows[i], static_cast<Eigen::Index>(t)) = out(static_cast<Eigen::Index>(i));
        }
      } catch (const Error& e) {
        throw Error(e.kind(), "trial '" + trials[t].id + "', fold " + std::to_string(fold) + ": " + e.what());
      }
    }
  }
  for (const auto& trial : trials) ids.push_back(trial.id);
  return {PredictionMatrix(std::move(preds), std::move(ids)), TargetVector(ds.target)};
}

PredictionMatrix predict_trials(const Dataset& train, const Eigen::Ref<const Eigen::MatrixXd>& test_features,
                                const std::vector<HyperparameterTrial>& trials) {
  Eigen::MatrixXd preds(test_features.rows(), static_cast<Eigen::Index>(trials.size()));
  std::vector<std::string> ids;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    preds.col(static_cast<Eigen::Index>(t)) =
        fit_ridge(train.features, train.target, trials[t].alpha).predict(test_features);
    ids.push_back(trials[t].id);
  }
  return PredictionMatrix(std::move(preds), std::move(ids));
}

std::vector<MethodScore> evaluate_methods(const Dataset& ds, const std::vector<HyperparameterTrial>& trials,
                                          const std::vector<MethodSpec>& methods,
                                          const EvaluationConfig& cfg) {
  validate_dataset(ds);
  const Eigen::Index n = ds.rows();
  const auto n_train = static_cast<Eigen::Index>(std::llround(cfg.train_fraction * static_cast<double>(n)));
  if (n_train < 2 * cfg.inner_folds || n - n_train < 2) {
    throw Error(ErrorKind::kInvalidArgument, "dataset '" + ds.name + "' is too small for the outer split");
  }

  rng::Engine engine(cfg.seed);
  const auto perm = rng::permutation(n, engine);
  std::vector<Eigen::Index> train_rows(perm.begin(), perm.begin() + n_train);
  std::vector<Eigen::Index> test_rows(perm.begin() + n_train, perm.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  const Dataset train = ds.select_rows(train_rows);
  const Dataset test = ds.select_rows(test_rows);

  const CvPlan plan = make_cv_plan(train.rows(), cfg.inner_folds, cfg.seed + 1);
  const auto [X_train, y_train] = build_prediction_matrix(train, trials, plan);
  const PredictionMatrix X_test = predict_trials(train, test.features, trials);

  std::vector<MethodScore> scores;
  for (const auto& spec : methods) {
    const std::string label = spec.label();
    try {
      const EnsembleModel model = fit_method(spec, X_train, y_train, cfg.method_options);
      const double score = relative_mse(model.predict(X_test), test.target);
      if (!std::isfinite(score)) throw Error(ErrorKind::kNonFinite, "non-finite test error");
      scores.push_back({label, score});
    } catch (const Error& e) {
      throw Error(e.kind(), "method '" + label + "' on dataset '" + ds.name + "': " + e.what());
    }
  }
  return scores;
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::Linear: return "linear";
    case SyntheticKind::Redundant: return "redundant";
    case SyntheticKind::Underfit: return "underfit";
  }
  return "linear";
}

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  for (auto k : {SyntheticKind::Linear, SyntheticKind::Redundant, SyntheticKind::Underfit}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.rows < 6 || spec.features < 1) {
    throw Error(ErrorKind::kInvalidArgument, "synthetic data needs rows >= 6 and features >= 1");
  }
  if (spec.kind == SyntheticKind::Underfit && spec.features < 3) {
    throw Error(ErrorKind::kInvalidArgument, "the underfit generator needs at least 3 features");
  }
  rng::Engine engine(spec.seed);
  const Eigen::Index n = spec.rows;
  const Eigen::Index d = spec.features;
  auto normal_matrix = [&](Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng::normal(engine);
    return m;
  };

  Dataset ds;
  ds.name = std::string(to_string(spec.kind)) + "-" + std::to_string(spec.seed);
  Eigen::VectorXd signal;
  switch (spec.kind) {
    case SyntheticKind::Linear: {
      ds.features = normal_matrix(n, d);
      const Eigen::VectorXd coef = normal_matrix(d, 1);
      signal = ds.features * coef;
      break;
    }
    case SyntheticKind::Redundant: {
      const Eigen::MatrixXd latent = normal_matrix(n, 2);
      const Eigen::MatrixXd mixing = normal_matrix(2, d);
      ds.features = latent * mixing + 0.1 * normal_matrix(n, d);
      const Eigen::VectorXd coef = normal_matrix(2, 1);
      signal = latent * coef;
      break;
    }
    case SyntheticKind::Underfit: {
      ds.features.resize(n, d);
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < n; ++i) ds.features(i, j) = 4.0 * rng::uniform01(engine) - 2.0;
      const auto x0 = ds.features.col(0).array();
      const auto x1 = ds.features.col(1).array();
      const auto x2 = ds.features.col(2).array();
      signal = (2.0 * x0.sin() + 0.5 * x1.square() + x0 * x2 + 0.5 * x1).matrix();
      break;
    }
  }
  const auto [signal_mean, signal_sd] = mean_and_sigma(signal);
  ds.target.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ds.target(i) = spec.offset + signal(i) + spec.noise * signal_sd * rng::normal(engine);
  }
  return ds;
}

std::vector<Dataset> make_collinear_suite(int count, std::uint64_t seed) {
  constexpr SyntheticKind kinds[] = {SyntheticKind::Redundant, SyntheticKind::Underfit, SyntheticKind::Linear};
  std::vector<Dataset> suite;
  for (int i = 0; i < count; ++i) {
    SyntheticSpec spec;
    spec.kind = kinds[i % 3];
    spec.rows = 90 + 15 * (i % 5);
    spec.features = 4 + (i % 7);
    spec.noise = 0.3 + 0.2 * (i % 4);
    spec.offset = 2.0 + 3.0 * (i % 6);
    spec.seed = seed + static_cast<std::uint64_t>(i);
    suite.push_back(make_synthetic(spec));
  }
  return suite;
}

}  // namespace stackboost

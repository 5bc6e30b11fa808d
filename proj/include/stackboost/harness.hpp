#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stackboost/core.hpp"
#include "stackboost/methods.hpp"

namespace stackboost {

struct Dataset {
  Eigen::MatrixXd features;  // n x d
  Eigen::VectorXd target;    // n
  std::string name;

  Eigen::Index rows() const { return features.rows(); }
  Dataset select_rows(const std::vector<Eigen::Index>& rows) const;
};

/// Finite entries, matching lengths, n >= 6.
void validate_dataset(const Dataset& ds);

// Portable random helpers: std::mt19937_64 is fully specified, the standard
// distributions are not, so draws are derived from raw engine output.
namespace rng {

using Engine = std::mt19937_64;

double uniform01(Engine& engine);
/// Uniform integer in [0, bound).
std::uint64_t bounded(Engine& engine, std::uint64_t bound);
double normal(Engine& engine);
std::vector<Eigen::Index> permutation(Eigen::Index n, Engine& engine);

}  // namespace rng

struct RidgeModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;

  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::MatrixXd>& features) const;
};

/// min ||y - Xw - b||^2 + alpha ||w||^2 with unpenalized intercept, solved in
/// closed form on centered data. alpha == 0 gives the minimum-norm OLS fit.
RidgeModel fit_ridge(const Eigen::Ref<const Eigen::MatrixXd>& features,
                     const Eigen::Ref<const Eigen::VectorXd>& target, double alpha);

enum class Sampler { GS, RS };

std::string_view to_string(Sampler sampler);
std::optional<Sampler> parse_sampler(std::string_view name);

struct HyperparameterTrial {
  std::string id;
  double alpha = 0.0;
};

inline constexpr std::array<double, 6> kRidgeAlphaGrid = {0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
/// Solver labels only distinguish trials; all of them reach the same optimum.
inline constexpr std::array<const char*, 6> kRidgeSolvers = {"svd", "cholesky", "lsqr",
                                                             "sparse_cg", "sag", "saga"};

/// GS cycles through the alpha grid (ascending), then through solver labels.
/// RS draws alpha ~ U[0, 1] and a solver label from the seeded engine.
std::vector<HyperparameterTrial> sample_trials(Sampler sampler, int count, std::uint64_t seed);

struct CvPlan {
  int folds = 3;
  std::vector<int> fold_of_row;
  std::uint64_t seed = 0;

  std::vector<Eigen::Index> training_rows(int fold) const;
  std::vector<Eigen::Index> held_out_rows(int fold) const;
};

/// Rows are shuffled by the seeded engine and dealt round-robin into folds.
CvPlan make_cv_plan(Eigen::Index n, int folds, std::uint64_t seed);

/// Column i holds out-of-fold predictions of the Ridge model for trial i.
std::pair<PredictionMatrix, TargetVector> build_prediction_matrix(
    const Dataset& ds, const std::vector<HyperparameterTrial>& trials, const CvPlan& plan);

/// Predictions on test_features of every trial's model trained on all of train.
PredictionMatrix predict_trials(const Dataset& train, const Eigen::Ref<const Eigen::MatrixXd>& test_features,
                                const std::vector<HyperparameterTrial>& trials);

struct EvaluationConfig {
  double train_fraction = 2.0 / 3.0;
  int inner_folds = 3;
  std::uint64_t seed = 0;
  MethodOptions method_options;
};

struct MethodScore {
  std::string method;
  double relative_mse = 0.0;
};

/// Seeded outer train/test split; meta-learners are fitted on the inner-CV
/// prediction matrix of the train side and scored on test-side predictions of
/// models retrained on the whole train side. A failing method surfaces as
/// Error with the method label in the message.
std::vector<MethodScore> evaluate_methods(const Dataset& ds, const std::vector<HyperparameterTrial>& trials,
                                          const std::vector<MethodSpec>& methods,
                                          const EvaluationConfig& cfg);

enum class SyntheticKind { Linear, Redundant, Underfit };

std::string_view to_string(SyntheticKind kind);
std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::Linear;
  Eigen::Index rows = 120;
  Eigen::Index features = 8;
  double noise = 0.5;   // noise sd relative to the signal sd
  double offset = 5.0;  // target level
  std::uint64_t seed = 0;
};

/// Linear: y = offset + X b + noise.
/// Redundant: features are noisy mixtures of two latent factors.
/// Underfit: y has sine, square and interaction terms a linear model misses.
Dataset make_synthetic(const SyntheticSpec& spec);

/// count datasets cycling through the three generators with varying shapes.
std::vector<Dataset> make_collinear_suite(int count, std::uint64_t seed);

}  // namespace stackboost

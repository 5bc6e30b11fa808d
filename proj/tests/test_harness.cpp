#include <doctest.h>

#include <set>
#include <string>

#include "stackboost/diagnostics.hpp"
#include "stackboost/harness.hpp"
#include "support.hpp"

using namespace stackboost;
using testsupport::Engine;

namespace {

Dataset noise_free_linear(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  Engine g(seed);
  Dataset ds;
  ds.features = testsupport::normal_matrix(g, n, d);
  ds.target = ds.features * testsupport::normal_vector(g, d);
  ds.target.array() += 3.0;
  ds.name = "exact";
  return ds;
}

}  // namespace

TEST_CASE("ridge without penalty recovers exact linear data") {
  const Dataset ds = noise_free_linear(20, 3, 90);
  const auto model = fit_ridge(ds.features, ds.target, 0.0);
  CHECK((model.predict(ds.features) - ds.target).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(model.intercept == doctest::Approx(3.0));
}

TEST_CASE("ridge with a huge penalty predicts the mean") {
  const Dataset ds = noise_free_linear(20, 3, 91);
  const auto model = fit_ridge(ds.features, ds.target, 1e12);
  CHECK(model.weights.norm() < 1e-9);
  CHECK((model.predict(ds.features).array() - ds.target.mean()).abs().maxCoeff() < 1e-8);
}

TEST_CASE("ridge weight norm shrinks as the penalty grows") {
  Engine g(92);
  const Eigen::MatrixXd X = testsupport::normal_matrix(g, 15, 4);
  const Eigen::VectorXd y = testsupport::normal_vector(g, 15);
  double prev = fit_ridge(X, y, 0.0).weights.norm();
  for (double a : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0}) {
    const double now = fit_ridge(X, y, a).weights.norm();
    CHECK(now <= prev);
    prev = now;
  }
  CHECK_THROWS_AS(fit_ridge(X, y, -1.0), Error);
  CHECK_THROWS_AS(fit_ridge(X, y, std::nan("")), Error);
}

TEST_CASE("ridge without penalty handles duplicate features") {
  Engine g(93);
  Eigen::MatrixXd X(12, 2);
  const Eigen::VectorXd c = testsupport::normal_vector(g, 12);
  X << c, c;
  const auto model = fit_ridge(X, 2.0 * c, 0.0);
  CHECK(model.weights(0) == doctest::Approx(1.0));
  CHECK(model.weights(1) == doctest::Approx(1.0));
}

TEST_CASE("grid search trials") {
  const auto six = sample_trials(Sampler::GS, 6, 0);
  REQUIRE(six.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(six[i].alpha == kRidgeAlphaGrid[i]);
  const auto many = sample_trials(Sampler::GS, 40, 0);
  std::set<std::string> ids;
  for (const auto& t : many) ids.insert(t.id);
  CHECK(ids.size() == 40);
  CHECK(many[37].alpha == kRidgeAlphaGrid[1]);
  CHECK(sample_trials(Sampler::GS, 6, 99)[3].id == six[3].id);
}

TEST_CASE("random search trials") {
  const auto a = sample_trials(Sampler::RS, 3, 7);
  const auto b = sample_trials(Sampler::RS, 3, 7);
  const auto c = sample_trials(Sampler::RS, 3, 8);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].alpha == b[i].alpha);
    CHECK(a[i].alpha >= 0.0);
    CHECK(a[i].alpha < 1.0);
  }
  CHECK(a[0].alpha != c[0].alpha);
  CHECK_THROWS_AS(sample_trials(Sampler::RS, 0, 1), Error);
}

TEST_CASE("sampler names") {
  CHECK(parse_sampler("gs") == Sampler::GS);
  CHECK(parse_sampler(to_string(Sampler::RS)) == Sampler::RS);
  CHECK_FALSE(parse_sampler("bo").has_value());
}

TEST_CASE("cv plans partition the rows") {
  Engine g(94);
  for (int t = 0; t < 100; ++t) {
    const int folds = testsupport::uniform_int(g, 2, 6);
    const Eigen::Index n = testsupport::uniform_int(g, 2 * folds, 80);
    const auto plan = make_cv_plan(n, folds, static_cast<std::uint64_t>(t));
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    std::size_t smallest = static_cast<std::size_t>(n);
    std::size_t largest = 0;
    for (int f = 0; f < folds; ++f) {
      const auto held = plan.held_out_rows(f);
      const auto train = plan.training_rows(f);
      CHECK(held.size() + train.size() == static_cast<std::size_t>(n));
      smallest = std::min(smallest, held.size());
      largest = std::max(largest, held.size());
      for (auto r : held) ++seen[static_cast<std::size_t>(r)];
      const std::set<Eigen::Index> train_set(train.begin(), train.end());
      for (auto r : held) CHECK(train_set.count(r) == 0);
    }
    CHECK(smallest >= 1);
    CHECK(largest - smallest <= 1);
    for (int s : seen) CHECK(s == 1);
  }
  CHECK_THROWS_AS(make_cv_plan(10, 1, 0), Error);
  CHECK_THROWS_AS(make_cv_plan(5, 3, 0), Error);
}

TEST_CASE("identical trials give identical columns") {
  const Dataset ds = make_synthetic({SyntheticKind::Linear, 60, 4, 0.5, 5.0, 3});
  const std::vector<HyperparameterTrial> trials = {{"a", 0.01}, {"b", 0.01}};
  const auto [X, y] = build_prediction_matrix(ds, trials, make_cv_plan(60, 3, 1));
  CHECK(X.column(0) == X.column(1));
  CHECK(std::isinf(vif(X).vif[0]));
  CHECK(y.values() == ds.target);
}

TEST_CASE("a single exact trial reproduces the target") {
  const Dataset ds = noise_free_linear(30, 3, 95);
  const auto [X, y] = build_prediction_matrix(ds, {{"ols", 0.0}}, make_cv_plan(30, 3, 2));
  CHECK((X.column(0) - y.values()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("the prediction matrix is deterministic") {
  const Dataset ds = make_synthetic({SyntheticKind::Redundant, 50, 5, 0.5, 5.0, 4});
  const auto trials = sample_trials(Sampler::RS, 8, 5);
  const auto a = build_prediction_matrix(ds, trials, make_cv_plan(50, 3, 6));
  const auto b = build_prediction_matrix(ds, trials, make_cv_plan(50, 3, 6));
  CHECK(a.first.values() == b.first.values());
  CHECK(a.first.column_ids() == b.first.column_ids());
}

TEST_CASE("best on noise-free linear data is nearly exact") {
  const Dataset ds = noise_free_linear(60, 4, 96);
  EvaluationConfig cfg;
  cfg.seed = 3;
  const auto scores = evaluate_methods(ds, sample_trials(Sampler::GS, 6, 0), {parse_method_spec("best")}, cfg);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].method == "best");
  CHECK(scores[0].relative_mse < 1e-6);
}

TEST_CASE("bem over identical trials equals any one of them") {
  const Dataset ds = make_synthetic({SyntheticKind::Underfit, 60, 4, 0.5, 5.0, 7});
  EvaluationConfig cfg;
  cfg.seed = 4;
  const std::vector<HyperparameterTrial> same = {{"a", 0.1}, {"b", 0.1}, {"c", 0.1}};
  const auto bem = evaluate_methods(ds, same, {parse_method_spec("bem")}, cfg);
  const auto best = evaluate_methods(ds, {{"a", 0.1}}, {parse_method_spec("best")}, cfg);
  CHECK(bem[0].relative_mse == doctest::Approx(best[0].relative_mse).epsilon(1e-12));
}

TEST_CASE("dataset validation") {
  Dataset ds = noise_free_linear(10, 2, 97);
  CHECK_NOTHROW(validate_dataset(ds));
  Dataset short_target = ds;
  short_target.target.conservativeResize(9);
  CHECK_THROWS_AS(validate_dataset(short_target), Error);
  Dataset tiny = ds.select_rows({0, 1, 2});
  CHECK_THROWS_AS(validate_dataset(tiny), Error);
  ds.features(2, 1) = std::nan("");
  try {
    validate_dataset(ds);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonFinite);
  }
}

TEST_CASE("a failing method names itself") {
  // A constant target makes every criterion sweep fail.
  Dataset ds = noise_free_linear(30, 3, 98);
  ds.target.setConstant(2.0);
  ds.name = "flat";
  try {
    evaluate_methods(ds, sample_trials(Sampler::GS, 6, 0), {parse_method_spec("fsr-aic")}, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("fsr-aic") != std::string::npos);
    CHECK(what.find("flat") != std::string::npos);
  }
}

TEST_CASE("synthetic generators") {
  for (auto kind : {SyntheticKind::Linear, SyntheticKind::Redundant, SyntheticKind::Underfit}) {
    const auto ds = make_synthetic({kind, 40, 5, 0.3, 7.0, 11});
    CHECK(ds.rows() == 40);
    CHECK(ds.features.cols() == 5);
    CHECK_NOTHROW(validate_dataset(ds));
    CHECK(parse_synthetic_kind(to_string(kind)) == kind);
    const auto again = make_synthetic({kind, 40, 5, 0.3, 7.0, 11});
    CHECK(again.features == ds.features);
    CHECK(again.target == ds.target);
  }
  CHECK_THROWS_AS(make_synthetic({SyntheticKind::Underfit, 40, 2, 0.3, 7.0, 11}), Error);
  const auto suite = make_collinear_suite(6, 1);
  CHECK(suite.size() == 6);
  std::set<std::string> names;
  for (const auto& ds : suite) names.insert(ds.name);
  CHECK(names.size() == 6);
}

TEST_CASE("portable random helpers") {
  Engine g(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng::uniform01(g);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng::bounded(g, 7) < 7);
  }
  auto perm = rng::permutation(20, g);
  std::sort(perm.begin(), perm.end());
  for (Eigen::Index i = 0; i < 20; ++i) CHECK(perm[static_cast<std::size_t>(i)] == i);
  Engine a(123), b(123);
  CHECK(rng::normal(a) == rng::normal(b));
}

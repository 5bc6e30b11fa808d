#include <doctest.h>

#include <cmath>

#include "stackboost/diagnostics.hpp"
#include "support.hpp"

using namespace stackboost;
using testsupport::Engine;

TEST_CASE("vif of orthogonal centered columns is 1") {
  const auto X = testsupport::matrix((Eigen::MatrixXd(4, 2) << 1, 1, -1, 1, 1, -1, -1, -1).finished());
  const auto report = vif(X);
  CHECK(report.vif[0] == doctest::Approx(1.0));
  CHECK(report.vif[1] == doctest::Approx(1.0));
  CHECK(report.bucket_fraction(0) == 1.0);
}

TEST_CASE("vif of duplicated columns is infinite and lands in the top bucket") {
  Engine g(80);
  const Eigen::VectorXd c = testsupport::normal_vector(g, 10);
  Eigen::MatrixXd v(10, 2);
  v << c, c;
  const auto report = vif(testsupport::matrix(v));
  CHECK(std::isinf(report.vif[0]));
  CHECK(std::isinf(report.vif[1]));
  CHECK(report.bucket_counts == std::vector<std::size_t>{0, 0, 0, 2});
  CHECK(report.fraction_above(10.0) == 1.0);
}

TEST_CASE("vif bucket edges") {
  // Two columns with correlation rho have VIF 1 / (1 - rho^2).
  Engine g(81);
  Eigen::MatrixXd base = testsupport::normal_matrix(g, 200, 2);
  base.rowwise() -= base.colwise().mean();
  base.col(1) -= (base.col(1).dot(base.col(0)) / base.col(0).squaredNorm()) * base.col(0);
  base.col(1) *= base.col(0).norm() / base.col(1).norm();
  const auto with_vif = [&](double target) {
    const double rho = std::sqrt(1.0 - 1.0 / target);
    Eigen::MatrixXd v(200, 2);
    v << base.col(0), rho * base.col(0) + std::sqrt(1 - rho * rho) * base.col(1);
    return vif(testsupport::matrix(v));
  };
  CHECK(with_vif(4.0).bucket_counts[0] == 2);
  CHECK(with_vif(7.0).bucket_counts[1] == 2);
  CHECK(with_vif(50.0).bucket_counts[2] == 2);
  CHECK(with_vif(1e5).bucket_counts[3] == 2);
  CHECK(with_vif(7.0).vif[0] == doctest::Approx(7.0).epsilon(1e-8));
}

TEST_CASE("vif input errors") {
  CHECK_THROWS_AS(vif(testsupport::matrix(Eigen::MatrixXd::Random(5, 1))), Error);
  try {
    vif(testsupport::matrix(Eigen::MatrixXd::Random(5, 1)));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooFewColumns);
  }
  CHECK_THROWS_AS(vif(testsupport::matrix(Eigen::MatrixXd::Random(5, 2)), {10.0, 5.0}), Error);
}

TEST_CASE("vif is invariant under per-column affine maps") {
  Engine g(82);
  for (int t = 0; t < 50; ++t) {
    const auto inst = testsupport::ensemble_instance(g, 30, 4);
    Eigen::MatrixXd v = inst.X.values();
    for (Eigen::Index j = 0; j < 4; ++j) {
      double a = testsupport::uniform(g, 0.1, 10.0) * (testsupport::uniform(g, 0, 1) < 0.5 ? -1 : 1);
      v.col(j) = a * v.col(j) + Eigen::VectorXd::Constant(30, testsupport::uniform(g, -5, 5));
    }
    const auto a = vif(inst.X);
    const auto b = vif(testsupport::matrix(v));
    for (std::size_t j = 0; j < 4; ++j) CHECK(b.vif[j] == doctest::Approx(a.vif[j]).epsilon(1e-6));
  }
}

TEST_CASE("vif is at least 1") {
  Engine g(83);
  for (int t = 0; t < 50; ++t) {
    const auto inst = testsupport::random_instance(g, 12, 5);
    for (double v : vif(inst.X).vif) CHECK(v >= 1.0);
  }
}

TEST_CASE("relative_mse") {
  const Eigen::Vector4d y(1, 2, 3, 6);
  CHECK(relative_mse(y, y) == 0.0);
  CHECK(relative_mse(Eigen::Vector4d::Constant(3.0), y) == doctest::Approx(1.0));
  CHECK_THROWS_AS(relative_mse(y, Eigen::Vector4d::Constant(2.0)), Error);
  CHECK_THROWS_AS(relative_mse(Eigen::Vector3d(1, 2, 3), y), Error);
}

TEST_CASE("friedman ranks examples") {
  const auto single = friedman_ranks((Eigen::MatrixXd(3, 2) << 1, 1, 2, 2, 3, 3).finished());
  CHECK(single.ranks.col(0) == Eigen::Vector3d(1, 2, 3));
  const auto tie = friedman_ranks((Eigen::MatrixXd(2, 2) << 2, 1, 2, 5).finished());
  CHECK(tie.ranks(0, 0) == 1.5);
  CHECK(tie.ranks(1, 0) == 1.5);
  CHECK(tie.mean_ranks == Eigen::Vector2d(1.25, 1.75));
  CHECK_THROWS_AS(friedman_ranks(Eigen::MatrixXd::Ones(1, 4)), Error);
  CHECK_THROWS_AS(friedman_ranks(Eigen::MatrixXd::Ones(4, 1)), Error);
}

TEST_CASE("friedman rank sums are fixed") {
  Engine g(84);
  for (int t = 0; t < 100; ++t) {
    const int m = testsupport::uniform_int(g, 2, 10);
    const int N = testsupport::uniform_int(g, 2, 20);
    Eigen::MatrixXd errors = testsupport::normal_matrix(g, m, N);
    // Force some ties.
    for (int d = 0; d < N; d += 3) errors(0, d) = errors(m - 1, d);
    const auto table = friedman_ranks(errors);
    for (int d = 0; d < N; ++d) CHECK(table.ranks.col(d).sum() == doctest::Approx(m * (m + 1) / 2.0));
    CHECK(table.mean_ranks.sum() == doctest::Approx(m * (m + 1) / 2.0));
    CHECK(table.friedman_statistic >= -1e-9);
  }
}

TEST_CASE("nemenyi critical difference") {
  for (int m = 2; m <= 20; ++m) {
    CHECK(nemenyi_q(m, Confidence::k90) < nemenyi_q(m, Confidence::k95));
    if (m > 2) CHECK(nemenyi_q(m, Confidence::k95) > nemenyi_q(m - 1, Confidence::k95));
    for (int N = 2; N < 60; ++N) CHECK(nemenyi_cd(m, N + 1, Confidence::k95) < nemenyi_cd(m, N, Confidence::k95));
  }
  CHECK(nemenyi_q(2, Confidence::k95) == doctest::Approx(1.960).epsilon(1e-3));
  CHECK(nemenyi_cd(2, 4, Confidence::k95) == doctest::Approx(nemenyi_q(2, Confidence::k95) * std::sqrt(1.0 / 4.0)));
  CHECK_THROWS_AS(nemenyi_q(1, Confidence::k95), Error);
  CHECK_THROWS_AS(nemenyi_q(21, Confidence::k90), Error);
  try {
    nemenyi_cd(25, 10, Confidence::k90);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnsupportedM);
  }
  const auto big = friedman_ranks(Eigen::MatrixXd::Random(21, 3));
  CHECK(std::isnan(big.nemenyi_cd));
}

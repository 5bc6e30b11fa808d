#include <doctest.h>

#include <cmath>

#include "stackboost/least_squares.hpp"
#include "support.hpp"

using namespace stackboost;
using testsupport::Engine;

TEST_CASE("fit_simple on an exact line") {
  const auto fit = fit_simple(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(2, 4, 6));
  CHECK(fit.alpha == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit.beta == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(fit.ssr == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("fit_simple on a constant feature") {
  const auto fit = fit_simple(Eigen::Vector3d(5, 5, 5), Eigen::Vector3d(1, 2, 3));
  CHECK(fit.alpha == 0.0);
  CHECK(fit.beta == 2.0);
  CHECK(fit.ssr == doctest::Approx(2.0));
  CHECK(fit.r2 == 0.0);
}

TEST_CASE("fit_simple on a constant target") {
  const auto fit = fit_simple(Eigen::Vector3d(1, 2, 4), Eigen::Vector3d(7, 7, 7));
  CHECK(fit.alpha == 0.0);
  CHECK(fit.beta == 7.0);
  CHECK(fit.ssr == 0.0);
  CHECK(fit.r2 == 0.0);
}

TEST_CASE("fit_simple ANOVA identity |alpha| sigma = sqrt((SST - SSR) / n)") {
  Engine g(2);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = testsupport::uniform_int(g, 3, 60);
    const Eigen::VectorXd f = testsupport::normal_vector(g, n) * testsupport::uniform(g, 0.1, 20) +
                              Eigen::VectorXd::Constant(n, testsupport::uniform(g, -10, 10));
    const Eigen::VectorXd r = testsupport::uniform(g, -4, 4) * f + testsupport::normal_vector(g, n) * testsupport::uniform(g, 0.1, 5);
    const auto fit = fit_simple(f, r);
    const double sigma = mean_and_sigma(f).second;
    const double sst = sum_of_squares_about_mean(r);
    const double lhs = std::fabs(fit.alpha) * sigma;
    const double rhs = std::sqrt((sst - fit.ssr) / static_cast<double>(n));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    CHECK(fit.ssr <= sst * (1 + 1e-9));
  }
}

TEST_CASE("fit_simple ssr is minimal against perturbed lines") {
  Engine g(3);
  const Eigen::VectorXd f = testsupport::normal_vector(g, 25);
  const Eigen::VectorXd r = 1.7 * f + testsupport::normal_vector(g, 25);
  const auto fit = fit_simple(f, r);
  for (int t = 0; t < 100; ++t) {
    const double a = fit.alpha + testsupport::uniform(g, -0.5, 0.5);
    const double b = fit.beta + testsupport::uniform(g, -0.5, 0.5);
    const double ssr = (r - a * f - Eigen::VectorXd::Constant(25, b)).squaredNorm();
    CHECK(fit.ssr <= ssr + 1e-12);
  }
}

TEST_CASE("fit_multi basic and rank-deficient cases") {
  const Eigen::MatrixXd X = (Eigen::MatrixXd(2, 1) << 1, 2).finished();
  const auto fit = fit_multi(X, Eigen::Vector2d(2, 4), false);
  CHECK(fit.coefficients(0) == doctest::Approx(2.0));
  CHECK(fit.ssr == doctest::Approx(0.0).scale(1.0));

  Engine g(4);
  const Eigen::VectorXd c = testsupport::normal_vector(g, 15);
  const Eigen::VectorXd y = testsupport::normal_vector(g, 15);
  Eigen::MatrixXd dup(15, 2);
  dup << c, c;
  const auto two = fit_multi(dup, y, true);
  const auto one = fit_multi(c, y, true);
  CHECK(two.rank == 1);
  CHECK(two.ssr == doctest::Approx(one.ssr).epsilon(1e-8));
  const Eigen::VectorXd p2 = dup * two.coefficients + Eigen::VectorXd::Constant(15, two.intercept);
  const Eigen::VectorXd p1 = c * one.coefficients(0) + Eigen::VectorXd::Constant(15, one.intercept);
  CHECK((p2 - p1).cwiseAbs().maxCoeff() < 1e-8);
  // Minimum norm splits the weight evenly across the copies.
  CHECK(two.coefficients(0) == doctest::Approx(two.coefficients(1)).epsilon(1e-9));
}

TEST_CASE("fit_multi with one column agrees with fit_simple") {
  Engine g(5);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = testsupport::uniform_int(g, 3, 40);
    const Eigen::VectorXd f = testsupport::normal_vector(g, n) * 3.0;
    const Eigen::VectorXd r = testsupport::normal_vector(g, n) + 0.5 * f;
    const auto multi = fit_multi(f, r, true);
    const auto simple = fit_simple(f, r);
    CHECK(multi.coefficients(0) == doctest::Approx(simple.alpha).epsilon(1e-9));
    CHECK(multi.intercept == doctest::Approx(simple.beta).epsilon(1e-9).scale(1.0));
    CHECK(multi.ssr == doctest::Approx(simple.ssr).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("fit_multi residuals are orthogonal and ssr shrinks with more columns") {
  Engine g(6);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = testsupport::uniform_int(g, 8, 40);
    const Eigen::Index k = testsupport::uniform_int(g, 1, 6);
    const Eigen::MatrixXd X = testsupport::normal_matrix(g, n, k + 1);
    const Eigen::VectorXd y = testsupport::normal_vector(g, n) * 2.0;
    const auto small = fit_multi(X.leftCols(k), y, true);
    const auto big = fit_multi(X, y, true);
    CHECK(big.ssr <= small.ssr * (1 + 1e-9) + 1e-12);
    const Eigen::VectorXd resid = y - X * big.coefficients - Eigen::VectorXd::Constant(n, big.intercept);
    const double scale = X.cwiseAbs().maxCoeff() * y.cwiseAbs().maxCoeff();
    CHECK(std::fabs(resid.sum()) <= 1e-6 * static_cast<double>(n) * scale);
    for (Eigen::Index j = 0; j <= k; ++j) CHECK(std::fabs(resid.dot(X.col(j))) <= 1e-6 * static_cast<double>(n) * scale);
  }
}

TEST_CASE("solve_min_norm reports rank") {
  Eigen::Index rank = -1;
  const Eigen::MatrixXd A = (Eigen::MatrixXd(3, 2) << 1, 2, 2, 4, 3, 6).finished();
  const Eigen::VectorXd x = solve_min_norm(A, Eigen::Vector3d(1, 2, 3), &rank);
  CHECK(rank == 1);
  CHECK(x(1) == doctest::Approx(2.0 * x(0)));
  CHECK((A * x - Eigen::Vector3d(1, 2, 3)).norm() < 1e-12);
}

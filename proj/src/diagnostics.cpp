#include "stackboost/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "stackboost/least_squares.hpp"

namespace stackboost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// q_alpha / sqrt(2) of the studentized range with infinite df, m = 2..20.
// Obtained by root-finding m * int phi(z) [Phi(z+q) - Phi(z)]^(m-1) dz = 1 - alpha.
constexpr std::array<double, 19> kQ90 = {
    1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732, 2.779884,
    2.854606, 2.919889, 2.977768, 3.029694, 3.076733, 3.119693, 3.159199,
    3.195743, 3.229723, 3.261461, 3.291224, 3.319233};
constexpr std::array<double, 19> kQ95 = {
    1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320, 3.030878,
    3.101730, 3.163684, 3.218654, 3.268004, 3.312739, 3.353618, 3.391230,
    3.426041, 3.458425, 3.488685, 3.517073, 3.543799};

constexpr double kVifR2Ceiling = 1.0 - 1e-12;

}  // namespace

double VifReport::bucket_fraction(std::size_t bucket) const {
  if (vif.empty()) return 0.0;
  return static_cast<double>(bucket_counts.at(bucket)) / static_cast<double>(vif.size());
}

double VifReport::fraction_above(double threshold) const {
  if (vif.empty()) return 0.0;
  const auto count = std::count_if(vif.begin(), vif.end(), [&](double v) { return v > threshold; });
  return static_cast<double>(count) / static_cast<double>(vif.size());
}

VifReport vif(const PredictionMatrix& X, const std::vector<double>& thresholds) {
  const Eigen::Index p = X.cols();
  if (p < 2) throw Error(ErrorKind::kTooFewColumns, "VIF needs at least two columns");
  if (X.rows() < 2) throw Error(ErrorKind::kEmpty, "VIF needs at least two rows");
  if (!X.values().allFinite()) throw Error(ErrorKind::kNonFinite, "prediction matrix is not finite");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorKind::kInvalidArgument, "VIF thresholds must be ascending");
  }

  VifReport report;
  report.thresholds = thresholds;
  report.bucket_counts.assign(thresholds.size() + 1, 0);

  Eigen::MatrixXd others(X.rows(), p - 1);
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::Index c = 0;
    for (Eigen::Index k = 0; k < p; ++k) {
      if (k != j) others.col(c++) = X.column(k);
    }
    const double sst = sum_of_squares_about_mean(X.column(j));
    double value = kInf;
    if (sst > 0.0) {
      const MultiFit fit = fit_multi(others, X.column(j), true);
      const double r2 = std::clamp(1.0 - fit.ssr / sst, 0.0, 1.0);
      value = r2 > kVifR2Ceiling ? kInf : 1.0 / (1.0 - r2);
    }
    report.vif.push_back(value);
    const auto bucket = static_cast<std::size_t>(
        std::upper_bound(thresholds.begin(), thresholds.end(), value) - thresholds.begin());
    ++report.bucket_counts[bucket];
  }
  return report;
}

double relative_mse(const Eigen::Ref<const Eigen::VectorXd>& pred,
                    const Eigen::Ref<const Eigen::VectorXd>& actual) {
  if (pred.size() != actual.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "prediction and target lengths differ");
  }
  const double sst = sum_of_squares_about_mean(actual);
  if (!(sst > 0.0)) throw Error(ErrorKind::kConstantTarget, "relative MSE needs a non-constant target");
  return (pred - actual).squaredNorm() / sst;
}

RankTable friedman_ranks(const Eigen::Ref<const Eigen::MatrixXd>& errors, Confidence confidence) {
  const Eigen::Index m = errors.rows();
  const Eigen::Index N = errors.cols();
  if (m < 2 || N < 2) {
    throw Error(ErrorKind::kEmpty, "Friedman ranks need at least 2 methods and 2 datasets");
  }
  if (!errors.allFinite()) throw Error(ErrorKind::kNonFinite, "error table is not finite");

  RankTable table;
  table.errors = errors;
  table.ranks.resize(m, N);
  table.confidence = confidence;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  for (Eigen::Index d = 0; d < N; ++d) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return errors(a, d) < errors(b, d); });
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && errors(order[j + 1], d) == errors(order[i], d)) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) table.ranks(order[t], d) = avg;
      i = j + 1;
    }
  }

  table.mean_ranks = table.ranks.rowwise().mean();
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(N);
  table.friedman_statistic = 12.0 * nd / (md * (md + 1.0)) *
                             (table.mean_ranks.squaredNorm() - md * (md + 1.0) * (md + 1.0) / 4.0);
  table.nemenyi_cd = (m >= 2 && m <= 20) ? nemenyi_cd(static_cast<int>(m), static_cast<int>(N), confidence)
                                         : std::numeric_limits<double>::quiet_NaN();
  return table;
}

double nemenyi_q(int m, Confidence confidence) {
  if (m < 2 || m > 20) {
    std::ostringstream msg;
    msg << "no studentized-range constant for " << m << " methods (supported: 2..20)";
    throw Error(ErrorKind::kUnsupportedM, msg.str());
  }
  const auto& table = confidence == Confidence::k90 ? kQ90 : kQ95;
  return table[static_cast<std::size_t>(m - 2)];
}

double nemenyi_cd(int m, int datasets, Confidence confidence) {
  const double q = nemenyi_q(m, confidence);
  if (datasets < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one dataset");
  const double md = m;
  return q * std::sqrt(md * (md + 1.0) / (6.0 * static_cast<double>(datasets)));
}

}  // namespace stackboost

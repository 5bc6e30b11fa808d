#include "stackboost/stop_criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stackboost {

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::AIC: return "aic";
    case CriterionKind::AICc: return "aicc";
    case CriterionKind::BIC: return "bic";
    case CriterionKind::HQIC: return "hqic";
    case CriterionKind::gMDL: return "gmdl";
  }
  return "aic";
}

std::string_view to_string(StopKind kind) {
  if (kind == StopKind::ICM) return "icm";
  return to_string(*to_criterion(kind));
}

std::optional<StopKind> parse_stop(std::string_view name) {
  for (auto k : {StopKind::AIC, StopKind::AICc, StopKind::BIC, StopKind::HQIC, StopKind::gMDL,
                 StopKind::ICM}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<CriterionKind> to_criterion(StopKind kind) {
  switch (kind) {
    case StopKind::AIC: return CriterionKind::AIC;
    case StopKind::AICc: return CriterionKind::AICc;
    case StopKind::BIC: return CriterionKind::BIC;
    case StopKind::HQIC: return CriterionKind::HQIC;
    case StopKind::gMDL: return CriterionKind::gMDL;
    case StopKind::ICM: return std::nullopt;
  }
  return std::nullopt;
}

StopKind to_stop(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::AIC: return StopKind::AIC;
    case CriterionKind::AICc: return StopKind::AICc;
    case CriterionKind::BIC: return StopKind::BIC;
    case CriterionKind::HQIC: return StopKind::HQIC;
    case CriterionKind::gMDL: return StopKind::gMDL;
  }
  return StopKind::AIC;
}

bool CriterionScore::defined() const { return std::isfinite(value); }

CriterionScore score(CriterionKind kind, int n, int k, double ssr, double sst) {
  if (n < 2 || k < 0 || !(ssr >= 0.0) || !(sst > 0.0)) {
    std::ostringstream msg;
    msg << "criterion needs n >= 2, k >= 0, ssr >= 0, sst > 0; got n=" << n << " k=" << k
        << " ssr=" << ssr << " sst=" << sst;
    throw Error(ErrorKind::kInvalidArgument, msg.str());
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double nd = n;
  const double kd = k;
  const double floored = std::max(ssr, kSsrFloorRel * sst);
  const double fit_term = nd * std::log(floored / nd);

  double value = 0.0;
  switch (kind) {
    case CriterionKind::AIC:
      value = fit_term + 2.0 * kd;
      break;
    case CriterionKind::AICc: {
      const double denom = nd - kd - 1.0;
      value = denom <= 0.0 ? kInf : fit_term + 2.0 * kd + 2.0 * kd * (kd + 1.0) / denom;
      break;
    }
    case CriterionKind::BIC:
      value = fit_term + kd * std::log(nd);
      break;
    case CriterionKind::HQIC:
      value = fit_term + 2.0 * kd * std::log(std::log(nd));
      break;
    case CriterionKind::gMDL: {
      const double r2 = 1.0 - floored / sst;
      if (k > 0 && r2 >= kd / nd) {
        if (n - k <= 0) {
          value = kInf;
          break;
        }
        const double s = floored / (nd - kd);
        const double f = (sst - floored) / (kd * s);
        value = 0.5 * nd * std::log(s) + 0.5 * kd * std::log(f) + std::log(nd);
      } else {
        value = 0.5 * nd * std::log(sst / nd) + 0.5 * std::log(nd);
      }
      break;
    }
  }
  return CriterionScore{value, kind, k, n};
}

bool icm_should_stop(const StageRecord& current, const StageRecord* previous) {
  if (previous == nullptr) return false;
  return current.magnitude > previous->magnitude;
}

namespace {

// Score change between two stages with the same n and k, formed from ratios
// so an ssr change of a few ulps cannot flip its sign. Empty when the stages
// fall in different gMDL branches or a score is infinite.
std::optional<double> same_size_difference(CriterionKind kind, const StageSummary& prev,
                                           const StageSummary& cand, double sst) {
  const double p = std::max(prev.ssr, kSsrFloorRel * sst);
  const double c = std::max(cand.ssr, kSsrFloorRel * sst);
  const double nd = cand.n;
  const double kd = cand.k_distinct;
  if (kind != CriterionKind::gMDL) {
    if (kind == CriterionKind::AICc && nd - kd - 1.0 <= 0.0) return std::nullopt;
    return nd * std::log1p((c - p) / p);
  }
  const auto fitted = [&](double ssr) { return cand.k_distinct > 0 && 1.0 - ssr / sst >= kd / nd; };
  if (fitted(p) != fitted(c) || cand.n - cand.k_distinct <= 0) return std::nullopt;
  if (!fitted(c)) return 0.0;
  return 0.5 * (nd - kd) * std::log1p((c - p) / p) + 0.5 * kd * std::log1p((p - c) / (sst - p));
}

}  // namespace

bool classical_should_stop(CriterionKind kind, std::span<const StageSummary> history, double sst) {
  if (history.size() < 2) return false;
  const StageSummary& prev = history[history.size() - 2];
  const StageSummary& cand = history.back();
  const double prev_score = score(kind, prev.n, prev.k_distinct, prev.ssr, sst).value;
  const double cand_score = score(kind, cand.n, cand.k_distinct, cand.ssr, sst).value;
  if (prev.n == cand.n && prev.k_distinct == cand.k_distinct) {
    if (const auto diff = same_size_difference(kind, prev, cand, sst)) return *diff > 0.0;
  }
  return cand_score > prev_score;
}

}  // namespace stackboost
